//! Streaming maximization under a p-matchoid constraint.
//!
//! [`sample_streaming`] subsamples the stream with probability `q` and runs
//! an exchange rule on the survivors; [`sample_streaming_audit`] evaluates
//! the exchange rule first and flips the coin afterwards, recording the
//! elements that passed the rule but lost the coin. Both draw exactly one
//! coin per arriving element from the same seeded generator, so for equal
//! seeds they return the same solution.

mod baselines;
mod exchange;
mod presets;
mod sample;
mod state;

pub use baselines::{brute_force_opt, greedy_offline, RECOMMENDED_OPT_CAP};
pub use exchange::exchange_candidate;
pub use presets::{approx_ratio_bound, AlgoConfig, ConfigMode, Preset};
pub use sample::{
    sample_streaming, sample_streaming_audit, sample_streaming_with, RunOptions, StreamRun, Variant,
};
pub use state::{Acceptance, AcceptanceCheck, AuditTrace, SolutionState, StepOutcome, StepRecord};
