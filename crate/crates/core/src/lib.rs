//! Subsampled streaming submodular maximization under p-matchoid
//! constraints, with oracle accounting, exhaustive verifiers and an
//! experiment harness.
//!
//! The layers, bottom up:
//!
//! - [`model`] and [`ledger`]: element ids, arrival order, query counters.
//! - [`matroids`] and [`matchoid`]: independence oracles and their composition.
//! - [`objectives`]: value oracles (coverage, cut, log-det, modular).
//! - [`streaming`]: the exchange rule, the streaming algorithms and baselines.
//! - [`instance`] and [`harness`]: instance files, trials, sweeps, audits, reports.

pub mod error;
pub mod harness;
pub mod instance;
pub mod ledger;
pub mod matchoid;
pub mod matroids;
pub mod model;
pub mod objectives;
pub mod streaming;

pub use error::{Error, Result};
pub use harness::{
    audit_lemma1, emit_report, estimate_expected_value, gen_instance, read_report, run_sweep,
    run_trial, Algorithm, SweepSpec, TrialRecord,
};
pub use instance::{load_instance, Instance, InstanceSpec};
pub use ledger::{LedgerSnapshot, QueryLedger};
pub use matchoid::{b_matching_matchoid, PMatchoid};
pub use matroids::{GraphicMatroid, MatroidOracle, PartitionMatroid, UniformMatroid};
pub use model::{ArrivalOrder, ArrivalStream, Element, Universe};
pub use objectives::{
    CoverageObjective, GraphCutObjective, LogDetObjective, ModularObjective, SubmodularOracle,
};
pub use streaming::{
    approx_ratio_bound, sample_streaming, sample_streaming_audit, AlgoConfig, Preset, SolutionState,
};
