//! Experiment harness: synthetic instance generators, seeded trials and
//! sweeps, statistical estimates, invariant audits and CSV/JSON reports.

mod audit;
mod gen;
mod report;
mod stats;
mod sweep;
mod trial;
mod verify;

pub use audit::{audit_lemma1, AuditCheck, AuditReport, AuditRun, AuditViolation, AUDIT_TOLERANCE};
pub use gen::{gen_instance, GenKind, GenParams};
pub use report::{emit_report, read_report, write_csv, write_json, ReportFormat, CSV_HEADER};
pub use stats::{estimate_expected_value, Estimate, MIN_ESTIMATE_RECORDS};
pub use sweep::{run_sweep, summarize, AlgorithmSummary, SweepResult, SweepSpec, TrialFailure};
pub use trial::{resolve_config, run_trial, Algorithm, TrialOptions, TrialRecord};
pub use verify::{verify_instance, VerifyReport};
