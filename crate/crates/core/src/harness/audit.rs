use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::ledger::QueryLedger;
use crate::objectives::prefix_sum;
use crate::streaming::{sample_streaming_audit, AlgoConfig, AuditTrace};

/// Slack allowed on the audited inequalities.
pub const AUDIT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditCheck {
    /// `f(A \ S : S) <= f(S) / c`.
    EvictedMass,
    /// `f(A) <= (1 + 1/c) f(S)`.
    EverAccepted,
    /// A logged acceptance does not reproduce or does not satisfy the rule.
    AcceptanceRule,
    /// Disjointness of `A` and `R`, one eviction per evicted element.
    Structure,
    /// The run itself failed, e.g. an infeasible intermediate solution.
    Run,
    /// Peak held elements above `3k`.
    Memory,
}

impl fmt::Display for AuditCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditCheck::EvictedMass => "evicted-mass",
            AuditCheck::EverAccepted => "ever-accepted",
            AuditCheck::AcceptanceRule => "acceptance-rule",
            AuditCheck::Structure => "structure",
            AuditCheck::Run => "run",
            AuditCheck::Memory => "memory",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditViolation {
    pub seed: u64,
    pub check: AuditCheck,
    pub detail: String,
    /// The full trace of the offending run, when it got that far.
    pub trace: Option<AuditTrace>,
}

/// Measured sides of the audited inequalities for one seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRun {
    pub seed: u64,
    pub value: f64,
    pub evicted_mass: f64,
    pub evicted_mass_bound: f64,
    pub ever_accepted_value: f64,
    pub ever_accepted_bound: f64,
    pub accepted: usize,
    pub peak_elements: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AuditReport {
    pub runs: Vec<AuditRun>,
    pub violations: Vec<AuditViolation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the rule-first variant once per seed and checks its invariants:
/// the evicted-mass and ever-accepted bounds, exact re-verification of
/// every acceptance, the structure of the trace and feasibility after each
/// step. With `k` (the largest feasible size) the peak memory is also
/// checked against `3k`. Requires a non-negative objective.
pub fn audit_lemma1(
    instance: &Instance,
    config: &AlgoConfig,
    seeds: impl IntoIterator<Item = u64>,
    k: Option<usize>,
) -> Result<AuditReport> {
    let f = instance.objective.as_ref();
    if !f.is_nonnegative() {
        return Err(Error::NonNegativityRequired(f.kind().to_string()));
    }
    config.validate()?;
    let c = config.c;
    let arrival = instance.stream.arrival();
    let mut report = AuditReport::default();

    for seed in seeds {
        let config = config.with_seed(seed);
        let run = match sample_streaming_audit(&instance.stream, &instance.matchoid, f, &config) {
            Ok(run) => run,
            Err(e) => {
                report.violations.push(AuditViolation {
                    seed,
                    check: AuditCheck::Run,
                    detail: e.to_string(),
                    trace: None,
                });
                continue;
            }
        };
        let trace = run
            .trace
            .clone()
            .ok_or_else(|| Error::Invariant("audit run without a trace".into()))?;
        let mut flag = |check, detail: String| {
            report.violations.push(AuditViolation {
                seed,
                check,
                detail,
                trace: Some(trace.clone()),
            });
        };

        let s = run.solution.elements();
        let evicted: Vec<usize> = trace
            .ever_in_solution
            .iter()
            .copied()
            .filter(|&x| !run.solution.contains(x))
            .collect();
        let mut scratch = QueryLedger::new();
        let value = f.evaluate(&s);
        let evicted_mass = prefix_sum(f, &evicted, &s, arrival, &mut scratch)?;
        let evicted_mass_bound = value / c;
        let ever_accepted_value = f.evaluate(&trace.ever_in_solution);
        let ever_accepted_bound = (c + 1.0) / c * value;

        if evicted_mass > evicted_mass_bound + AUDIT_TOLERANCE {
            flag(
                AuditCheck::EvictedMass,
                format!("f(A \\ S : S) = {evicted_mass} exceeds f(S) / c = {evicted_mass_bound}"),
            );
        }
        if ever_accepted_value > ever_accepted_bound + AUDIT_TOLERANCE {
            flag(
                AuditCheck::EverAccepted,
                format!(
                    "f(A) = {ever_accepted_value} exceeds (1 + 1/c) f(S) = {ever_accepted_bound}"
                ),
            );
        }
        for check in trace.reverify_acceptances(f, c) {
            if !check.matches_log || !check.satisfied {
                flag(
                    AuditCheck::AcceptanceRule,
                    format!(
                        "element {}: gain {} vs threshold {} (logged values reproduced: {})",
                        check.element, check.gain, check.threshold, check.matches_log
                    ),
                );
            }
        }
        for problem in trace.structural_problems(&run.solution) {
            flag(AuditCheck::Structure, problem);
        }
        let peak = run.ledger.elements_held_peak();
        if let Some(k) = k.filter(|&k| peak > 3 * k) {
            flag(
                AuditCheck::Memory,
                format!("held {peak} elements, above 3k = {}", 3 * k),
            );
        }

        report.runs.push(AuditRun {
            seed,
            value,
            evicted_mass,
            evicted_mass_bound,
            ever_accepted_value,
            ever_accepted_bound,
            accepted: run.accepted,
            peak_elements: peak,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{gen_instance, GenKind, GenParams};
    use crate::matchoid::PMatchoid;
    use crate::model::ArrivalStream;
    use crate::objectives::LogDetObjective;
    use std::sync::Arc;

    #[test]
    fn generated_coverage_passes() {
        let params = GenParams {
            vertices: 6,
            edges: 10,
            b: 2,
            items: 15,
            shuffle: true,
            ..Default::default()
        };
        let inst = gen_instance(GenKind::BmatchingRandomGraph, &params, 1)
            .unwrap()
            .build()
            .unwrap();
        let config = AlgoConfig::monotone_preset(2).unwrap();
        let k = inst.matchoid.max_feasible_size(20).unwrap();
        let report = audit_lemma1(&inst, &config, 0..50, Some(k)).unwrap();
        assert!(report.passed(), "{:?}", report.violations.first());
        assert_eq!(report.runs.len(), 50);
    }

    #[test]
    fn log_det_is_refused() {
        let f = LogDetObjective::from_rows(vec![vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let inst = Instance::from_parts(
            "ld",
            ArrivalStream::identity(2),
            PMatchoid::unconstrained(2),
            Arc::new(f),
        )
        .unwrap();
        let err = audit_lemma1(&inst, &AlgoConfig::deterministic(), 0..1, None).unwrap_err();
        assert!(matches!(err, Error::NonNegativityRequired(_)));
    }
}
