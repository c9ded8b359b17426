use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::ledger::QueryLedger;
use crate::streaming::{
    brute_force_opt, greedy_offline, sample_streaming, sample_streaming_audit, AlgoConfig, Preset,
    RECOMMENDED_OPT_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Sample-first streaming.
    Sample,
    /// Rule-first streaming with the audit trace and feasibility checks.
    SampleAudit,
    /// Streaming with `q = 1` (no subsampling).
    Det,
    /// Offline greedy.
    Greedy,
    /// Exhaustive search.
    Opt,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Sample,
        Algorithm::SampleAudit,
        Algorithm::Det,
        Algorithm::Greedy,
        Algorithm::Opt,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Sample => "sample",
            Algorithm::SampleAudit => "sample-audit",
            Algorithm::Det => "det",
            Algorithm::Greedy => "greedy",
            Algorithm::Opt => "opt",
        }
    }

    pub fn is_streaming(self) -> bool {
        matches!(
            self,
            Algorithm::Sample | Algorithm::SampleAudit | Algorithm::Det
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

/// One row of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub instance_id: String,
    pub algorithm: Algorithm,
    pub p: usize,
    pub c: Option<f64>,
    pub q: Option<f64>,
    pub seed: u64,
    pub value: f64,
    pub opt: Option<f64>,
    /// `opt / value`; absent without `opt` or when `value <= 0`.
    pub ratio: Option<f64>,
    pub value_queries: u64,
    pub independence_queries: u64,
    pub avg_queries_per_element: f64,
    pub peak_elements: usize,
    pub accepted: usize,
    /// Wall-clock time; only filled when timing is requested, so that
    /// untimed reports are reproducible byte for byte.
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOptions {
    /// Compute OPT by exhaustive search when `n` is at most this.
    pub opt_cap: usize,
    /// A known OPT value; skips the search.
    pub opt: Option<f64>,
    pub timing: bool,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions {
            opt_cap: RECOMMENDED_OPT_CAP,
            opt: None,
            timing: false,
        }
    }
}

/// Picks the configuration an algorithm runs with. Streaming algorithms
/// start from the preset for `p`; `c` or `q` overrides turn it into a
/// custom configuration. `det` always uses `q = 1`.
pub fn resolve_config(
    algorithm: Algorithm,
    preset: Preset,
    p: usize,
    c: Option<f64>,
    q: Option<f64>,
    seed: u64,
) -> Result<AlgoConfig> {
    let config = match algorithm {
        Algorithm::Det => match c {
            Some(c) => AlgoConfig::custom(c, 1.0)?,
            None => AlgoConfig::deterministic(),
        },
        _ => {
            let base = AlgoConfig::preset(preset, p)?;
            if c.is_some() || q.is_some() {
                AlgoConfig::custom(c.unwrap_or(base.c), q.unwrap_or(base.q))?
            } else {
                base
            }
        }
    };
    Ok(config.with_seed(seed))
}

pub(crate) fn compute_opt(
    instance: &Instance,
    cap: usize,
) -> Result<(Vec<usize>, f64, QueryLedger)> {
    let mut ledger = QueryLedger::new();
    let (set, value) = brute_force_opt(
        &instance.matchoid,
        instance.objective.as_ref(),
        cap,
        &mut ledger,
    )?;
    Ok((set, value, ledger))
}

/// Runs one algorithm once. The seed is `config.seed`; greedy and opt
/// ignore `c` and `q`. Errors carry the instance id and seed.
pub fn run_trial(
    instance: &Instance,
    algorithm: Algorithm,
    config: &AlgoConfig,
    options: &TrialOptions,
) -> Result<TrialRecord> {
    run(instance, algorithm, config, options).map_err(|e| Error::Trial {
        instance: instance.id.clone(),
        seed: config.seed,
        source: Box::new(e),
    })
}

fn run(
    instance: &Instance,
    algorithm: Algorithm,
    config: &AlgoConfig,
    options: &TrialOptions,
) -> Result<TrialRecord> {
    let f = instance.objective.as_ref();
    let n = instance.n();
    let start = Instant::now();

    let (solution, ledger, accepted, opt_found) = match algorithm {
        Algorithm::Sample | Algorithm::Det => {
            let run = sample_streaming(&instance.stream, &instance.matchoid, f, config)?;
            (
                run.solution.sorted_elements(),
                run.ledger,
                run.accepted,
                None,
            )
        }
        Algorithm::SampleAudit => {
            let run = sample_streaming_audit(&instance.stream, &instance.matchoid, f, config)?;
            (
                run.solution.sorted_elements(),
                run.ledger,
                run.accepted,
                None,
            )
        }
        Algorithm::Greedy => {
            let mut ledger = QueryLedger::new();
            let set = greedy_offline(&instance.matchoid, f, &mut ledger)?;
            let size = set.len();
            (set, ledger, size, None)
        }
        Algorithm::Opt => {
            let (set, value, ledger) = compute_opt(instance, options.opt_cap)?;
            let size = set.len();
            (set, ledger, size, Some(value))
        }
    };
    let runtime_ms = options.timing.then(|| start.elapsed().as_secs_f64() * 1e3);

    let value = f.evaluate(&solution);
    let opt = match (opt_found, options.opt) {
        (Some(v), _) | (None, Some(v)) => Some(v),
        (None, None) if n <= options.opt_cap => Some(compute_opt(instance, options.opt_cap)?.1),
        (None, None) => None,
    };
    let ratio = opt.filter(|_| value > 0.0).map(|o| o / value);
    let (c, q) = if algorithm.is_streaming() {
        (Some(config.c), Some(config.q))
    } else {
        (None, None)
    };
    let total = ledger.total_queries();
    Ok(TrialRecord {
        instance_id: instance.id.clone(),
        algorithm,
        p: instance.matchoid.p(),
        c,
        q,
        seed: config.seed,
        value,
        opt,
        ratio,
        value_queries: ledger.value_queries(),
        independence_queries: ledger.independence_queries(),
        avg_queries_per_element: if n == 0 { 0.0 } else { total as f64 / n as f64 },
        peak_elements: ledger.elements_held_peak(),
        accepted,
        runtime_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{gen_instance, GenKind, GenParams};

    fn instance() -> Instance {
        let params = GenParams {
            n: 8,
            items: 12,
            rank: 3,
            ..Default::default()
        };
        gen_instance(GenKind::CoverageUniform, &params, 11)
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn records_are_deterministic_without_timing() {
        let inst = instance();
        let config = resolve_config(Algorithm::Sample, Preset::Monotone, 1, None, None, 4).unwrap();
        let a = run_trial(&inst, Algorithm::Sample, &config, &TrialOptions::default()).unwrap();
        let b = run_trial(&inst, Algorithm::Sample, &config, &TrialOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.runtime_ms, None);
        assert_eq!(a.q, Some(1.0 / 3.0));
    }

    #[test]
    fn opt_dominates_every_algorithm() {
        let inst = instance();
        let opt_config = AlgoConfig::deterministic();
        let opt = run_trial(&inst, Algorithm::Opt, &opt_config, &TrialOptions::default()).unwrap();
        assert_eq!(opt.ratio, Some(1.0));
        for algorithm in Algorithm::ALL {
            let config = resolve_config(algorithm, Preset::Monotone, 1, None, None, 2).unwrap();
            let r = run_trial(&inst, algorithm, &config, &TrialOptions::default()).unwrap();
            assert!(r.value <= opt.value + 1e-9, "{algorithm}");
            assert_eq!(r.opt, opt.opt);
        }
    }

    #[test]
    fn det_ignores_q_and_greedy_has_no_parameters() {
        let config =
            resolve_config(Algorithm::Det, Preset::Monotone, 3, None, Some(0.2), 0).unwrap();
        assert_eq!((config.c, config.q), (1.0, 1.0));
        let inst = instance();
        let r = run_trial(&inst, Algorithm::Greedy, &config, &TrialOptions::default()).unwrap();
        assert_eq!((r.c, r.q), (None, None));
    }

    #[test]
    fn overrides_make_a_custom_config() {
        let config = resolve_config(
            Algorithm::Sample,
            Preset::Nonmonotone,
            2,
            None,
            Some(0.5),
            9,
        )
        .unwrap();
        assert_eq!(config.q, 0.5);
        assert!((config.c - 1.5f64.sqrt()).abs() < 1e-12);
        assert!(
            resolve_config(Algorithm::Sample, Preset::Monotone, 1, Some(-1.0), None, 0).is_err()
        );
    }

    #[test]
    fn opt_above_cap_fails_with_context() {
        let inst = instance();
        let options = TrialOptions {
            opt_cap: 4,
            ..Default::default()
        };
        let err = run_trial(
            &inst,
            Algorithm::Opt,
            &AlgoConfig::deterministic().with_seed(6),
            &options,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Trial { seed: 6, .. }));
    }

    #[test]
    fn labels_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.label().parse::<Algorithm>().unwrap(), a);
        }
    }
}
