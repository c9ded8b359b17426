use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::matchoid::PMatchoid;
use crate::model::ArrivalStream;
use crate::objectives::SubmodularOracle;

use super::exchange::candidate;
use super::presets::AlgoConfig;
use super::state::{Acceptance, AuditTrace, SolutionState, StepOutcome, StepRecord};

/// Order in which the coin and the exchange rule are consulted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Coin first; elements that lose it cost nothing.
    SampleFirst,
    /// Exchange rule first; rule-passers that lose the coin are recorded in `R`.
    RuleFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Record an [`AuditTrace`] (O(n) extra memory, outside the ledger).
    pub trace: bool,
    /// Re-check feasibility of the solution after every acceptance.
    pub assert_feasible: bool,
}

impl RunOptions {
    pub fn audit() -> Self {
        RunOptions {
            trace: true,
            assert_feasible: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreamRun {
    pub solution: SolutionState,
    pub ledger: QueryLedger,
    /// Number of acceptances (elements that entered the solution).
    pub accepted: usize,
    pub trace: Option<AuditTrace>,
}

/// Runs the subsampled streaming algorithm: each element is dropped with
/// probability `1 - q`, otherwise it replaces its exchange candidates `U`
/// when `f(u | S) >= (1 + c) f(U : S)`.
pub fn sample_streaming(
    stream: &ArrivalStream,
    matchoid: &PMatchoid,
    f: &dyn SubmodularOracle,
    config: &AlgoConfig,
) -> Result<StreamRun> {
    sample_streaming_with(
        stream,
        matchoid,
        f,
        config,
        Variant::SampleFirst,
        RunOptions::default(),
    )
}

/// The rule-first variant with a full trace and feasibility checks.
pub fn sample_streaming_audit(
    stream: &ArrivalStream,
    matchoid: &PMatchoid,
    f: &dyn SubmodularOracle,
    config: &AlgoConfig,
) -> Result<StreamRun> {
    sample_streaming_with(
        stream,
        matchoid,
        f,
        config,
        Variant::RuleFirst,
        RunOptions::audit(),
    )
}

pub fn sample_streaming_with(
    stream: &ArrivalStream,
    matchoid: &PMatchoid,
    f: &dyn SubmodularOracle,
    config: &AlgoConfig,
    variant: Variant,
    options: RunOptions,
) -> Result<StreamRun> {
    config.validate()?;
    if matchoid.n() != stream.len() || f.n() != stream.len() {
        return Err(Error::Validation(format!(
            "stream has {} elements, matchoid {}, objective {}",
            stream.len(),
            matchoid.n(),
            f.n()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut ledger = QueryLedger::new();
    let mut solution = SolutionState::new();
    let mut trace = options.trace.then(AuditTrace::default);
    let mut accepted = 0;

    for (arrival, u) in stream.iter().enumerate() {
        let (v0, i0) = (ledger.value_queries(), ledger.independence_queries());
        // one coin per arriving element, drawn before anything else
        let coin = rng.random::<f64>() < config.q;

        let outcome = if variant == Variant::SampleFirst && !coin {
            StepOutcome::SampledOut
        } else {
            let decision = evaluate(&solution, u, matchoid, f, config.c, &mut ledger)?;
            match decision {
                None => StepOutcome::Rejected,
                Some(_) if !coin => StepOutcome::Reserved,
                Some(exchange) => {
                    if let Some(t) = trace.as_mut() {
                        if t.ever_in_solution.contains(&u) {
                            return Err(Error::Invariant(format!("element {u} accepted twice")));
                        }
                        t.ever_in_solution.push(u);
                        t.acceptances.push(Acceptance {
                            element: u,
                            arrival_index: arrival,
                            evicted: exchange.evicted.clone(),
                            gain: exchange.gain,
                            evicted_cost: exchange.evicted_cost,
                            prior: solution.elements(),
                        });
                    }
                    solution.replace(&exchange.evicted, u, arrival);
                    ledger.observe_held(solution.len());
                    accepted += 1;
                    if options.assert_feasible && !matchoid.feasible_unchecked(&solution.elements())
                    {
                        return Err(Error::Invariant(format!(
                            "solution became infeasible after accepting element {u} at position {arrival}"
                        )));
                    }
                    StepOutcome::Accepted
                }
            }
        };

        if let Some(t) = trace.as_mut() {
            if outcome == StepOutcome::Reserved {
                t.reserved.push(u);
            }
            t.steps.push(StepRecord {
                element: u,
                arrival_index: arrival,
                outcome,
                value_queries: ledger.value_queries() - v0,
                independence_queries: ledger.independence_queries() - i0,
            });
        }
    }

    Ok(StreamRun {
        solution,
        ledger,
        accepted,
        trace,
    })
}

struct Exchange {
    evicted: Vec<usize>,
    gain: f64,
    evicted_cost: f64,
}

/// Applies the exchange rule to `u`; `Some` when it passes.
fn evaluate(
    solution: &SolutionState,
    u: usize,
    matchoid: &PMatchoid,
    f: &dyn SubmodularOracle,
    c: f64,
    ledger: &mut QueryLedger,
) -> Result<Option<Exchange>> {
    let cand = candidate(solution, u, matchoid, f, ledger)?;
    if cand.loop_in.is_some() {
        return Ok(None);
    }
    let members = solution.elements();
    let base = match &cand.chain {
        Some(chain) => *chain.last().expect("chain has |S| + 1 entries"),
        None => f.value(&members, ledger)?,
    };
    let mut with_u = members.clone();
    with_u.push(u);
    let gain = f.value(&with_u, ledger)? - base;

    let evicted_cost: f64 = match &cand.chain {
        Some(chain) => cand
            .evicted
            .iter()
            .map(|x| {
                let j = members.iter().position(|y| y == x).expect("evicted from S");
                chain[j + 1] - chain[j]
            })
            .sum(),
        None => 0.0,
    };

    // Any non-finite value (a singular log-det) rejects.
    let threshold = (1.0 + c) * evicted_cost;
    let passes = gain.is_finite() && threshold.is_finite() && gain >= threshold;
    Ok(passes.then_some(Exchange {
        evicted: cand.evicted,
        gain,
        evicted_cost,
    }))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::matroids::{MatroidOracle, UniformMatroid};
    use crate::objectives::{LogDetObjective, ModularObjective};

    fn uniform(n: usize, rank: usize) -> PMatchoid {
        let m: Arc<dyn MatroidOracle> = Arc::new(UniformMatroid::new(0..n, rank).unwrap());
        PMatchoid::compose(vec![m], n).unwrap()
    }

    #[test]
    fn empty_stream() {
        let run = sample_streaming(
            &ArrivalStream::identity(0),
            &PMatchoid::unconstrained(0),
            &ModularObjective::new(vec![]).unwrap(),
            &AlgoConfig::deterministic(),
        )
        .unwrap();
        assert!(run.solution.is_empty());
        assert_eq!(run.ledger.total_queries(), 0);
    }

    #[test]
    fn deterministic_modular_keeps_first_k() {
        let n = 8;
        let k = 3;
        let f = ModularObjective::new(vec![1.0; n]).unwrap();
        let run = sample_streaming(
            &ArrivalStream::identity(n),
            &uniform(n, k),
            &f,
            &AlgoConfig::deterministic(),
        )
        .unwrap();
        assert_eq!(run.solution.elements(), vec![0, 1, 2]);
        assert_eq!(run.accepted, 3);
    }

    #[test]
    fn zero_gain_with_nothing_to_evict_is_accepted() {
        let f = ModularObjective::new(vec![0.0, -1.0]).unwrap();
        let run = sample_streaming(
            &ArrivalStream::identity(2),
            &PMatchoid::unconstrained(2),
            &f,
            &AlgoConfig::deterministic(),
        )
        .unwrap();
        assert_eq!(run.solution.elements(), vec![0]);
    }

    #[test]
    fn singular_logdet_is_rejected() {
        let f = LogDetObjective::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let run = sample_streaming(
            &ArrivalStream::identity(2),
            &PMatchoid::unconstrained(2),
            &f,
            &AlgoConfig::deterministic(),
        )
        .unwrap();
        // log det of the 1x1 block is 0, so element 0 enters; element 1 would make it singular
        assert_eq!(run.solution.elements(), vec![0]);
    }

    #[test]
    fn paired_variants_agree() {
        let n = 12;
        let weights: Vec<f64> = (0..n).map(|i| ((i * 7) % 5) as f64 + 0.5).collect();
        let f = ModularObjective::new(weights).unwrap();
        let p = uniform(n, 4);
        let stream = ArrivalStream::identity(n);
        for seed in 0..50 {
            let cfg = AlgoConfig::monotone_preset(1).unwrap().with_seed(seed);
            let a = sample_streaming(&stream, &p, &f, &cfg).unwrap();
            let b = sample_streaming_audit(&stream, &p, &f, &cfg).unwrap();
            assert_eq!(a.solution, b.solution, "seed {seed}");
        }
    }

    #[test]
    fn q_one_never_reserves() {
        let f = ModularObjective::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let run = sample_streaming_audit(
            &ArrivalStream::identity(4),
            &uniform(4, 2),
            &f,
            &AlgoConfig::deterministic(),
        )
        .unwrap();
        assert!(run.trace.unwrap().reserved.is_empty());
    }

    #[test]
    fn sampled_out_elements_cost_nothing() {
        let n = 50;
        let f = ModularObjective::new((0..n).map(|i| i as f64).collect()).unwrap();
        let cfg = AlgoConfig::custom(1.0, 0.3).unwrap().with_seed(11);
        let opts = RunOptions {
            trace: true,
            assert_feasible: false,
        };
        let run = sample_streaming_with(
            &ArrivalStream::identity(n),
            &uniform(n, 5),
            &f,
            &cfg,
            Variant::SampleFirst,
            opts,
        )
        .unwrap();
        let trace = run.trace.unwrap();
        let mut sampled_out = 0;
        for step in &trace.steps {
            if step.outcome == StepOutcome::SampledOut {
                sampled_out += 1;
                assert_eq!(step.queries(), 0);
            } else {
                assert!(step.value_queries >= 2);
            }
        }
        assert!(sampled_out > 0);
        let total: u64 = trace.steps.iter().map(StepRecord::queries).sum();
        assert_eq!(total, run.ledger.total_queries());
    }

    #[test]
    fn invalid_config_and_size_mismatch() {
        let f = ModularObjective::new(vec![1.0; 3]).unwrap();
        let bad = AlgoConfig {
            q: 0.0,
            ..AlgoConfig::deterministic()
        };
        assert!(sample_streaming(&ArrivalStream::identity(3), &uniform(3, 1), &f, &bad).is_err());
        assert!(sample_streaming(
            &ArrivalStream::identity(2),
            &uniform(3, 1),
            &f,
            &AlgoConfig::deterministic()
        )
        .is_err());
    }

    #[test]
    fn loops_are_rejected() {
        use crate::matroids::GraphicMatroid;
        // edge 1 is a self-loop with the largest weight
        let m: Arc<dyn MatroidOracle> =
            Arc::new(GraphicMatroid::new([(0, (0, 1)), (1, (1, 1)), (2, (1, 2))]).unwrap());
        let matchoid = PMatchoid::compose(vec![m], 3).unwrap();
        let f = ModularObjective::new(vec![1.0, 5.0, 1.0]).unwrap();
        let run = sample_streaming_audit(
            &ArrivalStream::identity(3),
            &matchoid,
            &f,
            &AlgoConfig::deterministic(),
        )
        .unwrap();
        assert_eq!(run.solution.sorted_elements(), vec![0, 2]);
        let trace = run.trace.unwrap();
        assert_eq!(trace.steps[1].outcome, StepOutcome::Rejected);
    }
}
