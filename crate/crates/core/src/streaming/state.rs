use std::collections::{HashMap, HashSet};

use crate::objectives::SubmodularOracle;

/// The current solution, kept in arrival order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionState {
    // (arrival index, element), sorted by arrival index
    members: Vec<(usize, usize)>,
}

impl SolutionState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members.iter().any(|&(_, e)| e == element)
    }

    /// Members in arrival order.
    pub fn elements(&self) -> Vec<usize> {
        self.members.iter().map(|&(_, e)| e).collect()
    }

    /// Members in index order.
    pub fn sorted_elements(&self) -> Vec<usize> {
        let mut v = self.elements();
        v.sort_unstable();
        v
    }

    pub fn arrival_of(&self, element: usize) -> Option<usize> {
        self.members
            .iter()
            .find(|&&(_, e)| e == element)
            .map(|&(a, _)| a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.members.iter().copied()
    }

    pub(crate) fn replace(&mut self, evicted: &[usize], element: usize, arrival: usize) {
        self.members.retain(|(_, e)| !evicted.contains(e));
        let at = self.members.partition_point(|&(a, _)| a < arrival);
        self.members.insert(at, (arrival, element));
    }
}

/// What happened to one arriving element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// Lost the coin before anything was evaluated.
    SampledOut,
    /// Evaluated and failed the exchange rule.
    Rejected,
    /// Passed the exchange rule and won the coin.
    Accepted,
    /// Passed the exchange rule but lost the coin (the set `R`).
    Reserved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub element: usize,
    pub arrival_index: usize,
    pub outcome: StepOutcome,
    pub value_queries: u64,
    pub independence_queries: u64,
}

impl StepRecord {
    pub fn queries(&self) -> u64 {
        self.value_queries + self.independence_queries
    }
}

/// One accepted exchange `S_i = S_{i-1} \ U_i + u_i` with the values that
/// justified it.
#[derive(Debug, Clone, PartialEq)]
pub struct Acceptance {
    pub element: usize,
    pub arrival_index: usize,
    /// `U_i`.
    pub evicted: Vec<usize>,
    /// `f(u_i | S_{i-1})`.
    pub gain: f64,
    /// `f(U_i : S_{i-1})`.
    pub evicted_cost: f64,
    /// `S_{i-1}` in arrival order.
    pub prior: Vec<usize>,
}

/// Outcome of re-deriving one acceptance from scratch.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceCheck {
    pub element: usize,
    pub gain: f64,
    pub evicted_cost: f64,
    pub threshold: f64,
    pub matches_log: bool,
    pub satisfied: bool,
}

/// Per-run record used for audits.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditTrace {
    pub steps: Vec<StepRecord>,
    pub acceptances: Vec<Acceptance>,
    /// `A`: every element that was ever part of the solution, in order of entry.
    pub ever_in_solution: Vec<usize>,
    /// `R`: elements that passed the exchange rule but lost the coin.
    pub reserved: Vec<usize>,
}

impl AuditTrace {
    /// Structural checks: `A ∩ R = ∅`, and every element of `A \ S_n` was
    /// evicted by exactly one acceptance (and nothing outside `A` was).
    pub fn structural_problems(&self, final_solution: &SolutionState) -> Vec<String> {
        let mut problems = Vec::new();
        let a: HashSet<usize> = self.ever_in_solution.iter().copied().collect();
        if let Some(x) = self.reserved.iter().find(|x| a.contains(x)) {
            problems.push(format!("element {x} is in both A and R"));
        }
        let mut evictions: HashMap<usize, usize> = HashMap::new();
        for acc in &self.acceptances {
            for &x in &acc.evicted {
                *evictions.entry(x).or_default() += 1;
            }
        }
        for &x in &a {
            let expected = usize::from(!final_solution.contains(x));
            let seen = evictions.get(&x).copied().unwrap_or(0);
            if seen != expected {
                problems.push(format!(
                    "element {x} of A was evicted {seen} times, expected {expected}"
                ));
            }
        }
        if let Some(x) = evictions.keys().find(|x| !a.contains(x)) {
            problems.push(format!(
                "element {x} was evicted without ever being accepted"
            ));
        }
        problems
    }

    /// Recomputes `f(u_i | S_{i-1})` and `f(U_i : S_{i-1})` for every logged
    /// acceptance with the raw oracle and re-applies the rule
    /// `gain >= (1 + c) * cost` exactly.
    pub fn reverify_acceptances(&self, f: &dyn SubmodularOracle, c: f64) -> Vec<AcceptanceCheck> {
        self.acceptances
            .iter()
            .map(|acc| {
                let base = f.evaluate(&acc.prior);
                let mut with = acc.prior.clone();
                with.push(acc.element);
                let gain = f.evaluate(&with) - base;
                let evicted_cost: f64 = acc
                    .evicted
                    .iter()
                    .map(|&x| {
                        let j = acc
                            .prior
                            .iter()
                            .position(|&y| y == x)
                            .expect("evicted from prior");
                        f.evaluate(&acc.prior[..=j]) - f.evaluate(&acc.prior[..j])
                    })
                    .sum();
                let threshold = (1.0 + c) * evicted_cost;
                AcceptanceCheck {
                    element: acc.element,
                    gain,
                    evicted_cost,
                    threshold,
                    matches_log: gain == acc.gain && evicted_cost == acc.evicted_cost,
                    satisfied: gain.is_finite() && threshold.is_finite() && gain >= threshold,
                }
            })
            .collect()
    }
}
