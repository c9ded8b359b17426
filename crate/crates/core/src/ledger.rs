//! Oracle-call accounting for a single trial.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Counts value-oracle calls, independence-oracle calls and the peak number
/// of element slots held by the algorithm. All counters only grow.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLedger {
    value_queries: u64,
    independence_queries: u64,
    per_matroid: BTreeMap<usize, u64>,
    elements_held_peak: usize,
}

/// Immutable copy of a ledger at one point in time.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    pub value_queries: u64,
    pub independence_queries: u64,
    pub per_matroid: BTreeMap<usize, u64>,
    pub elements_held_peak: usize,
}

impl LedgerSnapshot {
    pub fn total_queries(&self) -> u64 {
        self.value_queries + self.independence_queries
    }

    /// Componentwise `<=`, the order in which a ledger evolves.
    pub fn dominated_by(&self, later: &LedgerSnapshot) -> bool {
        self.value_queries <= later.value_queries
            && self.independence_queries <= later.independence_queries
            && self.elements_held_peak <= later.elements_held_peak
            && self
                .per_matroid
                .iter()
                .all(|(m, c)| later.per_matroid.get(m).is_some_and(|l| c <= l))
    }
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_value(&mut self) {
        self.value_queries += 1;
    }

    /// One independence query, optionally attributed to a matroid of a matchoid.
    pub fn record_independence(&mut self, matroid: Option<usize>) {
        self.independence_queries += 1;
        if let Some(m) = matroid {
            *self.per_matroid.entry(m).or_default() += 1;
        }
    }

    pub fn observe_held(&mut self, slots: usize) {
        self.elements_held_peak = self.elements_held_peak.max(slots);
    }

    pub fn value_queries(&self) -> u64 {
        self.value_queries
    }

    pub fn independence_queries(&self) -> u64 {
        self.independence_queries
    }

    pub fn elements_held_peak(&self) -> usize {
        self.elements_held_peak
    }

    pub fn total_queries(&self) -> u64 {
        self.value_queries + self.independence_queries
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            value_queries: self.value_queries,
            independence_queries: self.independence_queries,
            per_matroid: self.per_matroid.clone(),
            elements_held_peak: self.elements_held_peak,
        }
    }

    /// Adds counts; the peak is the larger of the two peaks.
    pub fn merge(&mut self, other: &QueryLedger) {
        self.value_queries += other.value_queries;
        self.independence_queries += other.independence_queries;
        for (m, c) in &other.per_matroid {
            *self.per_matroid.entry(*m).or_default() += c;
        }
        self.elements_held_peak = self.elements_held_peak.max(other.elements_held_peak);
    }
}
