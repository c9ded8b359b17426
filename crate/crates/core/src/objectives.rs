//! Set-function value oracles and the marginal shorthands built on them.
//!
//! [`SubmodularOracle::evaluate`] is the raw function; everything an
//! algorithm calls goes through [`SubmodularOracle::value`] (or the helpers
//! in this module), which validates the set and bills one value query.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::model::ArrivalOrder;

/// Value returned by [`LogDetObjective`] when the requested principal
/// submatrix is singular or indefinite.
pub const SINGULAR: f64 = f64::NEG_INFINITY;

/// Absolute tolerance of the exhaustive checks in [`verify_submodular`].
pub const SUBMODULARITY_TOLERANCE: f64 = 1e-9;

pub trait SubmodularOracle: fmt::Debug + Send + Sync {
    fn kind(&self) -> &'static str;

    /// Size of the ground set `0..n`.
    fn n(&self) -> usize;

    /// `f(set)`; `set` holds distinct in-range indices. Unchecked, unbilled.
    fn evaluate(&self, set: &[usize]) -> f64;

    fn is_monotone(&self) -> bool;

    fn is_nonnegative(&self) -> bool;

    fn value(&self, set: &[usize], ledger: &mut QueryLedger) -> Result<f64> {
        if let Some(&bad) = set.iter().find(|&&e| e >= self.n()) {
            return Err(Error::Domain {
                element: bad,
                context: format!("{} objective", self.kind()),
            });
        }
        ledger.record_value();
        Ok(self.evaluate(set))
    }
}

/// `f(u | S) = f(S + u) - f(S)`. Two value queries.
pub fn marginal(
    f: &dyn SubmodularOracle,
    u: usize,
    set: &[usize],
    ledger: &mut QueryLedger,
) -> Result<f64> {
    if set.contains(&u) {
        return Err(Error::Precondition(format!(
            "marginal of element {u} against a set that already contains it"
        )));
    }
    let base = f.value(set, ledger)?;
    let mut with = set.to_vec();
    with.push(u);
    Ok(f.value(&with, ledger)? - base)
}

/// `f(u : S)`: the marginal of `u` against the members of `S` that arrived
/// strictly before `u`. `u` may or may not belong to `S`. Two value queries.
pub fn prefix_marginal(
    f: &dyn SubmodularOracle,
    u: usize,
    set: &[usize],
    arrival: &ArrivalOrder,
    ledger: &mut QueryLedger,
) -> Result<f64> {
    let t = arrival.require(u)?;
    let mut prefix = Vec::with_capacity(set.len());
    for &x in set {
        if arrival.require(x)? < t {
            prefix.push(x);
        }
    }
    marginal(f, u, &prefix, ledger)
}

/// `f(T : S) = Σ_{u∈T} f(u : S)`.
///
/// Members of `T` that also lie in `S` are priced from the prefix chain
/// `f(∅), f({s_1}), f({s_1, s_2}), ...` of `S` in arrival order, evaluated
/// lazily and shared, so `prefix_sum(f, S, S)` costs `|S| + 1` queries.
/// Members of `T \ S` cost one extra query each on top of their chain point.
pub fn prefix_sum(
    f: &dyn SubmodularOracle,
    t: &[usize],
    s: &[usize],
    arrival: &ArrivalOrder,
    ledger: &mut QueryLedger,
) -> Result<f64> {
    let mut sorted: Vec<(usize, usize)> = s
        .iter()
        .map(|&x| arrival.require(x).map(|a| (a, x)))
        .collect::<Result<_>>()?;
    sorted.sort_unstable();
    let chain_set: Vec<usize> = sorted.iter().map(|&(_, x)| x).collect();

    let mut chain: HashMap<usize, f64> = HashMap::new();
    let mut chain_value = |len: usize, ledger: &mut QueryLedger| -> Result<f64> {
        if let Some(&v) = chain.get(&len) {
            return Ok(v);
        }
        let v = f.value(&chain_set[..len], ledger)?;
        chain.insert(len, v);
        Ok(v)
    };

    let mut total = 0.0;
    for &u in t {
        let a = arrival.require(u)?;
        let before = sorted.partition_point(|&(b, _)| b < a);
        let base = chain_value(before, ledger)?;
        let with = if sorted.get(before).is_some_and(|&(_, x)| x == u) {
            chain_value(before + 1, ledger)?
        } else {
            let mut set = chain_set[..before].to_vec();
            set.push(u);
            f.value(&set, ledger)?
        };
        total += with - base;
    }
    Ok(total)
}

/// Values `f(∅), f({s_1}), ..., f(S)` for a set listed in arrival order.
/// `|S| + 1` value queries.
pub fn prefix_chain(
    f: &dyn SubmodularOracle,
    in_arrival_order: &[usize],
    ledger: &mut QueryLedger,
) -> Result<Vec<f64>> {
    (0..=in_arrival_order.len())
        .map(|len| f.value(&in_arrival_order[..len], ledger))
        .collect()
}

/// Weighted coverage: element `e` covers the items `covers[e]`, and `f(S)`
/// is the total weight of items covered by some member of `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageObjective {
    covers: Vec<Vec<usize>>,
    weights: Vec<f64>,
}

impl CoverageObjective {
    pub fn new(covers: Vec<Vec<usize>>, weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Validation(format!(
                "coverage item weight {w} is not a finite non-negative number"
            )));
        }
        if let Some(item) = covers.iter().flatten().find(|&&i| i >= weights.len()) {
            return Err(Error::Validation(format!(
                "coverage references item {item} but only {} items have weights",
                weights.len()
            )));
        }
        Ok(CoverageObjective { covers, weights })
    }

    /// Every item has weight 1.
    pub fn unit(covers: Vec<Vec<usize>>, items: usize) -> Result<Self> {
        Self::new(covers, vec![1.0; items])
    }
}

impl SubmodularOracle for CoverageObjective {
    fn kind(&self) -> &'static str {
        "coverage"
    }
    fn n(&self) -> usize {
        self.covers.len()
    }
    fn evaluate(&self, set: &[usize]) -> f64 {
        let mut covered = vec![false; self.weights.len()];
        let mut total = 0.0;
        for &e in set {
            for &item in &self.covers[e] {
                if !std::mem::replace(&mut covered[item], true) {
                    total += self.weights[item];
                }
            }
        }
        total
    }
    fn is_monotone(&self) -> bool {
        true
    }
    fn is_nonnegative(&self) -> bool {
        true
    }
}

/// Weighted cut of an undirected graph whose vertices are the elements:
/// `f(S)` is the total weight of edges with exactly one endpoint in `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphCutObjective {
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl GraphCutObjective {
    pub fn new(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::Validation(format!(
                    "cut edge ({a}, {b}) outside 0..{n}"
                )));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Validation(format!(
                    "cut edge weight {w} is not a finite non-negative number"
                )));
            }
            if a != b {
                adjacency[a].push((b, w));
                adjacency[b].push((a, w));
            }
        }
        Ok(GraphCutObjective { adjacency })
    }

    pub fn unit(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(a, b)| (a, b, 1.0)).collect();
        Self::new(n, &weighted)
    }
}

impl SubmodularOracle for GraphCutObjective {
    fn kind(&self) -> &'static str {
        "cut"
    }
    fn n(&self) -> usize {
        self.adjacency.len()
    }
    fn evaluate(&self, set: &[usize]) -> f64 {
        let mut inside = vec![false; self.adjacency.len()];
        set.iter().for_each(|&v| inside[v] = true);
        set.iter()
            .flat_map(|&v| &self.adjacency[v])
            .filter(|&&(w, _)| !inside[w])
            .map(|&(_, weight)| weight)
            .sum()
    }
    fn is_monotone(&self) -> bool {
        false
    }
    fn is_nonnegative(&self) -> bool {
        true
    }
}

/// `f(S) = log det(L_S)` for a symmetric positive semidefinite kernel `L`.
///
/// Evaluated by Cholesky factorization of the principal submatrix. A
/// non-positive pivot yields [`SINGULAR`]. The value is negative whenever
/// `det(L_S) < 1`, so the objective is never declared non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct LogDetObjective {
    n: usize,
    kernel: Vec<f64>,
}

impl LogDetObjective {
    /// `kernel` is `n × n`, row-major.
    pub fn new(n: usize, kernel: Vec<f64>) -> Result<Self> {
        if kernel.len() != n * n {
            return Err(Error::Validation(format!(
                "log-det kernel has {} entries, expected {n}×{n}",
                kernel.len()
            )));
        }
        if let Some(x) = kernel.iter().find(|x| !x.is_finite()) {
            return Err(Error::Validation(format!(
                "log-det kernel entry {x} is not finite"
            )));
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (kernel[i * n + j], kernel[j * n + i]);
                if (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::Validation(format!(
                        "log-det kernel is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(LogDetObjective { n, kernel })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Validation(format!(
                "log-det kernel row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.kernel[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.kernel
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Smallest pivot of an LDLᵀ elimination of the full kernel; a PSD
    /// kernel has no pivot below rounding noise.
    pub fn min_pivot(&self) -> f64 {
        let n = self.n;
        let mut a = self.kernel.clone();
        let mut min = f64::INFINITY;
        for k in 0..n {
            let d = a[k * n + k];
            min = min.min(d);
            if d.abs() < 1e-300 {
                continue;
            }
            for i in k + 1..n {
                let factor = a[i * n + k] / d;
                for j in k + 1..n {
                    a[i * n + j] -= factor * a[k * n + j];
                }
            }
        }
        min
    }
}

impl SubmodularOracle for LogDetObjective {
    fn kind(&self) -> &'static str {
        "logdet"
    }
    fn n(&self) -> usize {
        self.n
    }
    fn evaluate(&self, set: &[usize]) -> f64 {
        let k = set.len();
        let mut l = vec![0.0; k * k];
        let mut log_det = 0.0;
        for i in 0..k {
            for j in 0..=i {
                let mut s = self.entry(set[i], set[j]);
                for t in 0..j {
                    s -= l[i * k + t] * l[j * k + t];
                }
                if i == j {
                    if s.is_nan() || s <= 0.0 {
                        return SINGULAR;
                    }
                    let d = s.sqrt();
                    l[i * k + i] = d;
                    log_det += 2.0 * d.ln();
                } else {
                    l[i * k + j] = s / l[j * k + j];
                }
            }
        }
        log_det
    }
    fn is_monotone(&self) -> bool {
        false
    }
    fn is_nonnegative(&self) -> bool {
        false
    }
}

/// `f(S) = Σ_{u∈S} w(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularObjective {
    weights: Vec<f64>,
}

impl ModularObjective {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::Validation(format!(
                "modular weight {w} is not finite"
            )));
        }
        Ok(ModularObjective { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SubmodularOracle for ModularObjective {
    fn kind(&self) -> &'static str {
        "modular"
    }
    fn n(&self) -> usize {
        self.weights.len()
    }
    fn evaluate(&self, set: &[usize]) -> f64 {
        set.iter().map(|&e| self.weights[e]).sum()
    }
    fn is_monotone(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0.0)
    }
    fn is_nonnegative(&self) -> bool {
        self.is_monotone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubmodularityViolation {
    /// `f(element | smaller) < f(element | larger)` with `smaller ⊆ larger`.
    DiminishingReturns {
        element: usize,
        smaller: Vec<usize>,
        larger: Vec<usize>,
        gain_smaller: f64,
        gain_larger: f64,
    },
    /// Declared monotone, yet adding `element` to `set` loses value.
    Monotonicity {
        element: usize,
        set: Vec<usize>,
        gain: f64,
    },
    /// Declared non-negative, yet `f(set) < 0`.
    Negative { set: Vec<usize>, value: f64 },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SubmodularityReport {
    pub n: usize,
    pub comparisons: u64,
    /// Comparisons skipped because a value was [`SINGULAR`].
    pub skipped_singular: u64,
    pub violations: Vec<SubmodularityViolation>,
}

impl SubmodularityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest ground set [`verify_submodular`] is recommended for.
pub const RECOMMENDED_SUBMODULAR_CAP: usize = 10;

/// Exhaustively checks `f(u | S) >= f(u | T)` for every `S ⊆ T` and
/// `u ∉ T`, plus the declared monotonicity and non-negativity flags, with
/// absolute tolerance [`SUBMODULARITY_TOLERANCE`]. Keeps the first witness
/// of each kind of violation.
pub fn verify_submodular(f: &dyn SubmodularOracle, max_n: usize) -> Result<SubmodularityReport> {
    let n = f.n();
    if n > max_n || n > 24 {
        return Err(Error::TooLarge {
            what: "objective ground set",
            size: n,
            cap: max_n.min(24),
        });
    }
    let tol = SUBMODULARITY_TOLERANCE;
    let members = |mask: usize| -> Vec<usize> { (0..n).filter(|b| mask >> b & 1 == 1).collect() };
    let values: Vec<f64> = (0..1usize << n).map(|m| f.evaluate(&members(m))).collect();
    let full = (1usize << n) - 1;

    let mut report = SubmodularityReport {
        n,
        ..Default::default()
    };
    let (mut dr_found, mut mono_found, mut neg_found) = (false, false, false);

    for t in 0..=full {
        if f.is_nonnegative() && !neg_found && values[t] < -tol {
            neg_found = true;
            report.violations.push(SubmodularityViolation::Negative {
                set: members(t),
                value: values[t],
            });
        }
        for u in (0..n).filter(|u| t >> u & 1 == 0) {
            let gain_t = values[t | 1 << u] - values[t];
            if f.is_monotone() && !mono_found && gain_t < -tol {
                mono_found = true;
                report
                    .violations
                    .push(SubmodularityViolation::Monotonicity {
                        element: u,
                        set: members(t),
                        gain: gain_t,
                    });
            }
            // every submask s of t
            let mut s = t;
            loop {
                let gain_s = values[s | 1 << u] - values[s];
                if gain_s.is_finite() && gain_t.is_finite() {
                    report.comparisons += 1;
                    if !dr_found && gain_s < gain_t - tol {
                        dr_found = true;
                        report
                            .violations
                            .push(SubmodularityViolation::DiminishingReturns {
                                element: u,
                                smaller: members(s),
                                larger: members(t),
                                gain_smaller: gain_s,
                                gain_larger: gain_t,
                            });
                    }
                } else {
                    report.skipped_singular += 1;
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & t;
            }
        }
    }
    Ok(report)
}
