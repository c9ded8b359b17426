//! p-matchoids: `m` matroids over subsets of one ground set, where each
//! element lies in at most `p` of the matroid ground sets. A set is feasible
//! when its trace on every matroid ground set is independent there.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::matroids::{MatroidOracle, UniformMatroid};

#[derive(Debug, Clone)]
pub struct PMatchoid {
    n: usize,
    matroids: Vec<Arc<dyn MatroidOracle>>,
    membership: Vec<Vec<usize>>,
    max_membership: usize,
}

impl PMatchoid {
    /// Composes matroids over the ground set `0..n`. Elements that appear in
    /// no matroid ground set are unconstrained.
    pub fn compose(matroids: Vec<Arc<dyn MatroidOracle>>, n: usize) -> Result<Self> {
        let mut membership = vec![Vec::new(); n];
        for (l, m) in matroids.iter().enumerate() {
            for &e in m.ground() {
                membership
                    .get_mut(e)
                    .ok_or_else(|| {
                        Error::Validation(format!(
                            "matroid {l} ({}) references element {e} outside a ground set of size {n}",
                            m.kind()
                        ))
                    })?
                    .push(l);
            }
        }
        let max_membership = membership.iter().map(Vec::len).max().unwrap_or(0);
        Ok(PMatchoid {
            n,
            matroids,
            membership,
            max_membership,
        })
    }

    /// A matchoid with no matroids: every subset is feasible.
    pub fn unconstrained(n: usize) -> Self {
        Self::compose(Vec::new(), n).expect("no matroids to validate")
    }

    /// Width `p`, clamped to at least 1 so that parameter formulas stay
    /// defined for instances where no element is constrained.
    pub fn p(&self) -> usize {
        self.max_membership.max(1)
    }

    /// Maximum number of matroid ground sets any element belongs to (may be 0).
    pub fn max_membership(&self) -> usize {
        self.max_membership
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of matroids `m`.
    pub fn m(&self) -> usize {
        self.matroids.len()
    }

    pub fn matroids(&self) -> &[Arc<dyn MatroidOracle>] {
        &self.matroids
    }

    pub fn matroid(&self, l: usize) -> &dyn MatroidOracle {
        self.matroids[l].as_ref()
    }

    /// Indices of the matroids whose ground set contains `element`.
    pub fn memberships(&self, element: usize) -> &[usize] {
        &self.membership[element]
    }

    fn validate(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&e| e >= self.n) {
            Some(&bad) => Err(Error::Domain {
                element: bad,
                context: "p-matchoid".into(),
            }),
            None => Ok(()),
        }
    }

    /// Splits `set` by matroid: bucket `ℓ` holds `set ∩ N_ℓ`.
    fn traces(&self, set: &[usize]) -> Vec<Vec<usize>> {
        let mut buckets = vec![Vec::new(); self.matroids.len()];
        for &e in set {
            for &l in &self.membership[e] {
                buckets[l].push(e);
            }
        }
        buckets
    }

    /// Feasibility with query accounting. Matroids whose trace is empty are
    /// skipped without a query, and the scan stops at the first dependent trace.
    pub fn is_feasible(&self, set: &[usize], ledger: &mut QueryLedger) -> Result<bool> {
        self.validate(set)?;
        for (l, trace) in self.traces(set).into_iter().enumerate() {
            if trace.is_empty() {
                continue;
            }
            ledger.record_independence(Some(l));
            if !self.matroids[l].independent(&trace) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Feasibility without validation or accounting, for audits and
    /// exhaustive search.
    pub fn feasible_unchecked(&self, set: &[usize]) -> bool {
        self.traces(set)
            .iter()
            .zip(&self.matroids)
            .all(|(trace, m)| trace.is_empty() || m.independent(trace))
    }

    /// One billed independence query against matroid `l`; `trace` must
    /// already be restricted to `N_ℓ`.
    pub(crate) fn query(&self, l: usize, trace: &[usize], ledger: &mut QueryLedger) -> bool {
        ledger.record_independence(Some(l));
        self.matroids[l].independent(trace)
    }

    /// Exact size `k` of the largest feasible set, by depth-first search over
    /// feasible sets only (downward closure prunes every infeasible branch).
    pub fn max_feasible_size(&self, cap: usize) -> Result<usize> {
        if self.n > cap {
            return Err(Error::TooLarge {
                what: "matchoid ground set",
                size: self.n,
                cap,
            });
        }
        let mut best = 0;
        let mut current = Vec::with_capacity(self.n);
        self.grow(0, &mut current, &mut best);
        Ok(best)
    }

    fn grow(&self, next: usize, current: &mut Vec<usize>, best: &mut usize) {
        *best = (*best).max(current.len());
        if current.len() + (self.n - next) <= *best {
            return;
        }
        for e in next..self.n {
            if current.len() + (self.n - e) <= *best {
                return;
            }
            current.push(e);
            if self.feasible_unchecked(current) {
                self.grow(e + 1, current, best);
            }
            current.pop();
        }
    }
}

/// Largest ground set [`PMatchoid::max_feasible_size`] is recommended for.
pub const RECOMMENDED_K_CAP: usize = 20;

/// The b-matching 2-matchoid of a graph: elements are the edges (element `i`
/// is `edges[i]`), and each vertex `v` contributes a matroid over its
/// incident edges in which a set is independent iff it has at most `b[v]`
/// edges.
pub fn b_matching_matchoid(
    vertices: usize,
    edges: &[(usize, usize)],
    b: &[usize],
) -> Result<PMatchoid> {
    let labelled: Vec<(usize, usize, usize)> = edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| (i, u, v))
        .collect();
    PMatchoid::compose(vertex_matroids(vertices, &labelled, b)?, edges.len())
}

/// One uniform matroid per vertex over its incident edges, with rank
/// `b[v]`. Edges are `(element, u, v)`.
pub(crate) fn vertex_matroids(
    vertices: usize,
    edges: &[(usize, usize, usize)],
    b: &[usize],
) -> Result<Vec<Arc<dyn MatroidOracle>>> {
    if b.len() != vertices {
        return Err(Error::Validation(format!(
            "b-matching has {vertices} vertices but {} capacities",
            b.len()
        )));
    }
    let mut incident = vec![Vec::new(); vertices];
    for &(e, u, v) in edges {
        if u >= vertices || v >= vertices {
            return Err(Error::Validation(format!(
                "edge {e} ({u}, {v}) references a vertex outside 0..{vertices}"
            )));
        }
        if u == v {
            return Err(Error::Validation(format!(
                "edge {e} is a self-loop at vertex {u}"
            )));
        }
        incident[u].push(e);
        incident[v].push(e);
    }
    incident
        .into_iter()
        .zip(b)
        .map(|(ground, &cap)| {
            UniformMatroid::new(ground, cap).map(|m| Arc::new(m) as Arc<dyn MatroidOracle>)
        })
        .collect()
}
