//! Matroids behind a uniform independence-oracle contract.
//!
//! Every matroid owns a ground set `N_ℓ` of dense element indices (kept
//! sorted). The raw predicate [`MatroidOracle::independent`] is unchecked and
//! uncounted; callers that run on behalf of an algorithm go through
//! [`MatroidOracle::is_independent`], which validates the set and bills the
//! trial's [`QueryLedger`].

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;

pub trait MatroidOracle: fmt::Debug + Send + Sync {
    /// Short kind label (`uniform`, `partition`, ...).
    fn kind(&self) -> &'static str;

    /// Sorted, duplicate-free ground set.
    fn ground(&self) -> &[usize];

    /// Independence predicate on a subset of the ground set. Not validated.
    fn independent(&self, set: &[usize]) -> bool;

    /// Membership metadata; never billed as a query.
    fn in_ground_set(&self, element: usize) -> bool {
        self.ground().binary_search(&element).is_ok()
    }

    fn is_independent(&self, set: &[usize], ledger: &mut QueryLedger) -> Result<bool> {
        if let Some(&bad) = set.iter().find(|&&e| !self.in_ground_set(e)) {
            return Err(Error::Domain {
                element: bad,
                context: format!("{} matroid", self.kind()),
            });
        }
        ledger.record_independence(None);
        Ok(self.independent(set))
    }
}

fn sorted_ground(ground: impl IntoIterator<Item = usize>) -> Result<Vec<usize>> {
    let mut g: Vec<usize> = ground.into_iter().collect();
    g.sort_unstable();
    if let Some(w) = g.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Validation(format!(
            "element {} listed twice in a matroid ground set",
            w[0]
        )));
    }
    Ok(g)
}

/// `S` is independent iff `|S| <= rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformMatroid {
    ground: Vec<usize>,
    rank: usize,
}

impl UniformMatroid {
    pub fn new(ground: impl IntoIterator<Item = usize>, rank: usize) -> Result<Self> {
        Ok(UniformMatroid {
            ground: sorted_ground(ground)?,
            rank,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl MatroidOracle for UniformMatroid {
    fn kind(&self) -> &'static str {
        "uniform"
    }

    fn ground(&self) -> &[usize] {
        &self.ground
    }

    fn independent(&self, set: &[usize]) -> bool {
        set.len() <= self.rank
    }
}

/// Ground set split into blocks; `S` is independent iff it takes at most
/// `caps[j]` elements from block `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    ground: Vec<usize>,
    block_of: HashMap<usize, usize>,
    caps: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(blocks: Vec<Vec<usize>>, caps: Vec<usize>) -> Result<Self> {
        if blocks.len() != caps.len() {
            return Err(Error::Validation(format!(
                "partition matroid has {} blocks but {} capacities",
                blocks.len(),
                caps.len()
            )));
        }
        let mut block_of = HashMap::new();
        for (j, block) in blocks.iter().enumerate() {
            for &e in block {
                if block_of.insert(e, j).is_some() {
                    return Err(Error::Validation(format!(
                        "element {e} belongs to more than one partition block"
                    )));
                }
            }
        }
        let ground = sorted_ground(block_of.keys().copied())?;
        Ok(PartitionMatroid {
            ground,
            block_of,
            caps,
        })
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn block_of(&self, element: usize) -> Option<usize> {
        self.block_of.get(&element).copied()
    }
}

impl MatroidOracle for PartitionMatroid {
    fn kind(&self) -> &'static str {
        "partition"
    }

    fn ground(&self) -> &[usize] {
        &self.ground
    }

    fn independent(&self, set: &[usize]) -> bool {
        let mut used = vec![0usize; self.caps.len()];
        for e in set {
            let j = self.block_of[e];
            used[j] += 1;
            if used[j] > self.caps[j] {
                return false;
            }
        }
        true
    }
}

/// Edges of an undirected multigraph; `S` is independent iff it is a forest.
///
/// Independence is recomputed from scratch on every query with a
/// union-find over the endpoints touched by the queried set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphicMatroid {
    ground: Vec<usize>,
    endpoints: HashMap<usize, (usize, usize)>,
}

impl GraphicMatroid {
    /// `edges` maps each element to its two (vertex-index) endpoints.
    /// A self-loop is a legal element that is never independent.
    pub fn new(edges: impl IntoIterator<Item = (usize, (usize, usize))>) -> Result<Self> {
        let endpoints: HashMap<usize, (usize, usize)> = edges.into_iter().collect();
        let ground = sorted_ground(endpoints.keys().copied())?;
        Ok(GraphicMatroid { ground, endpoints })
    }

    pub fn endpoints(&self, element: usize) -> Option<(usize, usize)> {
        self.endpoints.get(&element).copied()
    }
}

impl MatroidOracle for GraphicMatroid {
    fn kind(&self) -> &'static str {
        "graphic"
    }

    fn ground(&self) -> &[usize] {
        &self.ground
    }

    fn independent(&self, set: &[usize]) -> bool {
        let mut vertices: Vec<usize> = set
            .iter()
            .flat_map(|e| {
                let (a, b) = self.endpoints[e];
                [a, b]
            })
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        let local = |v: usize| {
            vertices
                .binary_search(&v)
                .expect("endpoint collected above")
        };
        let mut forest = DisjointSets::new(vertices.len());
        set.iter().all(|e| {
            let (a, b) = self.endpoints[e];
            forest.union(local(a), local(b))
        })
    }
}

/// Union by size with path halving.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// A concrete counterexample to one of the matroid axioms. Sets are given
/// as element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    EmptySetDependent,
    /// `superset` is independent but its subset `subset` is not.
    DownwardClosure {
        superset: Vec<usize>,
        subset: Vec<usize>,
    },
    /// `|smaller| < |larger|`, both independent, and no element of
    /// `larger \ smaller` extends `smaller`.
    Exchange {
        smaller: Vec<usize>,
        larger: Vec<usize>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub ground_size: usize,
    pub independent_sets: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest ground set [`verify_axioms`] is recommended for.
pub const RECOMMENDED_AXIOM_CAP: usize = 12;

/// Exhaustively checks the three matroid axioms over every subset (and every
/// pair of subsets) of the ground set. At most one witness per axiom is kept.
pub fn verify_axioms(matroid: &dyn MatroidOracle, max_ground: usize) -> Result<AxiomReport> {
    let ground = matroid.ground();
    let g = ground.len();
    if g > max_ground || g >= usize::BITS as usize {
        return Err(Error::TooLarge {
            what: "matroid ground set",
            size: g,
            cap: max_ground,
        });
    }
    let subsets = 1usize << g;
    let members = |mask: usize| -> Vec<usize> {
        (0..g)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| ground[b])
            .collect()
    };
    let independent: Vec<bool> = (0..subsets)
        .map(|mask| matroid.independent(&members(mask)))
        .collect();

    let mut report = AxiomReport {
        ground_size: g,
        independent_sets: independent.iter().filter(|&&i| i).count(),
        violations: Vec::new(),
    };

    if !independent[0] {
        report.violations.push(AxiomViolation::EmptySetDependent);
    }

    // Removing single elements from every independent set reaches every subset.
    'closure: for mask in (0..subsets).filter(|&m| independent[m]) {
        for b in (0..g).filter(|b| mask >> b & 1 == 1) {
            let sub = mask & !(1 << b);
            if !independent[sub] {
                report.violations.push(AxiomViolation::DownwardClosure {
                    superset: members(mask),
                    subset: members(sub),
                });
                break 'closure;
            }
        }
    }

    let indep_masks: Vec<usize> = (0..subsets).filter(|&m| independent[m]).collect();
    'exchange: for &small in &indep_masks {
        for &large in &indep_masks {
            if small.count_ones() >= large.count_ones() {
                continue;
            }
            let candidates = large & !small;
            let extends = (0..g)
                .filter(|b| candidates >> b & 1 == 1)
                .any(|b| independent[small | 1 << b]);
            if !extends {
                report.violations.push(AxiomViolation::Exchange {
                    smaller: members(small),
                    larger: members(large),
                });
                break 'exchange;
            }
        }
    }

    Ok(report)
}
