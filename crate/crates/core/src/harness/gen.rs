use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{
    Capacity, ConstraintDescriptor, CutEdge, EdgeDescriptor, InstanceSpec, ObjectiveDescriptor,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    /// Coverage objective, one uniform matroid (p = 1).
    CoverageUniform,
    /// Coverage objective over the edges of a random graph, b-matching constraint (p = 2).
    BmatchingRandomGraph,
    /// Unit-weight cut of a random graph; uniform matroid, or partition if `blocks > 0`.
    CutRandomGraph,
    /// Log-det of a random Gram kernel, uniform matroid.
    LogdetRandomPsd,
    /// Coverage objective, partition matroid.
    PartitionConstrained,
}

impl GenKind {
    pub const ALL: [GenKind; 5] = [
        GenKind::CoverageUniform,
        GenKind::BmatchingRandomGraph,
        GenKind::CutRandomGraph,
        GenKind::LogdetRandomPsd,
        GenKind::PartitionConstrained,
    ];

    pub fn label(self) -> &'static str {
        match self {
            GenKind::CoverageUniform => "coverage-uniform",
            GenKind::BmatchingRandomGraph => "bmatching-random-graph",
            GenKind::CutRandomGraph => "cut-random-graph",
            GenKind::LogdetRandomPsd => "logdet-random-psd",
            GenKind::PartitionConstrained => "partition-constrained",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::UnsupportedDescriptor {
                kind: s.to_string(),
                context: "generator".into(),
            })
    }
}

/// Generator knobs. Each kind reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    /// Ground-set size (ignored by `bmatching-random-graph`, where `edges` is the size).
    pub n: usize,
    /// Coverage universe size.
    pub items: usize,
    /// Upper bound on items covered by one element.
    pub cover_size: usize,
    /// Rank of the uniform matroid.
    pub rank: usize,
    /// Vertex count of the b-matching graph.
    pub vertices: usize,
    /// Edge count of random graphs.
    pub edges: usize,
    /// Vertex capacity of the b-matching.
    pub b: usize,
    /// Partition block count (0 = use a uniform matroid where that is an option).
    pub blocks: usize,
    /// Per-block capacity.
    pub cap: usize,
    /// Feature dimension of log-det kernels (0 = `n + 2`).
    pub dim: usize,
    /// Shuffle the arrival order with the generator seed.
    pub shuffle: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 10,
            items: 20,
            cover_size: 4,
            rank: 3,
            vertices: 6,
            edges: 9,
            b: 1,
            blocks: 0,
            cap: 1,
            dim: 0,
            shuffle: false,
        }
    }
}

fn ids(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

fn random_edges(
    rng: &mut ChaCha8Rng,
    vertices: usize,
    edges: usize,
) -> Result<Vec<(usize, usize)>> {
    let mut all: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|a| (a + 1..vertices).map(move |b| (a, b)))
        .collect();
    if edges > all.len() {
        return Err(Error::Config(format!(
            "a simple graph on {vertices} vertices has at most {} edges, asked for {edges}",
            all.len()
        )));
    }
    all.shuffle(rng);
    all.truncate(edges);
    all.sort_unstable();
    Ok(all)
}

fn coverage(
    rng: &mut ChaCha8Rng,
    elements: &[String],
    params: &GenParams,
) -> Result<ObjectiveDescriptor> {
    if params.items == 0 || params.cover_size == 0 {
        return Err(Error::Config(
            "coverage needs items >= 1 and cover_size >= 1".into(),
        ));
    }
    let items = ids("i", params.items);
    let covers = elements
        .iter()
        .map(|e| {
            let size = rng.random_range(1..=params.cover_size.min(params.items));
            let chosen: BTreeSet<usize> = (0..size)
                .map(|_| rng.random_range(0..params.items))
                .collect();
            (
                e.clone(),
                chosen.into_iter().map(|i| items[i].clone()).collect(),
            )
        })
        .collect();
    Ok(ObjectiveDescriptor::Coverage {
        covers,
        weights: BTreeMap::new(),
    })
}

fn partition(
    rng: &mut ChaCha8Rng,
    elements: &[String],
    blocks: usize,
    cap: usize,
) -> ConstraintDescriptor {
    let mut assigned = vec![Vec::new(); blocks];
    for e in elements {
        assigned[rng.random_range(0..blocks)].push(e.clone());
    }
    ConstraintDescriptor::Partition {
        ground: elements.to_vec(),
        blocks: assigned,
        caps: vec![cap; blocks],
    }
}

/// Builds a synthetic instance; identical `(kind, params, seed)` give
/// identical documents.
pub fn gen_instance(kind: GenKind, params: &GenParams, seed: u64) -> Result<InstanceSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (elements, matroids, objective) = match kind {
        GenKind::CoverageUniform => {
            let elements = ids("e", params.n);
            let objective = coverage(&mut rng, &elements, params)?;
            let m = ConstraintDescriptor::Uniform {
                rank: params.rank,
                ground: elements.clone(),
            };
            (elements, vec![m], objective)
        }
        GenKind::BmatchingRandomGraph => {
            let graph = random_edges(&mut rng, params.vertices, params.edges)?;
            let vertices = ids("v", params.vertices);
            let elements = ids("e", graph.len());
            let edges = graph
                .iter()
                .zip(&elements)
                .map(|(&(a, b), id)| EdgeDescriptor {
                    id: id.clone(),
                    u: vertices[a].clone(),
                    v: vertices[b].clone(),
                })
                .collect();
            let objective = coverage(&mut rng, &elements, params)?;
            let m = ConstraintDescriptor::BMatching {
                vertices,
                edges,
                b: Capacity::Uniform(params.b),
            };
            (elements, vec![m], objective)
        }
        GenKind::CutRandomGraph => {
            let elements = ids("e", params.n);
            let graph = random_edges(&mut rng, params.n, params.edges)?;
            let objective = ObjectiveDescriptor::Cut {
                edges: graph
                    .iter()
                    .map(|&(a, b)| CutEdge {
                        u: elements[a].clone(),
                        v: elements[b].clone(),
                        w: 1.0,
                    })
                    .collect(),
            };
            let m = if params.blocks > 0 {
                partition(&mut rng, &elements, params.blocks, params.cap)
            } else {
                ConstraintDescriptor::Uniform {
                    rank: params.rank,
                    ground: elements.clone(),
                }
            };
            (elements, vec![m], objective)
        }
        GenKind::LogdetRandomPsd => {
            let elements = ids("e", params.n);
            let dim = if params.dim == 0 {
                params.n + 2
            } else {
                params.dim
            };
            let features: Vec<Vec<f64>> = (0..params.n)
                .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let scale = 3.0 / dim as f64;
            let kernel = features
                .iter()
                .map(|x| {
                    features
                        .iter()
                        .map(|y| scale * x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>())
                        .collect()
                })
                .collect();
            let objective = ObjectiveDescriptor::Logdet {
                ids: elements.clone(),
                kernel,
            };
            let m = ConstraintDescriptor::Uniform {
                rank: params.rank,
                ground: elements.clone(),
            };
            (elements, vec![m], objective)
        }
        GenKind::PartitionConstrained => {
            let elements = ids("e", params.n);
            let objective = coverage(&mut rng, &elements, params)?;
            let m = partition(&mut rng, &elements, params.blocks.max(1), params.cap);
            (elements, vec![m], objective)
        }
    };

    let mut order = elements;
    if params.shuffle {
        order.shuffle(&mut rng);
    }
    let metadata = BTreeMap::from([
        ("id".to_string(), format!("{kind}-s{seed}")),
        ("generator".to_string(), kind.label().to_string()),
        ("seed".to_string(), seed.to_string()),
    ]);
    Ok(InstanceSpec {
        n: order.len(),
        matroids,
        objective,
        order,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{verify_submodular, LogDetObjective};

    #[test]
    fn deterministic_per_seed() {
        let params = GenParams {
            vertices: 6,
            edges: 9,
            b: 1,
            ..Default::default()
        };
        let a = gen_instance(GenKind::BmatchingRandomGraph, &params, 7).unwrap();
        let b = gen_instance(GenKind::BmatchingRandomGraph, &params, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(
            a,
            gen_instance(GenKind::BmatchingRandomGraph, &params, 8).unwrap()
        );
        assert_eq!(a.build().unwrap().matchoid.p(), 2);
    }

    #[test]
    fn logdet_kernel_is_psd() {
        let params = GenParams {
            n: 5,
            rank: 2,
            ..Default::default()
        };
        let spec = gen_instance(GenKind::LogdetRandomPsd, &params, 3).unwrap();
        let ObjectiveDescriptor::Logdet { kernel, .. } = &spec.objective else {
            panic!("expected a log-det objective");
        };
        let f = LogDetObjective::from_rows(kernel.clone()).unwrap();
        assert!(f.min_pivot() >= -1e-9);
    }

    #[test]
    fn coverage_uniform_is_submodular() {
        let params = GenParams {
            n: 10,
            items: 20,
            ..Default::default()
        };
        let inst = gen_instance(GenKind::CoverageUniform, &params, 1)
            .unwrap()
            .build()
            .unwrap();
        assert!(verify_submodular(inst.objective.as_ref(), 10)
            .unwrap()
            .passed());
    }

    #[test]
    fn every_kind_builds() {
        for kind in GenKind::ALL {
            let params = GenParams {
                blocks: 2,
                shuffle: true,
                ..Default::default()
            };
            let spec = gen_instance(kind, &params, 5).unwrap();
            let back = InstanceSpec::from_json_str(&spec.to_json_string()).unwrap();
            assert_eq!(back, spec, "{kind}");
            assert!(spec.build().is_ok(), "{kind}");
        }
    }

    #[test]
    fn labels_round_trip_and_unknown_kind_errors() {
        for kind in GenKind::ALL {
            assert_eq!(kind.label().parse::<GenKind>().unwrap(), kind);
        }
        assert!("grid".parse::<GenKind>().is_err());
    }

    #[test]
    fn too_many_edges_is_an_error() {
        let params = GenParams {
            vertices: 3,
            edges: 4,
            ..Default::default()
        };
        assert!(gen_instance(GenKind::BmatchingRandomGraph, &params, 0).is_err());
    }
}
