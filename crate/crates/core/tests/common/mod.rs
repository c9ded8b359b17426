//! Random instance builders shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use samplestream::matroids::{GraphicMatroid, MatroidOracle, PartitionMatroid, UniformMatroid};
use samplestream::{
    b_matching_matchoid, ArrivalStream, CoverageObjective, GraphCutObjective, LogDetObjective,
    ModularObjective, PMatchoid, SubmodularOracle,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    Coverage,
    Cut,
    LogDet,
    Modular,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 4] = [
        ObjectiveKind::Coverage,
        ObjectiveKind::Cut,
        ObjectiveKind::LogDet,
        ObjectiveKind::Modular,
    ];
    /// Kinds that are non-negative as built here (modular uses non-negative weights).
    pub const NONNEGATIVE: [ObjectiveKind; 3] = [
        ObjectiveKind::Coverage,
        ObjectiveKind::Cut,
        ObjectiveKind::Modular,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Uniform,
    Partition,
    Graphic,
    BMatching,
    /// Several matroids of mixed kinds over overlapping random grounds.
    Mixed,
}

impl ConstraintKind {
    pub const ALL: [ConstraintKind; 5] = [
        ConstraintKind::Uniform,
        ConstraintKind::Partition,
        ConstraintKind::Graphic,
        ConstraintKind::BMatching,
        ConstraintKind::Mixed,
    ];
}

pub fn coverage(rng: &mut ChaCha8Rng, n: usize, items: usize) -> CoverageObjective {
    let covers = (0..n)
        .map(|_| {
            let size = rng.random_range(1..=4.min(items));
            let mut c: Vec<usize> = (0..size).map(|_| rng.random_range(0..items)).collect();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    let weights = (0..items).map(|_| rng.random_range(0.5..2.0)).collect();
    CoverageObjective::new(covers, weights).unwrap()
}

pub fn unit_cut(rng: &mut ChaCha8Rng, n: usize, density: f64) -> GraphCutObjective {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| rng.random_bool(density))
        .collect();
    GraphCutObjective::unit(n, &edges).unwrap()
}

pub fn weighted_cut(rng: &mut ChaCha8Rng, n: usize) -> GraphCutObjective {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(0.4) {
                edges.push((a, b, rng.random_range(0.1..3.0)));
            }
        }
    }
    GraphCutObjective::new(n, &edges).unwrap()
}

/// Gram kernel of random feature vectors; positive definite almost surely.
pub fn logdet(rng: &mut ChaCha8Rng, n: usize) -> LogDetObjective {
    let dim = n + 2;
    let features: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let rows = features
        .iter()
        .map(|x| {
            features
                .iter()
                .map(|y| 3.0 / dim as f64 * x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>())
                .collect()
        })
        .collect();
    LogDetObjective::from_rows(rows).unwrap()
}

pub fn modular(rng: &mut ChaCha8Rng, n: usize, nonnegative: bool) -> ModularObjective {
    let low = if nonnegative { 0.0 } else { -1.0 };
    ModularObjective::new((0..n).map(|_| rng.random_range(low..2.0)).collect()).unwrap()
}

pub fn objective(rng: &mut ChaCha8Rng, kind: ObjectiveKind, n: usize) -> Arc<dyn SubmodularOracle> {
    match kind {
        ObjectiveKind::Coverage => Arc::new(coverage(rng, n, 2 * n)),
        ObjectiveKind::Cut => Arc::new(weighted_cut(rng, n)),
        ObjectiveKind::LogDet => Arc::new(logdet(rng, n)),
        ObjectiveKind::Modular => {
            let nonnegative = rng.random_bool(0.5);
            Arc::new(modular(rng, n, nonnegative))
        }
    }
}

pub fn nonnegative_objective(
    rng: &mut ChaCha8Rng,
    kind: ObjectiveKind,
    n: usize,
) -> Arc<dyn SubmodularOracle> {
    match kind {
        ObjectiveKind::Modular => Arc::new(modular(rng, n, true)),
        other => objective(rng, other, n),
    }
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, at_least: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let size = rng.random_range(at_least.min(n)..=n);
    all.truncate(size);
    all.sort_unstable();
    all
}

pub fn uniform_on(rng: &mut ChaCha8Rng, ground: Vec<usize>) -> UniformMatroid {
    let rank = rng.random_range(0..=ground.len().min(5));
    UniformMatroid::new(ground, rank).unwrap()
}

pub fn partition_on(rng: &mut ChaCha8Rng, ground: Vec<usize>) -> PartitionMatroid {
    let count = rng.random_range(1..=4);
    let mut blocks = vec![Vec::new(); count];
    for e in ground {
        blocks[rng.random_range(0..count)].push(e);
    }
    let caps = (0..count).map(|_| rng.random_range(0..=3)).collect();
    PartitionMatroid::new(blocks, caps).unwrap()
}

/// Random multigraph with occasional self-loops on `ground` as edges.
pub fn graphic_on(rng: &mut ChaCha8Rng, ground: Vec<usize>) -> GraphicMatroid {
    let vertices = rng.random_range(2..=6);
    GraphicMatroid::new(ground.into_iter().map(|e| {
        let a = rng.random_range(0..vertices);
        let b = if rng.random_bool(0.1) {
            a
        } else {
            rng.random_range(0..vertices)
        };
        (e, (a, b))
    }))
    .unwrap()
}

pub fn b_matching(rng: &mut ChaCha8Rng, n: usize) -> PMatchoid {
    let vertices = rng.random_range(3..=7);
    let edges: Vec<(usize, usize)> = (0..n)
        .map(|_| {
            let a = rng.random_range(0..vertices);
            let mut b = rng.random_range(0..vertices - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    let b: Vec<usize> = (0..vertices).map(|_| rng.random_range(1..=2)).collect();
    b_matching_matchoid(vertices, &edges, &b).unwrap()
}

pub fn matchoid(rng: &mut ChaCha8Rng, kind: ConstraintKind, n: usize) -> PMatchoid {
    let all: Vec<usize> = (0..n).collect();
    let single = |m: Arc<dyn MatroidOracle>| PMatchoid::compose(vec![m], n).unwrap();
    match kind {
        ConstraintKind::Uniform => {
            let rank = rng.random_range(1..=n.clamp(1, 5));
            single(Arc::new(UniformMatroid::new(all, rank).unwrap()))
        }
        ConstraintKind::Partition => single(Arc::new(partition_on(rng, all))),
        ConstraintKind::Graphic => single(Arc::new(graphic_on(rng, all))),
        ConstraintKind::BMatching => b_matching(rng, n),
        ConstraintKind::Mixed => {
            let m = rng.random_range(2..=4);
            let matroids = (0..m)
                .map(|_| -> Arc<dyn MatroidOracle> {
                    let ground = random_subset(rng, n, 1);
                    match rng.random_range(0..3) {
                        0 => Arc::new(uniform_on(rng, ground)),
                        1 => Arc::new(partition_on(rng, ground)),
                        _ => Arc::new(graphic_on(rng, ground)),
                    }
                })
                .collect();
            PMatchoid::compose(matroids, n).unwrap()
        }
    }
}

pub fn shuffled_stream(rng: &mut ChaCha8Rng, n: usize) -> ArrivalStream {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    ArrivalStream::new(n, order).unwrap()
}
