//! Fixed benchmark instances. Benchmarks live in `benches/`.

use samplestream::harness::{gen_instance, GenKind, GenParams};
use samplestream::Instance;

/// Coverage over `n` elements under a rank-`rank` uniform matroid, shuffled order.
pub fn coverage(n: usize, rank: usize) -> Instance {
    let params = GenParams {
        n,
        items: n / 2 + 1,
        cover_size: 6,
        rank,
        shuffle: true,
        ..Default::default()
    };
    gen_instance(GenKind::CoverageUniform, &params, 17)
        .and_then(|spec| spec.build())
        .expect("benchmark instance")
}

/// Coverage over the edges of a random graph with vertex capacity `b` (p = 2).
pub fn b_matching(vertices: usize, edges: usize, b: usize) -> Instance {
    let params = GenParams {
        vertices,
        edges,
        b,
        items: edges,
        shuffle: true,
        ..Default::default()
    };
    gen_instance(GenKind::BmatchingRandomGraph, &params, 17)
        .and_then(|spec| spec.build())
        .expect("benchmark instance")
}

/// Log-det of a random Gram kernel under a rank-`rank` uniform matroid.
pub fn logdet(n: usize, rank: usize) -> Instance {
    let params = GenParams {
        n,
        rank,
        shuffle: true,
        ..Default::default()
    };
    gen_instance(GenKind::LogdetRandomPsd, &params, 17)
        .and_then(|spec| spec.build())
        .expect("benchmark instance")
}
