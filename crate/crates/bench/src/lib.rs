//! Fixtures shared by the benchmarks.

use matchlab_core::rng::stream_rng;
use matchlab_core::{Edge, Instance};
use rand::Rng;

/// Complete bipartite `n × n` graph with uniform (0, 1] weights.
pub fn dense_bipartite(n: usize, seed: u64) -> Instance {
    let mut rng = stream_rng(seed, 0, 0);
    let edges = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| Edge {
            a,
            b,
            weight: 1.0 - rng.random::<f64>(),
        })
        .collect();
    Instance::bipartite(n, n, edges).expect("valid instance")
}

/// General graph where every pair is an edge with probability `density`.
pub fn sparse_general(n: usize, density: f64, seed: u64) -> Instance {
    let mut rng = stream_rng(seed, 0, 0);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(density) {
                edges.push(Edge {
                    a,
                    b,
                    weight: 1.0 - rng.random::<f64>(),
                });
            }
        }
    }
    Instance::general(n, edges).expect("valid instance")
}
