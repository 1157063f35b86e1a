#![allow(dead_code)]

use matchlab_core::generators::{GeneratorSpec, RandomSpec, WeightLaw};
use matchlab_core::{Instance, InstanceKind};

/// Seeded random bipartite graphs with at most 8 vertices per side and 16 edges.
pub fn bipartite_corpus() -> Vec<Instance> {
    (0..50u64)
        .map(|seed| {
            let left = 1 + (seed % 8) as usize;
            let right = 1 + ((seed * 5 + 3) % 8) as usize;
            random(InstanceKind::Bipartite { left, right }, 0.6, 16, seed)
        })
        .collect()
}

/// Seeded random general graphs with at most 8 vertices and 12 edges.
pub fn general_corpus() -> Vec<Instance> {
    (0..50u64)
        .map(|seed| {
            let vertices = 2 + (seed % 7) as usize;
            random(InstanceKind::General { vertices }, 0.5, 12, 1000 + seed)
        })
        .collect()
}

pub fn random(kind: InstanceKind, density: f64, max_edges: usize, seed: u64) -> Instance {
    GeneratorSpec::Random {
        spec: RandomSpec {
            kind,
            law: WeightLaw::Uniform,
            density,
            max_edges: Some(max_edges),
        },
        seed,
    }
    .generate()
    .unwrap()
}
