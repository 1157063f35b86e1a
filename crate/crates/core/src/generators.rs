//! Tight-example and random instance generators.
//!
//! The tight constructions are essentially unweighted: every weight lies in a
//! band of width `eps` around 1 and only serves to fix the greedy order. Each
//! carries the exact weight of an optimal matching as its certificate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Instance, InstanceKind};
use crate::rng::{stream_rng, streams};

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::Domain("k must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_open_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("p = {p} must lie strictly between 0 and 1")))
    }
}

/// `eps` must keep every maximum matching at full cardinality.
fn check_eps(eps: f64, edges_in_opt: usize) -> Result<()> {
    if eps > 0.0 && eps * ((2 * edges_in_opt) as f64) < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "eps = {eps} must be positive and below 1/{}",
            2 * edges_in_opt
        )))
    }
}

/// `floor(x)` that tolerates `x` landing just below an integer.
fn floor_guarded(x: f64) -> usize {
    (x + 1e-9).floor() as usize
}

fn certified(inst: Instance, matching: &[usize]) -> Instance {
    let opt = matching.iter().map(|&e| inst.weight(e)).sum();
    inst.with_certificate(opt)
}

/// Left part sizes `(|L1|, |L2|, |L3|)` and `|R|`.
pub fn tight_vertex_sizes(k: usize, p: f64, l3: usize) -> ([usize; 3], usize) {
    (
        [k, floor_guarded(k as f64 * (1.0 - p) / p), l3],
        k + floor_guarded(k as f64 / p),
    )
}

fn tight_layered(k: usize, p: f64, eps: f64, l3: usize) -> Result<Instance> {
    let ([n1, n2, n3], nr) = tight_vertex_sizes(k, p, l3);
    check_eps(eps, nr)?;
    let nl = n1 + n2 + n3;
    let scale = (nl * nr + k + 1) as f64;
    let mut edges = Vec::new();
    let mut id_of = BTreeMap::new();
    for u in 0..nl {
        let reach = if u < n1 + n2 { nr } else { k };
        for j in 0..reach {
            let weight = if u < k && j == u {
                1.0 + eps * (nl * nr + k - u) as f64 / scale
            } else {
                let score = (nl - 1 - u) * nr + (nr - 1 - j);
                1.0 + eps * (score + 1) as f64 / scale
            };
            id_of.insert((u, j), edges.len());
            edges.push(Edge { a: u, b: j, weight });
        }
    }
    // L3 (its first k vertices) covers r_1..r_k, L1 ∪ L2 covers the rest
    let mut opt: Vec<usize> = (0..k).map(|j| id_of[&(n1 + n2 + j, j)]).collect();
    opt.extend((0..n1 + n2).map(|u| id_of[&(u, k + u)]));
    Ok(certified(Instance::bipartite(nl, nr, edges)?, &opt))
}

/// Random-order vertex-arrival tight example. Left vertices are `L1`, then
/// `L2`, then `L3`; right vertex `r_j` has index `j - 1`.
pub fn gen_tight_vertex(k: usize, p: f64, eps: f64) -> Result<Instance> {
    check_k(k)?;
    check_open_p(p)?;
    tight_layered(k, p, eps, k)
}

/// The vertex tight example with `|L3| = floor(k²/(1−p))`.
pub fn gen_tight_aosp(k: usize, p: f64, eps: f64) -> Result<Instance> {
    check_k(k)?;
    check_open_p(p)?;
    tight_layered(k, p, eps, floor_guarded((k * k) as f64 / (1.0 - p)))
}

/// `u_i` adjacent to `r_1..r_{k−i+1}`, heavier for smaller `i`, then smaller `j`.
pub fn gen_greedy_tight_vertex(k: usize, eps: f64) -> Result<Instance> {
    check_k(k)?;
    check_eps(eps, k)?;
    let scale = (k * k + 1) as f64;
    let mut edges = Vec::new();
    let mut opt = Vec::new();
    for i in 0..k {
        for j in 0..k - i {
            if j == k - 1 - i {
                opt.push(edges.len());
            }
            let score = (k - 1 - i) * k + (k - 1 - j);
            edges.push(Edge {
                a: i,
                b: j,
                weight: 1.0 + eps * (score + 1) as f64 / scale,
            });
        }
    }
    Ok(certified(Instance::bipartite(k, k, edges)?, &opt))
}

/// `U = u_1..u_k` adjacent to all of `r_1..r_{2k}` above weight 1, and
/// `Y = y_1..y_k` adjacent to `r_1..r_k` below weight 1. `U` takes left
/// indices `0..k`, `Y` the indices `k..2k`.
pub fn gen_trap_edge(k: usize, eps: f64) -> Result<Instance> {
    check_k(k)?;
    check_eps(eps, 2 * k)?;
    let mut edges = Vec::new();
    let mut opt = Vec::new();
    let upper = (2 * k * k + 1) as f64;
    for i in 0..k {
        for j in 0..2 * k {
            if j == k + i {
                opt.push(edges.len());
            }
            let score = (k - 1 - i) * 2 * k + (2 * k - 1 - j);
            edges.push(Edge {
                a: i,
                b: j,
                weight: 1.0 + eps * (score + 1) as f64 / upper,
            });
        }
    }
    let lower = (k * k + 1) as f64;
    for i in 0..k {
        for j in 0..k {
            if j == i {
                opt.push(edges.len());
            }
            edges.push(Edge {
                a: k + i,
                b: j,
                weight: 1.0 - eps * (1 + i * k + j) as f64 / lower,
            });
        }
    }
    Ok(certified(Instance::bipartite(2 * k, 2 * k, edges)?, &opt))
}

/// A hub `v` (left 0) with weight-`a` edges to every `r_i`, and `u_i` (left
/// `i`) with a single unit edge to `r_i`.
pub fn gen_optbased_counterexample(k: usize, a: f64) -> Result<Instance> {
    check_k(k)?;
    if !(a.is_finite() && a >= 1.0) {
        return Err(Error::Domain(format!("a = {a} must be at least 1")));
    }
    let mut edges: Vec<Edge> = (0..k).map(|j| Edge { a: 0, b: j, weight: a }).collect();
    edges.extend((0..k).map(|i| Edge {
        a: i + 1,
        b: i,
        weight: 1.0,
    }));
    let inst = Instance::bipartite(k + 1, k, edges)?;
    let opt: Vec<usize> = std::iter::once(0).chain(k + 1..2 * k).collect();
    Ok(certified(inst, &opt))
}

/// One edge of weight 1.
pub fn gen_single_edge() -> Instance {
    let inst = Instance::bipartite(
        1,
        1,
        vec![Edge {
            a: 0,
            b: 0,
            weight: 1.0,
        }],
    )
    .expect("valid");
    inst.with_certificate(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightLaw {
    /// Uniform on (0, 1].
    Uniform,
    /// Uniform on {1, ..., max}.
    Integer { max: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub kind: InstanceKind,
    pub law: WeightLaw,
    /// Probability that a vertex pair becomes an edge.
    pub density: f64,
    /// Keep a uniformly random subset of this size when exceeded.
    pub max_edges: Option<usize>,
}

pub fn gen_random<R: Rng + ?Sized>(spec: &RandomSpec, rng: &mut R) -> Result<Instance> {
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(Error::Domain(format!("density {} not in [0, 1]", spec.density)));
    }
    if let WeightLaw::Integer { max: 0 } = spec.law {
        return Err(Error::Domain("integer weight law needs max >= 1".into()));
    }
    let pairs: Vec<(usize, usize)> = match spec.kind {
        InstanceKind::Bipartite { left, right } => (0..left).flat_map(|a| (0..right).map(move |b| (a, b))).collect(),
        InstanceKind::General { vertices } => (0..vertices)
            .flat_map(|a| (a + 1..vertices).map(move |b| (a, b)))
            .collect(),
    };
    let mut chosen: Vec<(usize, usize)> = pairs.into_iter().filter(|_| rng.random_bool(spec.density)).collect();
    if let Some(cap) = spec.max_edges {
        if chosen.len() > cap {
            chosen.shuffle(rng);
            chosen.truncate(cap);
            chosen.sort_unstable();
        }
    }
    let edges = chosen
        .into_iter()
        .map(|(a, b)| {
            let weight = match spec.law {
                WeightLaw::Uniform => 1.0 - rng.random::<f64>(),
                WeightLaw::Integer { max } => rng.random_range(1..=max) as f64,
            };
            Edge { a, b, weight }
        })
        .collect();
    Instance::new(spec.kind, edges)
}

/// A generator invocation such as `tight-vertex k=50 p=0.4142 eps=1e-6`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    TightVertex { k: usize, p: f64, eps: f64 },
    TightAosp { k: usize, p: f64, eps: f64 },
    GreedyTight { k: usize, eps: f64 },
    TrapEdge { k: usize, eps: f64 },
    OptBased { k: usize, a: f64 },
    SingleEdge,
    Random { spec: RandomSpec, seed: u64 },
}

pub const DEFAULT_EPS: f64 = 1e-6;

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Instance> {
        match *self {
            GeneratorSpec::TightVertex { k, p, eps } => gen_tight_vertex(k, p, eps),
            GeneratorSpec::TightAosp { k, p, eps } => gen_tight_aosp(k, p, eps),
            GeneratorSpec::GreedyTight { k, eps } => gen_greedy_tight_vertex(k, eps),
            GeneratorSpec::TrapEdge { k, eps } => gen_trap_edge(k, eps),
            GeneratorSpec::OptBased { k, a } => gen_optbased_counterexample(k, a),
            GeneratorSpec::SingleEdge => Ok(gen_single_edge()),
            GeneratorSpec::Random { spec, seed } => gen_random(&spec, &mut stream_rng(seed, streams::GENERATOR, 0)),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::TightVertex { k, p, eps } => write!(f, "tight-vertex k={k} p={p} eps={eps:e}"),
            GeneratorSpec::TightAosp { k, p, eps } => write!(f, "tight-aosp k={k} p={p} eps={eps:e}"),
            GeneratorSpec::GreedyTight { k, eps } => write!(f, "greedy-tight k={k} eps={eps:e}"),
            GeneratorSpec::TrapEdge { k, eps } => write!(f, "trap-edge k={k} eps={eps:e}"),
            GeneratorSpec::OptBased { k, a } => write!(f, "optbased k={k} a={a}"),
            GeneratorSpec::SingleEdge => f.write_str("single-edge"),
            GeneratorSpec::Random { spec, seed } => {
                match spec.kind {
                    InstanceKind::Bipartite { left, right } => write!(f, "random left={left} right={right}")?,
                    InstanceKind::General { vertices } => write!(f, "random vertices={vertices}")?,
                }
                write!(f, " density={}", spec.density)?;
                if let WeightLaw::Integer { max } = spec.law {
                    write!(f, " int={max}")?;
                }
                if let Some(cap) = spec.max_edges {
                    write!(f, " max-edges={cap}")?;
                }
                write!(f, " seed={seed}")
            }
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut words = text.split_whitespace();
        let name = words
            .next()
            .ok_or_else(|| Error::Domain("empty generator spec".into()))?;
        let mut params = BTreeMap::new();
        for word in words {
            let (key, value) = word
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("expected key=value, got `{word}`")))?;
            params.insert(key.to_string(), value.to_string());
        }
        let mut take = |key: &str| params.remove(key);
        fn num<T: FromStr>(key: &str, value: Option<String>) -> Result<Option<T>> {
            value
                .map(|v| {
                    v.parse()
                        .map_err(|_| Error::Domain(format!("bad value `{v}` for {key}")))
                })
                .transpose()
        }
        fn need<T>(key: &str, value: Option<T>) -> Result<T> {
            value.ok_or_else(|| Error::Domain(format!("missing parameter {key}")))
        }
        let spec = match name {
            "tight-vertex" | "tight-aosp" => {
                let k = need("k", num("k", take("k"))?)?;
                let p = need("p", num("p", take("p"))?)?;
                let eps = num("eps", take("eps"))?.unwrap_or(DEFAULT_EPS);
                if name == "tight-vertex" {
                    GeneratorSpec::TightVertex { k, p, eps }
                } else {
                    GeneratorSpec::TightAosp { k, p, eps }
                }
            }
            "greedy-tight" | "trap-edge" => {
                let k = need("k", num("k", take("k"))?)?;
                let eps = num("eps", take("eps"))?.unwrap_or(DEFAULT_EPS);
                if name == "greedy-tight" {
                    GeneratorSpec::GreedyTight { k, eps }
                } else {
                    GeneratorSpec::TrapEdge { k, eps }
                }
            }
            "optbased" => GeneratorSpec::OptBased {
                k: need("k", num("k", take("k"))?)?,
                a: need("a", num("a", take("a"))?)?,
            },
            "single-edge" => GeneratorSpec::SingleEdge,
            "random" => {
                let kind = match num::<usize>("vertices", take("vertices"))? {
                    Some(vertices) => InstanceKind::General { vertices },
                    None => InstanceKind::Bipartite {
                        left: need("left", num("left", take("left"))?)?,
                        right: need("right", num("right", take("right"))?)?,
                    },
                };
                let law = match num("int", take("int"))? {
                    Some(max) => WeightLaw::Integer { max },
                    None => WeightLaw::Uniform,
                };
                GeneratorSpec::Random {
                    spec: RandomSpec {
                        kind,
                        law,
                        density: num("density", take("density"))?.unwrap_or(0.5),
                        max_edges: num("max-edges", take("max-edges"))?,
                    },
                    seed: num("seed", take("seed"))?.unwrap_or(0),
                }
            }
            other => return Err(Error::Domain(format!("unknown generator `{other}`"))),
        };
        if let Some(key) = params.keys().next() {
            return Err(Error::Domain(format!("unknown parameter `{key}` for {name}")));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_instance, serialize_instance};
    use crate::mask::SubsetMask;
    use crate::offline::{greedy_matching, max_weight_matching};

    fn left_part(inst: &Instance, k: usize, n2: usize, e: usize) -> usize {
        match inst.left_of(e) {
            u if u < k => 1,
            u if u < k + n2 => 2,
            _ => 3,
        }
    }

    #[test]
    fn tight_vertex_k1() {
        let inst = gen_tight_vertex(1, 0.5, 1e-6).unwrap();
        assert_eq!(tight_vertex_sizes(1, 0.5, 1), ([1, 1, 1], 3));
        assert_eq!(inst.sides().unwrap(), (3, 3));
        let top = inst.order().as_slice()[0];
        assert_eq!(inst.endpoints(top), (0, 3));
        assert!(inst.weight(top) > inst.weight(inst.order().as_slice()[1]));
        assert!(inst.edges().iter().all(|e| e.weight > 1.0 && e.weight <= 1.0 + 1e-6));
        max_weight_matching(&inst).unwrap();
    }

    #[test]
    fn tight_vertex_order_invariants() {
        for (k, p) in [(3, 0.5), (4, 0.4142), (2, 0.3), (5, 0.75)] {
            let inst = gen_tight_vertex(k, p, 1e-6).unwrap();
            let ([_, n2, _], nr) = tight_vertex_sizes(k, p, k);
            assert_eq!(inst.sides().unwrap().1, nr);
            let diag = |e: usize| inst.left_of(e) < k && inst.right_of(e) - inst.sides().unwrap().0 == inst.left_of(e);
            let key = |e: usize| (left_part(&inst, k, n2, e), inst.left_of(e), inst.right_of(e));
            let order = inst.order().as_slice();
            assert!(order[..k].iter().all(|&e| diag(e)));
            for w in order[k..].windows(2) {
                assert!(key(w[0]) < key(w[1]));
                assert!(inst.weight(w[0]) > inst.weight(w[1]));
            }
            for e in 0..inst.edge_count() {
                if left_part(&inst, k, n2, e) == 3 {
                    assert!(inst.right_of(e) < inst.sides().unwrap().0 + k);
                }
            }
            max_weight_matching(&inst).unwrap();
        }
    }

    #[test]
    fn tight_aosp_sizes_and_roundtrip() {
        let inst = gen_tight_aosp(2, 0.5, 1e-6).unwrap();
        assert_eq!(inst.sides().unwrap().0, 2 + 2 + 8);
        max_weight_matching(&inst).unwrap();
        let small = gen_tight_aosp(1, 0.5, 1e-6).unwrap();
        let back = parse_instance(&serialize_instance(&small)).unwrap();
        assert_eq!(back, small);
    }

    #[test]
    fn greedy_tight_k2() {
        let inst = gen_greedy_tight_vertex(2, 1e-6).unwrap();
        let pairs: Vec<(usize, usize)> = inst.edges().iter().map(|e| (e.a, e.b)).collect();
        assert_eq!(pairs, vec![(0, 0), (0, 1), (1, 0)]);
        assert!(inst.weight(0) > inst.weight(1) && inst.weight(1) > inst.weight(2));
        let opt = max_weight_matching(&inst).unwrap();
        assert_eq!(opt.edges(), &[1, 2]);
        let g = greedy_matching(&inst, &SubsetMask::full(3));
        assert_eq!(g.edges(), &[0]);
        assert!((g.weight() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn trap_edge_structure() {
        let inst = gen_trap_edge(1, 1e-6).unwrap();
        let heavy = inst.edges().iter().filter(|e| e.weight > 1.0).count();
        assert_eq!(heavy, 2);
        assert!(inst.edges()[2].weight < 1.0 && inst.edges()[2].a == 1);
        let inst = gen_trap_edge(4, 1e-6).unwrap();
        let min_u = inst
            .edges()
            .iter()
            .filter(|e| e.a < 4)
            .map(|e| e.weight)
            .fold(f64::INFINITY, f64::min);
        let max_y = inst
            .edges()
            .iter()
            .filter(|e| e.a >= 4)
            .map(|e| e.weight)
            .fold(0.0, f64::max);
        assert!(min_u > 1.0 && 1.0 > max_y && max_y > 1.0 - 1e-6);
        assert!((inst.opt_certificate().unwrap() - 8.0).abs() < 1e-5);
        max_weight_matching(&inst).unwrap();
    }

    #[test]
    fn optbased_certificates() {
        let inst = gen_optbased_counterexample(2, 100.0).unwrap();
        assert_eq!(inst.opt_certificate(), Some(101.0));
        assert_eq!(max_weight_matching(&inst).unwrap().weight(), 101.0);
        assert_eq!(
            gen_optbased_counterexample(1, 7.0).unwrap().opt_certificate(),
            Some(7.0)
        );
        assert!(gen_optbased_counterexample(0, 7.0).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(gen_tight_vertex(0, 0.5, 1e-6).is_err());
        assert!(gen_tight_vertex(2, 1.0, 1e-6).is_err());
        assert!(gen_tight_vertex(2, 0.5, 0.5).is_err());
        assert!(gen_greedy_tight_vertex(3, -1.0).is_err());
    }

    #[test]
    fn random_density_extremes_and_determinism() {
        let spec = |density| RandomSpec {
            kind: InstanceKind::Bipartite { left: 2, right: 2 },
            law: WeightLaw::Uniform,
            density,
            max_edges: None,
        };
        assert_eq!(
            gen_random(&spec(0.0), &mut stream_rng(1, 0, 0)).unwrap().edge_count(),
            0
        );
        assert_eq!(
            gen_random(&spec(1.0), &mut stream_rng(1, 0, 0)).unwrap().edge_count(),
            4
        );
        let a = GeneratorSpec::from_str("random left=5 right=5 density=0.6 seed=3").unwrap();
        assert_eq!(
            serialize_instance(&a.generate().unwrap()),
            serialize_instance(&a.generate().unwrap())
        );
        let capped = RandomSpec {
            max_edges: Some(3),
            ..spec(1.0)
        };
        assert_eq!(gen_random(&capped, &mut stream_rng(1, 0, 0)).unwrap().edge_count(), 3);
    }

    #[test]
    fn spec_strings() {
        let s: GeneratorSpec = "tight-vertex k=50 p=0.4142 eps=1e-6".parse().unwrap();
        assert_eq!(
            s,
            GeneratorSpec::TightVertex {
                k: 50,
                p: 0.4142,
                eps: 1e-6
            }
        );
        assert_eq!(s.to_string().parse::<GeneratorSpec>().unwrap(), s);
        let r: GeneratorSpec = "random vertices=6 density=0.5 int=9 max-edges=12 seed=4"
            .parse()
            .unwrap();
        assert_eq!(r.to_string().parse::<GeneratorSpec>().unwrap(), r);
        assert!("tight-vertex k=5".parse::<GeneratorSpec>().is_err());
        assert!("tight-vertex k=5 p=0.5 q=1".parse::<GeneratorSpec>().is_err());
        assert!("nope".parse::<GeneratorSpec>().is_err());
    }
}
