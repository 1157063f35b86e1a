//! Online models: sampling, adversarial arrival orders, the AOSp history
//! split, batched environments, and the reduction from order-oblivious
//! algorithms to the two-faced model.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{check_probability, Error, Result};
use crate::graph::Instance;
use crate::mask::SubsetMask;
use crate::offline::{greedy_on_vertex_subset, max_weight_matching_with_limit, DEFAULT_EXACT_LIMIT};
use crate::online::{compute_candidates_edge, compute_candidates_vertex, ArrivalOrder, CandidateMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arrival {
    Vertex,
    Edge,
}

impl fmt::Display for Arrival {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arrival::Vertex => "vertex",
            Arrival::Edge => "edge",
        })
    }
}

impl std::str::FromStr for Arrival {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(Arrival::Vertex),
            "edge" => Ok(Arrival::Edge),
            other => Err(Error::Domain(format!("unknown arrival `{other}`"))),
        }
    }
}

/// Each item joins the sample independently with probability `p`.
pub fn draw_sample<R: Rng + ?Sized>(item_count: usize, p: f64, rng: &mut R) -> Result<SubsetMask> {
    check_probability(p)?;
    let mut mask = SubsetMask::empty(item_count);
    for i in 0..item_count {
        if rng.random_bool(p) {
            mask.insert(i);
        }
    }
    Ok(mask)
}

/// A sample together with the parameters that reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDraw {
    pub mask: SubsetMask,
    pub p: f64,
    pub stream: u64,
}

impl SampleDraw {
    pub fn draw(item_count: usize, p: f64, seed: u64, stream: u64, trial: u64) -> Result<Self> {
        let mut rng = crate::rng::stream_rng(seed, stream, trial);
        Ok(SampleDraw {
            mask: draw_sample(item_count, p, &mut rng)?,
            p,
            stream,
        })
    }
}

/// Online vertices with a candidate, lightest candidate first, followed by the
/// remaining online vertices by id. Since every vertex holds at most one
/// candidate, each right vertex sees its lightest candidate first.
pub fn worst_order_vertex(inst: &Instance, online: &SubsetMask, candidates: &CandidateMap) -> ArrivalOrder {
    let order = inst.order();
    let mut with: Vec<usize> = online.iter().filter(|&u| candidates[u].is_some()).collect();
    with.sort_by_key(|&u| std::cmp::Reverse(order.rank(candidates[u].unwrap())));
    with.extend(online.iter().filter(|&u| candidates[u].is_none()));
    with
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgePolicy {
    /// Lightest edge first.
    Ascending,
    /// Heaviest edge first.
    Descending,
    Random,
    /// An order minimizing the realized matching weight.
    BruteWorst,
}

/// Largest candidate set accepted by [`EdgePolicy::BruteWorst`].
pub const BRUTE_WORST_LIMIT: usize = 24;

pub fn order_edge<R: Rng + ?Sized>(
    inst: &Instance,
    online: &SubsetMask,
    candidates: &[bool],
    policy: EdgePolicy,
    rng: &mut R,
) -> Result<ArrivalOrder> {
    let order = inst.order();
    let mut items: Vec<usize> = online.iter().collect();
    match policy {
        EdgePolicy::Ascending => items.sort_by_key(|&e| std::cmp::Reverse(order.rank(e))),
        EdgePolicy::Descending => items.sort_by_key(|&e| order.rank(e)),
        EdgePolicy::Random => items.shuffle(rng),
        EdgePolicy::BruteWorst => {
            let cands: Vec<usize> = items.iter().copied().filter(|&e| candidates[e]).collect();
            if cands.len() > BRUTE_WORST_LIMIT {
                return Err(Error::Capacity {
                    what: "brute_worst candidate edges",
                    size: cands.len(),
                    limit: BRUTE_WORST_LIMIT,
                });
            }
            // The output on any order is a maximal matching of the candidate
            // edges, and every such matching is realized by sending its own
            // edges first.
            let first = min_weight_maximal_matching(inst, &cands);
            let mut head = first.clone();
            head.extend(items.iter().copied().filter(|e| !first.contains(e)));
            items = head;
        }
    }
    Ok(items)
}

fn min_weight_maximal_matching(inst: &Instance, edges: &[usize]) -> Vec<usize> {
    struct Search<'a> {
        inst: &'a Instance,
        edges: &'a [usize],
        used: Vec<bool>,
        current: Vec<usize>,
        weight: f64,
        best: Option<(f64, Vec<usize>)>,
    }
    impl Search<'_> {
        fn free(&self, e: usize) -> bool {
            let (x, y) = self.inst.endpoints(e);
            !self.used[x] && !self.used[y]
        }
        fn go(&mut self) {
            if matches!(&self.best, Some((w, _)) if self.weight >= *w) {
                return;
            }
            let Some(&open) = self.edges.iter().find(|&&e| self.free(e)) else {
                self.best = Some((self.weight, self.current.clone()));
                return;
            };
            // some chosen edge must cover an endpoint of `open`
            let (a, b) = self.inst.endpoints(open);
            let branches: Vec<usize> = self
                .edges
                .iter()
                .copied()
                .filter(|&f| self.free(f))
                .filter(|&f| {
                    let (x, y) = self.inst.endpoints(f);
                    x == a || x == b || y == a || y == b
                })
                .collect();
            for f in branches {
                let (x, y) = self.inst.endpoints(f);
                self.used[x] = true;
                self.used[y] = true;
                self.current.push(f);
                self.weight += self.inst.weight(f);
                self.go();
                self.weight -= self.inst.weight(f);
                self.current.pop();
                self.used[x] = false;
                self.used[y] = false;
            }
        }
    }
    let mut search = Search {
        inst,
        edges,
        used: vec![false; inst.vertex_count()],
        current: Vec::new(),
        weight: 0.0,
        best: None,
    };
    search.go();
    let mut chosen = search.best.map(|(_, m)| m).unwrap_or_default();
    chosen.sort_unstable();
    chosen
}

/// Probability that a history item is kept as the algorithm's sample.
pub fn aosp_keep_probability(p: f64, arrival: Arrival) -> f64 {
    match arrival {
        Arrival::Vertex if p > 0.5 => (1.0 - p) / p,
        Arrival::Edge if p > std::f64::consts::FRAC_1_SQRT_2 => (1.0 + std::f64::consts::SQRT_2) * (1.0 - p) / p,
        _ => 1.0,
    }
}

/// Exact `(Pr[u ∈ L′], Pr[u ∈ O])` for vertex arrivals at a rational `p`.
pub fn aosp_membership_exact(p: Ratio<i64>) -> (Ratio<i64>, Ratio<i64>) {
    let one = Ratio::from_integer(1);
    let half = Ratio::new(1, 2);
    let keep = if p > half { (one - p) / p } else { one };
    (p * keep, one - p)
}

/// History `H`, the algorithm's sample `L′ ⊆ H`, and the online set `O`.
#[derive(Debug, Clone, PartialEq)]
pub struct AospDraw {
    pub history: SubsetMask,
    pub sample: SubsetMask,
    pub online: SubsetMask,
}

pub fn aosp_prepare<R: Rng + ?Sized>(inst: &Instance, p: f64, rng: &mut R, arrival: Arrival) -> Result<AospDraw> {
    check_probability(p)?;
    let items = match arrival {
        Arrival::Vertex => inst.sides()?.0,
        Arrival::Edge => inst.edge_count(),
    };
    let history = draw_sample(items, p, rng)?;
    let keep = aosp_keep_probability(p, arrival);
    let sample = if keep >= 1.0 {
        history.clone()
    } else {
        SubsetMask::from_indices(items, history.iter().filter(|_| rng.random_bool(keep)))
    };
    let online = history.complement();
    Ok(AospDraw {
        history,
        sample,
        online,
    })
}

/// Feasibility constraint of a batched environment.
pub trait Feasibility: Send + Sync {
    fn is_feasible(&self, elements: &[usize]) -> bool;

    /// Maximum total weight of a feasible set. The default enumerates subsets.
    fn max_weight(&self, weights: &[f64]) -> Result<f64> {
        let n = weights.len();
        if n > 20 {
            return Err(Error::Capacity {
                what: "feasible-set enumeration",
                size: n,
                limit: 20,
            });
        }
        let mut best = 0.0f64;
        for bits in 0u64..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&i| bits >> i & 1 == 1).collect();
            if self.is_feasible(&set) {
                best = best.max(set.iter().map(|&i| weights[i]).sum());
            }
        }
        Ok(best)
    }
}

/// Elements are edge ids; a set is feasible iff it is a matching.
#[derive(Debug, Clone)]
pub struct MatchingFeasibility {
    inst: Instance,
}

impl Feasibility for MatchingFeasibility {
    fn is_feasible(&self, elements: &[usize]) -> bool {
        crate::graph::Matching::new(&self.inst, elements.iter().copied()).is_ok()
    }

    fn max_weight(&self, weights: &[f64]) -> Result<f64> {
        let inst = self.inst.with_weights(weights)?;
        Ok(max_weight_matching_with_limit(&inst, DEFAULT_EXACT_LIMIT)?.weight())
    }
}

#[derive(Clone)]
pub struct BatchedEnvironment {
    universe: usize,
    partition: Vec<Vec<usize>>,
    feasibility: Arc<dyn Feasibility>,
}

impl fmt::Debug for BatchedEnvironment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BatchedEnvironment")
            .field("universe", &self.universe)
            .field("partition", &self.partition)
            .finish_non_exhaustive()
    }
}

impl BatchedEnvironment {
    pub fn new(universe: usize, partition: Vec<Vec<usize>>, feasibility: Arc<dyn Feasibility>) -> Result<Self> {
        let mut seen = vec![false; universe];
        for item in &partition {
            for &x in item {
                if x >= universe || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidInstance(format!(
                        "element {x} is not partitioned exactly once"
                    )));
                }
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInstance(format!("element {x} belongs to no item")));
        }
        Ok(BatchedEnvironment {
            universe,
            partition,
            feasibility,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn items(&self) -> &[Vec<usize>] {
        &self.partition
    }

    pub fn item_count(&self) -> usize {
        self.partition.len()
    }

    pub fn is_feasible(&self, elements: &[usize]) -> bool {
        self.feasibility.is_feasible(elements)
    }

    pub fn max_weight(&self, weights: &[f64]) -> Result<f64> {
        self.feasibility.max_weight(weights)
    }
}

/// Items are left-vertex edge bundles (vertex arrivals) or single edges.
pub fn matching_environment(inst: &Instance, arrival: Arrival) -> Result<BatchedEnvironment> {
    let partition = match arrival {
        Arrival::Vertex => {
            let (left, _) = inst.sides()?;
            let mut items = vec![Vec::new(); left];
            for e in 0..inst.edge_count() {
                items[inst.left_of(e)].push(e);
            }
            items
        }
        Arrival::Edge => (0..inst.edge_count()).map(|e| vec![e]).collect(),
    };
    let feasibility = Arc::new(MatchingFeasibility { inst: inst.clone() });
    BatchedEnvironment::new(inst.edge_count(), partition, feasibility)
}

/// Per-item pairs of weight vectors; face 0 and face 1.
#[derive(Debug, Clone)]
pub struct TwoFacedInstance {
    env: BatchedEnvironment,
    faces: Vec<[Vec<f64>; 2]>,
}

impl TwoFacedInstance {
    pub fn new(env: BatchedEnvironment, faces: Vec<[Vec<f64>; 2]>) -> Result<Self> {
        if faces.len() != env.item_count() {
            return Err(Error::InvalidInstance(format!(
                "{} face pairs for {} items",
                faces.len(),
                env.item_count()
            )));
        }
        for (i, pair) in faces.iter().enumerate() {
            for face in pair {
                if face.len() != env.items()[i].len() {
                    return Err(Error::InvalidInstance(format!("face length mismatch on item {i}")));
                }
                if face.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(Error::InvalidInstance(format!(
                        "negative or non-finite face weight on item {i}"
                    )));
                }
            }
        }
        Ok(TwoFacedInstance { env, faces })
    }

    /// Two-faced instance whose faces are the weights of two instances on the
    /// same topology.
    pub fn from_instances(first: &Instance, second: &Instance, arrival: Arrival) -> Result<Self> {
        let same = first.kind() == second.kind()
            && first.edge_count() == second.edge_count()
            && (0..first.edge_count()).all(|e| first.endpoints(e) == second.endpoints(e));
        if !same {
            return Err(Error::InvalidInstance("face instances differ in topology".into()));
        }
        let env = matching_environment(first, arrival)?;
        let faces = env
            .items()
            .iter()
            .map(|item| {
                [
                    item.iter().map(|&e| first.weight(e)).collect(),
                    item.iter().map(|&e| second.weight(e)).collect(),
                ]
            })
            .collect();
        Self::new(env, faces)
    }

    pub fn env(&self) -> &BatchedEnvironment {
        &self.env
    }

    pub fn faces(&self) -> &[[Vec<f64>; 2]] {
        &self.faces
    }

    /// Universe weight vector where item `i` shows face `choice(i)`.
    pub fn element_weights(&self, choice: impl Fn(usize) -> usize) -> Vec<f64> {
        let mut w = vec![0.0; self.env.universe()];
        for (i, item) in self.env.items().iter().enumerate() {
            for (pos, &x) in item.iter().enumerate() {
                w[x] = self.faces[i][choice(i)][pos];
            }
        }
        w
    }
}

/// Draw both faces of every item independently from its distribution.
pub fn iid_pair_wrapper<R, F>(env: BatchedEnvironment, mut sampler: F, rng: &mut R) -> Result<TwoFacedInstance>
where
    R: Rng + ?Sized,
    F: FnMut(usize, &mut R) -> Vec<f64>,
{
    let faces = (0..env.item_count())
        .map(|i| {
            let first = sampler(i, rng);
            let second = sampler(i, rng);
            [first, second]
        })
        .collect();
    TwoFacedInstance::new(env, faces)
}

/// An algorithm for the random-order batched model with a sampling phase.
pub trait OrderObliviousAlgorithm {
    /// Distribution of the sampling-phase length over `0..=items`.
    fn sample_length_pmf(&self, items: usize) -> Vec<f64>;
    /// Called once with the sampled items and their weights.
    fn observe_sample(&mut self, sample: &[(usize, Vec<f64>)]);
    /// An online item arrives; returns the accepted elements.
    fn on_arrival(&mut self, item: usize, weights: &[f64]) -> Vec<usize>;
}

pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    let mut coef = 1.0f64;
    (0..=n)
        .map(|k| {
            if k > 0 {
                coef = coef * (n - k + 1) as f64 / k as f64;
            }
            coef * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
        })
        .collect()
}

/// The greedy-based vertex-arrival algorithm behind the batched interface.
/// Items are left vertices; an item's elements are its edges by id.
#[derive(Debug, Clone)]
pub struct GreedyVertexAlgorithm {
    inst: Instance,
    p: f64,
    weights: Vec<f64>,
    sampled: SubsetMask,
    taken: Vec<bool>,
}

impl GreedyVertexAlgorithm {
    pub fn new(inst: &Instance, p: f64) -> Result<Self> {
        check_probability(p)?;
        let (left, _) = inst.sides()?;
        Ok(GreedyVertexAlgorithm {
            inst: inst.clone(),
            p,
            weights: vec![0.0; inst.edge_count()],
            sampled: SubsetMask::empty(left),
            taken: vec![false; inst.vertex_count()],
        })
    }

    fn item_edges(&self, u: usize) -> Vec<usize> {
        let mut edges = self.inst.incident(u).to_vec();
        edges.sort_unstable();
        edges
    }
}

impl OrderObliviousAlgorithm for GreedyVertexAlgorithm {
    fn sample_length_pmf(&self, items: usize) -> Vec<f64> {
        binomial_pmf(items, self.p)
    }

    fn observe_sample(&mut self, sample: &[(usize, Vec<f64>)]) {
        for (u, w) in sample {
            self.sampled.insert(*u);
            for (&e, &x) in self.item_edges(*u).iter().zip(w) {
                self.weights[e] = x;
            }
        }
    }

    fn on_arrival(&mut self, u: usize, weights: &[f64]) -> Vec<usize> {
        let mut w = self.weights.clone();
        for (&e, &x) in self.item_edges(u).iter().zip(weights) {
            w[e] = x;
        }
        let view = self.inst.with_weights(&w).expect("face weights validated");
        let greedy = greedy_on_vertex_subset(&view, &self.sampled.with(u)).expect("bipartite");
        match greedy.edges().iter().copied().find(|&e| view.left_of(e) == u) {
            Some(e) if !self.taken[view.right_of(e)] => {
                self.taken[view.right_of(e)] = true;
                vec![e]
            }
            _ => Vec::new(),
        }
    }
}

/// The greedy-based edge-arrival algorithm; items are single edges.
#[derive(Debug, Clone)]
pub struct GreedyEdgeAlgorithm {
    inst: Instance,
    p: f64,
    weights: Vec<f64>,
    sampled: SubsetMask,
    taken: Vec<bool>,
}

impl GreedyEdgeAlgorithm {
    pub fn new(inst: &Instance, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(GreedyEdgeAlgorithm {
            inst: inst.clone(),
            p,
            weights: vec![0.0; inst.edge_count()],
            sampled: SubsetMask::empty(inst.edge_count()),
            taken: vec![false; inst.vertex_count()],
        })
    }
}

impl OrderObliviousAlgorithm for GreedyEdgeAlgorithm {
    fn sample_length_pmf(&self, items: usize) -> Vec<f64> {
        binomial_pmf(items, self.p)
    }

    fn observe_sample(&mut self, sample: &[(usize, Vec<f64>)]) {
        for (e, w) in sample {
            self.sampled.insert(*e);
            self.weights[*e] = w[0];
        }
    }

    fn on_arrival(&mut self, e: usize, weights: &[f64]) -> Vec<usize> {
        let mut w = self.weights.clone();
        w[e] = weights[0];
        let view = self.inst.with_weights(&w).expect("face weights validated");
        let candidate = compute_candidates_edge(&view, &self.sampled)[e];
        let (x, y) = view.endpoints(e);
        if candidate && !self.taken[x] && !self.taken[y] {
            self.taken[x] = true;
            self.taken[y] = true;
            vec![e]
        } else {
            Vec::new()
        }
    }
}

/// What the adversary sees when fixing the online order: both weight
/// vectors and the items the algorithm consumed as its sample.
#[derive(Debug, Clone, Copy)]
pub struct ReductionView<'a> {
    pub sample_weights: &'a [Vec<f64>],
    pub online_weights: &'a [Vec<f64>],
    pub sampled: &'a [usize],
}

/// Presents all items in id order.
pub fn id_order_adversary(view: &ReductionView<'_>) -> Vec<usize> {
    (0..view.online_weights.len()).collect()
}

/// Vertex-arrival adversary that knows the algorithm's sample: online
/// vertices with a greedy candidate arrive lightest candidate first.
pub fn worst_vertex_adversary(inst: &Instance) -> impl Fn(&ReductionView<'_>) -> Vec<usize> + '_ {
    move |view| {
        let (left, _) = inst.sides().expect("vertex arrivals need a bipartite instance");
        let mut order: Vec<usize> = Vec::with_capacity(left);
        let sampled = SubsetMask::from_indices(left, view.sampled.iter().copied());
        let mut keyed: Vec<(f64, usize, usize)> = Vec::new();
        let mut without = Vec::new();
        for u in 0..left {
            if sampled.contains(u) {
                continue;
            }
            let mut w = vec![0.0; inst.edge_count()];
            for s in sampled.iter() {
                fill_item(inst, s, &view.sample_weights[s], &mut w);
            }
            fill_item(inst, u, &view.online_weights[u], &mut w);
            let g = inst.with_weights(&w).expect("valid weights");
            let cands = compute_candidates_vertex(&g, &sampled).expect("bipartite");
            match cands[u] {
                Some(e) => keyed.push((g.weight(e), e, u)),
                None => without.push(u),
            }
        }
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        order.extend(keyed.into_iter().map(|(_, _, u)| u));
        order.extend(without);
        order.extend(view.sampled.iter().copied());
        order
    }
}

fn fill_item(inst: &Instance, u: usize, face: &[f64], w: &mut [f64]) {
    let mut edges = inst.incident(u).to_vec();
    edges.sort_unstable();
    for (&e, &x) in edges.iter().zip(face) {
        w[e] = x;
    }
}

/// One run of the reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionOutcome {
    pub accepted: Vec<usize>,
    pub alg_weight: f64,
    /// OPT on the online faces of this realization.
    pub online_opt: f64,
}

fn run_once<A: OrderObliviousAlgorithm>(
    tf: &TwoFacedInstance,
    alg: &mut A,
    coins: &[usize],
    perm: &[usize],
    k: usize,
    adversary: &dyn Fn(&ReductionView<'_>) -> Vec<usize>,
) -> Result<(Vec<usize>, f64)> {
    let n = tf.env.item_count();
    let sample_w: Vec<Vec<f64>> = (0..n).map(|i| tf.faces[i][coins[i]].clone()).collect();
    let online_w: Vec<Vec<f64>> = (0..n).map(|i| tf.faces[i][1 - coins[i]].clone()).collect();
    let sampled = &perm[..k];
    alg.observe_sample(&sampled.iter().map(|&i| (i, sample_w[i].clone())).collect::<Vec<_>>());
    let order = adversary(&ReductionView {
        sample_weights: &sample_w,
        online_weights: &online_w,
        sampled,
    });
    let mut check = order.clone();
    check.sort_unstable();
    if check != (0..n).collect::<Vec<_>>() {
        return Err(Error::Protocol(
            "adversary order is not a permutation of the items".into(),
        ));
    }
    let mut is_sampled = vec![false; n];
    for &i in sampled {
        is_sampled[i] = true;
    }
    let online_elem = tf.element_weights(|i| 1 - coins[i]);
    let mut accepted = Vec::new();
    for i in order {
        if is_sampled[i] {
            continue;
        }
        let got = alg.on_arrival(i, &online_w[i]);
        if got.iter().any(|x| !tf.env.items()[i].contains(x)) {
            return Err(Error::Protocol(format!("accepted an element outside item {i}")));
        }
        accepted.extend(got);
    }
    accepted.sort_unstable();
    if !tf.env.is_feasible(&accepted) {
        return Err(Error::Protocol("accepted set is infeasible".into()));
    }
    let weight = accepted.iter().map(|&x| online_elem[x]).sum();
    Ok((accepted, weight))
}

fn draw_index<R: Rng + ?Sized>(pmf: &[f64], rng: &mut R) -> usize {
    let x: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &q) in pmf.iter().enumerate() {
        acc += q;
        if x < acc {
            return i;
        }
    }
    pmf.iter().rposition(|&q| q > 0.0).unwrap_or(0)
}

/// Run an order-oblivious algorithm in the two-faced model: coins pick the
/// sample face of every item, a uniform permutation supplies the sampling
/// phase, and online items already used as sample are skipped.
pub fn run_two_faced_reduction<A, R>(
    tf: &TwoFacedInstance,
    alg: &mut A,
    adversary: &dyn Fn(&ReductionView<'_>) -> Vec<usize>,
    rng: &mut R,
) -> Result<ReductionOutcome>
where
    A: OrderObliviousAlgorithm,
    R: Rng + ?Sized,
{
    let n = tf.env.item_count();
    let coins: Vec<usize> = (0..n).map(|_| rng.random_range(0..2)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let k = draw_index(&alg.sample_length_pmf(n), rng);
    let (accepted, alg_weight) = run_once(tf, alg, &coins, &perm, k, adversary)?;
    let online_opt = tf.env.max_weight(&tf.element_weights(|i| 1 - coins[i]))?;
    Ok(ReductionOutcome {
        accepted,
        alg_weight,
        online_opt,
    })
}

/// Largest item count for exact enumeration of the reduction.
pub const REDUCTION_EXACT_LIMIT: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionExact {
    pub e_alg: f64,
    pub e_opt: f64,
    /// Distribution of the accepted element set.
    pub distribution: BTreeMap<Vec<usize>, f64>,
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn check_exact_size(n: usize) -> Result<()> {
    if n > REDUCTION_EXACT_LIMIT {
        Err(Error::Capacity {
            what: "reduction enumeration items",
            size: n,
            limit: REDUCTION_EXACT_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Exact expectation of the reduction over coins, permutations and sample
/// lengths. `make_alg` builds a fresh algorithm for every realization.
pub fn exact_two_faced_reduction<A: OrderObliviousAlgorithm>(
    tf: &TwoFacedInstance,
    make_alg: &dyn Fn() -> A,
    adversary: &dyn Fn(&ReductionView<'_>) -> Vec<usize>,
) -> Result<ReductionExact> {
    let n = tf.env.item_count();
    check_exact_size(n)?;
    let perms = permutations(n);
    let pmf = make_alg().sample_length_pmf(n);
    let coin_prob = 0.5f64.powi(n as i32);
    let mut distribution = BTreeMap::new();
    let mut e_alg = 0.0;
    let mut e_opt = 0.0;
    for bits in 0u64..(1 << n) {
        let coins: Vec<usize> = (0..n).map(|i| (bits >> i & 1) as usize).collect();
        e_opt += coin_prob * tf.env.max_weight(&tf.element_weights(|i| 1 - coins[i]))?;
        for perm in &perms {
            for (k, &q) in pmf.iter().enumerate() {
                let prob = coin_prob * q / perms.len() as f64;
                if prob == 0.0 {
                    continue;
                }
                let (accepted, weight) = run_once(tf, &mut make_alg(), &coins, perm, k, adversary)?;
                e_alg += prob * weight;
                *distribution.entry(accepted).or_insert(0.0) += prob;
            }
        }
    }
    Ok(ReductionExact {
        e_alg,
        e_opt,
        distribution,
    })
}

/// Exact accepted-set distribution of an order-oblivious algorithm in the
/// random-order model with fixed item weights: a uniform permutation, the
/// first `k` items as sample, the rest in the adversary's order.
pub fn exact_order_oblivious_distribution<A: OrderObliviousAlgorithm>(
    env: &BatchedEnvironment,
    weights: &[Vec<f64>],
    make_alg: &dyn Fn() -> A,
    adversary: &dyn Fn(&ReductionView<'_>) -> Vec<usize>,
) -> Result<BTreeMap<Vec<usize>, f64>> {
    let n = env.item_count();
    check_exact_size(n)?;
    let perms = permutations(n);
    let pmf = make_alg().sample_length_pmf(n);
    let mut distribution = BTreeMap::new();
    for perm in &perms {
        for (k, &q) in pmf.iter().enumerate() {
            if q == 0.0 {
                continue;
            }
            let mut alg = make_alg();
            let sampled = &perm[..k];
            alg.observe_sample(&sampled.iter().map(|&i| (i, weights[i].clone())).collect::<Vec<_>>());
            let view = ReductionView {
                sample_weights: weights,
                online_weights: weights,
                sampled,
            };
            let mut accepted = Vec::new();
            for i in adversary(&view) {
                if !sampled.contains(&i) {
                    accepted.extend(alg.on_arrival(i, &weights[i]));
                }
            }
            accepted.sort_unstable();
            *distribution.entry(accepted).or_insert(0.0) += q / perms.len() as f64;
        }
    }
    Ok(distribution)
}

/// Ordered sample prefixes and their probabilities.
pub type PrefixDistribution = BTreeMap<Vec<usize>, Ratio<i64>>;

/// For a fixed face selection `z` and sample length `k`, enumerates coins and
/// permutations and returns `Pr[E_z]` together with the conditional
/// distribution of the ordered sample prefix given `E_z`, where `E_z` is the
/// event that the wrapped algorithm sees face `z_i` on every item.
pub fn prefix_distribution_given_faces(z: &[usize], k: usize) -> Result<(Ratio<i64>, PrefixDistribution)> {
    let n = z.len();
    check_exact_size(n)?;
    let perms = permutations(n);
    let total = (perms.len() as i64) << n;
    let mut hits = 0i64;
    let mut counts: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for bits in 0u64..(1 << n) {
        let coin = |i: usize| (bits >> i & 1) as usize;
        for perm in &perms {
            let (head, tail) = perm.split_at(k);
            let event = head.iter().all(|&i| coin(i) == z[i]) && tail.iter().all(|&i| 1 - coin(i) == z[i]);
            if event {
                hits += 1;
                *counts.entry(head.to_vec()).or_insert(0) += 1;
            }
        }
    }
    let conditional = counts.into_iter().map(|(k, c)| (k, Ratio::new(c, hits))).collect();
    Ok((Ratio::new(hits, total), conditional))
}
