//! Competitive-ratio estimation: exact enumeration over samples, seeded Monte
//! Carlo, closed-form curves, and CSV rows.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{check_probability, Error, Result};
use crate::graph::Instance;
use crate::mask::SubsetMask;
use crate::models::{
    aosp_keep_probability, aosp_prepare, draw_sample, exact_two_faced_reduction, id_order_adversary, order_edge,
    run_two_faced_reduction, worst_order_vertex, worst_vertex_adversary, Arrival, EdgePolicy, GreedyEdgeAlgorithm,
    GreedyVertexAlgorithm, ReductionView, TwoFacedInstance, REDUCTION_EXACT_LIMIT,
};
use crate::offline::{
    greedy_matching, greedy_on_vertex_subset, max_weight_on_edges, opt_value, OptOracle, DEFAULT_EXACT_LIMIT,
};
use crate::online::{
    compute_candidates_edge, compute_candidates_optbased, compute_candidates_thresholded, compute_candidates_vertex,
    play_vertex_online, run_edge_arrival_online,
};
use crate::parallel::{indexed_map, pairwise_scalar};
use crate::rng::{stream_rng, streams, StreamRng};

/// Default cap on enumerated items.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 20;

pub const CSV_HEADER: &str = "model,arrival,algorithm,p,mode,trials,seed,e_alg,benchmark,ratio,std_error,instance_id";

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($name::$variant => $text),+ })
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(Error::Domain(format!(
                        concat!("unknown ", stringify!($name), " `{}`"),
                        other
                    ))),
                }
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    RandomOrder,
    Aosp,
    TwoFaced,
}

keyword_enum!(Model { RandomOrder => "random-order", Aosp => "aosp", TwoFaced => "two-faced" });

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    GreedyBased,
    OptBased,
    Thresholded,
}

keyword_enum!(Algorithm { GreedyBased => "greedy-based", OptBased => "opt-based", Thresholded => "thresholded" });

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimationMode {
    Exact,
    MonteCarlo,
}

keyword_enum!(EstimationMode { Exact => "exact", MonteCarlo => "monte-carlo" });

/// Arrival order of the online items. `Worst` is the lightest-candidate-first
/// order for vertices and the brute-force minimizer for edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryPolicy {
    Worst,
    IdOrder,
    Ascending,
    Descending,
    Random,
}

keyword_enum!(AdversaryPolicy {
    Worst => "worst",
    IdOrder => "id",
    Ascending => "ascending",
    Descending => "descending",
    Random => "random",
});

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub model: Model,
    pub arrival: Arrival,
    pub algorithm: Algorithm,
    pub p: f64,
    pub adversary: AdversaryPolicy,
    pub mode: EstimationMode,
    pub trials: u64,
    pub seed: u64,
    pub enumeration_limit: usize,
    /// AOSp only: thin the history to the algorithm's sample when `p` is large.
    pub subsample: bool,
    /// Two-faced only: the second weight face. The instance itself is the first.
    pub faces: Option<Instance>,
}

impl ExperimentConfig {
    pub fn new(model: Model, arrival: Arrival, p: f64) -> Self {
        ExperimentConfig {
            model,
            arrival,
            algorithm: Algorithm::GreedyBased,
            p,
            adversary: AdversaryPolicy::Worst,
            mode: EstimationMode::Exact,
            trials: 1,
            seed: 0,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            subsample: true,
            faces: None,
        }
    }

    pub fn validate(&self, inst: &Instance) -> Result<()> {
        check_probability(self.p)?;
        if self.arrival == Arrival::Vertex {
            inst.sides()?;
        }
        if self.algorithm != Algorithm::GreedyBased && self.arrival == Arrival::Edge {
            return Err(Error::Domain(format!("{} needs vertex arrivals", self.algorithm)));
        }
        if self.algorithm != Algorithm::GreedyBased && self.model == Model::TwoFaced {
            return Err(Error::Domain(
                "the two-faced reduction wraps the greedy-based algorithm".into(),
            ));
        }
        if self.mode == EstimationMode::MonteCarlo && self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if self.mode == EstimationMode::Exact && self.adversary == AdversaryPolicy::Random {
            return Err(Error::Domain("exact mode needs a deterministic adversary".into()));
        }
        if self.faces.is_some() && self.model != Model::TwoFaced {
            return Err(Error::Domain("faces apply to the two-faced model only".into()));
        }
        let items = item_count(inst, self.arrival)?;
        if self.mode == EstimationMode::Exact {
            let limit = match self.model {
                Model::TwoFaced => REDUCTION_EXACT_LIMIT.min(self.enumeration_limit),
                _ => self.enumeration_limit,
            };
            if items > limit {
                return Err(Error::Capacity {
                    what: "exact enumeration items",
                    size: items,
                    limit,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub e_alg: f64,
    pub benchmark: f64,
    pub ratio: f64,
    /// Zero for exact results.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl RatioEstimate {
    fn exact(e_alg: f64, benchmark: f64) -> Self {
        RatioEstimate {
            e_alg,
            benchmark,
            ratio: ratio(e_alg, benchmark),
            std_error: 0.0,
            trials: 0,
            seed: 0,
        }
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

pub fn item_count(inst: &Instance, arrival: Arrival) -> Result<usize> {
    Ok(match arrival {
        Arrival::Vertex => inst.sides()?.0,
        Arrival::Edge => inst.edge_count(),
    })
}

fn mask_probability(p: f64, size: usize, chosen: usize) -> f64 {
    p.powi(chosen as i32) * (1.0 - p).powi((size - chosen) as i32)
}

/// Sum of `f(mask) · Pr[mask]` over all subsets, each item in with
/// probability `p`.
fn enumerate_masks(items: usize, p: f64, f: impl Fn(&SubsetMask) -> Result<f64> + Sync + Send) -> Result<f64> {
    let terms = indexed_map(1usize << items, |bits| {
        let mask = SubsetMask::from_bits(items, bits as u64);
        let q = mask_probability(p, items, mask.count());
        if q == 0.0 {
            Ok(0.0)
        } else {
            f(&mask).map(|v| q * v)
        }
    });
    let terms: Vec<f64> = terms.into_iter().collect::<Result<_>>()?;
    Ok(pairwise_scalar(&terms))
}

fn check_limit(items: usize, limit: usize) -> Result<()> {
    if items > limit {
        Err(Error::Capacity {
            what: "exact enumeration items",
            size: items,
            limit,
        })
    } else {
        Ok(())
    }
}

/// One realization of the online algorithm: sample, online set, order policy.
pub fn run_algorithm(
    inst: &Instance,
    config: &ExperimentConfig,
    sample: &SubsetMask,
    online: &SubsetMask,
    rng: &mut StreamRng,
) -> Result<f64> {
    match config.arrival {
        Arrival::Vertex => {
            let candidates = match config.algorithm {
                Algorithm::GreedyBased => compute_candidates_vertex(inst, sample)?,
                Algorithm::Thresholded => compute_candidates_thresholded(inst, sample)?,
                Algorithm::OptBased => compute_candidates_optbased(inst, sample)?,
            };
            let order = match config.adversary {
                AdversaryPolicy::Worst => worst_order_vertex(inst, online, &candidates),
                AdversaryPolicy::IdOrder => online.iter().collect(),
                AdversaryPolicy::Ascending | AdversaryPolicy::Descending => {
                    let mut with: Vec<usize> = online.iter().filter(|&u| candidates[u].is_some()).collect();
                    with.sort_by_key(|&u| inst.order().rank(candidates[u].unwrap()));
                    if config.adversary == AdversaryPolicy::Ascending {
                        with.reverse();
                    }
                    with.extend(online.iter().filter(|&u| candidates[u].is_none()));
                    with
                }
                AdversaryPolicy::Random => {
                    let mut order: Vec<usize> = online.iter().collect();
                    order.shuffle(rng);
                    order
                }
            };
            Ok(play_vertex_online(inst, sample, online, &order, &candidates)?.weight())
        }
        Arrival::Edge => {
            let candidates = compute_candidates_edge(inst, sample);
            let policy = match config.adversary {
                AdversaryPolicy::Worst => EdgePolicy::BruteWorst,
                AdversaryPolicy::IdOrder => {
                    let order: Vec<usize> = online.iter().collect();
                    return Ok(run_edge_arrival_online(inst, sample, online, &order)?.weight());
                }
                AdversaryPolicy::Ascending => EdgePolicy::Ascending,
                AdversaryPolicy::Descending => EdgePolicy::Descending,
                AdversaryPolicy::Random => EdgePolicy::Random,
            };
            let order = order_edge(inst, online, &candidates, policy, rng)?;
            Ok(run_edge_arrival_online(inst, sample, online, &order)?.weight())
        }
    }
}

/// OPT restricted to the present items.
fn restricted_opt(
    inst: &Instance,
    arrival: Arrival,
    oracle: Option<&OptOracle<'_>>,
    present: &SubsetMask,
) -> Result<f64> {
    match (arrival, oracle) {
        (Arrival::Vertex, Some(oracle)) => Ok(oracle.value(present)),
        (Arrival::Vertex, None) => Ok(OptOracle::new(inst)?.value(present)),
        (Arrival::Edge, _) => Ok(max_weight_on_edges(inst, present, DEFAULT_EXACT_LIMIT)?.weight()),
    }
}

fn vertex_oracle(inst: &Instance, arrival: Arrival) -> Result<Option<OptOracle<'_>>> {
    match arrival {
        Arrival::Vertex => Ok(Some(OptOracle::new(inst)?)),
        Arrival::Edge => Ok(None),
    }
}

fn two_faced(inst: &Instance, config: &ExperimentConfig) -> Result<TwoFacedInstance> {
    TwoFacedInstance::from_instances(inst, config.faces.as_ref().unwrap_or(inst), config.arrival)
}

/// Lightest online face first.
fn ascending_face_adversary(view: &ReductionView<'_>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..view.online_weights.len()).collect();
    let key = |i: usize| view.online_weights[i].iter().copied().fold(0.0, f64::max);
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
    order
}

type AdversaryFn<'a> = Box<dyn Fn(&ReductionView<'_>) -> Vec<usize> + Sync + 'a>;

fn reduction_adversary<'a>(inst: &'a Instance, config: &ExperimentConfig) -> Result<AdversaryFn<'a>> {
    match (config.arrival, config.adversary) {
        (Arrival::Vertex, AdversaryPolicy::Worst) => Ok(Box::new(worst_vertex_adversary(inst))),
        (_, AdversaryPolicy::IdOrder) => Ok(Box::new(id_order_adversary)),
        (_, AdversaryPolicy::Ascending) | (Arrival::Edge, AdversaryPolicy::Worst) => {
            Ok(Box::new(ascending_face_adversary))
        }
        (_, policy) => Err(Error::Domain(format!(
            "adversary `{policy}` is not available in the two-faced model"
        ))),
    }
}

/// Exact expectation by enumerating every sample (and history split).
pub fn exact_report(inst: &Instance, config: &ExperimentConfig) -> Result<RatioEstimate> {
    let config = ExperimentConfig {
        mode: EstimationMode::Exact,
        ..config.clone()
    };
    config.validate(inst)?;
    let items = item_count(inst, config.arrival)?;
    let p = config.p;
    let estimate = match config.model {
        Model::RandomOrder => {
            let e_alg = enumerate_masks(items, p, |sample| {
                run_algorithm(inst, &config, sample, &sample.complement(), &mut stream_rng(0, 0, 0))
            })?;
            RatioEstimate::exact(e_alg, opt_value(inst)?)
        }
        Model::Aosp => {
            let keep = if config.subsample {
                aosp_keep_probability(p, config.arrival)
            } else {
                1.0
            };
            let oracle = vertex_oracle(inst, config.arrival)?;
            let e_alg = enumerate_masks(items, p, |history| {
                let online = history.complement();
                let held: Vec<usize> = history.iter().collect();
                let mut sum = 0.0;
                for bits in 0u64..(1 << held.len()) {
                    if keep == 1.0 && bits + 1 != 1 << held.len() {
                        continue;
                    }
                    let sample = SubsetMask::from_indices(
                        items,
                        held.iter()
                            .enumerate()
                            .filter(|(i, _)| bits >> i & 1 == 1)
                            .map(|(_, &u)| u),
                    );
                    let q = mask_probability(keep, held.len(), sample.count());
                    if q > 0.0 {
                        sum += q * run_algorithm(inst, &config, &sample, &online, &mut stream_rng(0, 0, 0))?;
                    }
                }
                Ok(sum)
            })?;
            let benchmark = enumerate_masks(items, p, |history| {
                restricted_opt(inst, config.arrival, oracle.as_ref(), &history.complement())
            })?;
            RatioEstimate::exact(e_alg, benchmark)
        }
        Model::TwoFaced => {
            let tf = two_faced(inst, &config)?;
            let adversary = reduction_adversary(inst, &config)?;
            let exact = match config.arrival {
                Arrival::Vertex => exact_two_faced_reduction(
                    &tf,
                    &|| GreedyVertexAlgorithm::new(inst, p).expect("validated"),
                    &*adversary,
                )?,
                Arrival::Edge => exact_two_faced_reduction(
                    &tf,
                    &|| GreedyEdgeAlgorithm::new(inst, p).expect("validated"),
                    &*adversary,
                )?,
            };
            RatioEstimate::exact(exact.e_alg, exact.e_opt)
        }
    };
    Ok(estimate)
}

/// Ratio of means with a delta-method standard error. Each pair is
/// `(alg, benchmark)` of one trial.
fn ratio_of_means(pairs: &[(f64, f64)], seed: u64, fixed_benchmark: Option<f64>) -> RatioEstimate {
    let n = pairs.len() as f64;
    let col = |f: &dyn Fn(&(f64, f64)) -> f64| pairwise_scalar(&pairs.iter().map(f).collect::<Vec<_>>()) / n;
    let a = col(&|x| x.0);
    let b = fixed_benchmark.unwrap_or_else(|| col(&|x| x.1));
    let r = ratio(a, b);
    let std_error = if pairs.len() < 2 || b == 0.0 {
        0.0
    } else {
        let m = n - 1.0;
        let var_a = pairwise_scalar(&pairs.iter().map(|x| (x.0 - a).powi(2)).collect::<Vec<_>>()) / m;
        let (var_b, cov) = if fixed_benchmark.is_some() {
            (0.0, 0.0)
        } else {
            (
                pairwise_scalar(&pairs.iter().map(|x| (x.1 - b).powi(2)).collect::<Vec<_>>()) / m,
                pairwise_scalar(&pairs.iter().map(|x| (x.0 - a) * (x.1 - b)).collect::<Vec<_>>()) / m,
            )
        };
        ((var_a + r * r * var_b - 2.0 * r * cov).max(0.0) / n).sqrt() / b
    };
    RatioEstimate {
        e_alg: a,
        benchmark: b,
        ratio: r,
        std_error,
        trials: pairs.len() as u64,
        seed,
    }
}

/// Monte Carlo estimate; every trial draws from its own keyed streams so the
/// result does not depend on the number of worker threads.
pub fn monte_carlo(inst: &Instance, config: &ExperimentConfig) -> Result<RatioEstimate> {
    let config = ExperimentConfig {
        mode: EstimationMode::MonteCarlo,
        ..config.clone()
    };
    config.validate(inst)?;
    let items = item_count(inst, config.arrival)?;
    let (p, seed) = (config.p, config.seed);
    let trials = config.trials as usize;
    let collect = |f: &(dyn Fn(u64) -> Result<(f64, f64)> + Sync)| -> Result<Vec<(f64, f64)>> {
        indexed_map(trials, |t| f(t as u64)).into_iter().collect()
    };
    match config.model {
        Model::RandomOrder => {
            let pairs = collect(&|t| {
                let sample = draw_sample(items, p, &mut stream_rng(seed, streams::SAMPLE, t))?;
                let alg = run_algorithm(
                    inst,
                    &config,
                    &sample,
                    &sample.complement(),
                    &mut stream_rng(seed, streams::ORDER, t),
                )?;
                Ok((alg, 0.0))
            })?;
            Ok(ratio_of_means(&pairs, seed, Some(opt_value(inst)?)))
        }
        Model::Aosp => {
            let oracle = vertex_oracle(inst, config.arrival)?;
            let pairs = collect(&|t| {
                let mut draw = aosp_prepare(inst, p, &mut stream_rng(seed, streams::SAMPLE, t), config.arrival)?;
                if !config.subsample {
                    draw.sample = draw.history.clone();
                }
                let alg = run_algorithm(
                    inst,
                    &config,
                    &draw.sample,
                    &draw.online,
                    &mut stream_rng(seed, streams::ORDER, t),
                )?;
                Ok((
                    alg,
                    restricted_opt(inst, config.arrival, oracle.as_ref(), &draw.online)?,
                ))
            })?;
            Ok(ratio_of_means(&pairs, seed, None))
        }
        Model::TwoFaced => {
            let tf = two_faced(inst, &config)?;
            let adversary = reduction_adversary(inst, &config)?;
            let pairs = collect(&|t| {
                let mut rng = stream_rng(seed, streams::REDUCTION, t);
                let out = match config.arrival {
                    Arrival::Vertex => {
                        run_two_faced_reduction(&tf, &mut GreedyVertexAlgorithm::new(inst, p)?, &*adversary, &mut rng)?
                    }
                    Arrival::Edge => {
                        run_two_faced_reduction(&tf, &mut GreedyEdgeAlgorithm::new(inst, p)?, &*adversary, &mut rng)?
                    }
                };
                Ok((out.alg_weight, out.online_opt))
            })?;
            let exact_benchmark = if items <= config.enumeration_limit {
                Some(enumerate_masks(items, 0.5, |coins| {
                    tf.env()
                        .max_weight(&tf.element_weights(|i| 1 - coins.contains(i) as usize))
                })?)
            } else {
                None
            };
            Ok(ratio_of_means(&pairs, seed, exact_benchmark))
        }
    }
}

/// Dispatches on `config.mode`.
pub fn estimate(inst: &Instance, config: &ExperimentConfig) -> Result<RatioEstimate> {
    match config.mode {
        EstimationMode::Exact => exact_report(inst, config),
        EstimationMode::MonteCarlo => monte_carlo(inst, config),
    }
}

fn sample_greedy(inst: &Instance, arrival: Arrival, sample: &SubsetMask) -> Result<f64> {
    Ok(match arrival {
        Arrival::Vertex => greedy_on_vertex_subset(inst, sample)?.weight(),
        Arrival::Edge => greedy_matching(inst, sample).weight(),
    })
}

/// Exact `E[Greedy]` on the random induced subgraph where every item is kept
/// with probability `p`.
pub fn exact_sample_greedy(inst: &Instance, p: f64, arrival: Arrival, limit: usize) -> Result<f64> {
    check_probability(p)?;
    let items = item_count(inst, arrival)?;
    check_limit(items, limit)?;
    enumerate_masks(items, p, |sample| sample_greedy(inst, arrival, sample))
}

/// Monte Carlo `E[Greedy]` on the sampled subgraph against `OPT(G)`.
pub fn monte_carlo_sample_greedy(
    inst: &Instance,
    p: f64,
    arrival: Arrival,
    trials: u64,
    seed: u64,
) -> Result<RatioEstimate> {
    check_probability(p)?;
    let items = item_count(inst, arrival)?;
    let pairs: Vec<(f64, f64)> = indexed_map(trials as usize, |t| {
        let sample = draw_sample(items, p, &mut stream_rng(seed, streams::SAMPLE, t as u64))?;
        Ok((sample_greedy(inst, arrival, &sample)?, 0.0))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(ratio_of_means(&pairs, seed, Some(opt_value(inst)?)))
}

/// Proven competitive ratio of the greedy-based algorithm. The two-faced
/// model inherits the order-oblivious random-order guarantee.
pub fn theoretical_curve(model: Model, arrival: Arrival, p: f64) -> Result<f64> {
    check_probability(p)?;
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let random_edge = |p: f64| {
        if p <= golden {
            p * p * (1.0 - p) / 2.0
        } else {
            (1.0 - p) * (2.0 * p - 1.0) / (2.0 * p)
        }
    };
    Ok(match (model, arrival) {
        (Model::RandomOrder | Model::TwoFaced, Arrival::Vertex) => p * (1.0 - p) / (1.0 + p),
        (Model::RandomOrder | Model::TwoFaced, Arrival::Edge) => random_edge(p),
        (Model::Aosp, Arrival::Vertex) => {
            if p <= 0.5 {
                p * (1.0 - p)
            } else {
                0.25
            }
        }
        (Model::Aosp, Arrival::Edge) => {
            if p <= 1.0 / 3.0 {
                p * p / 2.0
            } else if p <= 0.5 {
                p * (1.0 - p) / 4.0
            } else if p <= std::f64::consts::FRAC_1_SQRT_2 {
                random_edge(p)
            } else {
                1.5 - 2f64.sqrt()
            }
        }
    })
}

/// One CSV line in [`CSV_HEADER`] column order.
pub fn csv_row(config: &ExperimentConfig, estimate: &RatioEstimate, instance_id: &str) -> String {
    let trials = match config.mode {
        EstimationMode::Exact => 0,
        EstimationMode::MonteCarlo => estimate.trials,
    };
    let id = if instance_id.contains([',', '"', '\n']) {
        format!("\"{}\"", instance_id.replace('"', "\"\""))
    } else {
        instance_id.to_string()
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        config.model,
        config.arrival,
        config.algorithm,
        config.p,
        config.mode,
        trials,
        config.seed,
        estimate.e_alg,
        estimate.benchmark,
        estimate.ratio,
        estimate.std_error,
        id
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::t1;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn t1_random_order_vertex() {
        let est = exact_report(&t1(), &ExperimentConfig::new(Model::RandomOrder, Arrival::Vertex, 0.5)).unwrap();
        close(est.e_alg, 1.45);
        close(est.benchmark, 5.7);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn t1_aosp_vertex() {
        let est = exact_report(&t1(), &ExperimentConfig::new(Model::Aosp, Arrival::Vertex, 0.5)).unwrap();
        close(est.e_alg, 1.45);
        close(est.benchmark, 2.875);
        assert!(est.ratio >= 0.25);
    }

    #[test]
    fn t1_random_order_edge() {
        let g = t1().to_general();
        let est = exact_report(&g, &ExperimentConfig::new(Model::RandomOrder, Arrival::Edge, 0.5)).unwrap();
        close(est.e_alg, 1.4625);
        close(exact_sample_greedy(&g, 0.5, Arrival::Edge, 20).unwrap(), 2.925);
    }

    #[test]
    fn variants_agree_on_t1() {
        let mut config = ExperimentConfig::new(Model::RandomOrder, Arrival::Vertex, 0.5);
        config.algorithm = Algorithm::Thresholded;
        close(exact_report(&t1(), &config).unwrap().e_alg, 1.45);
        config.algorithm = Algorithm::OptBased;
        assert!(exact_report(&t1(), &config).is_ok());
        config.arrival = Arrival::Edge;
        assert!(matches!(exact_report(&t1(), &config), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_limits() {
        let mut config = ExperimentConfig::new(Model::RandomOrder, Arrival::Vertex, 0.5);
        config.enumeration_limit = 1;
        assert!(matches!(exact_report(&t1(), &config), Err(Error::Capacity { .. })));
    }

    #[test]
    fn monte_carlo_brackets_exact() {
        let mut config = ExperimentConfig::new(Model::RandomOrder, Arrival::Vertex, 0.5);
        config.mode = EstimationMode::MonteCarlo;
        config.trials = 20_000;
        config.seed = 11;
        let est = monte_carlo(&t1(), &config).unwrap();
        assert!((est.e_alg - 1.45).abs() <= 4.0 * est.std_error * est.benchmark);
        assert_eq!(est, monte_carlo(&t1(), &config).unwrap());
        config.p = 1.0;
        assert_eq!(monte_carlo(&t1(), &config).unwrap().e_alg, 0.0);
    }

    #[test]
    fn monte_carlo_other_models() {
        for model in [Model::Aosp, Model::TwoFaced] {
            let mut config = ExperimentConfig::new(model, Arrival::Vertex, 0.5);
            config.mode = EstimationMode::MonteCarlo;
            config.trials = 4000;
            let exact = exact_report(&t1(), &config).unwrap();
            let mc = monte_carlo(&t1(), &config).unwrap();
            assert!(
                (mc.ratio - exact.ratio).abs() <= 5.0 * mc.std_error + 1e-12,
                "{model}: {mc:?} vs {exact:?}"
            );
        }
    }

    #[test]
    fn curve_values() {
        let v = theoretical_curve(Model::RandomOrder, Arrival::Vertex, 2f64.sqrt() - 1.0).unwrap();
        close(v, 3.0 - 2.0 * 2f64.sqrt());
        let e = theoretical_curve(Model::Aosp, Arrival::Edge, std::f64::consts::FRAC_1_SQRT_2).unwrap();
        close(e, 1.5 - 2f64.sqrt());
        assert_eq!(theoretical_curve(Model::Aosp, Arrival::Vertex, 0.0).unwrap(), 0.0);
        assert!(theoretical_curve(Model::Aosp, Arrival::Vertex, 1.5).is_err());
    }

    #[test]
    fn keywords_round_trip() {
        for m in [Model::RandomOrder, Model::Aosp, Model::TwoFaced] {
            assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
        }
        assert_eq!("brute".parse::<AdversaryPolicy>().ok(), None);
        assert_eq!("edge".parse::<Arrival>().unwrap(), Arrival::Edge);
    }

    #[test]
    fn csv_shape() {
        let config = ExperimentConfig::new(Model::Aosp, Arrival::Vertex, 0.5);
        let est = exact_report(&t1(), &config).unwrap();
        let row = csv_row(&config, &est, "t1.graph");
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("aosp,vertex,greedy-based,0.5,exact,0,0,"));
    }
}
