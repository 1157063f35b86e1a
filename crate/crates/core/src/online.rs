//! Greedy-based online algorithms: vertex arrivals (with a price-threshold
//! formulation), edge arrivals, and the opt-based variant.
//!
//! Every algorithm here first fixes its candidate edges from the sample and
//! then streams the online items, accepting a candidate whenever it still fits.

use crate::error::{Error, Result};
use crate::graph::{Instance, Matching};
use crate::hungarian::Assignment;
use crate::mask::SubsetMask;
use crate::offline::{greedy_on_vertex_subset, greedy_scan};

/// Online items in arrival order (left vertices or edge ids).
pub type ArrivalOrder = Vec<usize>;

/// Candidate edge of each left vertex; `None` for sample vertices and for
/// online vertices without a candidate.
pub type CandidateMap = Vec<Option<usize>>;

/// How candidates are obtained. `PerRound` recomputes the defining greedy
/// matching for every arrival and exists for differential testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidateMode {
    #[default]
    Precomputed,
    PerRound,
}

/// Right-vertex prices: the edge matching each right vertex in Greedy(G[L′]).
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdMap {
    /// Indexed by right-side position; 0 when unmatched.
    pub price: Vec<f64>,
    pub edge: Vec<Option<usize>>,
}

/// Checks that `order` lists every item of `online` exactly once and that the
/// online set avoids the sample.
pub(crate) fn check_order(sample: &SubsetMask, online: &SubsetMask, order: &[usize]) -> Result<()> {
    let items = sample.len();
    if online.len() != items {
        return Err(Error::Protocol(format!(
            "online set width {} does not match {items} items",
            online.len()
        )));
    }
    if let Some(x) = online.iter().find(|&x| sample.contains(x)) {
        return Err(Error::Protocol(format!("item {x} is both sampled and online")));
    }
    let mut seen = vec![false; items];
    for &x in order {
        if x >= items || !online.contains(x) || std::mem::replace(&mut seen[x], true) {
            return Err(Error::Protocol(format!("item {x} cannot arrive online")));
        }
    }
    if order.len() != online.count() {
        return Err(Error::Protocol(format!(
            "arrival order has {} items, expected {}",
            order.len(),
            online.count()
        )));
    }
    Ok(())
}

fn check_width(sample: &SubsetMask, items: usize) -> Result<()> {
    if sample.len() == items {
        Ok(())
    } else {
        Err(Error::Protocol(format!(
            "sample width {} does not match {items} items",
            sample.len()
        )))
    }
}

pub fn compute_candidates_vertex(inst: &Instance, sample: &SubsetMask) -> Result<CandidateMap> {
    compute_candidates_vertex_with(inst, sample, CandidateMode::Precomputed)
}

pub fn compute_candidates_vertex_with(
    inst: &Instance,
    sample: &SubsetMask,
    mode: CandidateMode,
) -> Result<CandidateMap> {
    let (left, _) = inst.sides()?;
    check_width(sample, left)?;
    match mode {
        CandidateMode::Precomputed => {
            // u's edge in Greedy(G[L′ ∪ {u}]) is its heaviest edge whose right
            // endpoint is not taken earlier in Greedy(G[L′]).
            let (matched_rank, _) = greedy_scan(inst, |e| sample.contains(inst.left_of(e)));
            let order = inst.order();
            Ok((0..left)
                .map(|u| {
                    if sample.contains(u) {
                        return None;
                    }
                    inst.incident(u)
                        .iter()
                        .copied()
                        .find(|&e| order.rank(e) < matched_rank[inst.right_of(e)])
                })
                .collect())
        }
        CandidateMode::PerRound => (0..left)
            .map(|u| {
                if sample.contains(u) {
                    return Ok(None);
                }
                let m = greedy_on_vertex_subset(inst, &sample.with(u))?;
                Ok(m.edges().iter().copied().find(|&e| inst.left_of(e) == u))
            })
            .collect(),
    }
}

fn play_vertex(inst: &Instance, candidates: &CandidateMap, order: &[usize]) -> Matching {
    let mut taken = vec![false; inst.vertex_count()];
    let mut out = Vec::new();
    for &u in order {
        if let Some(e) = candidates[u] {
            let r = inst.right_of(e);
            if !taken[r] {
                taken[r] = true;
                out.push(e);
            }
        }
    }
    Matching::from_disjoint(inst, out)
}

/// Greedy-based algorithm for vertex arrivals with sample `L′`.
pub fn run_vertex_arrival(inst: &Instance, sample: &SubsetMask, order: &[usize]) -> Result<Matching> {
    run_vertex_arrival_with(inst, sample, order, CandidateMode::Precomputed)
}

pub fn run_vertex_arrival_with(
    inst: &Instance,
    sample: &SubsetMask,
    order: &[usize],
    mode: CandidateMode,
) -> Result<Matching> {
    let (left, _) = inst.sides()?;
    check_width(sample, left)?;
    check_order(sample, &sample.complement(), order)?;
    let candidates = compute_candidates_vertex_with(inst, sample, mode)?;
    Ok(play_vertex(inst, &candidates, order))
}

/// Vertex arrivals where only `online` arrives after the sample; items in
/// neither set are discarded.
pub fn run_vertex_arrival_online(
    inst: &Instance,
    sample: &SubsetMask,
    online: &SubsetMask,
    order: &[usize],
) -> Result<Matching> {
    let (left, _) = inst.sides()?;
    check_width(sample, left)?;
    check_order(sample, online, order)?;
    let candidates = compute_candidates_vertex(inst, sample)?;
    Ok(play_vertex(inst, &candidates, order))
}

pub fn price_thresholds(inst: &Instance, sample: &SubsetMask) -> Result<ThresholdMap> {
    let (left, right) = inst.sides()?;
    let greedy = greedy_on_vertex_subset(inst, sample)?;
    let mut price = vec![0.0; right];
    let mut edge = vec![None; right];
    for &e in greedy.edges() {
        let r = inst.right_of(e) - left;
        price[r] = inst.weight(e);
        edge[r] = Some(e);
    }
    Ok(ThresholdMap { price, edge })
}

/// Vertex arrivals where an arriving `u` proposes its heaviest edge that beats
/// the price of its right endpoint.
pub fn run_vertex_arrival_thresholded(inst: &Instance, sample: &SubsetMask, order: &[usize]) -> Result<Matching> {
    check_order(sample, &sample.complement(), order)?;
    let candidates = compute_candidates_thresholded(inst, sample)?;
    Ok(play_vertex(inst, &candidates, order))
}

/// Each online vertex's heaviest edge beating the price of its right endpoint.
pub fn compute_candidates_thresholded(inst: &Instance, sample: &SubsetMask) -> Result<CandidateMap> {
    let (left, _) = inst.sides()?;
    check_width(sample, left)?;
    let prices = price_thresholds(inst, sample)?;
    let beats = |e: usize| {
        let r = inst.right_of(e) - left;
        match prices.edge[r] {
            None => true,
            Some(t) => {
                let (w, p) = (inst.weight(e), prices.price[r]);
                w > p || (w == p && inst.order().heavier(e, t))
            }
        }
    };
    Ok((0..left)
        .map(|u| {
            if sample.contains(u) {
                None
            } else {
                inst.incident(u).iter().copied().find(|&e| beats(e))
            }
        })
        .collect())
}

/// Streams `order` over the online set, accepting candidates that still fit.
pub fn play_vertex_online(
    inst: &Instance,
    sample: &SubsetMask,
    online: &SubsetMask,
    order: &[usize],
    candidates: &CandidateMap,
) -> Result<Matching> {
    let (left, _) = inst.sides()?;
    check_width(sample, left)?;
    check_order(sample, online, order)?;
    if candidates.len() != left {
        return Err(Error::Protocol(format!(
            "{} candidates for {left} vertices",
            candidates.len()
        )));
    }
    Ok(play_vertex(inst, candidates, order))
}

/// Whether each edge would be a candidate given edge sample `E′`.
pub fn compute_candidates_edge(inst: &Instance, sample: &SubsetMask) -> Vec<bool> {
    let (matched_rank, _) = greedy_scan(inst, |e| sample.contains(e));
    let order = inst.order();
    (0..inst.edge_count())
        .map(|e| {
            if sample.contains(e) {
                return false;
            }
            let (x, y) = inst.endpoints(e);
            order.rank(e) < matched_rank[x] && order.rank(e) < matched_rank[y]
        })
        .collect()
}

fn compute_candidates_edge_per_round(inst: &Instance, sample: &SubsetMask) -> Vec<bool> {
    (0..inst.edge_count())
        .map(|e| !sample.contains(e) && crate::offline::greedy_matching(inst, &sample.with(e)).contains(e))
        .collect()
}

/// Greedy-based algorithm for edge arrivals with sample `E′`.
pub fn run_edge_arrival(inst: &Instance, sample: &SubsetMask, order: &[usize]) -> Result<Matching> {
    run_edge_arrival_with(inst, sample, order, CandidateMode::Precomputed)
}

pub fn run_edge_arrival_with(
    inst: &Instance,
    sample: &SubsetMask,
    order: &[usize],
    mode: CandidateMode,
) -> Result<Matching> {
    check_width(sample, inst.edge_count())?;
    check_order(sample, &sample.complement(), order)?;
    let candidate = match mode {
        CandidateMode::Precomputed => compute_candidates_edge(inst, sample),
        CandidateMode::PerRound => compute_candidates_edge_per_round(inst, sample),
    };
    Ok(play_edge(inst, &candidate, order))
}

pub fn run_edge_arrival_online(
    inst: &Instance,
    sample: &SubsetMask,
    online: &SubsetMask,
    order: &[usize],
) -> Result<Matching> {
    check_width(sample, inst.edge_count())?;
    check_order(sample, online, order)?;
    Ok(play_edge(inst, &compute_candidates_edge(inst, sample), order))
}

pub(crate) fn play_edge(inst: &Instance, candidate: &[bool], order: &[usize]) -> Matching {
    let mut taken = vec![false; inst.vertex_count()];
    let mut out = Vec::new();
    for &e in order {
        if candidate[e] {
            let (x, y) = inst.endpoints(e);
            if !taken[x] && !taken[y] {
                taken[x] = true;
                taken[y] = true;
                out.push(e);
            }
        }
    }
    Matching::from_disjoint(inst, out)
}

/// Candidate of each online `u`: its edge in a maximum-weight matching of
/// G[L′ ∪ {u}]. Ties among maximum matchings follow the assignment solver.
pub fn compute_candidates_optbased(inst: &Instance, sample: &SubsetMask) -> Result<CandidateMap> {
    let (left, right) = inst.sides()?;
    check_width(sample, left)?;
    let cols = left.max(right);
    let row = |u: usize| {
        let mut costs = vec![0.0; cols];
        for &e in inst.incident(u) {
            costs[inst.right_of(e) - left] = -inst.weight(e);
        }
        costs
    };
    let mut base = Assignment::new(cols);
    for u in sample.iter() {
        base.add_row(row(u));
    }
    Ok((0..left)
        .map(|u| {
            if sample.contains(u) {
                return None;
            }
            let mut state = base.clone();
            state.add_row(row(u));
            let col = *state.row_assignment().last().unwrap();
            inst.incident(u)
                .iter()
                .copied()
                .find(|&e| inst.right_of(e) - left == col)
        })
        .collect())
}

pub fn run_vertex_arrival_optbased(inst: &Instance, sample: &SubsetMask, order: &[usize]) -> Result<Matching> {
    let (left, _) = inst.sides()?;
    check_width(sample, left)?;
    check_order(sample, &sample.complement(), order)?;
    let candidates = compute_candidates_optbased(inst, sample)?;
    Ok(play_vertex(inst, &candidates, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::t1;
    use crate::graph::{parse_instance, Edge};

    fn mask(len: usize, idx: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(len, idx.iter().copied())
    }

    #[test]
    fn vertex_candidates_on_t1() {
        let inst = t1();
        assert_eq!(
            compute_candidates_vertex(&inst, &mask(2, &[])).unwrap(),
            vec![Some(0), Some(2)]
        );
        assert_eq!(
            compute_candidates_vertex(&inst, &mask(2, &[0])).unwrap(),
            vec![None, None]
        );
        assert_eq!(
            compute_candidates_vertex(&inst, &mask(2, &[1])).unwrap(),
            vec![Some(0), None]
        );
    }

    #[test]
    fn vertex_runs_on_t1() {
        let inst = t1();
        let empty = mask(2, &[]);
        let m = run_vertex_arrival(&inst, &empty, &[1, 0]).unwrap();
        assert_eq!((m.edges(), m.weight()), (&[2][..], 2.8));
        let m = run_vertex_arrival(&inst, &empty, &[0, 1]).unwrap();
        assert_eq!((m.edges(), m.weight()), (&[0][..], 3.0));
        assert!(run_vertex_arrival(&inst, &mask(2, &[0, 1]), &[]).unwrap().is_empty());
    }

    #[test]
    fn order_must_cover_online_vertices() {
        let inst = t1();
        let s = mask(2, &[0]);
        assert!(matches!(
            run_vertex_arrival(&inst, &s, &[0, 1]),
            Err(Error::Protocol(_))
        ));
        assert!(matches!(run_vertex_arrival(&inst, &s, &[]), Err(Error::Protocol(_))));
        assert!(matches!(
            run_vertex_arrival(&inst, &mask(2, &[]), &[1, 1]),
            Err(Error::Protocol(_))
        ));
    }

    #[test]
    fn discarded_items_do_not_arrive() {
        let inst = t1();
        let online = mask(2, &[1]);
        let m = run_vertex_arrival_online(&inst, &mask(2, &[]), &online, &[1]).unwrap();
        assert_eq!(m.edges(), &[2]);
        assert!(run_vertex_arrival_online(&inst, &mask(2, &[1]), &online, &[1]).is_err());
        assert!(run_vertex_arrival_online(&inst, &mask(2, &[]), &online, &[0, 1]).is_err());
    }

    #[test]
    fn thresholds_on_t1() {
        let inst = t1();
        let t = price_thresholds(&inst, &mask(2, &[1])).unwrap();
        assert_eq!(t.price, vec![2.8, 0.0]);
        let m = run_vertex_arrival_thresholded(&inst, &mask(2, &[1]), &[0]).unwrap();
        assert_eq!(m.edges(), &[0]);
        let zero = price_thresholds(&inst, &mask(2, &[])).unwrap();
        assert_eq!(zero.price, vec![0.0, 0.0]);
    }

    #[test]
    fn thresholded_equals_direct_on_t1() {
        let inst = t1();
        for bits in 0..4u64 {
            let s = SubsetMask::from_bits(2, bits);
            let online: Vec<usize> = s.complement().iter().collect();
            let mut orders = vec![online.clone()];
            if online.len() == 2 {
                orders.push(vec![online[1], online[0]]);
            }
            for order in orders {
                assert_eq!(
                    run_vertex_arrival(&inst, &s, &order).unwrap(),
                    run_vertex_arrival_thresholded(&inst, &s, &order).unwrap()
                );
            }
        }
    }

    #[test]
    fn edge_runs_on_t1() {
        let inst = t1().to_general();
        let m = run_edge_arrival(&inst, &mask(3, &[1]), &[0, 2]).unwrap();
        assert_eq!((m.edges(), m.weight()), (&[0][..], 3.0));
        let m = run_edge_arrival(&inst, &mask(3, &[]), &[2, 1, 0]).unwrap();
        assert_eq!(m.edges(), &[1, 2]);
        assert!((m.weight() - 5.7).abs() < 1e-12);
        assert!(run_edge_arrival(&inst, &mask(3, &[0, 1, 2]), &[]).unwrap().is_empty());
    }

    #[test]
    fn per_round_matches_precomputed() {
        let inst = t1();
        for bits in 0..4u64 {
            let s = SubsetMask::from_bits(2, bits);
            assert_eq!(
                compute_candidates_vertex_with(&inst, &s, CandidateMode::PerRound).unwrap(),
                compute_candidates_vertex(&inst, &s).unwrap()
            );
        }
        let g = inst.to_general();
        for bits in 0..8u64 {
            let s = SubsetMask::from_bits(3, bits);
            assert_eq!(
                compute_candidates_edge_per_round(&g, &s),
                compute_candidates_edge(&g, &s)
            );
        }
    }

    fn optbased_k2() -> Instance {
        // v = left 0 with weight-100 edges; u_i = left i with a unit edge to r_i
        let edges = vec![
            Edge {
                a: 0,
                b: 0,
                weight: 100.0,
            },
            Edge {
                a: 0,
                b: 1,
                weight: 100.0,
            },
            Edge {
                a: 1,
                b: 0,
                weight: 1.0,
            },
            Edge {
                a: 2,
                b: 1,
                weight: 1.0,
            },
        ];
        Instance::bipartite(3, 2, edges).unwrap()
    }

    #[test]
    fn optbased_examples() {
        let inst = optbased_k2();
        let m = run_vertex_arrival_optbased(&inst, &mask(3, &[1, 2]), &[0]).unwrap();
        assert_eq!(m.weight(), 100.0);
        let m = run_vertex_arrival_optbased(&inst, &mask(3, &[0]), &[1, 2]).unwrap();
        assert_eq!(m.weight(), 2.0);
        assert!(run_vertex_arrival_optbased(&inst, &mask(3, &[0, 1, 2]), &[])
            .unwrap()
            .is_empty());
    }

    #[test]
    fn optbased_candidate_avoids_sampled_partner() {
        let inst = optbased_k2();
        // u_1 sampled: OPT(G[{u_1, v}]) sends v to r_2
        let c = compute_candidates_optbased(&inst, &mask(3, &[1])).unwrap();
        assert_eq!(c[0], Some(1));
        // with u_2 online first, v's candidate is blocked
        let m = run_vertex_arrival_optbased(&inst, &mask(3, &[1]), &[2, 0]).unwrap();
        assert_eq!(m.weight(), 1.0);
    }

    #[test]
    fn general_graph_rejected_for_vertex_arrival() {
        let g = parse_instance("general 2 1\n0 1 1.0").unwrap();
        assert!(matches!(
            run_vertex_arrival(&g, &SubsetMask::empty(2), &[0, 1]),
            Err(Error::KindMismatch(_))
        ));
    }
}
