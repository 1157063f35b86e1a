//! Offline greedy matching and exact maximum-weight matching.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Instance, Matching};
use crate::hungarian;
use crate::mask::SubsetMask;

/// Vertex limit of the subset DP used for general graphs.
pub const DEFAULT_EXACT_LIMIT: usize = 22;

const CERTIFICATE_TOLERANCE: f64 = 1e-9;

/// Scan the heaviest-first order over the edges accepted by `keep`, taking an
/// edge whenever both endpoints are free. Returns, per global vertex, the rank
/// of the edge that matched it (`usize::MAX` if unmatched), and the matched
/// edge ids in scan order.
pub(crate) fn greedy_scan(inst: &Instance, keep: impl Fn(usize) -> bool) -> (Vec<usize>, Vec<usize>) {
    let mut matched_rank = vec![usize::MAX; inst.vertex_count()];
    let mut taken = Vec::new();
    for (rank, &e) in inst.order().as_slice().iter().enumerate() {
        if !keep(e) {
            continue;
        }
        let (x, y) = inst.endpoints(e);
        if matched_rank[x] == usize::MAX && matched_rank[y] == usize::MAX {
            matched_rank[x] = rank;
            matched_rank[y] = rank;
            taken.push(e);
        }
    }
    (matched_rank, taken)
}

pub fn greedy_matching(inst: &Instance, allowed_edges: &SubsetMask) -> Matching {
    let (_, taken) = greedy_scan(inst, |e| allowed_edges.contains(e));
    Matching::from_disjoint(inst, taken)
}

/// Greedy on `G[U ∪ R]` for a set `U` of left vertices.
pub fn greedy_on_vertex_subset(inst: &Instance, left_subset: &SubsetMask) -> Result<Matching> {
    inst.sides()?;
    let (_, taken) = greedy_scan(inst, |e| left_subset.contains(inst.left_of(e)));
    Ok(Matching::from_disjoint(inst, taken))
}

/// Maximum-weight matching of the whole instance. If the instance carries an
/// OPT certificate the result is checked against it.
pub fn max_weight_matching(inst: &Instance) -> Result<Matching> {
    max_weight_matching_with_limit(inst, DEFAULT_EXACT_LIMIT)
}

pub fn max_weight_matching_with_limit(inst: &Instance, limit: usize) -> Result<Matching> {
    let all = SubsetMask::full(inst.edge_count());
    let m = max_weight_on_edges(inst, &all, limit)?;
    if let Some(opt) = inst.opt_certificate() {
        if (m.weight() - opt).abs() > CERTIFICATE_TOLERANCE * opt.abs().max(1.0) {
            return Err(Error::InvalidInstance(format!(
                "OPT certificate {opt} disagrees with computed maximum {}",
                m.weight()
            )));
        }
    }
    Ok(m)
}

/// OPT(G): exact when within the solver limit, otherwise the certificate.
pub fn opt_value(inst: &Instance) -> Result<f64> {
    match max_weight_matching(inst) {
        Ok(m) => Ok(m.weight()),
        Err(Error::Capacity { .. }) if inst.opt_certificate().is_some() => Ok(inst.opt_certificate().unwrap()),
        Err(e) => Err(e),
    }
}

/// Maximum-weight matching restricted to `allowed` edges.
pub fn max_weight_on_edges(inst: &Instance, allowed: &SubsetMask, limit: usize) -> Result<Matching> {
    let edges: Vec<usize> = allowed.iter().filter(|&e| e < inst.edge_count()).collect();
    if inst.is_bipartite() {
        Ok(bipartite_max(inst, &edges))
    } else {
        general_max(inst, &edges, limit)
    }
}

fn bipartite_max(inst: &Instance, edges: &[usize]) -> Matching {
    let mut row_of = HashMap::new();
    let mut col_of = HashMap::new();
    for &e in edges {
        let (x, y) = inst.endpoints(e);
        let n = row_of.len();
        row_of.entry(x).or_insert(n);
        let n = col_of.len();
        col_of.entry(y).or_insert(n);
    }
    let (rows, cols) = (row_of.len(), col_of.len());
    let transpose = rows > cols;
    let (nr, nc) = if transpose { (cols, rows) } else { (rows, cols) };
    if nr == 0 {
        return Matching::empty();
    }
    let mut costs = vec![vec![0.0; nc]; nr];
    let mut edge_at = vec![usize::MAX; nr * nc];
    for &e in edges {
        let (x, y) = inst.endpoints(e);
        let (mut i, mut j) = (row_of[&x], col_of[&y]);
        if transpose {
            std::mem::swap(&mut i, &mut j);
        }
        costs[i][j] = -inst.weight(e);
        edge_at[i * nc + j] = e;
    }
    let assignment = hungarian::solve(&costs, nc);
    let chosen = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| edge_at[i * nc + j])
        .filter(|&e| e != usize::MAX)
        .collect();
    Matching::from_disjoint(inst, chosen)
}

fn general_max(inst: &Instance, edges: &[usize], limit: usize) -> Result<Matching> {
    let mut index = HashMap::new();
    for &e in edges {
        let (x, y) = inst.endpoints(e);
        for v in [x, y] {
            let n = index.len();
            index.entry(v).or_insert(n);
        }
    }
    let n = index.len();
    if n > limit {
        return Err(Error::Capacity {
            what: "exact matching vertices",
            size: n,
            limit,
        });
    }
    // adjacency in compressed ids: (neighbour, edge)
    let mut adj = vec![Vec::new(); n];
    for &e in edges {
        let (x, y) = inst.endpoints(e);
        let (a, b) = (index[&x], index[&y]);
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let size = 1usize << n;
    let mut best = vec![0.0f64; size];
    let mut choice = vec![u32::MAX; size];
    for mask in 1..size {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut value = best[rest];
        let mut pick = u32::MAX;
        for &(x, e) in &adj[v] {
            if rest >> x & 1 == 1 {
                let cand = inst.weight(e) + best[rest & !(1 << x)];
                if cand > value {
                    value = cand;
                    pick = e as u32;
                }
            }
        }
        best[mask] = value;
        choice[mask] = pick;
    }
    let mut chosen = Vec::new();
    let mut mask = size - 1;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        match choice[mask] {
            u32::MAX => mask &= !(1 << v),
            e => {
                let (x, y) = inst.endpoints(e as usize);
                mask &= !(1 << index[&x]) & !(1 << index[&y]);
                chosen.push(e as usize);
            }
        }
    }
    Ok(Matching::from_disjoint(inst, chosen))
}

/// Repeated OPT(G[U ∪ R]) queries on one bipartite instance.
///
/// Left vertices with identical neighbourhoods whose edge weights form a
/// dominance chain are interchangeable up to that chain, so at most
/// `|N(u)|` of them (the strongest present ones) can matter in any query.
#[derive(Debug, Clone)]
pub struct OptOracle<'a> {
    inst: &'a Instance,
    // classes of left vertices, strongest first; `cap` is the neighbourhood size
    classes: Vec<(Vec<usize>, usize)>,
}

impl<'a> OptOracle<'a> {
    pub fn new(inst: &'a Instance) -> Result<Self> {
        let (left, _) = inst.sides()?;
        let mut by_nbrs: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut keys = Vec::new();
        for u in 0..left {
            let mut nbrs: Vec<usize> = inst.incident(u).iter().map(|&e| inst.right_of(e)).collect();
            nbrs.sort_unstable();
            if nbrs.is_empty() {
                continue;
            }
            let entry = by_nbrs.entry(nbrs.clone()).or_default();
            if entry.is_empty() {
                keys.push(nbrs);
            }
            entry.push(u);
        }
        let mut classes = Vec::new();
        for key in keys {
            let mut members = by_nbrs.remove(&key).unwrap();
            let weights = |u: usize| -> Vec<f64> {
                let mut w: Vec<(usize, f64)> = inst
                    .incident(u)
                    .iter()
                    .map(|&e| (inst.right_of(e), inst.weight(e)))
                    .collect();
                w.sort_unstable_by_key(|&(r, _)| r);
                w.into_iter().map(|(_, w)| w).collect()
            };
            let profiles: HashMap<usize, Vec<f64>> = members.iter().map(|&u| (u, weights(u))).collect();
            members.sort_by(|a, b| {
                let total = |u: &usize| profiles[u].iter().sum::<f64>();
                total(b).total_cmp(&total(a)).then(a.cmp(b))
            });
            let chain = members
                .windows(2)
                .all(|pair| profiles[&pair[0]].iter().zip(&profiles[&pair[1]]).all(|(a, b)| a >= b));
            if chain {
                classes.push((members, key.len()));
            } else {
                classes.extend(members.into_iter().map(|u| (vec![u], usize::MAX)));
            }
        }
        Ok(OptOracle { inst, classes })
    }

    /// Left vertices kept for the query after dropping dominated twins.
    pub fn reduced_rows(&self, present: &SubsetMask) -> Vec<usize> {
        let mut rows = Vec::new();
        for (members, cap) in &self.classes {
            rows.extend(members.iter().copied().filter(|&u| present.contains(u)).take(*cap));
        }
        rows
    }

    pub fn matching(&self, present: &SubsetMask) -> Matching {
        let edges: Vec<usize> = self
            .reduced_rows(present)
            .into_iter()
            .flat_map(|u| self.inst.incident(u).iter().copied())
            .collect();
        bipartite_max(self.inst, &edges)
    }

    pub fn value(&self, present: &SubsetMask) -> f64 {
        self.matching(present).weight()
    }
}
