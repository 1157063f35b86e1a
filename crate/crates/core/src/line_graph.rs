//! Directed line graph and the two coloring processes used to analyse the
//! greedy-based algorithms.
//!
//! Each edge becomes a node; two intersecting edges are joined by an arc from
//! the heavier to the lighter one. Nodes are visited heaviest-first, which is
//! a topological order.

use crate::error::{Error, Result};
use crate::graph::{Instance, Matching};
use crate::mask::SubsetMask;
use crate::parallel;

/// Default cap on enumerated clusters or nodes.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Red/blue decided per left vertex (vertex arrivals).
    Cluster,
    /// Red/blue decided per node (edge arrivals).
    Node,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Red,
    Blue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineGraph {
    weights: Vec<f64>,
    order: Vec<usize>,
    endpoints: Vec<(usize, usize)>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    // left vertex of each node, bipartite only
    cluster_of: Option<Vec<usize>>,
    clusters: Option<Vec<Vec<usize>>>,
}

pub fn build_line_graph(inst: &Instance) -> LineGraph {
    let m = inst.edge_count();
    let mut out_arcs = vec![Vec::new(); m];
    let mut in_arcs = vec![Vec::new(); m];
    for v in 0..inst.vertex_count() {
        let inc = inst.incident(v);
        for (i, &heavy) in inc.iter().enumerate() {
            for &light in &inc[i + 1..] {
                out_arcs[heavy].push(light);
                in_arcs[light].push(heavy);
            }
        }
    }
    let (cluster_of, clusters) = match inst.sides() {
        Ok((left, _)) => {
            let of: Vec<usize> = (0..m).map(|e| inst.left_of(e)).collect();
            let mut clusters = vec![Vec::new(); left];
            for &e in inst.order().as_slice() {
                clusters[of[e]].push(e);
            }
            (Some(of), Some(clusters))
        }
        Err(_) => (None, None),
    };
    LineGraph {
        weights: inst.weights(),
        order: inst.order().as_slice().to_vec(),
        endpoints: (0..m).map(|e| inst.endpoints(e)).collect(),
        out_arcs,
        in_arcs,
        cluster_of,
        clusters,
    }
}

impl LineGraph {
    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out_arcs.iter().map(Vec::len).sum()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.out_arcs[from].contains(&to)
    }

    pub fn out_arcs(&self, node: usize) -> &[usize] {
        &self.out_arcs[node]
    }

    pub fn in_arcs(&self, node: usize) -> &[usize] {
        &self.in_arcs[node]
    }

    /// Nodes heaviest-first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn weight(&self, node: usize) -> f64 {
        self.weights[node]
    }

    /// Nodes of each left vertex, heaviest-first (bipartite only).
    pub fn clusters(&self) -> Option<&[Vec<usize>]> {
        self.clusters.as_deref()
    }

    fn unit_count(&self, mode: Mode) -> Result<usize> {
        match mode {
            Mode::Node => Ok(self.node_count()),
            Mode::Cluster => self
                .clusters
                .as_ref()
                .map(Vec::len)
                .ok_or_else(|| Error::KindMismatch("cluster mode needs a bipartite instance".into())),
        }
    }

    fn shares(&self, a: usize, v: usize) -> bool {
        let (x, y) = self.endpoints[a];
        x == v || y == v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColoringTrace {
    pub mode: Mode,
    pub color: Vec<Color>,
    pub active: Vec<bool>,
    pub qualifies: Vec<bool>,
    /// Always false in cluster mode.
    pub penalized: Vec<bool>,
    /// Output edge id to the qualifying edges it steals from; filled by
    /// [`ColoringTrace::record_stealing`].
    pub stealing: Vec<(usize, Vec<usize>)>,
}

/// Replay the coloring process for a fixed red set. In cluster mode `sample`
/// ranges over left vertices, in node mode over edges.
pub fn replay_coloring(lg: &LineGraph, sample: &SubsetMask, mode: Mode) -> Result<ColoringTrace> {
    let units = lg.unit_count(mode)?;
    if sample.len() != units {
        return Err(Error::InvalidInstance(format!(
            "sample width {} does not match {units} coloring units",
            sample.len()
        )));
    }
    let n = lg.node_count();
    let unit = |node: usize| match mode {
        Mode::Node => node,
        Mode::Cluster => lg.cluster_of.as_ref().unwrap()[node],
    };
    let color: Vec<Color> = (0..n)
        .map(|v| {
            if sample.contains(unit(v)) {
                Color::Red
            } else {
                Color::Blue
            }
        })
        .collect();
    let mut active = vec![false; n];
    let mut cluster_colored = vec![false; units];
    for &v in &lg.order {
        if mode == Mode::Cluster && cluster_colored[unit(v)] {
            continue;
        }
        let blocked = lg.in_arcs[v].iter().any(|&h| active[h] && color[h] == Color::Red);
        if !blocked {
            active[v] = true;
            cluster_colored[unit(v)] = true;
        }
    }
    let active_blue = |v: usize| active[v] && color[v] == Color::Blue;
    let qualifies: Vec<bool> = (0..n)
        .map(|v| active_blue(v) && !lg.out_arcs[v].iter().any(|&w| active_blue(w)))
        .collect();
    let penalized = (0..n)
        .map(|v| {
            mode == Mode::Node && active_blue(v) && {
                let (x, y) = lg.endpoints[v];
                let hits = |end: usize| lg.out_arcs[v].iter().any(|&w| qualifies[w] && lg.shares(w, end));
                hits(x) && hits(y)
            }
        })
        .collect();
    Ok(ColoringTrace {
        mode,
        color,
        active,
        qualifies,
        penalized,
        stealing: Vec::new(),
    })
}

impl ColoringTrace {
    /// Attribute each qualifying edge missing from `output` to the output
    /// edges that occupy one of its endpoints.
    pub fn record_stealing(&mut self, lg: &LineGraph, output: &Matching) {
        self.stealing.clear();
        for &s in output.edges() {
            let (x, y) = lg.endpoints[s];
            let stolen: Vec<usize> = (0..lg.node_count())
                .filter(|&q| self.qualifies[q] && !output.contains(q))
                .filter(|&q| lg.shares(q, x) || lg.shares(q, y))
                .collect();
            if !stolen.is_empty() {
                self.stealing.push((s, stolen));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EventProbabilities {
    pub active: f64,
    pub qualifies: f64,
    pub penalized: f64,
}

/// Exact probabilities over all 2^k colorings, each unit red with probability `p`.
pub fn exact_event_probabilities(lg: &LineGraph, p: f64, mode: Mode) -> Result<Vec<EventProbabilities>> {
    exact_event_probabilities_with_limit(lg, p, mode, DEFAULT_ENUMERATION_LIMIT)
}

pub fn exact_event_probabilities_with_limit(
    lg: &LineGraph,
    p: f64,
    mode: Mode,
    limit: usize,
) -> Result<Vec<EventProbabilities>> {
    crate::error::check_probability(p)?;
    let k = lg.unit_count(mode)?;
    if k > limit {
        return Err(Error::Capacity {
            what: "coloring units",
            size: k,
            limit,
        });
    }
    let n = lg.node_count();
    let sums = parallel::indexed_sum(1 << k, 3 * n, |bits, acc| {
        let sample = SubsetMask::from_bits(k, bits as u64);
        let red = sample.count() as i32;
        let prob = p.powi(red) * (1.0 - p).powi(k as i32 - red);
        if prob == 0.0 {
            return;
        }
        let trace = replay_coloring(lg, &sample, mode).expect("width checked");
        for v in 0..n {
            if trace.active[v] {
                acc[3 * v] += prob;
            }
            if trace.qualifies[v] {
                acc[3 * v + 1] += prob;
            }
            if trace.penalized[v] {
                acc[3 * v + 2] += prob;
            }
        }
    });
    Ok((0..n)
        .map(|v| EventProbabilities {
            active: sums[3 * v],
            qualifies: sums[3 * v + 1],
            penalized: sums[3 * v + 2],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::t1;
    use crate::graph::parse_instance;

    #[test]
    fn t1_arcs() {
        let lg = build_line_graph(&t1());
        assert_eq!(lg.node_count(), 3);
        assert!(lg.has_arc(0, 1) && lg.has_arc(0, 2));
        assert!(!lg.has_arc(1, 2) && !lg.has_arc(2, 1));
        assert_eq!(lg.arc_count(), 2);
        assert_eq!(lg.clusters().unwrap(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn trivial_graphs() {
        let single = build_line_graph(&parse_instance("general 2 1\n0 1 1.0").unwrap());
        assert_eq!((single.node_count(), single.arc_count()), (1, 0));
        let disjoint = build_line_graph(&parse_instance("general 4 2\n0 1 1.0\n2 3 2.0").unwrap());
        assert_eq!((disjoint.node_count(), disjoint.arc_count()), (2, 0));
    }

    #[test]
    fn t1_cluster_replay() {
        let lg = build_line_graph(&t1());
        let trace = replay_coloring(&lg, &SubsetMask::from_indices(2, [1]), Mode::Cluster).unwrap();
        assert_eq!(trace.active, vec![true, false, true]);
        assert_eq!(trace.color, vec![Color::Blue, Color::Blue, Color::Red]);
        // v0 is blue with no active blue successor
        assert_eq!(trace.qualifies, vec![true, false, false]);
    }

    #[test]
    fn t1_node_replay() {
        let lg = build_line_graph(&t1());
        let trace = replay_coloring(&lg, &SubsetMask::from_indices(3, [0]), Mode::Node).unwrap();
        assert_eq!(trace.active, vec![true, false, false]);
        let empty = replay_coloring(&lg, &SubsetMask::empty(3), Mode::Node).unwrap();
        assert_eq!(empty.active, vec![true; 3]);
        assert_eq!(empty.color, vec![Color::Blue; 3]);
    }

    #[test]
    fn cluster_mode_needs_bipartite() {
        let lg = build_line_graph(&t1().to_general());
        assert!(matches!(
            replay_coloring(&lg, &SubsetMask::empty(2), Mode::Cluster),
            Err(Error::KindMismatch(_))
        ));
    }

    #[test]
    fn t1_probabilities() {
        let lg = build_line_graph(&t1());
        for p in [0.0, 0.3, 0.5, 1.0] {
            let cl = exact_event_probabilities(&lg, p, Mode::Cluster).unwrap();
            let act: Vec<f64> = cl.iter().map(|e| e.active).collect();
            for (got, want) in act.iter().zip([1.0, 0.0, 1.0 - p]) {
                assert!((got - want).abs() < 1e-12);
            }
            let nd = exact_event_probabilities(&lg, p, Mode::Node).unwrap();
            for (got, want) in nd.iter().map(|e| e.active).zip([1.0, 1.0 - p, 1.0 - p]) {
                assert!((got - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn p_zero_makes_every_node_active() {
        let inst = parse_instance("general 4 4\n0 1 4\n1 2 3\n2 3 2\n3 0 1").unwrap();
        let lg = build_line_graph(&inst);
        let probs = exact_event_probabilities(&lg, 0.0, Mode::Node).unwrap();
        assert!(probs.iter().all(|e| e.active == 1.0));
    }

    #[test]
    fn enumeration_limit() {
        let edges: String = (0..21).map(|i| format!("{} {} 1.0\n", 2 * i, 2 * i + 1)).collect();
        let inst = parse_instance(&format!("general 42 21\n{edges}")).unwrap();
        let lg = build_line_graph(&inst);
        assert!(matches!(
            exact_event_probabilities(&lg, 0.5, Mode::Node),
            Err(Error::Capacity { size: 21, .. })
        ));
    }
}
