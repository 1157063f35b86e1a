//! Weighted matching instances, the heaviest-first edge order, and matchings.
//!
//! Vertices are addressed by a single global id. For bipartite instances the
//! left side occupies `0..left` and the right side `left..left + right`; the
//! [`Edge`] record keeps the side-local indices exactly as they appear in the
//! instance file.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Bipartite { left: usize, right: usize },
    General { vertices: usize },
}

/// One edge as written in the instance file. For bipartite instances `a` is a
/// left index and `b` a right index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Edge ids sorted heaviest-first, ties broken by ascending id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrder {
    sequence: Vec<usize>,
    rank: Vec<usize>,
}

impl EdgeOrder {
    fn new(edges: &[Edge]) -> Self {
        let mut sequence: Vec<usize> = (0..edges.len()).collect();
        sequence.sort_by(|&x, &y| edges[y].weight.total_cmp(&edges[x].weight).then(x.cmp(&y)));
        let mut rank = vec![0; edges.len()];
        for (pos, &e) in sequence.iter().enumerate() {
            rank[e] = pos;
        }
        EdgeOrder { sequence, rank }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.sequence
    }

    /// Position of `e` in the order; 0 is the heaviest edge.
    #[inline]
    pub fn rank(&self, e: usize) -> usize {
        self.rank[e]
    }

    /// Strict comparison: `e` precedes `f`.
    #[inline]
    pub fn heavier(&self, e: usize, f: usize) -> bool {
        self.rank[e] < self.rank[f]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    kind: InstanceKind,
    edges: Vec<Edge>,
    opt_certificate: Option<f64>,
    order: EdgeOrder,
    // per global vertex, incident edge ids heaviest first
    incident: Vec<Vec<usize>>,
    endpoints: Vec<(usize, usize)>,
}

impl Instance {
    pub fn new(kind: InstanceKind, edges: Vec<Edge>) -> Result<Self> {
        let n = match kind {
            InstanceKind::Bipartite { left, right } => left + right,
            InstanceKind::General { vertices } => vertices,
        };
        let mut endpoints = Vec::with_capacity(edges.len());
        let mut seen = HashSet::with_capacity(edges.len());
        for (id, edge) in edges.iter().enumerate() {
            if !edge.weight.is_finite() || edge.weight < 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "edge {id}: weight {} must be finite and non-negative",
                    edge.weight
                )));
            }
            let (x, y) = match kind {
                InstanceKind::Bipartite { left, right } => {
                    if edge.a >= left || edge.b >= right {
                        return Err(Error::InvalidInstance(format!(
                            "edge {id}: endpoint ({}, {}) out of range for {left}x{right}",
                            edge.a, edge.b
                        )));
                    }
                    (edge.a, left + edge.b)
                }
                InstanceKind::General { vertices } => {
                    if edge.a >= vertices || edge.b >= vertices {
                        return Err(Error::InvalidInstance(format!(
                            "edge {id}: endpoint ({}, {}) out of range for {vertices} vertices",
                            edge.a, edge.b
                        )));
                    }
                    if edge.a == edge.b {
                        return Err(Error::InvalidInstance(format!("edge {id}: self-loop")));
                    }
                    (edge.a.min(edge.b), edge.a.max(edge.b))
                }
            };
            if !seen.insert((x, y)) {
                return Err(Error::InvalidInstance(format!(
                    "edge {id}: duplicate edge ({}, {})",
                    edge.a, edge.b
                )));
            }
            endpoints.push((x, y));
        }
        let order = EdgeOrder::new(&edges);
        let mut incident = vec![Vec::new(); n];
        for &e in order.as_slice() {
            let (x, y) = endpoints[e];
            incident[x].push(e);
            incident[y].push(e);
        }
        Ok(Instance {
            kind,
            edges,
            opt_certificate: None,
            order,
            incident,
            endpoints,
        })
    }

    pub fn bipartite(left: usize, right: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::new(InstanceKind::Bipartite { left, right }, edges)
    }

    pub fn general(vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::new(InstanceKind::General { vertices }, edges)
    }

    pub fn with_certificate(mut self, opt: f64) -> Self {
        self.opt_certificate = Some(opt);
        self
    }

    /// Same topology with replaced weights. The certificate is dropped.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::InvalidInstance(format!(
                "expected {} weights, got {}",
                self.edges.len(),
                weights.len()
            )));
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, &w)| Edge { weight: w, ..*e })
            .collect();
        Self::new(self.kind, edges)
    }

    /// Forget the bipartition; edge ids and weights are unchanged.
    pub fn to_general(&self) -> Self {
        match self.kind {
            InstanceKind::General { .. } => self.clone(),
            InstanceKind::Bipartite { left, right } => {
                let edges = self
                    .endpoints
                    .iter()
                    .zip(&self.edges)
                    .map(|(&(x, y), e)| Edge {
                        a: x,
                        b: y,
                        weight: e.weight,
                    })
                    .collect();
                let mut general =
                    Self::general(left + right, edges).expect("bipartite instance is a valid general instance");
                general.opt_certificate = self.opt_certificate;
                general
            }
        }
    }

    pub fn kind(&self) -> InstanceKind {
        self.kind
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.kind, InstanceKind::Bipartite { .. })
    }

    /// `(left, right)` sizes, or a kind error for general graphs.
    pub fn sides(&self) -> Result<(usize, usize)> {
        match self.kind {
            InstanceKind::Bipartite { left, right } => Ok((left, right)),
            InstanceKind::General { .. } => Err(Error::KindMismatch("operation requires a bipartite instance".into())),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.incident.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn weight(&self, e: usize) -> f64 {
        self.edges[e].weight
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    /// Global vertex ids of the endpoints of `e`.
    #[inline]
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e]
    }

    /// Incident edges of global vertex `v`, heaviest first.
    #[inline]
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn order(&self) -> &EdgeOrder {
        &self.order
    }

    pub fn opt_certificate(&self) -> Option<f64> {
        self.opt_certificate
    }

    /// Left endpoint (side-local index) of a bipartite edge.
    #[inline]
    pub fn left_of(&self, e: usize) -> usize {
        self.endpoints[e].0
    }

    /// Right endpoint as a global vertex id.
    #[inline]
    pub fn right_of(&self, e: usize) -> usize {
        self.endpoints[e].1
    }
}

/// Heaviest-first order of the instance's edges (weight desc, id asc).
pub fn edge_order(inst: &Instance) -> &EdgeOrder {
    inst.order()
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    edges: Vec<usize>,
    weight: f64,
}

impl Matching {
    pub fn empty() -> Self {
        Matching {
            edges: Vec::new(),
            weight: 0.0,
        }
    }

    /// Validates vertex-disjointness.
    pub fn new(inst: &Instance, edges: impl IntoIterator<Item = usize>) -> Result<Self> {
        let edges: Vec<usize> = edges.into_iter().collect();
        let mut used = HashSet::with_capacity(2 * edges.len());
        for &e in &edges {
            if e >= inst.edge_count() {
                return Err(Error::InvalidInstance(format!("edge id {e} out of range")));
            }
            let (x, y) = inst.endpoints(e);
            if !used.insert(x) || !used.insert(y) {
                return Err(Error::InvalidInstance(format!(
                    "edge {e} shares an endpoint with another matching edge"
                )));
            }
        }
        Ok(Self::from_disjoint(inst, edges))
    }

    pub(crate) fn from_disjoint(inst: &Instance, mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let weight = edges.iter().map(|&e| inst.weight(e)).sum();
        Matching { edges, weight }
    }

    /// Edge ids in ascending order.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (kind, m) = match fields.as_slice() {
        ["bipartite", l, r, m] => (
            InstanceKind::Bipartite {
                left: parse_count(header_line, l)?,
                right: parse_count(header_line, r)?,
            },
            parse_count(header_line, m)?,
        ),
        ["general", n, m] => (
            InstanceKind::General {
                vertices: parse_count(header_line, n)?,
            },
            parse_count(header_line, m)?,
        ),
        _ => return Err(Error::parse(header_line, format!("malformed header {header:?}"))),
    };
    let (nx, ny) = match kind {
        InstanceKind::Bipartite { left, right } => (left, right),
        InstanceKind::General { vertices } => (vertices, vertices),
    };

    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    for i in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(header_line, format!("expected {m} edges, found {i}")))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b, w] = fields.as_slice() else {
            return Err(Error::parse(ln, format!("malformed edge line {line:?}")));
        };
        let a = parse_count(ln, a)?;
        let b = parse_count(ln, b)?;
        let weight: f64 = w
            .parse()
            .map_err(|_| Error::parse(ln, format!("invalid weight {w:?}")))?;
        if a >= nx || b >= ny {
            return Err(Error::parse(ln, format!("endpoint out of range: {a} {b}")));
        }
        if weight < 0.0 {
            return Err(Error::parse(ln, "negative weight"));
        }
        if !weight.is_finite() {
            return Err(Error::parse(ln, "non-finite weight"));
        }
        if matches!(kind, InstanceKind::General { .. }) && a == b {
            return Err(Error::parse(ln, "self-loop"));
        }
        let key = match kind {
            InstanceKind::Bipartite { .. } => (a, b),
            InstanceKind::General { .. } => (a.min(b), a.max(b)),
        };
        if !seen.insert(key) {
            return Err(Error::parse(ln, format!("duplicate edge {a} {b}")));
        }
        edges.push(Edge { a, b, weight });
    }

    let mut certificate = None;
    if let Some((ln, line)) = lines.next() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["OPT", v] => {
                let v: f64 = v
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("invalid OPT value {v:?}")))?;
                certificate = Some(v);
            }
            _ => return Err(Error::parse(ln, format!("unexpected line {line:?}"))),
        }
    }
    if let Some((ln, line)) = lines.next() {
        return Err(Error::parse(ln, format!("unexpected line {line:?}")));
    }

    let inst = Instance::new(kind, edges).map_err(|e| Error::parse(header_line, e.to_string()))?;
    Ok(match certificate {
        Some(v) => inst.with_certificate(v),
        None => inst,
    })
}

fn parse_count(line: usize, field: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got {field:?}")))
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    match inst.kind {
        InstanceKind::Bipartite { left, right } => {
            writeln!(out, "bipartite {left} {right} {}", inst.edge_count()).unwrap()
        }
        InstanceKind::General { vertices } => writeln!(out, "general {vertices} {}", inst.edge_count()).unwrap(),
    }
    for e in &inst.edges {
        // `{:?}` prints the shortest representation that parses back bit-exactly.
        writeln!(out, "{} {} {:?}", e.a, e.b, e.weight).unwrap();
    }
    if let Some(opt) = inst.opt_certificate {
        writeln!(out, "OPT {opt:?}").unwrap();
    }
    out
}
