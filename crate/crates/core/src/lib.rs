//! Sample-based online weighted matching.
//!
//! Greedy-based online algorithms for vertex arrivals in bipartite graphs and
//! edge arrivals in general graphs, evaluated in the random-order, AOSp and
//! two-faced models. Exact expectations come from enumerating samples; larger
//! instances go through seeded Monte Carlo.

pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod hungarian;
pub mod line_graph;
pub mod mask;
pub mod models;
pub mod offline;
pub mod online;
pub mod parallel;
pub mod rng;

pub use error::{Error, Result};
pub use experiments::{
    estimate, exact_report, monte_carlo, theoretical_curve, AdversaryPolicy, Algorithm, EstimationMode,
    ExperimentConfig, Model, RatioEstimate,
};
pub use generators::GeneratorSpec;
pub use graph::{edge_order, parse_instance, serialize_instance, Edge, EdgeOrder, Instance, InstanceKind, Matching};
pub use mask::SubsetMask;
pub use models::Arrival;
pub use offline::{greedy_matching, greedy_on_vertex_subset, max_weight_matching, opt_value, OptOracle};
