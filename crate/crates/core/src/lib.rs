//! Star saturation numbers `sat(G, K_{1,r})`: exact solvers for small hosts,
//! an explicit near-optimal construction for random hosts, and a seeded
//! experiment harness comparing both against the predicted concentration
//! window for `G(n, p)`.

pub mod construct;
pub mod experiment;
pub mod graph;
pub mod rng;
pub mod sat;
pub mod sparse;
pub mod theory;

pub use graph::{Graph, GraphError, VertexSet};
pub use rng::Seed;
