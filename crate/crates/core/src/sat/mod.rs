//! Star saturation: verification, exact solvers and lower-bound certificates.
//!
//! A spanning subgraph `H` of a host `G` is `K_{1,r}`-saturated when its
//! maximum degree is at most `r - 1` and every host edge missing from `H`
//! has an endpoint of `H`-degree exactly `r - 1`. Splitting the vertices of
//! such an `H` into `V1` (degree at most `r - 2`) and `V2` (degree `r - 1`)
//! forces every host edge inside `V1` into `H`, which gives
//! `|E(H)| = e(V1) + ((r - 1)|V2| + c) / 2` with `c` the number of `V1`-`V2`
//! edges of `H`. The structured solver minimises that expression directly.

mod completion;
mod generic;
mod lemma;
mod oracle;
mod structured;
mod verify;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

pub use completion::{min_completion, Completion};
pub use generic::{sat_oracle_generic, GenericSatResult, GENERIC_HOST_CAP, GENERIC_PATTERN_CAP};
pub use lemma::{check_lemma1, lemma1_threshold, Lemma1Counterexample, Lemma1Report, DEFAULT_K_SPAN};
pub use oracle::{sat_exact_oracle, ORACLE_CAP};
pub use structured::{sat_exact_structured, STRUCTURED_CAP};
pub use verify::{is_star_saturated, Verdict, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("H is not a spanning subgraph of the host")]
    NotSpanning,
    #[error("{what} is capped at n <= {cap} (got n = {n})")]
    TooLarge { what: &'static str, n: usize, cap: usize },
    #[error("pattern graph has {0} vertices; the generic oracle handles at most 5")]
    PatternTooLarge(usize),
    #[error("pattern graph has no edges")]
    EmptyPattern,
    #[error("star size r = {0} must be at least 2")]
    InvalidStar(usize),
    #[error("vertex {v} has {degree} host neighbours inside V1, more than r - 2 = {limit}")]
    V1DegreeTooHigh { v: usize, degree: usize, limit: usize },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("no saturated subgraph was found: {0}")]
    NoSaturatedSubgraph(String),
    #[error("subgraph is not saturated: {0}")]
    NotSaturated(Violation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Oracle,
    Structured,
}

/// A verified saturated subgraph together with its degree decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatedSubgraph {
    pub h: Graph,
    /// Vertices of `H`-degree at most `r - 2`.
    pub v1: Vec<usize>,
    /// Vertices of `H`-degree exactly `r - 1`.
    pub v2: Vec<usize>,
    /// `H`-edges between `v1` and `v2`.
    pub cross_edges: usize,
    pub edge_count: usize,
    pub r: usize,
}

impl SaturatedSubgraph {
    /// Verifies `h` against `host` and classifies its vertices.
    pub fn new(host: &Graph, h: Graph, r: usize) -> Result<SaturatedSubgraph, SatError> {
        if r < 2 {
            return Err(SatError::InvalidStar(r));
        }
        if let Verdict::Violated(v) = is_star_saturated(host, &h, r)? {
            return Err(SatError::NotSaturated(v));
        }
        let (v1, v2): (Vec<usize>, Vec<usize>) = (0..h.n()).partition(|&v| h.degree(v) + 2 <= r);
        let v1_set = VertexSet::from_slice(h.n(), &v1);
        let cross_edges = v2.iter().map(|&v| h.degree_in(v, &v1_set)).sum();
        let s = SaturatedSubgraph {
            edge_count: h.m(),
            h,
            v1,
            v2,
            cross_edges,
            r,
        };
        debug_assert!(s.decomposition_holds(host));
        Ok(s)
    }

    pub fn v1_edges(&self) -> usize {
        self.h.induced_edge_count(&self.v1).expect("in range")
    }

    /// The edge-count identity, and that `V1` is induced from the host.
    pub fn decomposition_holds(&self, host: &Graph) -> bool {
        let twice = (self.r - 1) * self.v2.len() + self.cross_edges;
        let host_v1 = host.induced_edge_count(&self.v1).expect("in range");
        twice.is_multiple_of(2) && self.edge_count == self.v1_edges() + twice / 2 && host_v1 == self.v1_edges()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub value: usize,
    pub witness: SaturatedSubgraph,
    pub method: Method,
    /// Exhaustively proven optimal.
    pub proven: bool,
}

/// Any maximal `K_{1,r}`-free subgraph is saturated; this one adds host edges
/// greedily in lexicographic order.
pub(crate) fn greedy_saturated(host: &Graph, r: usize) -> Graph {
    let n = host.n();
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in host.edges() {
        if deg[u] + 1 < r && deg[v] + 1 < r {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges).expect("host edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_is_saturated() {
        for n in 2..9 {
            for r in 2..5 {
                let host = Graph::complete(n);
                let h = greedy_saturated(&host, r);
                let s = SaturatedSubgraph::new(&host, h, r).unwrap();
                assert!(s.decomposition_holds(&host));
            }
        }
    }

    #[test]
    fn decomposition_fields() {
        // K_{1,4} host, center 0; H = two spokes
        let host = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let h = Graph::new(5, &[(0, 1), (0, 2)]).unwrap();
        let s = SaturatedSubgraph::new(&host, h, 3).unwrap();
        assert_eq!(s.v2, vec![0]);
        assert_eq!(s.v1, vec![1, 2, 3, 4]);
        assert_eq!(s.cross_edges, 2);
        assert_eq!(s.edge_count, 2);
    }
}
