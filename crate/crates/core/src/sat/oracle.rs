use super::{greedy_saturated, Method, SatError, SatResult, SaturatedSubgraph};
use crate::graph::Graph;

/// Vertex cap of [`sat_exact_oracle`].
pub const ORACLE_CAP: usize = 12;

struct EdgeSearch {
    edges: Vec<(usize, usize)>,
    full: usize,
    deg: Vec<usize>,
    /// Undecided host edges at each vertex.
    open: Vec<usize>,
    /// Excluded host edges, as neighbour masks.
    excluded: Vec<u16>,
    chosen: Vec<bool>,
    best: usize,
    best_edges: Option<Vec<bool>>,
}

impl EdgeSearch {
    /// `None` when some excluded edge can no longer be blocked, otherwise a
    /// lower bound on the final edge count.
    fn bound(&self, in_h: usize) -> Option<usize> {
        let n = self.deg.len();
        let mut stuck = 0u16;
        for v in 0..n {
            if self.deg[v] + self.open[v] < self.full {
                stuck |= 1 << v;
            }
        }
        let mut missing = 0;
        for v in 0..n {
            if self.excluded[v] & stuck != 0 {
                if stuck >> v & 1 == 1 {
                    return None;
                }
                missing += self.full - self.deg[v];
            }
        }
        Some(in_h + missing.div_ceil(2))
    }

    fn run(&mut self, i: usize, in_h: usize) {
        match self.bound(in_h) {
            Some(lb) if lb < self.best => {}
            _ => return,
        }
        if i == self.edges.len() {
            self.best = in_h;
            self.best_edges = Some(self.chosen.clone());
            return;
        }
        let (u, v) = self.edges[i];
        self.open[u] -= 1;
        self.open[v] -= 1;

        self.excluded[u] |= 1 << v;
        self.excluded[v] |= 1 << u;
        self.run(i + 1, in_h);
        self.excluded[u] &= !(1 << v);
        self.excluded[v] &= !(1 << u);

        if self.deg[u] < self.full && self.deg[v] < self.full {
            self.deg[u] += 1;
            self.deg[v] += 1;
            self.chosen[i] = true;
            self.run(i + 1, in_h + 1);
            self.chosen[i] = false;
            self.deg[u] -= 1;
            self.deg[v] -= 1;
        }

        self.open[u] += 1;
        self.open[v] += 1;
    }
}

/// Exact `sat(G, K_{1,r})` by branching on every host edge, in or out of `H`.
///
/// Independent of the `V1`/`V2` decomposition; used to validate
/// [`super::sat_exact_structured`].
pub fn sat_exact_oracle(host: &Graph, r: usize) -> Result<SatResult, SatError> {
    let n = host.n();
    if n > ORACLE_CAP {
        return Err(SatError::TooLarge {
            what: "the edge-branching oracle",
            n,
            cap: ORACLE_CAP,
        });
    }
    if r < 2 {
        return Err(SatError::InvalidStar(r));
    }
    let edges: Vec<_> = host.edges().collect();
    let greedy = greedy_saturated(host, r);
    let mut search = EdgeSearch {
        full: r - 1,
        deg: vec![0; n],
        open: (0..n).map(|v| host.degree(v)).collect(),
        excluded: vec![0; n],
        chosen: vec![false; edges.len()],
        best: greedy.m(),
        best_edges: None,
        edges,
    };
    search.run(0, 0);
    let h = match &search.best_edges {
        Some(mask) => {
            let kept: Vec<_> = search
                .edges
                .iter()
                .zip(mask)
                .filter(|(_, &k)| k)
                .map(|(&e, _)| e)
                .collect();
            Graph::new(n, &kept).expect("host edges")
        }
        None => greedy,
    };
    let witness = SaturatedSubgraph::new(host, h, r)?;
    Ok(SatResult {
        value: witness.edge_count,
        witness,
        method: Method::Oracle,
        proven: true,
    })
}
