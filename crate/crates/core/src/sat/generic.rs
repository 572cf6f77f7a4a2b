use super::SatError;
use crate::graph::Graph;

/// Host vertex cap of [`sat_oracle_generic`].
pub const GENERIC_HOST_CAP: usize = 8;
/// Pattern vertex cap of [`sat_oracle_generic`].
pub const GENERIC_PATTERN_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericSatResult {
    pub value: usize,
    pub witness: Graph,
}

/// Adjacency bitmasks, one byte per vertex.
type Adj = [u8; GENERIC_HOST_CAP];

struct Pattern {
    k: usize,
    adj: Vec<u8>,
    edges: Vec<(usize, usize)>,
}

impl Pattern {
    /// Does `h` contain a copy of the pattern that uses the edge `{a, b}`?
    /// Assumes `{a, b}` is present in `h`.
    fn copy_through(&self, h: &Adj, n: usize, a: usize, b: usize) -> bool {
        let mut map = [usize::MAX; GENERIC_PATTERN_CAP];
        for &(x, y) in &self.edges {
            for (s, t) in [(a, b), (b, a)] {
                map[x] = s;
                map[y] = t;
                let used = (1u8 << s) | (1u8 << t);
                if self.extend(h, n, &mut map, used, 0) {
                    return true;
                }
                map[x] = usize::MAX;
                map[y] = usize::MAX;
            }
        }
        false
    }

    fn extend(&self, h: &Adj, n: usize, map: &mut [usize; GENERIC_PATTERN_CAP], used: u8, from: usize) -> bool {
        let Some(x) = (from..self.k).find(|&x| map[x] == usize::MAX) else {
            return true;
        };
        for t in 0..n {
            if used >> t & 1 == 1 {
                continue;
            }
            let fits = (0..self.k)
                .filter(|&y| self.adj[x] >> y & 1 == 1 && map[y] != usize::MAX)
                .all(|y| h[t] >> map[y] & 1 == 1);
            if fits {
                map[x] = t;
                if self.extend(h, n, map, used | (1 << t), x + 1) {
                    return true;
                }
                map[x] = usize::MAX;
            }
        }
        false
    }
}

struct Search<'a> {
    n: usize,
    pattern: &'a Pattern,
    edges: Vec<(usize, usize)>,
    h: Adj,
    /// `H` together with every undecided host edge.
    upper: Adj,
    excluded: Vec<usize>,
    chosen: Vec<bool>,
    best: usize,
    best_chosen: Option<Vec<bool>>,
}

fn add(g: &mut Adj, (u, v): (usize, usize)) {
    g[u] |= 1 << v;
    g[v] |= 1 << u;
}

fn del(g: &mut Adj, (u, v): (usize, usize)) {
    g[u] &= !(1 << v);
    g[v] &= !(1 << u);
}

impl Search<'_> {
    /// Adding `e` to `g` would create a copy of the pattern.
    fn blocked(&self, g: &Adj, e: (usize, usize)) -> bool {
        let mut plus = *g;
        add(&mut plus, e);
        self.pattern.copy_through(&plus, self.n, e.0, e.1)
    }

    fn run(&mut self, i: usize, count: usize) {
        if count >= self.best {
            return;
        }
        if i == self.edges.len() {
            // H is final: every excluded edge must now close a copy
            if self.excluded.iter().all(|&j| self.blocked(&self.h, self.edges[j])) {
                self.best = count;
                self.best_chosen = Some(self.chosen.clone());
            }
            return;
        }
        let e = self.edges[i];

        // leave e out; every excluded edge must still be blockable by the upper graph
        del(&mut self.upper, e);
        self.excluded.push(i);
        let upper = self.upper;
        if self.excluded.iter().all(|&j| self.blocked(&upper, self.edges[j])) {
            self.run(i + 1, count);
        }
        self.excluded.pop();
        add(&mut self.upper, e);

        // take e if H stays pattern-free
        if !self.blocked(&self.h, e) {
            add(&mut self.h, e);
            self.chosen[i] = true;
            self.run(i + 1, count + 1);
            self.chosen[i] = false;
            del(&mut self.h, e);
        }
    }
}

fn to_adj(g: &Graph) -> Adj {
    let mut adj = [0u8; GENERIC_HOST_CAP];
    for e in g.edges() {
        add(&mut adj, e);
    }
    adj
}

/// Exact `sat(G, F)` for small hosts and an arbitrary pattern `F`.
///
/// Branches on every host edge. An edge may join `H` only while `H` stays
/// `F`-free, and an edge left out must still be able to close a copy of `F`
/// in `H` plus the undecided edges.
pub fn sat_oracle_generic(host: &Graph, pattern: &Graph) -> Result<GenericSatResult, SatError> {
    let n = host.n();
    if n > GENERIC_HOST_CAP {
        return Err(SatError::TooLarge {
            what: "the generic oracle",
            n,
            cap: GENERIC_HOST_CAP,
        });
    }
    if pattern.n() > GENERIC_PATTERN_CAP {
        return Err(SatError::PatternTooLarge(pattern.n()));
    }
    if pattern.m() == 0 {
        return Err(SatError::EmptyPattern);
    }
    let pat = Pattern {
        k: pattern.n(),
        adj: (0..pattern.n())
            .map(|v| pattern.neighbors(v).iter().fold(0u8, |a, u| a | (1 << u)))
            .collect(),
        edges: pattern.edges().collect(),
    };
    let edges: Vec<(usize, usize)> = host.edges().collect();

    // a maximal F-free subgraph is saturated and seeds the incumbent
    let mut search = Search {
        n,
        pattern: &pat,
        h: [0; GENERIC_HOST_CAP],
        upper: to_adj(host),
        excluded: Vec::new(),
        chosen: vec![false; edges.len()],
        best: 0,
        best_chosen: None,
        edges,
    };
    let mut greedy = vec![false; search.edges.len()];
    for (i, &e) in search.edges.iter().enumerate() {
        if !search.blocked(&search.h, e) {
            add(&mut search.h, e);
            greedy[i] = true;
        }
    }
    search.h = [0; GENERIC_HOST_CAP];
    search.best = greedy.iter().filter(|&&b| b).count() + 1;
    search.run(0, 0);
    let chosen = search.best_chosen.expect("the greedy subgraph is admissible");
    let kept: Vec<_> = search
        .edges
        .iter()
        .zip(&chosen)
        .filter(|(_, &k)| k)
        .map(|(&e, _)| e)
        .collect();
    Ok(GenericSatResult {
        value: kept.len(),
        witness: Graph::new(n, &kept).expect("host edges"),
    })
}
