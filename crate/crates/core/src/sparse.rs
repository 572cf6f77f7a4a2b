//! Largest vertex sets inducing few edges.
//!
//! The search is a bitset branch and bound in the style of MCQ/BBMC max-clique
//! solvers, run on "cliques of G" instead of independent sets: candidates are
//! greedily partitioned into G-cliques, and a set that induces at most `s`
//! more edges can take at most one vertex per clique plus whatever the edge
//! slack pays for. The slack bound also charges each candidate its edges into
//! the current set.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// Default node budget for [`max_sparse_set`].
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Vertex cap for exhaustive counting.
pub const COUNT_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SparseError {
    #[error("exhaustive counting is capped at n <= {cap} (got n = {n})")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SparseMode {
    /// At most `m` induced edges.
    AtMost,
    /// Exactly `m` induced edges.
    Exactly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseSetResult {
    /// Ascending vertex ids.
    pub set: Vec<usize>,
    pub induced_edges: usize,
    pub size: usize,
    /// The search finished within budget, so `size` is optimal.
    pub exact: bool,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

#[derive(Clone, Copy)]
enum Goal {
    Maximize { exact_edges: Option<usize> },
    Reach(usize),
}

struct Search {
    /// Graph relabelled so that bit order is the search order.
    g: Graph,
    label: Vec<usize>,
    edge_budget: usize,
    goal: Goal,
    cost: Vec<u32>,
    chosen: Vec<usize>,
    edges: usize,
    best: Option<(Vec<usize>, usize)>,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
    found: bool,
}

/// Smallest-last order on the complement of `g`: vertices of large G-degree
/// (small complement degree) are peeled off first and end up last.
fn complement_degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut remaining = VertexSet::full(n);
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut tail = Vec::with_capacity(n);
    for _ in 0..n {
        let v = remaining
            .iter()
            .max_by_key(|&v| (deg[v], std::cmp::Reverse(v)))
            .expect("nonempty");
        remaining.remove(v);
        for u in g.neighbors(v).iter() {
            deg[u] -= 1;
        }
        tail.push(v);
    }
    tail.reverse();
    tail
}

fn relabel(g: &Graph, order: &[usize]) -> Graph {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let rows = order
        .iter()
        .map(|&v| {
            let mut row = VertexSet::new(n);
            for u in g.neighbors(v).iter() {
                row.insert(pos[u]);
            }
            row
        })
        .collect();
    Graph::from_rows(rows)
}

/// Fewest edges among `t` vertices split over `q` cliques.
#[inline]
fn turan_min(t: usize, q: usize) -> usize {
    if q == 0 {
        return if t == 0 { 0 } else { usize::MAX };
    }
    let (a, b) = (t / q, t % q);
    b * (a + 1) * a / 2 + (q - b) * a * a.saturating_sub(1) / 2
}

impl Search {
    fn new(g: &Graph, edge_budget: usize, goal: Goal, node_limit: u64) -> Search {
        let order = complement_degeneracy_order(g);
        Search {
            g: relabel(g, &order),
            label: order,
            edge_budget,
            goal,
            cost: vec![0; g.n()],
            chosen: Vec::new(),
            edges: 0,
            best: None,
            nodes: 0,
            node_limit,
            aborted: false,
            found: false,
        }
    }

    fn best_size(&self) -> isize {
        self.best.as_ref().map_or(-1, |(s, _)| s.len() as isize)
    }

    fn record(&mut self) {
        let len = self.chosen.len();
        match self.goal {
            Goal::Maximize { exact_edges } => {
                if exact_edges.is_some_and(|m| m != self.edges) {
                    return;
                }
                if len as isize > self.best_size() {
                    self.best = Some((self.chosen.clone(), self.edges));
                }
            }
            Goal::Reach(k) => {
                if len >= k {
                    self.best = Some((self.chosen.clone(), self.edges));
                    self.found = true;
                }
            }
        }
    }

    #[inline]
    fn promising(&self, bound: usize) -> bool {
        match self.goal {
            Goal::Maximize { .. } => bound as isize > self.best_size(),
            Goal::Reach(k) => bound >= k,
        }
    }

    #[inline]
    fn stopped(&self) -> bool {
        self.aborted || self.found
    }

    /// Greedy partition of `cand` into G-cliques; vertices listed by class.
    fn color(&self, cand: &VertexSet, first_class: usize) -> Vec<(usize, usize)> {
        let mut uncolored = cand.clone();
        let mut out = Vec::with_capacity(cand.len());
        let mut class = first_class;
        while !uncolored.is_empty() {
            class += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                uncolored.remove(v);
                q.intersect_with(self.g.neighbors(v));
                out.push((v, class));
            }
        }
        out
    }

    fn expand(&mut self, cand: VertexSet) {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        self.record();
        if self.found || cand.is_empty() {
            return;
        }
        // Zero-cost candidates are partitioned first; every other candidate
        // costs at least `min_cost` edges on its own.
        let mut zero = cand.clone();
        let mut positive = VertexSet::new(cand.universe());
        let mut min_cost = u32::MAX;
        for v in cand.iter() {
            let c = self.cost[v];
            if c > 0 {
                zero.remove(v);
                positive.insert(v);
                min_cost = min_cost.min(c);
            }
        }
        let mut colored = self.color(&zero, 0);
        let zero_len = colored.len();
        let zero_classes = colored.last().map_or(0, |&(_, c)| c);
        colored.extend(self.color(&positive, zero_classes));
        let slack = self.edge_budget - self.edges;

        let mut remaining = cand;
        let mut t = zero_len;
        for idx in (0..colored.len()).rev() {
            let (v, class) = colored[idx];
            let bound = if idx >= zero_len {
                let paid = (idx + 1 - zero_len).min(slack / min_cost as usize);
                (idx + 1).min(zero_classes + slack).min(zero_len + paid)
            } else {
                // shrinks monotonically with idx and class
                t = t.min(idx + 1);
                while t > 0 && turan_min(t, class) > slack {
                    t -= 1;
                }
                t
            };
            if !self.promising(self.chosen.len() + bound) {
                return;
            }

            remaining.remove(v);
            let added = self.cost[v] as usize;
            let new_edges = self.edges + added;
            let new_slack = (self.edge_budget - new_edges) as u32;
            for u in self.g.neighbors(v).iter() {
                self.cost[u] += 1;
            }
            let mut child = remaining.clone();
            if new_slack == 0 {
                child.difference_with(self.g.neighbors(v));
            }
            for u in remaining.iter() {
                if self.cost[u] > new_slack {
                    child.remove(u);
                }
            }
            self.chosen.push(v);
            self.edges = new_edges;

            self.expand(child);

            self.edges -= added;
            self.chosen.pop();
            for u in self.g.neighbors(v).iter() {
                self.cost[u] -= 1;
            }
            if self.stopped() {
                return;
            }
        }
    }

    fn run(mut self) -> (Option<(Vec<usize>, usize)>, bool, u64) {
        let all = VertexSet::full(self.g.n());
        self.expand(all);
        let label = &self.label;
        let best = self.best.map(|(set, e)| {
            let mut orig: Vec<usize> = set.iter().map(|&v| label[v]).collect();
            orig.sort_unstable();
            (orig, e)
        });
        (best, !self.aborted, self.nodes)
    }
}

/// Largest set inducing at most (or exactly) `m` edges.
///
/// Returns `None` only in [`SparseMode::Exactly`] when no set induces exactly
/// `m` edges (or none was found before the budget ran out). Among optimal
/// sets the one reported is the first reached by the deterministic search
/// order.
pub fn max_sparse_set(g: &Graph, m: usize, mode: SparseMode, budget: u64) -> Option<SparseSetResult> {
    let exact_edges = match mode {
        SparseMode::AtMost => None,
        SparseMode::Exactly => Some(m),
    };
    let search = Search::new(g, m, Goal::Maximize { exact_edges }, budget);
    let (best, exact, nodes) = search.run();
    best.map(|(set, induced_edges)| SparseSetResult {
        size: set.len(),
        set,
        induced_edges,
        exact,
        nodes,
    })
}

/// A `k`-set inducing fewer than `threshold` edges, if one exists.
/// The search is complete.
pub fn sparse_set_decision(g: &Graph, k: usize, threshold: usize) -> Option<Vec<usize>> {
    if threshold == 0 || k > g.n() {
        return None;
    }
    let search = Search::new(g, threshold - 1, Goal::Reach(k), u64::MAX);
    let (best, _, _) = search.run();
    best.map(|(set, _)| {
        debug_assert_eq!(set.len(), k);
        set
    })
}

/// Number of `k`-subsets inducing exactly `m` edges, by enumeration.
pub fn count_sets(g: &Graph, k: usize, m: usize) -> Result<u64, SparseError> {
    if g.n() > COUNT_CAP {
        return Err(SparseError::TooLarge {
            n: g.n(),
            cap: COUNT_CAP,
        });
    }
    if k > g.n() {
        return Ok(0);
    }
    let adj: Vec<u32> = (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, u| acc | (1 << u)))
        .collect();
    fn rec(adj: &[u32], start: usize, left: usize, chosen: u32, edges: usize, m: usize) -> u64 {
        if left == 0 {
            return u64::from(edges == m);
        }
        let n = adj.len();
        let mut total = 0;
        for v in start..=n - left {
            let e = edges + (adj[v] & chosen).count_ones() as usize;
            if e <= m {
                total += rec(adj, v + 1, left - 1, chosen | (1 << v), e, m);
            }
        }
        total
    }
    Ok(rec(&adj, 0, k, 0, 0, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    /// (max size with <= m edges, max size with exactly m edges) by subsets.
    fn brute(g: &Graph, m: usize) -> (usize, Option<usize>) {
        let n = g.n();
        let mut at_most = 0;
        let mut exactly = None;
        for mask in 0u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let e = g.induced_edge_count(&set).unwrap();
            if e <= m {
                at_most = at_most.max(set.len());
            }
            if e == m {
                exactly = Some(exactly.unwrap_or(0).max(set.len()));
            }
        }
        (at_most, exactly)
    }

    #[test]
    fn examples() {
        let empty = Graph::empty(7);
        let r = max_sparse_set(&empty, 0, SparseMode::Exactly, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.size, 7);
        assert!(r.exact);

        let k4 = Graph::complete(4);
        let r = max_sparse_set(&k4, 1, SparseMode::Exactly, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.size, r.induced_edges), (2, 1));
        assert!(max_sparse_set(&k4, 2, SparseMode::Exactly, DEFAULT_BUDGET).is_none());

        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            max_sparse_set(&p3, 2, SparseMode::Exactly, DEFAULT_BUDGET)
                .unwrap()
                .size,
            3
        );
        assert_eq!(
            max_sparse_set(&p3, 1, SparseMode::Exactly, DEFAULT_BUDGET)
                .unwrap()
                .size,
            2
        );
        let r = max_sparse_set(&p3, 0, SparseMode::AtMost, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.set, vec![0, 2]);
    }

    #[test]
    fn decision_examples() {
        assert_eq!(sparse_set_decision(&Graph::complete(5), 3, 3), None);
        assert_eq!(sparse_set_decision(&Graph::empty(5), 3, 1).map(|s| s.len()), Some(3));
        let c5 = cycle(5);
        let w = sparse_set_decision(&c5, 3, 2).unwrap();
        assert_eq!(w.len(), 3);
        assert!(c5.induced_edge_count(&w).unwrap() < 2);
        assert_eq!(sparse_set_decision(&c5, 3, 1), None);
        assert_eq!(sparse_set_decision(&c5, 0, 1), Some(vec![]));
        assert_eq!(sparse_set_decision(&c5, 6, 100), None);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_sets(&Graph::complete(4), 2, 1).unwrap(), 6);
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(count_sets(&p3, 2, 0).unwrap(), 1);
        assert_eq!(count_sets(&cycle(6), 0, 0).unwrap(), 1);
        assert_eq!(count_sets(&cycle(6), 7, 0).unwrap(), 0);
        assert!(count_sets(&Graph::empty(21), 2, 0).is_err());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = Graph::gnp(60, 0.5, &Seed::new(3)).unwrap();
        let r = max_sparse_set(&g, 1, SparseMode::AtMost, 5).unwrap();
        assert!(!r.exact);
        assert_eq!(g.induced_edge_count(&r.set).unwrap(), r.induced_edges);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let master = Seed::new(2024);
        for trial in 0..120u64 {
            let s = master.derive(trial);
            let n = 4 + (s.draw(0) % 9) as usize;
            let p = [0.2, 0.4, 0.5, 0.7][(s.draw(1) % 4) as usize];
            let g = Graph::gnp(n, p, &s).unwrap();
            for m in 0..=3 {
                let (at_most, exactly) = brute(&g, m);
                let r = max_sparse_set(&g, m, SparseMode::AtMost, DEFAULT_BUDGET).unwrap();
                assert!(r.exact);
                assert_eq!(r.size, at_most, "at-most n={n} m={m} {g:?}");
                assert!(r.induced_edges <= m);
                assert_eq!(g.induced_edge_count(&r.set).unwrap(), r.induced_edges);
                let e = max_sparse_set(&g, m, SparseMode::Exactly, DEFAULT_BUDGET);
                assert_eq!(e.as_ref().map(|r| r.size), exactly, "exactly n={n} m={m} {g:?}");
                if let Some(e) = e {
                    assert_eq!(g.induced_edge_count(&e.set).unwrap(), m);
                }
                for k in 0..=n {
                    let witness = sparse_set_decision(&g, k, m + 1);
                    let exists = (0..=m).any(|mm| count_sets(&g, k, mm).unwrap() > 0);
                    assert_eq!(witness.is_some(), exists, "decision n={n} k={k} T={}", m + 1);
                    if let Some(w) = witness {
                        assert_eq!(w.len(), k);
                        assert!(g.induced_edge_count(&w).unwrap() <= m);
                    }
                }
            }
        }
    }

    #[test]
    fn at_most_size_monotone_in_m() {
        let g = Graph::gnp(40, 0.5, &Seed::new(5)).unwrap();
        let sizes: Vec<usize> = (0..5)
            .map(|m| max_sparse_set(&g, m, SparseMode::AtMost, DEFAULT_BUDGET).unwrap().size)
            .collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{sizes:?}");
    }

    #[test]
    fn independence_number_matches_independent_routine() {
        // plain include/exclude recursion over bitmasks, no bounds shared with the solver
        fn mis(adj: &[u16], cand: u16) -> u32 {
            if cand == 0 {
                return 0;
            }
            let v = cand.trailing_zeros() as usize;
            let without = mis(adj, cand & !(1 << v));
            let with = 1 + mis(adj, cand & !(1 << v) & !adj[v]);
            with.max(without)
        }
        for t in 0..100u64 {
            let s = Seed::new(77).derive(t);
            let n = 1 + (s.draw(0) % 12) as usize;
            let g = Graph::gnp(n, 0.45, &s).unwrap();
            let adj: Vec<u16> = (0..n)
                .map(|v| g.neighbors(v).iter().fold(0u16, |a, u| a | (1 << u)))
                .collect();
            let alpha = mis(&adj, ((1u32 << n) - 1) as u16) as usize;
            let r = max_sparse_set(&g, 0, SparseMode::AtMost, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.size, alpha);
        }
    }

    #[test]
    fn turan_bound() {
        assert_eq!(turan_min(5, 5), 0);
        assert_eq!(turan_min(6, 5), 1);
        assert_eq!(turan_min(7, 3), 5); // 3+2+2 -> 3+1+1
        assert_eq!(turan_min(0, 0), 0);
    }
}
