//! Simple undirected graphs on `0..n` with word-packed adjacency rows.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::rng::Seed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("edge ({v}, {v}) is a self-loop")]
    SelfLoop { v: usize },
    #[error("vertex {v} is outside 0..{n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A subset of `0..universe` stored as a packed bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn from_slice(universe: usize, vertices: &[usize]) -> Self {
        let mut s = Self::new(universe);
        for &v in vertices {
            s.insert(v);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.universe);
        self.words[v >> 6] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.universe);
        self.words[v >> 6] &= !(1u64 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v >> 6] & (1u64 << (v & 63)) != 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        for w in self.words.iter_mut() {
            *w = 0;
        }
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| (i << 6) + w.trailing_zeros() as usize)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// `|self ∩ other|` without allocating.
    #[inline]
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Members<'_> {
        Members {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Members<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some((self.idx << 6) + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Immutable simple graph. Adjacency is symmetric and irreflexive.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<VertexSet>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list; duplicate pairs (in either
    /// orientation) are merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut rows = vec![VertexSet::new(n); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { v });
            }
            rows[u].insert(v);
            rows[v].insert(u);
        }
        Ok(Self::from_rows(rows))
    }

    pub(crate) fn from_rows(rows: Vec<VertexSet>) -> Graph {
        let n = rows.len();
        let degree_sum: usize = rows.iter().map(VertexSet::len).sum();
        let g = Graph {
            n,
            rows,
            m: degree_sum / 2,
        };
        g.debug_check();
        g
    }

    fn debug_check(&self) {
        if cfg!(debug_assertions) {
            let mut sum = 0;
            for u in 0..self.n {
                assert!(!self.rows[u].contains(u), "self-loop at {u}");
                for v in self.rows[u].iter() {
                    assert!(self.rows[v].contains(u), "asymmetric pair ({u}, {v})");
                }
                sum += self.rows[u].len();
            }
            assert_eq!(sum, 2 * self.m);
        }
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_rows(vec![VertexSet::new(n); n])
    }

    pub fn complete(n: usize) -> Graph {
        let rows = (0..n)
            .map(|v| {
                let mut row = VertexSet::full(n);
                row.remove(v);
                row
            })
            .collect();
        Self::from_rows(rows)
    }

    /// Binomial random graph. Pair `(u, v)` with lexicographic rank `i`
    /// is present iff `seed.uniform(i) < p`.
    pub fn gnp(n: usize, p: f64, seed: &Seed) -> Result<Graph, GraphError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::InvalidProbability(p));
        }
        let mut rows = vec![VertexSet::new(n); n];
        let mut rank = 0u64;
        for u in 0..n {
            for v in u + 1..n {
                if seed.uniform(rank) < p {
                    rows[u].insert(v);
                    rows[v].insert(u);
                }
                rank += 1;
            }
        }
        Ok(Self::from_rows(rows))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.rows[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Number of edges with both endpoints in `set`.
    pub fn induced_edges(&self, set: &VertexSet) -> usize {
        set.iter().map(|v| self.rows[v].intersection_len(set)).sum::<usize>() / 2
    }

    /// Checked variant of [`Graph::induced_edges`] for a vertex list.
    pub fn induced_edge_count(&self, vertices: &[usize]) -> Result<usize, GraphError> {
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        Ok(self.induced_edges(&VertexSet::from_slice(self.n, vertices)))
    }

    /// Degree of `v` inside `set`.
    #[inline]
    pub fn degree_in(&self, v: usize, set: &VertexSet) -> usize {
        self.rows[v].intersection_len(set)
    }

    /// True when every pair of `vertices` is adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// True when every edge of `self` is an edge of `other` on the same vertex set.
    pub fn is_spanning_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && (0..self.n).all(|v| self.rows[v].is_subset(&other.rows[v]))
    }

    /// Edge-list text: `"n m"` then one `"u v"` line per edge, `u < v`, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(8 * (self.m + 1));
        writeln!(out, "{} {}", self.n, self.m).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Parses the edge-list format produced by [`Graph::to_edge_list`].
    /// Edges may appear in any order and orientation; duplicates are rejected.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header \"n m\"".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut rows = vec![VertexSet::new(n); n];
        let mut seen = 0usize;
        for (line, l) in lines {
            let (u, v) = parse_pair(line, l)?;
            if u >= n || v >= n {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("endpoint out of range for n = {n}"),
                });
            }
            if u == v {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("self-loop at {u}"),
                });
            }
            if rows[u].contains(v) {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("duplicate edge {} {}", u.min(v), u.max(v)),
                });
            }
            rows[u].insert(v);
            rows[v].insert(u);
            seen += 1;
            if seen > m {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("more than the declared {m} edges"),
                });
            }
        }
        if seen != m {
            return Err(GraphError::Parse {
                line: hline,
                msg: format!("header declares {m} edges but {seen} were given"),
            });
        }
        Ok(Self::from_rows(rows))
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), GraphError> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or_else(|| GraphError::Parse {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse::<usize>().map_err(|_| GraphError::Parse {
            line,
            msg: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(GraphError::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn construction() {
        let p3 = path3();
        assert_eq!(p3.m(), 2);
        let all: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let k4 = Graph::new(4, &all).unwrap();
        assert_eq!(k4.m(), 6);
        assert_eq!(k4, Graph::complete(4));
        assert_eq!(
            Graph::new(3, &[(0, 3)]),
            Err(GraphError::EndpointOutOfRange { u: 0, v: 3, n: 3 })
        );
        assert_eq!(Graph::new(3, &[(1, 1)]), Err(GraphError::SelfLoop { v: 1 }));
        // duplicates in both orientations collapse
        assert_eq!(Graph::new(3, &[(0, 1), (1, 0)]).unwrap().m(), 1);
    }

    #[test]
    fn gnp_extremes_and_determinism() {
        let seed = Seed::new(7);
        assert_eq!(Graph::gnp(10, 0.0, &seed).unwrap().m(), 0);
        assert_eq!(Graph::gnp(10, 1.0, &seed).unwrap().m(), 45);
        let a = Graph::gnp(40, 0.3, &seed).unwrap();
        let b = Graph::gnp(40, 0.3, &seed).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, Graph::gnp(40, 0.3, &Seed::new(8)).unwrap());
        assert!(matches!(
            Graph::gnp(5, 1.5, &seed),
            Err(GraphError::InvalidProbability(_))
        ));
    }

    #[test]
    fn gnp_edge_count_mean() {
        let trials = 1000;
        let mut sum = 0.0;
        for t in 0..trials {
            sum += Graph::gnp(30, 0.5, &Seed::new(11).derive(t)).unwrap().m() as f64;
        }
        let mean = sum / trials as f64;
        // Var(m) = C(30,2) p (1-p)
        let se = (435.0f64 * 0.25 / trials as f64).sqrt();
        assert!((mean - 217.5).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn induced_counts() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.induced_edge_count(&[0, 2, 3]).unwrap(), 3);
        assert_eq!(k4.induced_edge_count(&[]).unwrap(), 0);
        assert_eq!(path3().induced_edge_count(&[0, 1, 2]).unwrap(), 2);
        assert_eq!(
            path3().induced_edge_count(&[0, 5]),
            Err(GraphError::VertexOutOfRange { v: 5, n: 3 })
        );
    }

    #[test]
    fn edge_list_format() {
        assert_eq!(path3().to_edge_list(), "3 2\n0 1\n1 2\n");
        let k4 = Graph::complete(4);
        assert_eq!(Graph::parse(&k4.to_edge_list()).unwrap(), k4);
        assert!(matches!(
            Graph::parse("3 1\n0 5\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse("3 2\n0 1\n1 0\n"),
            Err(GraphError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Graph::parse("3 1\n0 x\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse("3 2\n0 1\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert_eq!(Graph::parse("0 0\n").unwrap().n(), 0);
    }

    #[test]
    fn vertex_set_ops() {
        let mut s = VertexSet::new(130);
        for v in [0, 63, 64, 129] {
            s.insert(v);
        }
        assert_eq!(s.to_vec(), vec![0, 63, 64, 129]);
        assert_eq!(s.len(), 4);
        assert_eq!(s.first(), Some(0));
        s.remove(0);
        assert_eq!(s.first(), Some(63));
        assert_eq!(VertexSet::full(130).len(), 130);
        assert!(!s.contains(500));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (0usize..25).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[i] {
                            edges.push((u, v));
                        }
                        i += 1;
                    }
                }
                Graph::new(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn parse_serialize_roundtrip(g in arb_graph()) {
            let text = g.to_edge_list();
            let back = Graph::parse(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.to_edge_list(), text);
            let degree_sum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(degree_sum, 2 * g.m());
        }
    }
}
