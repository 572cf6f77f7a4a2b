use super::SatError;
use crate::graph::{Graph, VertexSet};

/// A cheapest extension of `G[V1]` in which every vertex outside `V1` has
/// degree exactly `r - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    /// Edges between `V1` and `V2`.
    pub cross_edges: usize,
    pub h: Graph,
}

#[derive(Clone)]
struct State {
    /// Remaining degree: exact demand on `V2`, spare capacity on `V1`.
    left: Vec<usize>,
    avail: Vec<VertexSet>,
    cross_left: usize,
    picked: Vec<(usize, usize)>,
}

struct Problem<'a> {
    in_v1: &'a VertexSet,
    v2: Vec<usize>,
}

impl Problem<'_> {
    fn drop_vertex(&self, st: &mut State, w: usize) {
        let nbrs: Vec<usize> = st.avail[w].iter().collect();
        for x in nbrs {
            st.avail[x].remove(w);
        }
        st.avail[w].clear();
    }

    fn drop_edge(&self, st: &mut State, u: usize, v: usize) {
        st.avail[u].remove(v);
        st.avail[v].remove(u);
    }

    /// Removes exhausted vertices, then checks degree, parity and per-component
    /// counting conditions.
    fn settle(&self, st: &mut State) -> bool {
        let n = st.left.len();
        for w in 0..n {
            if st.left[w] == 0 && !st.avail[w].is_empty() {
                self.drop_vertex(st, w);
            }
        }
        if st.cross_left == 0 {
            for w in self.in_v1.iter() {
                if !st.avail[w].is_empty() {
                    self.drop_vertex(st, w);
                }
            }
        }
        for &v in &self.v2 {
            if st.avail[v].len() < st.left[v] {
                return false;
            }
        }

        // components of the remaining option graph
        let mut seen = VertexSet::new(n);
        let mut reach = 0usize;
        let mut stack = Vec::new();
        for start in 0..n {
            if seen.contains(start) || st.left[start] == 0 || st.avail[start].is_empty() {
                continue;
            }
            let (mut demand, mut capacity) = (0usize, 0usize);
            seen.insert(start);
            stack.push(start);
            while let Some(x) = stack.pop() {
                if self.in_v1.contains(x) {
                    capacity += st.left[x].min(st.avail[x].len());
                } else {
                    demand += st.left[x];
                }
                for y in st.avail[x].iter() {
                    if !seen.contains(y) {
                        seen.insert(y);
                        stack.push(y);
                    }
                }
            }
            if capacity == 0 && demand % 2 == 1 {
                return false;
            }
            reach += capacity.min(demand);
        }
        let total: usize = self.v2.iter().map(|&v| st.left[v]).sum();
        total >= st.cross_left && (total - st.cross_left).is_multiple_of(2) && reach >= st.cross_left
    }

    fn search(&self, mut st: State) -> Option<State> {
        if !self.settle(&mut st) {
            return None;
        }
        let pick = self
            .v2
            .iter()
            .copied()
            .filter(|&v| st.left[v] > 0)
            .min_by_key(|&v| (st.avail[v].len() - st.left[v], v));
        let Some(v) = pick else {
            return (st.cross_left == 0).then_some(st);
        };
        let w = st.avail[v].first().expect("settle guarantees options");
        let cross = self.in_v1.contains(w);

        let mut with = st.clone();
        self.drop_edge(&mut with, v, w);
        with.left[v] -= 1;
        with.left[w] -= 1;
        if cross {
            with.cross_left -= 1;
        }
        with.picked.push((v.min(w), v.max(w)));
        if let Some(done) = self.search(with) {
            return Some(done);
        }

        self.drop_edge(&mut st, v, w);
        self.search(st)
    }
}

/// Minimum number of `V1`-`V2` edges over all spanning `H` that contain
/// `G[V1]`, give every `V2 = V \ V1` vertex degree `r - 1`, and keep every
/// `V1` vertex at degree at most `r - 2`. Returns `None` when no such `H`
/// exists.
///
/// Each candidate cross-edge count `c` (stepping by 2 from the parity of
/// `(r - 1)|V2|`) is tested by a backtracking degree-constrained subgraph
/// search.
pub fn min_completion(host: &Graph, v1: &[usize], r: usize) -> Result<Option<Completion>, SatError> {
    if r < 2 {
        return Err(SatError::InvalidStar(r));
    }
    let n = host.n();
    if let Some(&v) = v1.iter().find(|&&v| v >= n) {
        return Err(SatError::VertexOutOfRange(v));
    }
    let in_v1 = VertexSet::from_slice(n, v1);
    let v2: Vec<usize> = (0..n).filter(|&v| !in_v1.contains(v)).collect();
    let mut left = vec![0usize; n];
    for v in in_v1.iter() {
        let degree = host.degree_in(v, &in_v1);
        if degree + 2 > r {
            return Err(SatError::V1DegreeTooHigh {
                v,
                degree,
                limit: r - 2,
            });
        }
        left[v] = r - 2 - degree;
    }
    for &v in &v2 {
        left[v] = r - 1;
    }
    let avail: Vec<VertexSet> = (0..n)
        .map(|v| {
            if in_v1.contains(v) {
                host.neighbors(v).difference(&in_v1)
            } else {
                host.neighbors(v).clone()
            }
        })
        .collect();

    let base_edges: Vec<(usize, usize)> = host
        .edges()
        .filter(|&(a, b)| in_v1.contains(a) && in_v1.contains(b))
        .collect();
    let spare: usize = in_v1.iter().map(|v| left[v]).sum();
    let demand = (r - 1) * v2.len();
    let problem = Problem { in_v1: &in_v1, v2 };

    let mut c = demand % 2;
    while c <= spare.min(demand) {
        let st = State {
            left: left.clone(),
            avail: avail.clone(),
            cross_left: c,
            picked: Vec::new(),
        };
        if let Some(done) = problem.search(st) {
            let mut edges = base_edges.clone();
            edges.extend(done.picked);
            return Ok(Some(Completion {
                cross_edges: c,
                h: Graph::new(n, &edges).expect("host edges"),
            }));
        }
        c += 2;
    }
    Ok(None)
}
