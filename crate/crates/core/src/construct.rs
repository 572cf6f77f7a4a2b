//! Explicit saturated subgraphs of a host: a sparse set `V1` is kept whole,
//! the rest is covered by disjoint `r`-cliques plus one larger remainder
//! clique `K*`, and `K*` is thinned to an `(r - 1)`-regular circulant. When
//! `r - 1` and `|K*|` are both odd one `K*` vertex takes a single edge into
//! `V1` instead.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::rng::Seed;
use crate::sat::{SatError, SaturatedSubgraph};
use crate::sparse::{max_sparse_set, SparseMode, SparseSetResult, DEFAULT_BUDGET};
use crate::theory::{predict, PredictionCase, TheoryError, TheoryParams};

/// Cover attempts made by [`build_saturated`].
pub const DEFAULT_RESTARTS: usize = 64;

const CLIQUE_NODE_LIMIT: u64 = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error("star size r = {0} must be at least 2")]
    InvalidStar(usize),
    #[error("V2 has {v2} vertices, fewer than r = {r}")]
    TooFewV2 { v2: usize, r: usize },
    #[error("remainder of size {t} is outside [r, 2r - 1] for r = {r}")]
    RemainderSize { t: usize, r: usize },
    #[error("remainder vertices are not pairwise adjacent")]
    RemainderNotClique,
    #[error("a cross edge is needed exactly when r - 1 and |K*| are both odd")]
    CrossMismatch,
    #[error("a cross edge is required but no anchor vertex was given")]
    MissingAnchor,
    #[error("anchor {0} is not in the remainder")]
    AnchorOutside(usize),
    #[error("no clique cover found after {0} attempts")]
    CoverFailed(usize),
    #[error("V1 vertex {v} has {degree} neighbours inside V1, more than r - 2 = {limit}")]
    V1DegreeTooHigh { v: usize, degree: usize, limit: usize },
    #[error("theory parameters are for n = {params} but the host has n = {host}")]
    SizeMismatch { params: u64, host: usize },
    #[error("no vertex set with at most {0} induced edges was found")]
    NoSparseSet(usize),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("constructed subgraph failed verification: {0}")]
    Verification(#[from] SatError),
    #[error("edge count {got} differs from e(V1) + ceil((r - 1)|V2| / 2) = {want}")]
    IdentityFailed { got: usize, want: usize },
}

/// Disjoint cliques covering `V2`: `r`-cliques plus one remainder clique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueCover {
    pub cliques: Vec<Vec<usize>>,
    pub remainder: Vec<usize>,
}

impl CliqueCover {
    pub fn covered(&self) -> usize {
        self.cliques.iter().map(Vec::len).sum::<usize>() + self.remainder.len()
    }
}

/// Edges placed inside `K*` and the vertex that still needs one outside edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Remainder {
    pub edges: Vec<(usize, usize)>,
    pub cross_at: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityCase {
    /// `r - 1` even: circulant distances only.
    Even,
    /// `r - 1` odd, `|K*|` even: circulant plus diameters.
    OddEven,
    /// `r - 1` and `|K*|` odd: opposite pairs around the anchor, one cross edge.
    OddOdd,
}

impl fmt::Display for ParityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityCase::Even => "even",
            ParityCase::OddEven => "odd-even",
            ParityCase::OddOdd => "odd-odd",
        })
    }
}

/// How `V1` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum V1Choice {
    /// From the prediction: a maximum independent set in the one-point case,
    /// otherwise the best sparse set with at most `r' + 1` edges.
    Auto(TheoryParams),
    Independent,
    Sparse(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum V1Mode {
    Independent,
    Sparse(usize),
}

impl fmt::Display for V1Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            V1Mode::Independent => f.write_str("independent"),
            V1Mode::Sparse(m) => write!(f, "sparse:{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildReport {
    pub result: SaturatedSubgraph,
    pub v1: Vec<usize>,
    pub v1_edges: usize,
    pub v1_mode: V1Mode,
    /// The sparse-set search behind `V1` finished within budget.
    pub v1_exact: bool,
    /// Vertices of the searched set moved to `V2` so that a cover exists.
    pub v1_trimmed: usize,
    pub cover: CliqueCover,
    pub parity_case: ParityCase,
    /// The `K*` vertex joined to `V1`, and its partner.
    pub cross_vertex: Option<usize>,
    pub cross_partner: Option<usize>,
    /// Cover attempts used by the successful build.
    pub restarts: usize,
}

enum CliqueSearch {
    Found(Vec<usize>),
    /// The whole tree was searched.
    None,
    LimitHit,
}

/// Randomised depth-first search for a `t`-clique inside `allowed`, with the
/// first vertex taken from `first` when given.
fn find_clique(
    g: &Graph,
    allowed: &VertexSet,
    t: usize,
    first: Option<&VertexSet>,
    rng: &mut ChaCha8Rng,
    limit: u64,
) -> CliqueSearch {
    fn rec(
        g: &Graph,
        chosen: &mut Vec<usize>,
        cand: VertexSet,
        t: usize,
        rng: &mut ChaCha8Rng,
        nodes: &mut u64,
        limit: u64,
    ) -> Option<bool> {
        if chosen.len() == t {
            return Some(true);
        }
        *nodes += 1;
        if *nodes > limit {
            return None;
        }
        let mut order = cand.to_vec();
        order.shuffle(rng);
        let mut cand = cand;
        for v in order {
            if chosen.len() + cand.len() < t {
                break;
            }
            cand.remove(v);
            chosen.push(v);
            match rec(g, chosen, cand.intersection(g.neighbors(v)), t, rng, nodes, limit) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            chosen.pop();
        }
        Some(false)
    }

    if t == 0 {
        return CliqueSearch::Found(Vec::new());
    }
    let mut nodes = 0u64;
    let mut starts = match first {
        Some(pool) => pool.intersection(allowed).to_vec(),
        None => allowed.to_vec(),
    };
    starts.shuffle(rng);
    let mut rest = allowed.clone();
    for v in starts {
        let mut chosen = vec![v];
        let cand = if first.is_some() {
            allowed.intersection(g.neighbors(v))
        } else {
            rest.remove(v);
            rest.intersection(g.neighbors(v))
        };
        match rec(g, &mut chosen, cand, t, rng, &mut nodes, limit) {
            Some(true) => {
                chosen.sort_unstable();
                return CliqueSearch::Found(chosen);
            }
            Some(false) => {}
            None => return CliqueSearch::LimitHit,
        }
    }
    CliqueSearch::None
}

const FACTOR_CLIQUE_CAP: usize = 100_000;
const FACTOR_NODE_LIMIT: u64 = 200_000;

/// Partition of `rest` into `r`-cliques: conflict repair first, then an exact
/// search when the cliques of `G[rest]` are few enough to list.
fn clique_factor(g: &Graph, rest: &[usize], r: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
    let mut out = repair_factor(g, rest, r, rng).or_else(|| exact_factor(g, rest, r, rng))?;
    for c in out.iter_mut() {
        c.sort_unstable();
    }
    out.sort();
    Some(out)
}

/// Every `r`-clique of `G[rest]`, or `None` past `cap`.
fn list_cliques(g: &Graph, rest: &[usize], r: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
    fn rec(
        g: &Graph,
        chosen: &mut Vec<usize>,
        cand: &VertexSet,
        r: usize,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> bool {
        if chosen.len() == r {
            out.push(chosen.clone());
            return out.len() <= cap;
        }
        let mut cand = cand.clone();
        for v in cand.to_vec() {
            if chosen.len() + cand.len() < r {
                break;
            }
            cand.remove(v);
            chosen.push(v);
            let ok = rec(g, chosen, &cand.intersection(g.neighbors(v)), r, out, cap);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    let all = VertexSet::from_slice(g.n(), rest);
    rec(g, &mut Vec::new(), &all, r, &mut out, cap).then_some(out)
}

/// Exact cover of `rest` by listed cliques, branching on the uncovered vertex
/// with the fewest usable cliques.
fn exact_factor(g: &Graph, rest: &[usize], r: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
    struct Cover<'a> {
        cliques: &'a [Vec<usize>],
        containing: Vec<Vec<usize>>,
        used: Vec<bool>,
        nodes: u64,
    }
    impl Cover<'_> {
        fn usable(&self, c: usize) -> bool {
            self.cliques[c].iter().all(|&v| !self.used[v])
        }
        fn run(&mut self, left: usize, picked: &mut Vec<usize>) -> Option<bool> {
            if left == 0 {
                return Some(true);
            }
            self.nodes += 1;
            if self.nodes > FACTOR_NODE_LIMIT {
                return None;
            }
            let mut pick: Option<(usize, Vec<usize>)> = None;
            for v in 0..self.used.len() {
                if self.used[v] || self.containing[v].is_empty() {
                    continue;
                }
                let options: Vec<usize> = self.containing[v].iter().copied().filter(|&c| self.usable(c)).collect();
                if pick.as_ref().is_none_or(|(_, o)| options.len() < o.len()) {
                    let empty = options.is_empty();
                    pick = Some((v, options));
                    if empty {
                        break;
                    }
                }
            }
            let (_, options) = pick.expect("uncovered vertex");
            for c in options {
                for &v in &self.cliques[c] {
                    self.used[v] = true;
                }
                picked.push(c);
                let res = self.run(left - self.cliques[c].len(), picked);
                if res != Some(false) {
                    return res;
                }
                picked.pop();
                for &v in &self.cliques[c] {
                    self.used[v] = false;
                }
            }
            Some(false)
        }
    }

    let mut cliques = list_cliques(g, rest, r, FACTOR_CLIQUE_CAP)?;
    cliques.shuffle(rng);
    let n = g.n();
    let mut containing = vec![Vec::new(); n];
    for (i, c) in cliques.iter().enumerate() {
        for &v in c {
            containing[v].push(i);
        }
    }
    let mut used = vec![true; n];
    for &v in rest {
        if containing[v].is_empty() {
            return None;
        }
        used[v] = false;
    }
    let mut search = Cover {
        cliques: &cliques,
        containing,
        used,
        nodes: 0,
    };
    let mut picked = Vec::new();
    match search.run(rest.len(), &mut picked) {
        Some(true) => Some(picked.into_iter().map(|c| cliques[c].clone()).collect()),
        _ => None,
    }
}

/// Randomised min-conflicts search for a partition of `rest` into `r`-cliques.
/// A vertex that cannot be placed among uncovered vertices grows a clique
/// greedily, and the cliques it overlaps are dissolved.
fn repair_factor(g: &Graph, rest: &[usize], r: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
    let n = g.n();
    let all = VertexSet::from_slice(n, rest);
    let mut uncovered = all.clone();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut cliques: Vec<Option<Vec<usize>>> = Vec::new();
    let steps = 50 * rest.len() + 500;

    for _ in 0..steps {
        if uncovered.is_empty() {
            break;
        }
        let pending = uncovered.to_vec();
        let v = pending[rng.gen_range(0..pending.len())];
        let free = uncovered.intersection(g.neighbors(v));
        let clique = match find_clique(g, &free, r - 1, None, rng, 64) {
            CliqueSearch::Found(mut c) => {
                c.push(v);
                c
            }
            _ => {
                let mut c = vec![v];
                let mut cand = all.intersection(g.neighbors(v));
                while c.len() < r && !cand.is_empty() {
                    let open = cand.intersection(&uncovered);
                    let pool = if !open.is_empty() && rng.gen_bool(0.8) {
                        open
                    } else {
                        cand.clone()
                    };
                    let list = pool.to_vec();
                    let u = list[rng.gen_range(0..list.len())];
                    c.push(u);
                    cand.intersect_with(g.neighbors(u));
                }
                if c.len() < r {
                    continue;
                }
                c
            }
        };
        for &u in &clique {
            if let Some(idx) = owner[u] {
                for w in cliques[idx].take().expect("live clique") {
                    owner[w] = None;
                    uncovered.insert(w);
                }
            }
        }
        let idx = cliques.len();
        for &u in &clique {
            owner[u] = Some(idx);
            uncovered.remove(u);
        }
        cliques.push(Some(clique));
    }
    uncovered.is_empty().then(|| cliques.into_iter().flatten().collect())
}

fn remainder_size(v2: usize, r: usize) -> usize {
    r + v2 % r
}

/// Cover with the remainder clique drawn so that it meets `pool` when given.
/// Returns the cover and the number of attempts used.
fn cover_attempts(
    g: &Graph,
    v2: &[usize],
    r: usize,
    seed: &Seed,
    restarts: usize,
    pool: Option<&VertexSet>,
) -> Result<Option<(CliqueCover, usize)>, ConstructError> {
    if r < 2 {
        return Err(ConstructError::InvalidStar(r));
    }
    if v2.len() < r {
        return Err(ConstructError::TooFewV2 { v2: v2.len(), r });
    }
    let t = remainder_size(v2.len(), r);
    let all = VertexSet::from_slice(g.n(), v2);
    for attempt in 0..restarts {
        let mut rng = seed.derive(attempt as u64).rng();
        let kstar = match find_clique(g, &all, t, pool, &mut rng, CLIQUE_NODE_LIMIT) {
            CliqueSearch::Found(c) => c,
            CliqueSearch::None => return Ok(None),
            CliqueSearch::LimitHit => continue,
        };
        let rest = all.difference(&VertexSet::from_slice(g.n(), &kstar)).to_vec();
        if let Some(cliques) = clique_factor(g, &rest, r, &mut rng) {
            return Ok(Some((
                CliqueCover {
                    cliques,
                    remainder: kstar,
                },
                attempt + 1,
            )));
        }
    }
    Ok(None)
}

/// Covers `V2` by `⌊|V2| / r⌋ - 1` disjoint `r`-cliques of `g` and one
/// remainder clique of size in `[r, 2r - 1]`.
///
/// The remainder is drawn first; the rest is then partitioned by a randomised
/// conflict-repair search. Each attempt uses a sub-seed of `seed`; `None`
/// after `restarts` failures, or as soon as no remainder clique exists.
pub fn clique_cover(
    g: &Graph,
    v2: &[usize],
    r: usize,
    seed: &Seed,
    restarts: usize,
) -> Result<Option<CliqueCover>, ConstructError> {
    Ok(cover_attempts(g, v2, r, seed, restarts, None)?.map(|(c, _)| c))
}

/// Edges turning the clique `kstar` into an `(r - 1)`-regular graph, with
/// vertices in ascending order around a cycle.
///
/// Writing `r - 1 = 2s` or `2s + 1`, each vertex is joined to its `s`
/// nearest cycle neighbours on either side. For odd `r - 1` an even remainder
/// adds the diameters; an odd one leaves `anchor` one short and matches the
/// remaining vertices to their opposites in the cycle with `anchor` removed.
pub fn regularize_remainder(
    kstar: &[usize],
    r: usize,
    need_cross: bool,
    anchor: Option<usize>,
) -> Result<Remainder, ConstructError> {
    if r < 2 {
        return Err(ConstructError::InvalidStar(r));
    }
    let t = kstar.len();
    if t < r || t > 2 * r - 1 {
        return Err(ConstructError::RemainderSize { t, r });
    }
    let odd_degree = (r - 1) % 2 == 1;
    if need_cross != (odd_degree && t % 2 == 1) {
        return Err(ConstructError::CrossMismatch);
    }
    let mut order = kstar.to_vec();
    order.sort_unstable();
    let s = (r - 1) / 2;
    let mut edges = Vec::new();
    for i in 0..t {
        for d in 1..=s {
            edges.push((order[i], order[(i + d) % t]));
        }
    }
    let mut cross_at = None;
    if odd_degree {
        if t.is_multiple_of(2) {
            for i in 0..t / 2 {
                edges.push((order[i], order[i + t / 2]));
            }
        } else {
            let a = anchor.ok_or(ConstructError::MissingAnchor)?;
            let pos = order
                .iter()
                .position(|&v| v == a)
                .ok_or(ConstructError::AnchorOutside(a))?;
            // the cycle read from just after the anchor, anchor removed
            let reduced: Vec<usize> = (1..t).map(|j| order[(pos + j) % t]).collect();
            let h = (t - 1) / 2;
            for i in 0..h {
                edges.push((reduced[i], reduced[i + h]));
            }
            cross_at = Some(a);
        }
    }
    for e in edges.iter_mut() {
        *e = (e.0.min(e.1), e.0.max(e.1));
    }
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    assert_eq!(before, edges.len(), "duplicate remainder edge");
    let mut degree = std::collections::BTreeMap::new();
    for &(u, v) in &edges {
        *degree.entry(u).or_insert(0usize) += 1;
        *degree.entry(v).or_insert(0usize) += 1;
    }
    for &v in &order {
        let want = if Some(v) == cross_at { r - 2 } else { r - 1 };
        assert_eq!(degree.get(&v).copied().unwrap_or(0), want, "remainder degree");
    }
    Ok(Remainder { edges, cross_at })
}

struct Candidate {
    set: SparseSetResult,
    mode: V1Mode,
}

fn sparse(g: &Graph, m: usize, mode: V1Mode) -> Result<Candidate, ConstructError> {
    let set = max_sparse_set(g, m, SparseMode::AtMost, DEFAULT_BUDGET).ok_or(ConstructError::NoSparseSet(m))?;
    Ok(Candidate { set, mode })
}

fn objective(n: usize, r: usize, c: &SparseSetResult) -> usize {
    c.induced_edges + ((r - 1) * (n - c.size)).div_ceil(2)
}

fn max_internal_degree(g: &Graph, v1: &[usize]) -> Option<(usize, usize)> {
    let set = VertexSet::from_slice(g.n(), v1);
    v1.iter().map(|&v| (g.degree_in(v, &set), v)).max()
}

fn choose_v1(g: &Graph, r: usize, choice: &V1Choice) -> Result<Candidate, ConstructError> {
    let n = g.n();
    match choice {
        V1Choice::Independent => sparse(g, 0, V1Mode::Independent),
        V1Choice::Sparse(m) => {
            let c = sparse(g, *m, V1Mode::Sparse(*m))?;
            if let Some((degree, v)) = max_internal_degree(g, &c.set.set).filter(|&(d, _)| d + 2 > r) {
                return Err(ConstructError::V1DegreeTooHigh {
                    v,
                    degree,
                    limit: r - 2,
                });
            }
            Ok(c)
        }
        V1Choice::Auto(params) => {
            if params.n != n as u64 {
                return Err(ConstructError::SizeMismatch {
                    params: params.n,
                    host: n,
                });
            }
            let pred = predict(params)?;
            if pred.case == PredictionCase::OnePoint {
                return sparse(g, 0, V1Mode::Independent);
            }
            let mut best: Option<Candidate> = None;
            for m in 0..=pred.r_prime as usize + 1 {
                let c = sparse(g, m, if m == 0 { V1Mode::Independent } else { V1Mode::Sparse(m) })?;
                if max_internal_degree(g, &c.set.set).is_some_and(|(d, _)| d + 2 > r) {
                    continue;
                }
                if best
                    .as_ref()
                    .is_none_or(|b| objective(n, r, &c.set) < objective(n, r, &b.set))
                {
                    best = Some(c);
                }
            }
            best.ok_or(ConstructError::NoSparseSet(pred.r_prime as usize + 1))
        }
    }
}

/// Builds a `K_{1,r}`-saturated subgraph of `g` with
/// `e(V1) + ⌈(r - 1)|V2| / 2⌉` edges.
///
/// If no cover exists for the chosen `V1` (typically because no remainder
/// clique of the forced size exists), the highest-degree `V1` vertices are
/// moved to `V2` one at a time, up to `r - 1` of them, which shifts `|K*|`.
pub fn build_saturated(g: &Graph, r: usize, choice: &V1Choice, seed: &Seed) -> Result<BuildReport, ConstructError> {
    build_with_restarts(g, r, choice, seed, DEFAULT_RESTARTS)
}

/// [`build_saturated`] with an explicit number of cover attempts per `V1`.
pub fn build_with_restarts(
    g: &Graph,
    r: usize,
    choice: &V1Choice,
    seed: &Seed,
    restarts: usize,
) -> Result<BuildReport, ConstructError> {
    if r < 2 {
        return Err(ConstructError::InvalidStar(r));
    }
    let n = g.n();
    let picked = choose_v1(g, r, choice)?;
    let searched = VertexSet::from_slice(n, &picked.set.set);
    // trimming order: most V1 neighbours first, then larger ids
    let mut trim_order = picked.set.set.clone();
    trim_order.sort_by_key(|&v| (std::cmp::Reverse(g.degree_in(v, &searched)), std::cmp::Reverse(v)));

    let mut last_err = None;
    for trimmed in 0..r.min(picked.set.size + 1) {
        let mut v1: Vec<usize> = picked.set.set.clone();
        v1.retain(|v| !trim_order[..trimmed].contains(v));
        let v1_set = VertexSet::from_slice(n, &v1);
        let v2: Vec<usize> = (0..n).filter(|&v| !v1_set.contains(v)).collect();
        if v2.len() < r {
            if trimmed == 0 {
                return Err(ConstructError::TooFewV2 { v2: v2.len(), r });
            }
            continue;
        }
        let t = remainder_size(v2.len(), r);
        let need_cross = (r - 1) % 2 == 1 && t % 2 == 1;
        // V1 vertices that can still take one more edge
        let partners = |v: usize| -> Vec<usize> {
            g.neighbors(v)
                .intersection(&v1_set)
                .iter()
                .filter(|&w| g.degree_in(w, &v1_set) + 3 <= r)
                .collect()
        };
        let pool = need_cross.then(|| {
            VertexSet::from_slice(
                n,
                &v2.iter()
                    .copied()
                    .filter(|&v| !partners(v).is_empty())
                    .collect::<Vec<_>>(),
            )
        });
        let sub = seed.derive(trimmed as u64);
        let Some((cover, attempts)) = cover_attempts(g, &v2, r, &sub, restarts, pool.as_ref())? else {
            last_err = Some(ConstructError::CoverFailed(restarts));
            continue;
        };

        let (anchor, partner) = if need_cross {
            let a = cover
                .remainder
                .iter()
                .copied()
                .find(|&v| !partners(v).is_empty())
                .expect("remainder meets the anchor pool");
            let w = partners(a)
                .into_iter()
                .min_by_key(|&w| (g.degree_in(w, &v1_set), w))
                .expect("nonempty");
            (Some(a), Some(w))
        } else {
            (None, None)
        };
        let rem = regularize_remainder(&cover.remainder, r, need_cross, anchor)?;

        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .filter(|&(a, b)| v1_set.contains(a) && v1_set.contains(b))
            .collect();
        let v1_edges = edges.len();
        for c in &cover.cliques {
            for (i, &a) in c.iter().enumerate() {
                for &b in &c[i + 1..] {
                    edges.push((a, b));
                }
            }
        }
        edges.extend(rem.edges.iter().copied());
        if let (Some(a), Some(w)) = (anchor, partner) {
            edges.push((a.min(w), a.max(w)));
        }
        let h = Graph::new(n, &edges).expect("host edges");
        if !h.is_spanning_subgraph_of(g) {
            return Err(ConstructError::RemainderNotClique);
        }
        let result = SaturatedSubgraph::new(g, h, r)?;
        let want = v1_edges + ((r - 1) * v2.len()).div_ceil(2);
        if result.edge_count != want {
            return Err(ConstructError::IdentityFailed {
                got: result.edge_count,
                want,
            });
        }
        let parity_case = match ((r - 1) % 2, t % 2) {
            (0, _) => ParityCase::Even,
            (_, 0) => ParityCase::OddEven,
            _ => ParityCase::OddOdd,
        };
        return Ok(BuildReport {
            result,
            v1,
            v1_edges,
            v1_mode: picked.mode,
            v1_exact: picked.set.exact,
            v1_trimmed: trimmed,
            cover,
            parity_case,
            cross_vertex: anchor,
            cross_partner: partner,
            restarts: attempts,
        });
    }
    Err(last_err.unwrap_or(ConstructError::CoverFailed(restarts)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{is_star_saturated, sat_exact_structured};

    #[test]
    fn cover_examples() {
        let s = Seed::new(1);
        let k12 = Graph::complete(12);
        let all: Vec<usize> = (0..12).collect();
        let c = clique_cover(&k12, &all, 3, &s, 8).unwrap().unwrap();
        assert_eq!((c.cliques.len(), c.remainder.len()), (3, 3));
        let c = clique_cover(&Graph::complete(10), &all[..10], 3, &s, 8)
            .unwrap()
            .unwrap();
        assert_eq!((c.cliques.len(), c.remainder.len()), (2, 4));
        assert_eq!(c.covered(), 10);
        assert!(matches!(
            clique_cover(&k12, &all[..2], 3, &s, 8),
            Err(ConstructError::TooFewV2 { v2: 2, r: 3 })
        ));
        // a path has no triangle at all
        let path = Graph::new(6, &(0..5).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap();
        assert_eq!(clique_cover(&path, &all[..6], 3, &s, 8).unwrap(), None);
    }

    #[test]
    fn cover_is_valid_on_random_hosts() {
        for t in 0..10u64 {
            let s = Seed::new(2).derive(t);
            let g = Graph::gnp(80, 0.5, &s).unwrap();
            let v2: Vec<usize> = (0..80).filter(|v| v % 7 != 0).collect();
            for r in 3..=5 {
                let c = clique_cover(&g, &v2, r, &s, 16).unwrap().unwrap();
                assert_eq!(c.covered(), v2.len());
                let mut seen: Vec<usize> = c.cliques.iter().flatten().chain(&c.remainder).copied().collect();
                seen.sort_unstable();
                assert_eq!(seen, v2);
                assert!(c.cliques.iter().all(|k| k.len() == r && g.is_clique(k)));
                assert!(g.is_clique(&c.remainder));
                assert!((r..2 * r).contains(&c.remainder.len()));
            }
        }
    }

    #[test]
    fn remainder_examples() {
        let five: Vec<usize> = (0..5).collect();
        let rem = regularize_remainder(&five, 3, false, None).unwrap();
        assert_eq!(rem.edges, vec![(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
        let six: Vec<usize> = (10..16).collect();
        assert_eq!(regularize_remainder(&six, 4, false, None).unwrap().edges.len(), 9);
        let rem = regularize_remainder(&five, 4, true, Some(2)).unwrap();
        assert_eq!(rem.edges.len(), 7);
        assert_eq!(rem.cross_at, Some(2));
        assert!(matches!(
            regularize_remainder(&five, 4, true, None),
            Err(ConstructError::MissingAnchor)
        ));
        assert!(matches!(
            regularize_remainder(&five, 4, false, None),
            Err(ConstructError::CrossMismatch)
        ));
        assert!(matches!(
            regularize_remainder(&five, 4, true, Some(9)),
            Err(ConstructError::AnchorOutside(9))
        ));
        assert!(matches!(
            regularize_remainder(&five, 2, false, None),
            Err(ConstructError::RemainderSize { .. })
        ));
    }

    #[test]
    fn remainder_degrees_all_cases() {
        for r in 2..=8usize {
            for t in r..2 * r {
                let ks: Vec<usize> = (0..t).map(|i| 3 * i + 1).collect();
                let cross = (r - 1) % 2 == 1 && t % 2 == 1;
                for &a in if cross { &ks[..] } else { &ks[..1] } {
                    let rem = regularize_remainder(&ks, r, cross, cross.then_some(a)).unwrap();
                    let expected = (t * (r - 1) - usize::from(cross)) / 2;
                    assert_eq!(rem.edges.len(), expected, "r={r} t={t}");
                }
            }
        }
    }

    #[test]
    fn complete_five_r3() {
        let g = Graph::complete(5);
        let rep = build_saturated(&g, 3, &V1Choice::Independent, &Seed::new(0)).unwrap();
        assert_eq!(rep.v1.len(), 1);
        assert_eq!(rep.cover.remainder.len(), 4);
        assert_eq!(rep.result.edge_count, 4);
    }

    #[test]
    fn complete_hosts_near_optimal() {
        for r in 3..=5usize {
            for n in r + 1..=12 {
                let g = Graph::complete(n);
                let rep = build_saturated(&g, r, &V1Choice::Independent, &Seed::new(n as u64)).unwrap();
                let exact = sat_exact_structured(&g, r).unwrap().value;
                let diff = rep.result.edge_count - exact;
                assert!(diff <= 1, "n={n} r={r} built {} exact {exact}", rep.result.edge_count);
            }
        }
    }

    #[test]
    fn random_hosts_all_parity_cases() {
        let mut seen = Vec::new();
        for t in 0..12u64 {
            let s = Seed::new(77).derive(t);
            let n = 60 + 3 * t as usize;
            let g = Graph::gnp(n, 0.5, &s).unwrap();
            for r in 3..=5usize {
                let params = TheoryParams::new(n as u64, 0.5, r as u64).unwrap();
                // the auto choice favours even (r - 1)|V2|, so independent sets cover odd-odd
                for choice in [V1Choice::Auto(params), V1Choice::Independent] {
                    let rep = build_saturated(&g, r, &choice, &s).unwrap();
                    assert!(is_star_saturated(&g, &rep.result.h, r).unwrap().is_saturated());
                    let v2 = n - rep.v1.len();
                    assert_eq!(rep.result.edge_count, rep.v1_edges + ((r - 1) * v2).div_ceil(2));
                    assert_eq!(rep.cross_vertex.is_some(), rep.parity_case == ParityCase::OddOdd);
                    seen.push(rep.parity_case);
                }
            }
        }
        for case in [ParityCase::Even, ParityCase::OddEven, ParityCase::OddOdd] {
            assert!(seen.contains(&case), "{case} never exercised");
        }
    }

    #[test]
    fn too_few_vertices_is_an_error() {
        // empty host: V1 is everything, V2 is empty
        assert!(matches!(
            build_saturated(&Graph::empty(6), 3, &V1Choice::Independent, &Seed::new(0)),
            Err(ConstructError::TooFewV2 { .. })
        ));
    }

    #[test]
    fn sparse_mode_checks_degrees() {
        // K_4 with m = 3 yields a triangle, whose vertices have degree 2 > r - 2 = 1
        assert!(matches!(
            build_saturated(&Graph::complete(4), 3, &V1Choice::Sparse(3), &Seed::new(0)),
            Err(ConstructError::V1DegreeTooHigh { .. })
        ));
    }
}
