use serde::Serialize;

use crate::graph::Graph;
use crate::sparse::sparse_set_decision;

/// Default number of sizes above `x0` that are searched exhaustively.
pub const DEFAULT_K_SPAN: usize = 20;

/// Smallest admissible edge count of a `k`-set: the least integer that is at
/// least `(r - 1)(k - x0) / 2 + mu`.
pub fn lemma1_threshold(k: usize, x0: usize, r: usize, mu: usize) -> usize {
    ((r - 1) * k.saturating_sub(x0) + 2 * mu).div_ceil(2)
}

/// A `k`-set with fewer induced edges than the threshold allows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Counterexample {
    pub k: usize,
    pub set: Vec<usize>,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    pub x0: usize,
    pub r: usize,
    pub mu: usize,
    pub k_max: usize,
    /// Sizes settled by exhaustive search, the rest follow by propagation.
    pub searched: Vec<usize>,
    /// Every size in `x0 + 1 ..= certified_through` is known to satisfy the bound.
    pub certified_through: usize,
    /// The bound holds for every size up to `n`.
    pub full: bool,
    pub counterexample: Option<Lemma1Counterexample>,
}

impl Lemma1Report {
    pub fn ok(&self) -> bool {
        self.full && self.counterexample.is_none()
    }
}

/// If every `(k-1)`-set spans at least `prev` edges, every `k`-set spans at
/// least the returned number: deleting a vertex of induced degree at least
/// `ceil(2e / k)` leaves a `(k-1)`-set with at most `e - ceil(2e / k)` edges.
fn propagate(prev: usize, k: usize) -> usize {
    if k <= 2 {
        return 0;
    }
    let mut e = prev;
    while e - (2 * e).div_ceil(k) < prev {
        e += 1;
    }
    e
}

/// Checks that every `k`-set with `x0 < k <= n` spans at least
/// [`lemma1_threshold`] edges of `g`.
///
/// Sizes up to `k_max` (default `x0 + DEFAULT_K_SPAN`) are searched
/// exhaustively unless the bound already follows from the previous size. Past
/// `k_max` only propagation is used, and the report is partial if it falls
/// short.
pub fn check_lemma1(g: &Graph, x0: usize, r: usize, mu: usize, k_max: Option<usize>) -> Lemma1Report {
    let n = g.n();
    let k_max = k_max.unwrap_or(x0 + DEFAULT_K_SPAN);
    let mut report = Lemma1Report {
        x0,
        r,
        mu,
        k_max,
        searched: Vec::new(),
        certified_through: x0.min(n),
        full: false,
        counterexample: None,
    };
    // minimum edge count over (k-1)-sets known so far
    let mut known = 0usize;
    for k in x0 + 1..=n {
        let need = lemma1_threshold(k, x0, r, mu);
        let derived = propagate(known, k);
        if derived >= need {
            known = derived;
        } else if k > k_max {
            return report;
        } else {
            report.searched.push(k);
            if let Some(set) = sparse_set_decision(g, k, need) {
                let edges = g.induced_edge_count(&set).expect("in range");
                report.counterexample = Some(Lemma1Counterexample { k, set, edges });
                return report;
            }
            known = need.max(derived);
        }
        report.certified_through = k;
    }
    report.full = true;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;

    #[test]
    fn thresholds() {
        assert_eq!(lemma1_threshold(10, 10, 4, 1), 1);
        assert_eq!(lemma1_threshold(11, 10, 4, 0), 2);
        assert_eq!(lemma1_threshold(11, 10, 4, 1), 3);
        assert_eq!(lemma1_threshold(13, 10, 3, 0), 3);
    }

    #[test]
    fn propagation_is_the_least_safe_value() {
        for k in 3..30usize {
            for prev in 0..200usize {
                let e = propagate(prev, k);
                assert!(e - (2 * e).div_ceil(k) >= prev);
                if e > prev {
                    let f = e - 1;
                    assert!(f - (2 * f).div_ceil(k) < prev);
                }
            }
        }
    }

    #[test]
    fn complete_graph_passes() {
        for n in 3..=30usize {
            let g = Graph::complete(n);
            for x0 in 2..n {
                let rep = check_lemma1(&g, x0, 4, 1, None);
                assert!(rep.ok(), "n={n} x0={x0}");
                assert_eq!(rep.certified_through, n);
            }
        }
    }

    #[test]
    fn empty_graph_fails_right_above_x0() {
        let rep = check_lemma1(&Graph::empty(6), 2, 3, 0, None);
        let cx = rep.counterexample.clone().unwrap();
        assert_eq!((cx.k, cx.edges, cx.set.len()), (3, 0, 3));
        assert!(!rep.ok());
        assert_eq!(rep.certified_through, 2);
    }

    #[test]
    fn agrees_with_enumeration() {
        use crate::sparse::count_sets;
        for t in 0..40u64 {
            let s = Seed::new(12).derive(t);
            let n = 7 + (s.draw(0) % 6) as usize;
            let g = Graph::gnp(n, 0.5, &s).unwrap();
            let x0 = 2 + (s.draw(1) % 3) as usize;
            let r = 3 + (s.draw(2) % 3) as usize;
            let mu = (s.draw(3) % 2) as usize;
            let rep = check_lemma1(&g, x0, r, mu, None);
            let bad = (x0 + 1..=n).find(|&k| {
                let need = lemma1_threshold(k, x0, r, mu);
                (0..need).any(|e| count_sets(&g, k, e).unwrap() > 0)
            });
            assert_eq!(rep.counterexample.as_ref().map(|c| c.k), bad, "t={t}");
            assert_eq!(rep.full, bad.is_none());
            if let Some(c) = &rep.counterexample {
                assert!(c.edges < lemma1_threshold(c.k, x0, r, mu));
            }
        }
    }

    #[test]
    fn partial_when_span_is_short() {
        // sparse host: the bound needs search at every size, so a tiny span stops early
        let g = Graph::new(12, &(0..11).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap();
        let rep = check_lemma1(&g, 7, 2, 0, Some(7));
        assert!(!rep.full);
        assert_eq!(rep.certified_through, 7);
        assert!(rep.counterexample.is_none());
    }
}
