use serde::Serialize;

use crate::graph::Graph;
use crate::sat::{check_lemma1, Lemma1Report};
use crate::sparse::{max_sparse_set, SparseMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertStatus {
    /// Every set size up to `n` is covered.
    Full,
    /// Sizes past `k_max` could not be settled.
    Partial,
}

impl CertStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CertStatus::Full => "full",
            CertStatus::Partial => "partial",
        }
    }
}

/// `sat(G, K_{1,r}) >= value`, with `value = ⌈(r - 1)(n - x0) / 2⌉ + mu`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerCertificate {
    pub value: usize,
    pub x0: usize,
    pub mu: usize,
    pub status: CertStatus,
    /// The certified pair is the predicted one.
    pub predicted: bool,
    pub lemma: Lemma1Report,
}

fn bound(n: usize, r: usize, x0: usize, mu: usize) -> usize {
    ((r - 1) * (n - x0)).div_ceil(2) + mu
}

/// Tries to certify `⌈(r - 1)(n - x0) / 2⌉ + mu` as a lower bound on
/// `sat(G, K_{1,r})`.
///
/// A minimum saturated subgraph has `e(V1) + ⌈(r - 1)(n - |V1|) / 2⌉` edges
/// or more. With `k = |V1|`:
/// - `k < x0` clears the bound outright when `mu <= ⌊(r - 1) / 2⌋`;
/// - `k = x0` needs every `x0`-set to span at least `mu` edges, checked with
///   an exact sparse-set search;
/// - `k > x0` needs every `k`-set to span `⌈(r - 1)(k - x0) / 2⌉ + mu`
///   edges, checked by [`check_lemma1`].
///
/// When the predicted pair is refuted, pairs with `x0` raised by up to 2 or
/// `mu` lowered are tried in decreasing order of the bound, and the first one
/// that survives is returned. `None` when nothing survives.
pub fn certify_lower(
    g: &Graph,
    r: usize,
    x0: usize,
    mu: usize,
    k_max_span: Option<usize>,
    budget: u64,
) -> Option<LowerCertificate> {
    let n = g.n();
    if x0 == 0 || r < 2 {
        return None;
    }
    let mu_cap = (r - 1) / 2;
    let target = bound(n, r, x0.min(n), mu);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for xs in x0..=x0 + 2 {
        if xs > n {
            break;
        }
        for m in 0..=mu_cap {
            if bound(n, r, xs, m) <= target {
                pairs.push((xs, m));
            }
        }
    }
    pairs.sort_by(|a, b| bound(n, r, b.0, b.1).cmp(&bound(n, r, a.0, a.1)).then(a.cmp(b)));

    for (xs, m) in pairs {
        if m > 0 {
            match max_sparse_set(g, m - 1, SparseMode::AtMost, budget) {
                Some(res) if res.exact && res.size < xs => {}
                _ => continue,
            }
        }
        let k_max = k_max_span.map(|span| xs + span);
        let lemma = check_lemma1(g, xs, r, m, k_max);
        if lemma.counterexample.is_some() {
            continue;
        }
        return Some(LowerCertificate {
            value: bound(n, r, xs, m),
            x0: xs,
            mu: m,
            status: if lemma.full {
                CertStatus::Full
            } else {
                CertStatus::Partial
            },
            predicted: (xs, m) == (x0, mu),
            lemma,
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;
    use crate::sat::sat_exact_structured;

    #[test]
    fn certified_bounds_hold() {
        for t in 0..60u64 {
            let s = Seed::new(41).derive(t);
            let n = 8 + (s.draw(0) % 5) as usize;
            let r = 3 + (s.draw(1) % 3) as usize;
            let g = Graph::gnp(n, 0.5, &s).unwrap();
            let x0 = 2 + (s.draw(2) % 4) as usize;
            let mu = (s.draw(3) % 2) as usize;
            let exact = sat_exact_structured(&g, r).unwrap().value;
            if let Some(c) = certify_lower(&g, r, x0, mu, None, u64::MAX) {
                assert!(c.value <= exact, "t={t} cert {c:?} exact {exact}");
                assert_eq!(c.status, CertStatus::Full);
            }
        }
    }

    #[test]
    fn complete_graph_certifies_prediction() {
        let g = Graph::complete(12);
        let c = certify_lower(&g, 3, 2, 1, None, u64::MAX).unwrap();
        assert!(c.predicted);
        assert_eq!(c.value, 10 + 1);
        assert!(c.value <= sat_exact_structured(&g, 3).unwrap().value);
    }

    #[test]
    fn refuted_prediction_falls_back() {
        // empty host: every set is independent, so only x0 = n survives
        let g = Graph::empty(6);
        let c = certify_lower(&g, 3, 4, 0, None, u64::MAX).unwrap();
        assert!(!c.predicted);
        assert_eq!((c.x0, c.mu, c.value), (6, 0, 0));
        assert!(certify_lower(&g, 3, 2, 0, None, u64::MAX).is_none());
    }
}
