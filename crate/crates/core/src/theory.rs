//! Closed-form quantities: expected counts of sparse sets, the
//! independence-number anchor, the predicted star saturation window, and the
//! classic saturation numbers of complete hosts.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoryError {
    #[error("probability {0} must lie strictly between 0 and 1")]
    InvalidProbability(f64),
    #[error("set size {k} exceeds vertex count {n}")]
    SetTooLarge { k: u64, n: u64 },
    #[error("n = {0} is too small: log_b(n) must exceed 1")]
    TooFewVertices(u64),
    #[error("star size r = {0} is out of range")]
    InvalidStar(u64),
    #[error("clique size m = {m} requires 2 <= m <= n = {n}")]
    InvalidClique { n: u64, m: u64 },
    #[error("invalid tolerances: need 0 < eps' < eps < delta (got eps' = {eps_prime}, eps = {eps}, delta = {delta})")]
    InvalidTolerances { eps: f64, eps_prime: f64, delta: f64 },
}

/// `ln C(n, k)`. Short products are summed term by term, long ones go
/// through log-gamma.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k < 128 {
        (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
    } else {
        libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
    }
}

fn check_p(p: f64) -> Result<(), TheoryError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(TheoryError::InvalidProbability(p))
    }
}

/// Natural log of the expected number of `k`-sets inducing exactly `m`
/// edges in `G(n, p)`; `None` when the expectation is zero (`m > C(k, 2)`).
pub fn log_phi(n: u64, p: f64, k: u64, m: u64) -> Result<Option<f64>, TheoryError> {
    check_p(p)?;
    if k > n {
        return Err(TheoryError::SetTooLarge { k, n });
    }
    let pairs = k * k.saturating_sub(1) / 2;
    if m > pairs {
        return Ok(None);
    }
    Ok(Some(
        ln_choose(n, k) + ln_choose(pairs, m) + m as f64 * p.ln() + (pairs - m) as f64 * (-p).ln_1p(),
    ))
}

/// `2 log_b n - 2 log_b log_b n + 2 log_b(e/2) + 1` with `b = 1/(1-p)`.
pub fn alpha_p_value(n: u64, p: f64) -> Result<f64, TheoryError> {
    check_p(p)?;
    let ln_b = -(-p).ln_1p();
    let log_b = |x: f64| x.ln() / ln_b;
    let lb_n = log_b(n as f64);
    if n < 3 || lb_n <= 1.0 {
        return Err(TheoryError::TooFewVertices(n));
    }
    Ok(2.0 * lb_n - 2.0 * log_b(lb_n) + 2.0 * (1.0 - std::f64::consts::LN_2) / ln_b + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryParams {
    pub n: u64,
    pub p: f64,
    pub r: u64,
    pub eps: f64,
    pub eps_prime: f64,
    pub delta: f64,
}

impl TheoryParams {
    pub const DEFAULT_EPS: f64 = 0.05;
    pub const DEFAULT_EPS_PRIME: f64 = 1e-3;
    pub const DEFAULT_DELTA: f64 = 0.1;

    /// Parameters with the default tolerances.
    pub fn new(n: u64, p: f64, r: u64) -> Result<TheoryParams, TheoryError> {
        Self::with_tolerances(n, p, r, Self::DEFAULT_EPS, Self::DEFAULT_EPS_PRIME, Self::DEFAULT_DELTA)
    }

    pub fn with_tolerances(
        n: u64,
        p: f64,
        r: u64,
        eps: f64,
        eps_prime: f64,
        delta: f64,
    ) -> Result<TheoryParams, TheoryError> {
        let t = TheoryParams {
            n,
            p,
            r,
            eps,
            eps_prime,
            delta,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), TheoryError> {
        check_p(self.p)?;
        if self.r < 3 {
            return Err(TheoryError::InvalidStar(self.r));
        }
        if !(0.0 < self.eps_prime && self.eps_prime < self.eps && self.eps < self.delta) {
            return Err(TheoryError::InvalidTolerances {
                eps: self.eps,
                eps_prime: self.eps_prime,
                delta: self.delta,
            });
        }
        Ok(())
    }

    /// `b = 1/(1-p)`.
    pub fn base(&self) -> f64 {
        1.0 / (1.0 - self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictionCase {
    OnePoint,
    TwoPoint,
}

impl fmt::Display for PredictionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredictionCase::OnePoint => "one-point",
            PredictionCase::TwoPoint => "two-point",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub b: f64,
    pub alpha_p: f64,
    pub x0: i64,
    pub r_prime: u64,
    pub mu: u64,
    pub case: PredictionCase,
    pub base_term: i64,
    pub values: Vec<i64>,
    /// Numerical caveats: `x0` floor close to an integer, or the expected
    /// counts at `x0` failing to grow by at least a factor 10 per extra edge.
    pub warnings: Vec<String>,
}

/// `⌈a / 2⌉` for any sign of `a`.
pub(crate) fn ceil_half(a: i64) -> i64 {
    -((-a).div_euclid(2))
}

const FLOOR_GUARD: f64 = 1e-9;

/// Evaluates `x0`, `r'`, `mu` and the predicted window of star saturation
/// numbers for `G(n, p)`.
pub fn predict(params: &TheoryParams) -> Result<Prediction, TheoryError> {
    params.validate()?;
    let TheoryParams {
        n,
        p,
        r,
        eps,
        eps_prime,
        ..
    } = *params;
    let mut warnings = Vec::new();
    let alpha_p = alpha_p_value(n, p)?;
    let shifted = alpha_p + eps;
    let x0 = shifted.floor() as i64;
    if (shifted - shifted.round()).abs() < FLOOR_GUARD {
        warnings.push(format!(
            "alpha_p + eps = {shifted:.12} is within {FLOOR_GUARD:e} of an integer; x0 = {x0} may be off by one"
        ));
    }

    let gap = n as i64 - x0;
    let both_odd = gap.rem_euclid(2) == 1 && (r - 1) % 2 == 1;
    let r_prime = (r - 2) / 2 - u64::from(both_odd);

    // ln(phi_m(x0)); sets larger than the graph have expectation 0.
    let ln_phi_at_x0 = |m: u64| -> Result<f64, TheoryError> {
        if x0 < 0 || x0 as u64 > n {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(log_phi(n, p, x0 as u64, m)?.unwrap_or(f64::NEG_INFINITY))
    };
    let threshold = eps_prime.ln();
    let (case, mu) = if ln_phi_at_x0(r_prime)? < threshold {
        (PredictionCase::OnePoint, r_prime + 1)
    } else {
        let mut mu = r_prime;
        for m in 0..=r_prime {
            if ln_phi_at_x0(m)? >= threshold {
                mu = m;
                break;
            }
        }
        (PredictionCase::TwoPoint, mu)
    };

    for m in 0..=r_prime {
        let (lo, hi) = (ln_phi_at_x0(m)?, ln_phi_at_x0(m + 1)?);
        if (hi - lo).partial_cmp(&std::f64::consts::LN_10) != Some(std::cmp::Ordering::Greater) {
            warnings.push(format!(
                "phi_{}(x0) / phi_{m}(x0) = exp({:.4}) is not above 10",
                m + 1,
                hi - lo
            ));
        }
    }

    let base_term = ceil_half((r as i64 - 1) * gap);
    let first = base_term + mu as i64;
    let values = match case {
        PredictionCase::OnePoint => vec![first],
        PredictionCase::TwoPoint => vec![first, first + 1],
    };
    Ok(Prediction {
        b: params.base(),
        alpha_p,
        x0,
        r_prime,
        mu,
        case,
        base_term,
        values,
        warnings,
    })
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// `sat(K_n, K_{1,r})`.
pub fn classic_star_sat(n: u64, r: u64) -> Result<u64, TheoryError> {
    if r < 1 || n <= r {
        return Err(TheoryError::InvalidStar(r));
    }
    let small = choose2(r) + choose2(n - r);
    // ⌈(r-1)n/2 - r²/8⌉ = ⌈(4(r-1)n - r²) / 8⌉, numerator positive for n > r
    let large = (4 * (r - 1) * n - r * r).div_ceil(8);
    if 2 * n < 3 * r {
        Ok(small)
    } else if 2 * n > 3 * r {
        Ok(large)
    } else {
        assert_eq!(small, large, "branches disagree at n = 3r/2 = {n}");
        Ok(large)
    }
}

/// `sat(K_n, K_m)`.
pub fn classic_clique_sat(n: u64, m: u64) -> Result<u64, TheoryError> {
    if m < 2 || n < m {
        return Err(TheoryError::InvalidClique { n, m });
    }
    let direct = (m - 2) * (n - m + 2) + choose2(m - 2);
    let complement = choose2(n) - choose2(n - m + 2);
    assert_eq!(direct, complement);
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn log_phi_examples() {
        let l = log_phi(10, 0.5, 3, 0).unwrap().unwrap();
        assert!(close(l, 15f64.ln(), 1e-12), "{l}");
        let l = log_phi(10, 0.5, 3, 3).unwrap().unwrap();
        assert!(close(l, 15f64.ln(), 1e-12));
        assert_eq!(log_phi(10, 0.5, 3, 4).unwrap(), None);
        assert!(log_phi(10, 0.5, 11, 0).is_err());
        assert!(log_phi(10, 1.0, 3, 0).is_err());
        assert_eq!(log_phi(10, 0.5, 0, 0).unwrap(), Some(0.0));
    }

    #[test]
    fn ln_choose_branches_agree() {
        // both evaluation routes around the switch-over point
        for n in [300u64, 1000, 5000] {
            for k in [120u64, 127, 128, 140] {
                let direct: f64 = (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum();
                assert!(close(ln_choose(n, k), direct, 1e-12), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn alpha_p_examples() {
        // high-precision reference values
        assert!(close(alpha_p_value(1024, 0.5).unwrap(), 15.241533892003202, 1e-13));
        assert!(close(alpha_p_value(1 << 16, 0.5).unwrap(), 25.885390081777927, 1e-13));
        assert!(close(alpha_p_value(200, 0.5).unwrap(), 11.304501189429896, 1e-13));
        assert!(alpha_p_value(2, 0.5).is_err());
        for n in 100..2000 {
            assert!(alpha_p_value(n + 1, 0.5).unwrap() > alpha_p_value(n, 0.5).unwrap());
        }
    }

    #[test]
    fn r_prime_parity() {
        let p = TheoryParams::new(200, 0.5, 3).unwrap();
        let pred = predict(&p).unwrap();
        assert_eq!(pred.x0, 11);
        assert_eq!(pred.r_prime, 0);

        // r = 4: r' = 1 when n - x0 is even, 0 when odd
        let even = predict(&TheoryParams::new(201, 0.5, 4).unwrap()).unwrap();
        assert_eq!((201 - even.x0) % 2, 0);
        assert_eq!(even.r_prime, 1);
        let odd = predict(&TheoryParams::new(200, 0.5, 4).unwrap()).unwrap();
        assert_eq!((200 - odd.x0) % 2, 1);
        assert_eq!(odd.r_prime, 0);
    }

    #[test]
    fn prediction_regression_large_n() {
        // reference: 50-digit evaluation of the same closed forms
        let pred = predict(&TheoryParams::with_tolerances(1_000_000, 0.5, 5, 0.05, 1e-3, 0.1).unwrap()).unwrap();
        assert!(close(pred.alpha_p, 33.11456052769472, 1e-12));
        assert_eq!(pred.x0, 33);
        assert_eq!(pred.r_prime, 1);
        assert_eq!(pred.mu, 0);
        assert_eq!(pred.case, PredictionCase::TwoPoint);
        assert_eq!(pred.base_term, 1_999_934);
        assert_eq!(pred.values, vec![1_999_934, 1_999_935]);
        assert!(pred.warnings.is_empty(), "{:?}", pred.warnings);
    }

    #[test]
    fn one_point_case_when_expectation_tiny() {
        // eps' above phi_{r'}(x0) forces the one-point branch with mu = r' + 1
        let params = TheoryParams {
            n: 200,
            p: 0.5,
            r: 3,
            eps: 0.9,
            eps_prime: 0.5,
            delta: 0.95,
        };
        let pred = predict(&params).unwrap();
        assert_eq!(pred.x0, 12);
        assert_eq!(pred.case, PredictionCase::OnePoint);
        assert_eq!(pred.mu, pred.r_prime + 1);
        assert_eq!(pred.values, vec![pred.base_term + pred.mu as i64]);
    }

    #[test]
    fn tolerance_ordering_enforced() {
        assert!(TheoryParams::with_tolerances(100, 0.5, 3, 0.05, 0.06, 0.1).is_err());
        assert!(TheoryParams::new(100, 0.5, 2).is_err());
        assert!(TheoryParams::new(100, 0.0, 3).is_err());
    }

    #[test]
    fn ceil_half_signs() {
        assert_eq!(ceil_half(5), 3);
        assert_eq!(ceil_half(4), 2);
        assert_eq!(ceil_half(-3), -1);
        assert_eq!(ceil_half(0), 0);
    }

    #[test]
    fn classic_formulas() {
        assert_eq!(classic_star_sat(5, 4).unwrap(), 6);
        assert_eq!(classic_star_sat(10, 3).unwrap(), 9);
        assert_eq!(classic_star_sat(6, 4).unwrap(), 7);
        assert!(classic_star_sat(4, 4).is_err());
        assert_eq!(classic_clique_sat(5, 3).unwrap(), 4);
        assert_eq!(classic_clique_sat(6, 4).unwrap(), 9);
        for n in 2..20 {
            assert_eq!(classic_clique_sat(n, 2).unwrap(), 0);
        }
        assert!(classic_clique_sat(3, 4).is_err());
    }
}
