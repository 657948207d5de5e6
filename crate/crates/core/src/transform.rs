//! Generalized logistic change of variables mapping ℝ onto (0, 1).
//!
//! u = G(x) = 1 − (1 + eˣ)^(−α) with shape α > 0. The inverse and its
//! Jacobian turn the improper overlap integral into an integral on the unit
//! interval; the Jacobian diverges at u = 0 and u = 1, so those endpoints
//! are typed errors and callers decide the exclusion policy.

use crate::error::{OvlError, Result};

/// ln(1 + eˣ), evaluated by the large-argument branch so it never overflows.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Shape α and an even grid size r, validated together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConfig {
    alpha: f64,
    r: usize,
}

impl TransformConfig {
    /// Requires `alpha > 0` finite and `r` even, `r >= 2`.
    pub fn new(alpha: f64, r: usize) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(OvlError::InvalidParameter(format!(
                "alpha = {alpha} must be finite and > 0"
            )));
        }
        if r < 2 || !r.is_multiple_of(2) {
            return Err(OvlError::InvalidParameter(format!(
                "r = {r} must be even and >= 2"
            )));
        }
        Ok(Self { alpha, r })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r(&self) -> usize {
        self.r
    }
}

/// u = 1 − (1 + eˣ)^(−α), computed as 1 − exp(−α·softplus(x)).
///
/// Strictly increasing in x; stable for |x| up to 700.
pub fn logistic_cdf(alpha: f64, x: f64) -> f64 {
    debug_assert!(alpha > 0.0);
    -(-alpha * softplus(x)).exp_m1()
}

/// x = G⁻¹(u) = ln((1 − u)^(−1/α) − 1) for u strictly inside (0, 1).
pub fn logistic_inverse(alpha: f64, u: f64) -> Result<f64> {
    debug_assert!(alpha > 0.0);
    if !(0.0 < u && u < 1.0) {
        return Err(OvlError::DomainError(format!(
            "logistic_inverse requires 0 < u < 1, got {u}"
        )));
    }
    // (1-u)^(-1/alpha) = exp(y) with y = -ln(1-u)/alpha > 0; then
    // ln(exp(y) - 1) = ln(expm1(y)), switching to y + ln1p(-exp(-y)) before
    // expm1 can overflow.
    let y = -(-u).ln_1p() / alpha;
    if y > 30.0 {
        Ok(y + (-(-y).exp()).ln_1p())
    } else {
        Ok(y.exp_m1().ln())
    }
}

/// dx/du = 1 / (α (1 − u) (1 − (1 − u)^(1/α))); strictly positive on (0, 1)
/// and divergent at both endpoints.
pub fn logistic_jacobian(alpha: f64, u: f64) -> Result<f64> {
    debug_assert!(alpha > 0.0);
    if !(0.0 < u && u < 1.0) {
        return Err(OvlError::DomainError(format!(
            "logistic_jacobian diverges outside 0 < u < 1, got {u}"
        )));
    }
    // 1 - (1-u)^(1/alpha) = -expm1(ln(1-u)/alpha), accurate for u near 0
    let frac = -((-u).ln_1p() / alpha).exp_m1();
    Ok(1.0 / (alpha * (1.0 - u) * frac))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALPHAS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

    #[test]
    fn cdf_hand_values() {
        assert!((logistic_cdf(1.0, 0.0) - 0.5).abs() < 1e-15);
        assert!((logistic_cdf(2.0, 0.0) - 0.75).abs() < 1e-15);
        // 1 - 1/(1+3) at x = ln 3
        assert!((logistic_cdf(1.0, 3.0_f64.ln()) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn inverse_hand_values() {
        assert!(logistic_inverse(1.0, 0.5).unwrap().abs() < 1e-15);
        assert!(logistic_inverse(2.0, 0.75).unwrap().abs() < 1e-15);
        assert!((logistic_inverse(1.0, 0.9).unwrap() - 2.1972245773362196).abs() < 1e-12);
    }

    #[test]
    fn jacobian_hand_values() {
        assert!((logistic_jacobian(1.0, 0.5).unwrap() - 4.0).abs() < 1e-12);
        assert!((logistic_jacobian(1.0, 0.75).unwrap() - 16.0 / 3.0).abs() < 1e-12);
        assert!((logistic_jacobian(2.0, 0.75).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn endpoints_are_domain_errors() {
        for u in [0.0, 1.0, -0.5, 1.5] {
            assert!(matches!(
                logistic_inverse(1.0, u),
                Err(OvlError::DomainError(_))
            ));
            assert!(matches!(
                logistic_jacobian(1.0, u),
                Err(OvlError::DomainError(_))
            ));
        }
    }

    #[test]
    fn round_trip() {
        for &alpha in &ALPHAS {
            for i in 0..1000 {
                let u = 1e-6 + (1.0 - 2e-6) * i as f64 / 999.0;
                let x = logistic_inverse(alpha, u).unwrap();
                let back = logistic_cdf(alpha, x);
                assert!(
                    (back - u).abs() < 1e-12,
                    "alpha={alpha} u={u} back={back}"
                );
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let delta = 1e-6;
        for &alpha in &ALPHAS {
            for i in 0..99 {
                let u = 0.01 + 0.98 * i as f64 / 98.0;
                let jac = logistic_jacobian(alpha, u).unwrap();
                let fd = (logistic_inverse(alpha, u + delta).unwrap()
                    - logistic_inverse(alpha, u - delta).unwrap())
                    / (2.0 * delta);
                assert!(
                    ((jac - fd) / jac).abs() < 1e-5,
                    "alpha={alpha} u={u} jac={jac} fd={fd}"
                );
            }
        }
    }

    #[test]
    fn cdf_strictly_increasing() {
        for &alpha in &ALPHAS {
            // beyond ~30/alpha the image sits within a few ulp of 1.0 and
            // consecutive grid points collide, so stay below
            let lo = -50.0;
            let hi = 28.0 / alpha;
            let mut prev = logistic_cdf(alpha, lo);
            for i in 1..10_000 {
                let x = lo + (hi - lo) * i as f64 / 9_999.0;
                let u = logistic_cdf(alpha, x);
                assert!(u > prev, "alpha={alpha} x={x}: {u} <= {prev}");
                prev = u;
            }
        }
    }

    #[test]
    fn stable_at_extreme_arguments() {
        let u = logistic_cdf(1.0, 700.0);
        assert!(u.is_finite() && u <= 1.0);
        let v = logistic_cdf(1.0, -700.0);
        assert!(v.is_finite() && v > 0.0, "v = {v}");
        assert!(logistic_cdf(0.1, 600.0).is_finite());
    }

    #[test]
    fn change_of_variables_identity() {
        // closed Simpson of pdf(G^-1(u)) * dx/du over a u-grid avoiding the
        // endpoints recovers total mass 1
        let params = crate::distributions::NormalParams::new(0.0, 1.0).unwrap();
        let f = |u: f64| {
            let x = logistic_inverse(1.0, u).unwrap();
            crate::distributions::normal_pdf(&params, x) * logistic_jacobian(1.0, u).unwrap()
        };
        let total = crate::quadrature::simpson_closed(f, 1e-8, 1.0 - 1e-8, 1000).unwrap();
        assert!((total - 1.0).abs() < 1e-4, "got {total}");
    }

    #[test]
    fn config_validation() {
        assert!(TransformConfig::new(1.0, 4).is_ok());
        assert!(TransformConfig::new(0.0, 4).is_err());
        assert!(TransformConfig::new(1.0, 3).is_err());
        assert!(TransformConfig::new(1.0, 0).is_err());
        assert!(TransformConfig::new(f64::NAN, 4).is_err());
    }
}
