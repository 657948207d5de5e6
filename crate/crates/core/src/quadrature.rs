//! Composite Simpson integration (closed form on [a, b], open form on the
//! unit interval) and the exact-overlap reference oracle.

use crate::distributions::NormalParams;
use crate::error::{OvlError, Result};
use crate::estimators::min_density;

/// Default truncation multiplier for the oracle: the neglected tail mass of
/// any single normal beyond 8σ is below 1e-15, far under every tolerance
/// used here.
pub const DEFAULT_TAIL_SIGMAS: f64 = 8.0;

const ORACLE_R_START: usize = 1 << 10;
const ORACLE_R_MAX: usize = 1 << 22;

/// Neumaier-compensated accumulator; summation error stays O(ε) independent
/// of term count, and the order is fixed, so results are bit-stable.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Truncation bounds and grid size for the closed rule, plus the oracle's
/// tail multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    r: usize,
    a: f64,
    b: f64,
    tail_sigmas: f64,
}

impl QuadratureConfig {
    /// Requires `r` even >= 2, `b > a`, `tail_sigmas >= 6`.
    pub fn new(r: usize, a: f64, b: f64, tail_sigmas: f64) -> Result<Self> {
        if r < 2 || !r.is_multiple_of(2) {
            return Err(OvlError::InvalidParameter(format!(
                "r = {r} must be even and >= 2"
            )));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(OvlError::InvalidParameter(format!(
                "bounds must be finite with b > a, got [{a}, {b}]"
            )));
        }
        if tail_sigmas.is_nan() || tail_sigmas < 6.0 {
            return Err(OvlError::InvalidParameter(format!(
                "tail_sigmas = {tail_sigmas} must be >= 6"
            )));
        }
        Ok(Self {
            r,
            a,
            b,
            tail_sigmas,
        })
    }

    /// Bounds covering every population's mean ± `tail_sigmas` scales.
    pub fn for_populations(
        populations: &[NormalParams],
        tail_sigmas: f64,
        r: usize,
    ) -> Result<Self> {
        if populations.is_empty() {
            return Err(OvlError::InvalidParameter(
                "need at least one population".to_string(),
            ));
        }
        let mu_lo = populations.iter().map(|p| p.mu()).fold(f64::INFINITY, f64::min);
        let mu_hi = populations
            .iter()
            .map(|p| p.mu())
            .fold(f64::NEG_INFINITY, f64::max);
        let sig_max = populations
            .iter()
            .map(|p| p.sigma())
            .fold(f64::NEG_INFINITY, f64::max);
        Self::new(
            r,
            mu_lo - tail_sigmas * sig_max,
            mu_hi + tail_sigmas * sig_max,
            tail_sigmas,
        )
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn tail_sigmas(&self) -> f64 {
        self.tail_sigmas
    }
}

/// Composite Simpson on [a, b] with r even subintervals:
/// (h/3)[f(x₀) + 4·Σ_odd f + 2·Σ_even-interior f + f(x_r)], h = (b−a)/r.
pub fn simpson_closed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, r: usize) -> Result<f64> {
    if r < 2 || !r.is_multiple_of(2) {
        return Err(OvlError::InvalidParameter(format!(
            "r = {r} must be even and >= 2"
        )));
    }
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(OvlError::InvalidParameter(format!(
            "bounds must be finite with b > a, got [{a}, {b}]"
        )));
    }
    let h = (b - a) / r as f64;
    let mut acc = CompensatedSum::default();
    for j in 0..=r {
        let x = if j == r { b } else { a + j as f64 * h };
        let v = f(x);
        if !v.is_finite() {
            return Err(OvlError::NonFiniteEvaluation { at: x });
        }
        let w = if j == 0 || j == r {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add(w * v);
    }
    Ok(acc.value() * h / 3.0)
}

/// Composite Simpson on (0, 1) with the two endpoint terms treated as zero:
/// (1/3r)[4·Σ_{i=1}^{r/2} f((2i−1)/r) + 2·Σ_{i=1}^{r/2−1} f(2i/r)].
///
/// Valid when the integrand vanishes at both endpoints, which holds for the
/// transformed overlap integrand (normal tails beat the Jacobian divergence).
pub fn simpson_open_unit<F: Fn(f64) -> f64>(f: F, r: usize) -> Result<f64> {
    if r < 4 || !r.is_multiple_of(2) {
        return Err(OvlError::InvalidParameter(format!(
            "r = {r} must be even and >= 4"
        )));
    }
    let rf = r as f64;
    let mut acc = CompensatedSum::default();
    for i in 1..r {
        let u = i as f64 / rf;
        let v = f(u);
        if !v.is_finite() {
            return Err(OvlError::NonFiniteEvaluation { at: u });
        }
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * v);
    }
    Ok(acc.value() / (3.0 * rf))
}

/// Diagnostics for one oracle evaluation.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    /// Converged value clamped to [0, 1].
    pub value: f64,
    /// Raw quadrature value before clamping.
    pub raw: f64,
    /// Subinterval count at convergence.
    pub subintervals: usize,
    /// Truncation interval used.
    pub lower: f64,
    pub upper: f64,
    /// Successive refinement values, coarsest first.
    pub refinements: Vec<f64>,
}

/// Reference overlap Δ_k = ∫ min_i f_i by closed Simpson with grid doubling
/// from r = 2¹⁰ until successive values differ by less than `tol`.
///
/// `tol` must lie in [1e-12, 1e-3]. Errors with `NoConvergence` if the
/// tolerance is unreached at r = 2²².
pub fn exact_ovl(populations: &[NormalParams], tol: f64) -> Result<f64> {
    Ok(exact_ovl_detailed(populations, tol, DEFAULT_TAIL_SIGMAS)?.value)
}

/// As [`exact_ovl`], with an explicit tail multiplier and full diagnostics.
pub fn exact_ovl_detailed(
    populations: &[NormalParams],
    tol: f64,
    tail_sigmas: f64,
) -> Result<OracleOutcome> {
    if populations.len() < 2 {
        return Err(OvlError::InvalidParameter(format!(
            "need k >= 2 populations, got {}",
            populations.len()
        )));
    }
    if !(1e-12..=1e-3).contains(&tol) {
        return Err(OvlError::InvalidParameter(format!(
            "tol = {tol} must lie in [1e-12, 1e-3]"
        )));
    }
    let cfg = QuadratureConfig::for_populations(populations, tail_sigmas, ORACLE_R_START)?;
    let g = |x: f64| min_density(populations, x);

    let mut refinements = Vec::new();
    let mut prev = simpson_closed(g, cfg.a(), cfg.b(), ORACLE_R_START)?;
    refinements.push(prev);
    let mut r = ORACLE_R_START * 2;
    while r <= ORACLE_R_MAX {
        let cur = simpson_closed(g, cfg.a(), cfg.b(), r)?;
        refinements.push(cur);
        if (cur - prev).abs() < tol {
            return Ok(OracleOutcome {
                value: cur.clamp(0.0, 1.0),
                raw: cur,
                subintervals: r,
                lower: cfg.a(),
                upper: cfg.b(),
                refinements,
            });
        }
        prev = cur;
        r *= 2;
    }
    Err(OvlError::NoConvergence {
        subintervals: ORACLE_R_MAX,
        last_delta: (refinements[refinements.len() - 1] - refinements[refinements.len() - 2]).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(mu: f64, sigma: f64) -> NormalParams {
        NormalParams::new(mu, sigma).unwrap()
    }

    #[test]
    fn closed_exact_on_cubic() {
        let v = simpson_closed(|x| x * x * x, 0.0, 1.0, 2).unwrap();
        assert!((v - 0.25).abs() <= 8.0 * f64::EPSILON);
    }

    #[test]
    fn closed_constant() {
        for r in [2, 4, 10, 100] {
            let v = simpson_closed(|_| 1.0, -3.0, 7.0, r).unwrap();
            assert!((v - 10.0).abs() <= 8.0 * f64::EPSILON * 10.0);
        }
    }

    #[test]
    fn closed_five_node_sine() {
        let v = simpson_closed(f64::sin, 0.0, std::f64::consts::PI, 4).unwrap();
        assert!((v - 2.0045597549844207).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn closed_rejects_bad_input() {
        assert!(simpson_closed(|x| x, 0.0, 1.0, 3).is_err());
        assert!(simpson_closed(|x| x, 1.0, 0.0, 4).is_err());
        assert!(matches!(
            simpson_closed(|x| if x == 0.5 { f64::NAN } else { x }, 0.0, 1.0, 4),
            Err(OvlError::NonFiniteEvaluation { .. })
        ));
    }

    #[test]
    fn open_unit_constant_deficit() {
        // (1/300)(4*50 + 2*49) on a constant: endpoint omission costs 2/300
        let v = simpson_open_unit(|_| 1.0, 100).unwrap();
        assert!((v - 298.0 / 300.0).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn open_unit_fourth_order_on_smooth_integrand() {
        // sin(pi u) vanishes at both endpoints with bounded 4th derivative;
        // reference value 2/pi
        let truth = 2.0 / std::f64::consts::PI;
        let f = |u: f64| (std::f64::consts::PI * u).sin();
        let e1 = (simpson_open_unit(f, 64).unwrap() - truth).abs();
        let e2 = (simpson_open_unit(f, 128).unwrap() - truth).abs();
        let ratio = e1 / e2;
        assert!((14.0..=18.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn open_unit_rejects_small_r() {
        assert!(simpson_open_unit(|_| 1.0, 2).is_err());
        assert!(simpson_open_unit(|_| 1.0, 5).is_err());
    }

    #[test]
    fn open_unit_full_overlap_of_identical_fitted_densities() {
        use crate::distributions::{FittedNormal, VarianceConvention};
        use crate::estimators::transformed_min_density;
        let fits: Vec<FittedNormal> = (0..3)
            .map(|_| FittedNormal::from_moments(0.0, 1.0, 50, VarianceConvention::Mle).unwrap())
            .collect();
        let h = transformed_min_density(&fits, 1.0);
        let v = simpson_open_unit(h, 100).unwrap();
        assert!((v - 1.0).abs() < 1e-3, "got {v}");
    }

    #[test]
    fn oracle_identical_densities() {
        let pops = vec![p(0.0, 1.0), p(0.0, 1.0), p(0.0, 1.0)];
        let v = exact_ovl(&pops, 1e-9).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn oracle_two_population_closed_form() {
        // equal variances: Delta_2 = 2*Phi(-|mu1-mu2|/(2*sigma)) = 2*Phi(-1/2)
        let v = exact_ovl(&[p(0.0, 1.0), p(1.0, 1.0)], 1e-9).unwrap();
        assert!((v - 0.6170750774519738).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn oracle_study_scenarios() {
        // frozen from a 40-digit junction-splitting computation
        let cases: [(&[NormalParams], f64); 4] = [
            (&[p(0.0, 0.95), p(0.0, 1.0), p(0.0, 1.1)], 0.929179277523),
            (&[p(-0.1, 1.0), p(0.0, 1.0), p(0.1, 1.0)], 0.920344325446),
            (&[p(-0.5, 1.0), p(0.0, 0.5), p(0.75, 1.0)], 0.468792214209),
            (&[p(-1.0, 1.5), p(0.0, 0.8), p(2.0, 0.4)], 0.0734708912472),
        ];
        for (pops, want) in cases {
            let v = exact_ovl(pops, 1e-9).unwrap();
            assert!((v - want).abs() < 1e-6, "want {want}, got {v}");
        }
    }

    #[test]
    fn oracle_refinement_deltas_shrink() {
        let scenarios: [&[NormalParams]; 4] = [
            &[p(0.0, 0.95), p(0.0, 1.0), p(0.0, 1.1)],
            &[p(-0.1, 1.0), p(0.0, 1.0), p(0.1, 1.0)],
            &[p(-0.5, 1.0), p(0.0, 0.5), p(0.75, 1.0)],
            &[p(-1.0, 1.5), p(0.0, 0.8), p(2.0, 0.4)],
        ];
        for pops in scenarios {
            let out = exact_ovl_detailed(pops, 1e-10, DEFAULT_TAIL_SIGMAS).unwrap();
            let deltas: Vec<f64> = out
                .refinements
                .windows(2)
                .map(|w| (w[1] - w[0]).abs())
                .collect();
            for w in deltas.windows(2) {
                // allow ties once differences hit rounding noise
                assert!(
                    w[1] < w[0] || w[0] < 1e-13,
                    "refinement deltas not shrinking: {deltas:?}"
                );
            }
        }
    }

    #[test]
    fn oracle_affine_invariance() {
        let base = [p(-0.5, 1.0), p(0.0, 0.5), p(0.75, 1.0)];
        let v0 = exact_ovl(&base, 1e-10).unwrap();
        for (a, b) in [(2.0, 3.0), (-1.5, 0.25), (0.1, -7.0)] {
            let mapped: Vec<NormalParams> = base
                .iter()
                .map(|q| NormalParams::new(a * q.mu() + b, a.abs() * q.sigma()).unwrap())
                .collect();
            let v1 = exact_ovl(&mapped, 1e-10).unwrap();
            assert!((v1 - v0).abs() < 1e-8, "a={a} b={b}: {v0} vs {v1}");
        }
    }

    #[test]
    fn oracle_k_monotonicity() {
        let pops = vec![p(0.0, 1.0), p(0.5, 1.2)];
        let v2 = exact_ovl(&pops, 1e-9).unwrap();
        let mut pops3 = pops.clone();
        pops3.push(p(-0.3, 0.9));
        let v3 = exact_ovl(&pops3, 1e-9).unwrap();
        assert!(v3 <= v2 + 1e-9, "{v3} > {v2}");
    }

    #[test]
    fn oracle_bounds_and_unity() {
        let same = vec![p(1.0, 0.5), p(1.0, 0.5)];
        let v = exact_ovl(&same, 1e-9).unwrap();
        assert!((0.0..=1.0).contains(&v));
        assert!((v - 1.0).abs() < 1e-9);
        let diff = vec![p(0.0, 1.0), p(0.2, 1.0)];
        let v = exact_ovl(&diff, 1e-9).unwrap();
        assert!(v < 1.0 - 1e-3);
    }

    #[test]
    fn oracle_validates_inputs() {
        assert!(exact_ovl(&[p(0.0, 1.0)], 1e-9).is_err());
        assert!(exact_ovl(&[p(0.0, 1.0), p(1.0, 1.0)], 1e-2).is_err());
        assert!(exact_ovl(&[p(0.0, 1.0), p(1.0, 1.0)], 1e-13).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(100, 0.0, 1.0, 8.0).is_ok());
        assert!(QuadratureConfig::new(3, 0.0, 1.0, 8.0).is_err());
        assert!(QuadratureConfig::new(100, 1.0, 0.0, 8.0).is_err());
        assert!(QuadratureConfig::new(100, 0.0, 1.0, 5.0).is_err());
    }
}
