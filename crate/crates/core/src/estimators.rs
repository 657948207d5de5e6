//! Simpson-based plug-in estimators of the overlap Δ_k and the group-ratio
//! comparator estimator.

use crate::distributions::{
    fit_normal, Density, FittedNormal, GroupSample, VarianceConvention,
};
use crate::error::{OvlError, Result};
use crate::quadrature::simpson_open_unit;
use crate::transform::{logistic_inverse, logistic_jacobian, softplus, TransformConfig};

/// Which estimator to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorKind {
    /// Transformed Simpson estimator with a fixed shape α.
    SimpsonFixedAlpha(f64),
    /// Transformed Simpson estimator with α estimated from the data.
    SimpsonDataDriven,
    /// Group-averaged min-density-ratio estimator.
    Comparator,
}

/// Grid-size policy for the Simpson estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RPolicy {
    /// r = min nᵢ rounded up to the next even integer (and at least 4).
    AutoMinN,
    /// Fixed even r >= 4.
    Fixed(usize),
}

impl RPolicy {
    /// Resolve against the group sizes.
    pub fn resolve(&self, sample_sizes: &[usize]) -> Result<usize> {
        match self {
            RPolicy::Fixed(r) => {
                if *r < 4 || !r.is_multiple_of(2) {
                    return Err(OvlError::InvalidParameter(format!(
                        "fixed r = {r} must be even and >= 4"
                    )));
                }
                Ok(*r)
            }
            RPolicy::AutoMinN => {
                let min_n = sample_sizes.iter().copied().min().ok_or_else(|| {
                    OvlError::InvalidParameter("no sample sizes given".to_string())
                })?;
                let even = if min_n % 2 == 0 { min_n } else { min_n + 1 };
                Ok(even.max(4))
            }
        }
    }
}

/// A fully specified estimator: kind, grid policy, and variance convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    pub r_policy: RPolicy,
    pub variance_convention: VarianceConvention,
}

impl EstimatorSpec {
    /// Simpson estimator with fixed α; MLE variance divisor by default.
    pub fn simpson_alpha(alpha: f64) -> Self {
        Self {
            kind: EstimatorKind::SimpsonFixedAlpha(alpha),
            r_policy: RPolicy::AutoMinN,
            variance_convention: VarianceConvention::Mle,
        }
    }

    /// Simpson estimator with data-driven α; MLE variance divisor by default.
    pub fn simpson_data_driven() -> Self {
        Self {
            kind: EstimatorKind::SimpsonDataDriven,
            r_policy: RPolicy::AutoMinN,
            variance_convention: VarianceConvention::Mle,
        }
    }

    /// Comparator estimator; unbiased variance divisor by definition.
    pub fn comparator() -> Self {
        Self {
            kind: EstimatorKind::Comparator,
            r_policy: RPolicy::AutoMinN,
            variance_convention: VarianceConvention::Unbiased,
        }
    }

    pub fn with_convention(mut self, convention: VarianceConvention) -> Self {
        self.variance_convention = convention;
        self
    }

    pub fn with_r_policy(mut self, policy: RPolicy) -> Self {
        self.r_policy = policy;
        self
    }

    pub fn is_comparator(&self) -> bool {
        matches!(self.kind, EstimatorKind::Comparator)
    }

    /// Stable display label, e.g. `simpson(1)`, `simpson(ml)`, `comparator`.
    pub fn label(&self) -> String {
        match self.kind {
            EstimatorKind::SimpsonFixedAlpha(a) => {
                if a == a.trunc() && a.abs() < 1e6 {
                    format!("simpson({})", a as i64)
                } else {
                    format!("simpson({a})")
                }
            }
            EstimatorKind::SimpsonDataDriven => "simpson(ml)".to_string(),
            EstimatorKind::Comparator => "comparator".to_string(),
        }
    }

    /// Validate the alpha and grid-policy fields.
    pub fn validate(&self) -> Result<()> {
        if let EstimatorKind::SimpsonFixedAlpha(a) = self.kind {
            if !a.is_finite() || a <= 0.0 {
                return Err(OvlError::InvalidParameter(format!(
                    "alpha = {a} must be finite and > 0"
                )));
            }
        }
        if let RPolicy::Fixed(r) = self.r_policy {
            if r < 4 || !r.is_multiple_of(2) {
                return Err(OvlError::InvalidParameter(format!(
                    "fixed r = {r} must be even and >= 4"
                )));
            }
        }
        Ok(())
    }

    /// Evaluate this estimator on one set of group samples.
    pub fn evaluate(&self, samples: &[GroupSample]) -> Result<f64> {
        match self.kind {
            EstimatorKind::Comparator => {
                comparator_estimate_with(samples, self.variance_convention)
            }
            EstimatorKind::SimpsonFixedAlpha(alpha) => {
                let fits = fit_all(samples, self.variance_convention)?;
                let r = self.r_policy.resolve(&sizes(samples))?;
                simpson_ovl_estimate(&fits, alpha, r)
            }
            EstimatorKind::SimpsonDataDriven => {
                let alpha = estimate_alpha(samples)?;
                let fits = fit_all(samples, self.variance_convention)?;
                let r = self.r_policy.resolve(&sizes(samples))?;
                simpson_ovl_estimate(&fits, alpha, r)
            }
        }
    }
}

fn sizes(samples: &[GroupSample]) -> Vec<usize> {
    samples.iter().map(|s| s.n()).collect()
}

fn fit_all(
    samples: &[GroupSample],
    convention: VarianceConvention,
) -> Result<Vec<FittedNormal>> {
    samples.iter().map(|s| fit_normal(s, convention)).collect()
}

/// Pointwise minimum of the k densities at `x`.
pub fn min_density<D: Density>(densities: &[D], x: f64) -> f64 {
    densities
        .iter()
        .map(|d| d.pdf(x))
        .fold(f64::INFINITY, f64::min)
}

/// The transformed integrand h_α(u) = min_i f_i(G⁻¹(u)) · dx/du on (0, 1).
///
/// Returns NaN outside the open interval so quadrature surfaces the error.
pub fn transformed_min_density<D: Density>(
    densities: &[D],
    alpha: f64,
) -> impl Fn(f64) -> f64 + '_ {
    move |u: f64| match (logistic_inverse(alpha, u), logistic_jacobian(alpha, u)) {
        (Ok(x), Ok(jac)) => min_density(densities, x) * jac,
        _ => f64::NAN,
    }
}

/// Data-driven transform shape: α̂ = (1/k) Σ_j n_j / Σ_i softplus(x_ij).
///
/// The three-group formula generalizes to k groups by averaging the k
/// per-group terms.
pub fn estimate_alpha(samples: &[GroupSample]) -> Result<f64> {
    if samples.is_empty() {
        return Err(OvlError::InvalidParameter("no samples given".to_string()));
    }
    let mut acc = 0.0;
    for s in samples {
        let denom: f64 = s.values().iter().map(|&x| softplus(x)).sum();
        if denom <= 0.0 {
            return Err(OvlError::DegenerateAlpha {
                group: s.group_id(),
            });
        }
        acc += s.n() as f64 / denom;
    }
    Ok(acc / samples.len() as f64)
}

/// A clamped estimate with its raw quadrature value retained for diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct OvlEstimate {
    /// Estimate clamped to [0, 1].
    pub value: f64,
    /// Raw open-rule value; can exceed 1 by O(h⁴) noise for near-identical
    /// populations.
    pub raw: f64,
}

/// Transformed-Simpson plug-in estimate of Δ_k, clamped to [0, 1].
pub fn simpson_ovl_estimate(fits: &[FittedNormal], alpha: f64, r: usize) -> Result<f64> {
    Ok(simpson_ovl_estimate_detailed(fits, alpha, r)?.value)
}

/// As [`simpson_ovl_estimate`], retaining the raw value.
pub fn simpson_ovl_estimate_detailed(
    fits: &[FittedNormal],
    alpha: f64,
    r: usize,
) -> Result<OvlEstimate> {
    if fits.len() < 2 {
        return Err(OvlError::InvalidParameter(format!(
            "need k >= 2 fitted densities, got {}",
            fits.len()
        )));
    }
    if r < 4 {
        return Err(OvlError::InvalidParameter(format!(
            "r = {r} must be even and >= 4"
        )));
    }
    TransformConfig::new(alpha, r)?;
    let h = transformed_min_density(fits, alpha);
    let raw = simpson_open_unit(h, r)?;
    Ok(OvlEstimate {
        value: raw.clamp(0.0, 1.0),
        raw,
    })
}

/// Comparator estimate with the unbiased variance divisor of its definition.
///
/// Δ̂_j = (1/n_j) Σ_i min_l f̂_l(X_ij) / f̂_j(X_ij), averaged over groups.
pub fn comparator_estimate(samples: &[GroupSample]) -> Result<f64> {
    comparator_estimate_with(samples, VarianceConvention::Unbiased)
}

/// Comparator estimate under an explicit variance convention.
pub fn comparator_estimate_with(
    samples: &[GroupSample],
    convention: VarianceConvention,
) -> Result<f64> {
    if samples.len() < 2 {
        return Err(OvlError::InvalidParameter(format!(
            "need k >= 2 groups, got {}",
            samples.len()
        )));
    }
    let fits = fit_all(samples, convention)?;
    let mut group_means: Vec<f64> = samples
        .iter()
        .zip(&fits)
        .map(|(sample, own)| {
            let total: f64 = sample
                .values()
                .iter()
                .map(|&x| {
                    // ratio in log space: min_l f_l / f_j = exp(min ln f_l - ln f_j)
                    // stays <= 1 and finite even where the own density underflows
                    let min_ln = fits
                        .iter()
                        .map(|f| f.ln_pdf(x))
                        .fold(f64::INFINITY, f64::min);
                    (min_ln - own.ln_pdf(x)).exp()
                })
                .sum();
            total / sample.n() as f64
        })
        .collect();
    // summing in sorted order makes the result exactly invariant under
    // permutations of the group list
    group_means.sort_by(f64::total_cmp);
    Ok(group_means.iter().sum::<f64>() / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{NormalParams, RngStream};
    use crate::quadrature::exact_ovl;

    fn p(mu: f64, sigma: f64) -> NormalParams {
        NormalParams::new(mu, sigma).unwrap()
    }

    fn fit(mu: f64, var: f64) -> FittedNormal {
        FittedNormal::from_moments(mu, var, 50, VarianceConvention::Mle).unwrap()
    }

    #[test]
    fn min_density_identical() {
        let ps = vec![p(0.0, 1.0), p(0.0, 1.0)];
        let x = 0.3;
        assert_eq!(min_density(&ps, x), ps[0].pdf(x));
    }

    #[test]
    fn min_density_symmetric_tie() {
        let ps = vec![p(-2.0, 1.0), p(2.0, 1.0)];
        let v = min_density(&ps, 0.0);
        assert_eq!(v, ps[0].pdf(0.0));
        assert_eq!(v, ps[1].pdf(0.0));
    }

    #[test]
    fn min_density_farthest_mean_rule() {
        let ps = vec![p(-0.1, 1.0), p(0.0, 1.0), p(0.1, 1.0)];
        let v = min_density(&ps, 1.0);
        assert!((v - 0.21785217703255055).abs() < 1e-12, "got {v}");
        assert_eq!(v, ps[0].pdf(1.0));
    }

    #[test]
    fn alpha_hand_values() {
        let g = |id, vals: Vec<f64>| GroupSample::new(id, vals).unwrap();
        let zeros = vec![g(1, vec![0.0]), g(2, vec![0.0]), g(3, vec![0.0])];
        let a = estimate_alpha(&zeros).unwrap();
        // softplus(0) = ln 2 in every term, so alpha-hat = 1/ln 2
        assert!((a - 1.0 / std::f64::consts::LN_2).abs() < 1e-12);

        // softplus(ln(e-1)) = 1
        let x = (std::f64::consts::E - 1.0).ln();
        let ones = vec![g(1, vec![x]), g(2, vec![x]), g(3, vec![x])];
        let a = estimate_alpha(&ones).unwrap();
        assert!((a - 1.0).abs() < 1e-12);

        let mixed = vec![g(1, vec![0.0, 0.0]), g(2, vec![x]), g(3, vec![x])];
        let a = estimate_alpha(&mixed).unwrap();
        assert!((a - 1.1475650136296545).abs() < 1e-12);
    }

    #[test]
    fn alpha_underflow_is_degenerate() {
        let g = GroupSample::new(1, vec![-800.0, -750.0]).unwrap();
        let ok = GroupSample::new(2, vec![0.0]).unwrap();
        match estimate_alpha(&[g, ok]) {
            Err(OvlError::DegenerateAlpha { group: 1 }) => {}
            other => panic!("expected DegenerateAlpha, got {other:?}"),
        }
    }

    #[test]
    fn simpson_identical_fits() {
        let fits = vec![fit(0.0, 1.0), fit(0.0, 1.0), fit(0.0, 1.0)];
        let v = simpson_ovl_estimate(&fits, 1.0, 100).unwrap();
        assert!((v - 1.0).abs() < 2e-3, "got {v}");
    }

    #[test]
    fn simpson_at_true_parameters_matches_oracle() {
        let pops = [p(-1.0, 1.5), p(0.0, 0.8), p(2.0, 0.4)];
        let fits: Vec<FittedNormal> = pops
            .iter()
            .map(|q| {
                FittedNormal::from_moments(
                    q.mu(),
                    q.sigma() * q.sigma(),
                    50,
                    VarianceConvention::Mle,
                )
                .unwrap()
            })
            .collect();
        let v = simpson_ovl_estimate(&fits, 1.0, 400).unwrap();
        assert!((v - 0.074).abs() < 1e-3, "got {v}");
        let oracle = exact_ovl(&pops, 1e-9).unwrap();
        assert!((v - oracle).abs() < 1e-3, "{v} vs oracle {oracle}");
    }

    #[test]
    fn simpson_duplicate_population_invariance() {
        let f1 = fit(0.0, 1.0);
        let f2 = fit(0.8, 1.4);
        let two = simpson_ovl_estimate(&[f1, f2], 1.0, 200).unwrap();
        let three = simpson_ovl_estimate(&[f1, f2, f2], 1.0, 200).unwrap();
        assert_eq!(two, three);
    }

    #[test]
    fn simpson_permutation_invariance() {
        let fits = vec![fit(0.0, 1.0), fit(0.5, 0.6), fit(-0.7, 2.0)];
        let v0 = simpson_ovl_estimate(&fits, 1.0, 120).unwrap();
        let perm = vec![fits[2], fits[0], fits[1]];
        let v1 = simpson_ovl_estimate(&perm, 1.0, 120).unwrap();
        assert_eq!(v0, v1);
    }

    #[test]
    fn simpson_alpha_insensitivity_at_truth() {
        let fits: Vec<FittedNormal> = [p(-0.5, 1.0), p(0.0, 0.5), p(0.75, 1.0)]
            .iter()
            .map(|q| {
                FittedNormal::from_moments(
                    q.mu(),
                    q.sigma() * q.sigma(),
                    100,
                    VarianceConvention::Mle,
                )
                .unwrap()
            })
            .collect();
        let v1 = simpson_ovl_estimate(&fits, 1.0, 400).unwrap();
        let v2 = simpson_ovl_estimate(&fits, 2.0, 400).unwrap();
        assert!((v1 - v2).abs() < 5e-3, "{v1} vs {v2}");
    }

    #[test]
    fn plug_in_consistency_all_scenarios() {
        let scenarios: [&[NormalParams]; 4] = [
            &[p(0.0, 0.95), p(0.0, 1.0), p(0.0, 1.1)],
            &[p(-0.1, 1.0), p(0.0, 1.0), p(0.1, 1.0)],
            &[p(-0.5, 1.0), p(0.0, 0.5), p(0.75, 1.0)],
            &[p(-1.0, 1.5), p(0.0, 0.8), p(2.0, 0.4)],
        ];
        for pops in scenarios {
            let oracle = exact_ovl(pops, 1e-9).unwrap();
            let fits: Vec<FittedNormal> = pops
                .iter()
                .map(|q| {
                    FittedNormal::from_moments(
                        q.mu(),
                        q.sigma() * q.sigma(),
                        400,
                        VarianceConvention::Mle,
                    )
                    .unwrap()
                })
                .collect();
            for alpha in [1.0, 2.0] {
                let v = simpson_ovl_estimate(&fits, alpha, 400).unwrap();
                assert!(
                    (v - oracle).abs() < 1e-3,
                    "alpha={alpha}: {v} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn comparator_identical_samples() {
        let vals = vec![0.1, -0.4, 0.9, 1.3, -1.1];
        let samples = vec![
            GroupSample::new(1, vals.clone()).unwrap(),
            GroupSample::new(2, vals.clone()).unwrap(),
            GroupSample::new(3, vals).unwrap(),
        ];
        assert_eq!(comparator_estimate(&samples).unwrap(), 1.0);
    }

    #[test]
    fn comparator_well_separated() {
        let mut samples = Vec::new();
        for (i, mu) in [0.0, 100.0, 200.0].iter().enumerate() {
            let params = p(*mu, 1.0);
            let mut stream = RngStream::substream(5, &[i as u64]);
            samples.push(
                crate::distributions::sample_normal(&params, 50, &mut stream, i + 1).unwrap(),
            );
        }
        let v = comparator_estimate(&samples).unwrap();
        assert!(v < 0.01, "got {v}");
    }

    #[test]
    fn comparator_survives_own_density_underflow() {
        // one extreme outlier in a large group pushes its own fitted density
        // below f64 range at that point; the log-space ratio stays finite
        let mut values = vec![0.0; 2000];
        for (i, v) in values.iter_mut().enumerate() {
            *v = (i as f64 * 0.37).sin();
        }
        values[0] = 1.0e6;
        let samples = vec![
            GroupSample::new(1, values).unwrap(),
            GroupSample::new(2, vec![0.1, -0.4, 0.9, 1.3, -1.1]).unwrap(),
        ];
        let fit = crate::distributions::fit_normal(
            &samples[0],
            VarianceConvention::Unbiased,
        )
        .unwrap();
        assert_eq!(fit.pdf(1.0e6), 0.0, "outlier density should underflow");
        let v = comparator_estimate(&samples).unwrap();
        assert!(v.is_finite() && v > 0.0 && v <= 1.0, "got {v}");
    }

    #[test]
    fn comparator_permutation_invariance() {
        let mut samples = Vec::new();
        for (i, mu) in [0.0, 0.4, -0.3].iter().enumerate() {
            let params = p(*mu, 1.0 + 0.2 * i as f64);
            let mut stream = RngStream::substream(11, &[i as u64]);
            samples.push(
                crate::distributions::sample_normal(&params, 40, &mut stream, i + 1).unwrap(),
            );
        }
        let v0 = comparator_estimate(&samples).unwrap();
        let perm = vec![samples[1].clone(), samples[2].clone(), samples[0].clone()];
        let v1 = comparator_estimate(&perm).unwrap();
        assert_eq!(v0, v1);
        assert!((0.0..=1.0).contains(&v0));
    }

    #[test]
    fn simpson_monotone_in_k() {
        let f1 = fit(0.0, 1.0);
        let f2 = fit(0.6, 1.3);
        let f3 = fit(-0.9, 0.5);
        let v2 = simpson_ovl_estimate(&[f1, f2], 1.0, 100).unwrap();
        let v3 = simpson_ovl_estimate(&[f1, f2, f3], 1.0, 100).unwrap();
        assert!(v3 <= v2);
    }

    #[test]
    fn r_policy_resolution() {
        assert_eq!(RPolicy::AutoMinN.resolve(&[50, 100, 150]).unwrap(), 50);
        assert_eq!(RPolicy::AutoMinN.resolve(&[51, 100]).unwrap(), 52);
        assert_eq!(RPolicy::AutoMinN.resolve(&[2, 9]).unwrap(), 4);
        assert_eq!(RPolicy::Fixed(400).resolve(&[10]).unwrap(), 400);
        assert!(RPolicy::Fixed(7).resolve(&[10]).is_err());
        assert!(RPolicy::Fixed(2).resolve(&[10]).is_err());
    }

    #[test]
    fn estimator_labels() {
        assert_eq!(EstimatorSpec::simpson_alpha(1.0).label(), "simpson(1)");
        assert_eq!(EstimatorSpec::simpson_alpha(2.5).label(), "simpson(2.5)");
        assert_eq!(EstimatorSpec::simpson_data_driven().label(), "simpson(ml)");
        assert_eq!(EstimatorSpec::comparator().label(), "comparator");
    }
}
