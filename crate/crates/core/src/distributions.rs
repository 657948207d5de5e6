//! Normal-model primitives: density evaluation, maximum-likelihood fitting,
//! and seeded sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{OvlError, Result};

const SQRT_2PI: f64 = 2.506628274631000502415765284811;
const LN_SQRT_2PI: f64 = 0.918938533204672741780329736406;

/// Anything that can evaluate a probability density at a point.
pub trait Density {
    fn pdf(&self, x: f64) -> f64;

    /// Natural log of the density; stays finite where `pdf` underflows.
    fn ln_pdf(&self, x: f64) -> f64 {
        self.pdf(x).ln()
    }
}

/// True location/scale pair (μ, σ) of one normal population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNormalParams", into = "RawNormalParams")]
pub struct NormalParams {
    mu: f64,
    sigma: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNormalParams {
    mu: f64,
    sigma: f64,
}

impl TryFrom<RawNormalParams> for NormalParams {
    type Error = OvlError;
    fn try_from(raw: RawNormalParams) -> Result<Self> {
        NormalParams::new(raw.mu, raw.sigma)
    }
}

impl From<NormalParams> for RawNormalParams {
    fn from(p: NormalParams) -> Self {
        RawNormalParams {
            mu: p.mu,
            sigma: p.sigma,
        }
    }
}

impl NormalParams {
    /// Requires finite `mu` and strictly positive, finite `sigma`.
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(OvlError::InvalidParameter(format!("mu = {mu} not finite")));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(OvlError::InvalidParameter(format!(
                "sigma = {sigma} must be finite and > 0"
            )));
        }
        Ok(Self { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Density for NormalParams {
    fn pdf(&self, x: f64) -> f64 {
        normal_pdf(self, x)
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        -0.5 * z * z - self.sigma.ln() - LN_SQRT_2PI
    }
}

/// Density of N(μ, σ²) at `x`: exp(−(x−μ)²/(2σ²)) / (σ√(2π)).
pub fn normal_pdf(params: &NormalParams, x: f64) -> f64 {
    let z = (x - params.mu) / params.sigma;
    (-0.5 * z * z).exp() / (params.sigma * SQRT_2PI)
}

/// One group's observations, indexed 1..k within a study.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSample {
    group_id: usize,
    values: Vec<f64>,
}

impl GroupSample {
    /// Requires `group_id >= 1`, at least one observation, all finite.
    pub fn new(group_id: usize, values: Vec<f64>) -> Result<Self> {
        if group_id == 0 {
            return Err(OvlError::InvalidParameter(
                "group_id must be >= 1".to_string(),
            ));
        }
        if values.is_empty() {
            return Err(OvlError::InvalidParameter(format!(
                "group {group_id} has no observations"
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(OvlError::InvalidParameter(format!(
                "group {group_id} contains non-finite value {bad}"
            )));
        }
        Ok(Self { group_id, values })
    }

    pub fn group_id(&self) -> usize {
        self.group_id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }
}

/// Which divisor the fitted variance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarianceConvention {
    /// Maximum-likelihood divisor n.
    Mle,
    /// Bias-corrected divisor n − 1.
    Unbiased,
}

impl std::fmt::Display for VarianceConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VarianceConvention::Mle => write!(f, "mle"),
            VarianceConvention::Unbiased => write!(f, "unbiased"),
        }
    }
}

/// Parameter estimates (μ̂, σ̂²) for one group, with the variance convention
/// recorded rather than implicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedNormal {
    mu_hat: f64,
    sigma_hat_sq: f64,
    sigma_hat: f64,
    n: usize,
    convention: VarianceConvention,
}

impl FittedNormal {
    /// Build directly from moments, e.g. to evaluate an estimator at known
    /// true parameters. Requires finite `mu_hat` and `sigma_hat_sq > 0`.
    pub fn from_moments(
        mu_hat: f64,
        sigma_hat_sq: f64,
        n: usize,
        convention: VarianceConvention,
    ) -> Result<Self> {
        if !mu_hat.is_finite() {
            return Err(OvlError::InvalidParameter(format!(
                "mu_hat = {mu_hat} not finite"
            )));
        }
        if !sigma_hat_sq.is_finite() || sigma_hat_sq <= 0.0 {
            return Err(OvlError::InvalidParameter(format!(
                "sigma_hat_sq = {sigma_hat_sq} must be finite and > 0"
            )));
        }
        if n == 0 {
            return Err(OvlError::InvalidParameter("n must be >= 1".to_string()));
        }
        Ok(Self {
            mu_hat,
            sigma_hat_sq,
            sigma_hat: sigma_hat_sq.sqrt(),
            n,
            convention,
        })
    }

    pub fn mu_hat(&self) -> f64 {
        self.mu_hat
    }

    pub fn sigma_hat_sq(&self) -> f64 {
        self.sigma_hat_sq
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> VarianceConvention {
        self.convention
    }
}

impl Density for FittedNormal {
    fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu_hat) / self.sigma_hat;
        (-0.5 * z * z).exp() / (self.sigma_hat * SQRT_2PI)
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu_hat) / self.sigma_hat;
        -0.5 * z * z - self.sigma_hat.ln() - LN_SQRT_2PI
    }
}

/// Fit a normal by the sample mean and the variance under the given
/// convention (two-pass).
///
/// Errors with `DegenerateSample` when every observation is identical (the
/// plug-in density would be undefined) and `InsufficientData` when n < 2
/// under the unbiased convention.
pub fn fit_normal(sample: &GroupSample, convention: VarianceConvention) -> Result<FittedNormal> {
    let n = sample.n();
    if convention == VarianceConvention::Unbiased && n < 2 {
        return Err(OvlError::InsufficientData {
            group: sample.group_id(),
            n,
        });
    }
    let values = sample.values();
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let divisor = match convention {
        VarianceConvention::Mle => n as f64,
        VarianceConvention::Unbiased => (n - 1) as f64,
    };
    let var = ss / divisor;
    if var <= 0.0 {
        return Err(OvlError::DegenerateSample {
            group: sample.group_id(),
        });
    }
    FittedNormal::from_moments(mean, var, n, convention)
}

/// A reproducible random stream. Single-owner: never shared mutably;
/// parallel work derives disjoint substreams instead.
pub struct RngStream {
    rng: ChaCha8Rng,
}

// splitmix64 finalizer; bijective on u64.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    /// Master stream for a given seed.
    pub fn from_seed(seed: u64) -> Self {
        Self::substream(seed, &[])
    }

    /// Derive an independent substream from a master seed and a label path
    /// (e.g. `[scenario_key, repetition, group]`). The same inputs always
    /// yield the same stream, independent of execution order.
    pub fn substream(master_seed: u64, labels: &[u64]) -> Self {
        let mut state = mix64(master_seed);
        for &label in labels {
            state = mix64(state ^ label);
        }
        let mut key = [0u8; 32];
        for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
            state = mix64(state ^ (i as u64).wrapping_mul(0xA076_1D64_78BD_642F));
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        Self {
            rng: ChaCha8Rng::from_seed(key),
        }
    }

    /// One standard-normal draw.
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }
}

/// Draw `n` independent N(μ, σ²) values. Identical stream state yields an
/// identical sequence.
pub fn sample_normal(
    params: &NormalParams,
    n: usize,
    stream: &mut RngStream,
    group_id: usize,
) -> Result<GroupSample> {
    if n == 0 {
        return Err(OvlError::InvalidParameter(
            "sample size must be >= 1".to_string(),
        ));
    }
    let values = (0..n)
        .map(|_| params.mu() + params.sigma() * stream.standard_normal())
        .collect();
    GroupSample::new(group_id, values)
}
