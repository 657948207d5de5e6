//! Monte Carlo study harness: scenario definitions, the repetition loop, and
//! the AV / RB / RRMSE / EFF metric suite.
//!
//! Reproducibility contract: every (scenario, repetition, group) triple
//! derives an independent random substream from the master seed, so a run is
//! bit-identical regardless of thread count or execution order.

use rayon::prelude::*;
use serde::Deserialize;

use crate::distributions::{sample_normal, GroupSample, NormalParams, RngStream, VarianceConvention};
use crate::error::{OvlError, Result};
use crate::estimators::{EstimatorKind, EstimatorSpec, RPolicy};
use crate::quadrature::exact_ovl;

/// Oracle tolerance used when a scenario does not override the reference
/// delta.
pub const REFERENCE_ORACLE_TOL: f64 = 1e-9;

/// One study cell: k populations, their sample sizes, and an optional
/// reference delta override (when absent, the oracle supplies the truth).
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    name: String,
    populations: Vec<NormalParams>,
    sample_sizes: Vec<usize>,
    reference_delta: Option<f64>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        populations: Vec<NormalParams>,
        sample_sizes: Vec<usize>,
        reference_delta: Option<f64>,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.contains(',') || name.contains('\n') {
            return Err(OvlError::InvalidParameter(format!(
                "scenario name '{name}' must be nonempty without commas or newlines"
            )));
        }
        if populations.len() < 2 {
            return Err(OvlError::InvalidParameter(format!(
                "scenario '{name}' needs k >= 2 populations"
            )));
        }
        if populations.len() != sample_sizes.len() {
            return Err(OvlError::InvalidParameter(format!(
                "scenario '{name}': {} populations but {} sample sizes",
                populations.len(),
                sample_sizes.len()
            )));
        }
        if sample_sizes.contains(&0) {
            return Err(OvlError::InvalidParameter(format!(
                "scenario '{name}': sample sizes must be >= 1"
            )));
        }
        if let Some(d) = reference_delta {
            if !(0.0..=1.0).contains(&d) {
                return Err(OvlError::InvalidParameter(format!(
                    "scenario '{name}': reference_delta = {d} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            name,
            populations,
            sample_sizes,
            reference_delta,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn populations(&self) -> &[NormalParams] {
        &self.populations
    }

    pub fn sample_sizes(&self) -> &[usize] {
        &self.sample_sizes
    }

    pub fn reference_delta(&self) -> Option<f64> {
        self.reference_delta
    }
}

/// Full study configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub scenarios: Vec<Scenario>,
    pub repetitions: usize,
    pub master_seed: u64,
    pub estimators: Vec<EstimatorSpec>,
}

impl SimulationConfig {
    pub fn new(
        scenarios: Vec<Scenario>,
        repetitions: usize,
        master_seed: u64,
        estimators: Vec<EstimatorSpec>,
    ) -> Result<Self> {
        let cfg = Self {
            scenarios,
            repetitions,
            master_seed,
            estimators,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(OvlError::Config("repetitions must be >= 1".to_string()));
        }
        if self.estimators.is_empty() {
            return Err(OvlError::Config("estimator list is empty".to_string()));
        }
        for spec in &self.estimators {
            spec.validate().map_err(|e| OvlError::Config(e.to_string()))?;
        }
        let comparators = self.estimators.iter().filter(|s| s.is_comparator()).count();
        if comparators > 1 {
            return Err(OvlError::Config(
                "at most one comparator estimator is allowed".to_string(),
            ));
        }
        if self.scenarios.is_empty() {
            return Err(OvlError::Config("scenario list is empty".to_string()));
        }
        Ok(())
    }

    /// Parse a JSON configuration document. Unknown keys are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)
            .map_err(|e| OvlError::Config(format!("invalid config JSON: {e}")))?;
        raw.try_into()
    }
}

// ---------------------------------------------------------------------------
// JSON schema (documented in the README)
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    master_seed: u64,
    repetitions: usize,
    estimators: Vec<RawEstimator>,
    scenarios: Vec<RawScenario>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEstimator {
    kind: String,
    #[serde(default)]
    alpha: Option<AlphaField>,
    #[serde(default)]
    r: Option<RField>,
    #[serde(default)]
    convention: Option<VarianceConvention>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AlphaField {
    Number(f64),
    Name(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RField {
    Number(usize),
    Name(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    populations: Vec<NormalParams>,
    sample_sizes: Vec<usize>,
    #[serde(default)]
    reference_delta: Option<f64>,
}

impl TryFrom<RawEstimator> for EstimatorSpec {
    type Error = OvlError;

    fn try_from(raw: RawEstimator) -> Result<Self> {
        match raw.kind.as_str() {
            "comparator" => {
                if raw.alpha.is_some() || raw.r.is_some() {
                    return Err(OvlError::Config(
                        "comparator takes neither 'alpha' nor 'r'".to_string(),
                    ));
                }
                let mut spec = EstimatorSpec::comparator();
                if let Some(c) = raw.convention {
                    spec = spec.with_convention(c);
                }
                Ok(spec)
            }
            "simpson" => {
                let mut spec = match raw.alpha {
                    Some(AlphaField::Number(a)) => EstimatorSpec::simpson_alpha(a),
                    Some(AlphaField::Name(s)) if s == "ml" => EstimatorSpec::simpson_data_driven(),
                    Some(AlphaField::Name(s)) => {
                        return Err(OvlError::Config(format!(
                            "field 'alpha': expected a number or \"ml\", got \"{s}\""
                        )))
                    }
                    None => {
                        return Err(OvlError::Config(
                            "field 'alpha' is required for simpson estimators".to_string(),
                        ))
                    }
                };
                match raw.r {
                    None => {}
                    Some(RField::Name(s)) if s == "auto" => {}
                    Some(RField::Name(s)) => {
                        return Err(OvlError::Config(format!(
                            "field 'r': expected an even integer or \"auto\", got \"{s}\""
                        )))
                    }
                    Some(RField::Number(r)) => {
                        spec = spec.with_r_policy(RPolicy::Fixed(r));
                    }
                }
                if let Some(c) = raw.convention {
                    spec = spec.with_convention(c);
                }
                spec.validate().map_err(|e| OvlError::Config(e.to_string()))?;
                Ok(spec)
            }
            other => Err(OvlError::Config(format!(
                "field 'kind': expected \"comparator\" or \"simpson\", got \"{other}\""
            ))),
        }
    }
}

impl TryFrom<RawConfig> for SimulationConfig {
    type Error = OvlError;

    fn try_from(raw: RawConfig) -> Result<Self> {
        let estimators: Result<Vec<EstimatorSpec>> =
            raw.estimators.into_iter().map(TryInto::try_into).collect();
        let scenarios: Result<Vec<Scenario>> = raw
            .scenarios
            .into_iter()
            .map(|s| Scenario::new(s.name, s.populations, s.sample_sizes, s.reference_delta))
            .collect();
        SimulationConfig::new(
            scenarios?,
            raw.repetitions,
            raw.master_seed,
            estimators?,
        )
    }
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Arithmetic mean of the per-repetition estimates.
pub fn average_estimate(estimates: &[f64]) -> f64 {
    assert!(!estimates.is_empty(), "average of an empty sequence");
    estimates.iter().sum::<f64>() / estimates.len() as f64
}

/// Signed relative bias (av − Δ) / Δ.
pub fn relative_bias(av: f64, delta: f64) -> Result<f64> {
    if delta <= 0.0 {
        return Err(OvlError::DomainError(format!(
            "relative bias needs delta > 0, got {delta}"
        )));
    }
    Ok((av - delta) / delta)
}

/// √((1/R) Σ (Δ̂ᵢ − Δ)²) / Δ.
pub fn rrmse(estimates: &[f64], delta: f64) -> Result<f64> {
    assert!(!estimates.is_empty(), "rrmse of an empty sequence");
    if delta <= 0.0 {
        return Err(OvlError::DomainError(format!(
            "rrmse needs delta > 0, got {delta}"
        )));
    }
    let mse = estimates
        .iter()
        .map(|e| (e - delta) * (e - delta))
        .sum::<f64>()
        / estimates.len() as f64;
    Ok(mse.sqrt() / delta)
}

/// EFF = MSE(comparator) / MSE(candidate), both about `delta`, on paired
/// repetitions.
pub fn efficiency(
    comparator_estimates: &[f64],
    candidate_estimates: &[f64],
    delta: f64,
) -> Result<f64> {
    if comparator_estimates.len() != candidate_estimates.len() {
        return Err(OvlError::InvalidParameter(format!(
            "efficiency needs paired sequences, got lengths {} and {}",
            comparator_estimates.len(),
            candidate_estimates.len()
        )));
    }
    assert!(!candidate_estimates.is_empty(), "efficiency of empty sequences");
    let mse = |v: &[f64]| v.iter().map(|e| (e - delta) * (e - delta)).sum::<f64>() / v.len() as f64;
    let comp = mse(comparator_estimates);
    let cand = mse(candidate_estimates);
    if cand == 0.0 {
        if comp == 0.0 {
            return Ok(1.0);
        }
        return Err(OvlError::ZeroMse);
    }
    Ok(comp / cand)
}

// ---------------------------------------------------------------------------
// The repetition loop
// ---------------------------------------------------------------------------

/// Metrics for one estimator within one scenario cell.
#[derive(Debug, Clone)]
pub struct EstimatorMetrics {
    pub spec: EstimatorSpec,
    pub av: f64,
    pub rb: f64,
    pub rrmse: f64,
    /// Present only when the study includes a comparator.
    pub eff: Option<f64>,
    /// Sample standard deviation of the estimates divided by √R; 0 when R = 1.
    pub mc_std_error: f64,
}

/// Results for one scenario cell, one row per estimator in config order.
#[derive(Debug, Clone)]
pub struct MetricsReport {
    pub scenario: String,
    pub sample_sizes: Vec<usize>,
    pub reference_delta: f64,
    pub repetitions: usize,
    pub master_seed: u64,
    pub estimators: Vec<EstimatorMetrics>,
}

// FNV-1a over the scenario name and sizes; keeps substream derivation stable
// under config reordering.
fn scenario_key(name: &str, sizes: &[usize]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01B3;
    let mut h = OFFSET;
    for &b in name.as_bytes() {
        h = (h ^ b as u64).wrapping_mul(PRIME);
    }
    h = (h ^ 0xFF).wrapping_mul(PRIME);
    for &n in sizes {
        for b in (n as u64).to_le_bytes() {
            h = (h ^ b as u64).wrapping_mul(PRIME);
        }
    }
    h
}

/// Run every repetition of one scenario cell and aggregate the metric suite.
///
/// Identical (config, master_seed) yields a bit-identical report regardless
/// of thread count: repetitions own derived substreams and aggregation runs
/// in repetition order.
pub fn run_scenario(scenario: &Scenario, config: &SimulationConfig) -> Result<MetricsReport> {
    config.validate()?;
    let reference_delta = match scenario.reference_delta() {
        Some(d) => d,
        None => exact_ovl(scenario.populations(), REFERENCE_ORACLE_TOL).map_err(|e| {
            OvlError::OracleFailure {
                scenario: scenario.name().to_string(),
                detail: e.to_string(),
            }
        })?,
    };
    let key = scenario_key(scenario.name(), scenario.sample_sizes());
    let reps = config.repetitions;

    let outcomes: Vec<Result<Vec<f64>>> = (1..=reps)
        .into_par_iter()
        .map(|rep| run_repetition(scenario, config, key, rep))
        .collect();

    // surface the lowest failing repetition index so reruns are deterministic
    let mut estimates = vec![Vec::with_capacity(reps); config.estimators.len()];
    for (rep, outcome) in outcomes.into_iter().enumerate() {
        let row = outcome.map_err(|e| match e {
            OvlError::DegenerateRepetition { .. } => e,
            other => OvlError::DegenerateRepetition {
                scenario: scenario.name().to_string(),
                repetition: rep + 1,
                detail: other.to_string(),
            },
        })?;
        for (col, value) in row.into_iter().enumerate() {
            estimates[col].push(value);
        }
    }

    let comparator_idx = config.estimators.iter().position(|s| s.is_comparator());
    let mut rows = Vec::with_capacity(config.estimators.len());
    for (idx, spec) in config.estimators.iter().enumerate() {
        let ests = &estimates[idx];
        let av = average_estimate(ests);
        let rb = relative_bias(av, reference_delta)?;
        let rrmse_v = rrmse(ests, reference_delta)?;
        let eff = match comparator_idx {
            Some(ci) => Some(efficiency(&estimates[ci], ests, reference_delta)?),
            None => None,
        };
        let mc_std_error = if ests.len() < 2 {
            0.0
        } else {
            let sd = (ests.iter().map(|e| (e - av) * (e - av)).sum::<f64>()
                / (ests.len() - 1) as f64)
                .sqrt();
            sd / (ests.len() as f64).sqrt()
        };
        rows.push(EstimatorMetrics {
            spec: *spec,
            av,
            rb,
            rrmse: rrmse_v,
            eff,
            mc_std_error,
        });
    }

    Ok(MetricsReport {
        scenario: scenario.name().to_string(),
        sample_sizes: scenario.sample_sizes().to_vec(),
        reference_delta,
        repetitions: reps,
        master_seed: config.master_seed,
        estimators: rows,
    })
}

fn run_repetition(
    scenario: &Scenario,
    config: &SimulationConfig,
    key: u64,
    rep: usize,
) -> Result<Vec<f64>> {
    let mut samples: Vec<GroupSample> = Vec::with_capacity(scenario.populations().len());
    for (g, (params, &n)) in scenario
        .populations()
        .iter()
        .zip(scenario.sample_sizes())
        .enumerate()
    {
        let mut stream =
            RngStream::substream(config.master_seed, &[key, rep as u64, (g + 1) as u64]);
        samples.push(sample_normal(params, n, &mut stream, g + 1)?);
    }
    config
        .estimators
        .iter()
        .map(|spec| {
            spec.evaluate(&samples)
                .map_err(|e| OvlError::DegenerateRepetition {
                    scenario: scenario.name().to_string(),
                    repetition: rep,
                    detail: e.to_string(),
                })
        })
        .collect()
}

/// Run every scenario in the config, in order.
pub fn run_all(config: &SimulationConfig) -> Result<Vec<MetricsReport>> {
    config
        .scenarios
        .iter()
        .map(|s| run_scenario(s, config))
        .collect()
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

/// Render `x` with the given number of significant digits, plain decimal.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// CSV header shared by the `simulate` and `table2` commands.
pub const CSV_HEADER: &str =
    "scenario,n1,n2,n3,estimator,alpha,r,reference_delta,av,rb,rrmse,eff,mc_std_error,R,seed";

/// Render reports as CSV: one row per (scenario, estimator), scenarios and
/// estimators in config order, numbers with 6 significant digits.
pub fn reports_to_csv(reports: &[MetricsReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for report in reports {
        let mut n = [String::new(), String::new(), String::new()];
        for (i, slot) in n.iter_mut().enumerate() {
            if let Some(v) = report.sample_sizes.get(i) {
                *slot = v.to_string();
            }
        }
        for row in &report.estimators {
            let (alpha, r) = match row.spec.kind {
                EstimatorKind::SimpsonFixedAlpha(a) => (
                    format_significant(a, 6),
                    row.spec
                        .r_policy
                        .resolve(&report.sample_sizes)
                        .map(|r| r.to_string())
                        .unwrap_or_default(),
                ),
                EstimatorKind::SimpsonDataDriven => (
                    "ml".to_string(),
                    row.spec
                        .r_policy
                        .resolve(&report.sample_sizes)
                        .map(|r| r.to_string())
                        .unwrap_or_default(),
                ),
                EstimatorKind::Comparator => (String::new(), String::new()),
            };
            let eff = row
                .eff
                .map(|e| format_significant(e, 6))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                report.scenario,
                n[0],
                n[1],
                n[2],
                row.spec.label(),
                alpha,
                r,
                format_significant(report.reference_delta, 6),
                format_significant(row.av, 6),
                format_significant(row.rb, 6),
                format_significant(row.rrmse, 6),
                eff,
                format_significant(row.mc_std_error, 6),
                report.repetitions,
                report.master_seed,
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Built-in benchmark study
// ---------------------------------------------------------------------------

/// The four benchmark scenarios: (name, populations, printed reference delta).
pub fn benchmark_scenarios() -> Vec<(&'static str, Vec<NormalParams>, f64)> {
    let p = |mu: f64, sigma: f64| NormalParams::new(mu, sigma).unwrap();
    vec![
        ("S1", vec![p(0.0, 0.95), p(0.0, 1.0), p(0.0, 1.1)], 0.929),
        ("S2", vec![p(-0.1, 1.0), p(0.0, 1.0), p(0.1, 1.0)], 0.689),
        ("S3", vec![p(-0.5, 1.0), p(0.0, 0.5), p(0.75, 1.0)], 0.469),
        ("S4", vec![p(-1.0, 1.5), p(0.0, 0.8), p(2.0, 0.4)], 0.074),
    ]
}

/// Sample-size cells of the benchmark study. The published table heads its
/// larger cell "(100,150,200)", but the values in it are only reproducible
/// at (50,100,150), the sizes the accompanying text lists; see the README.
pub const BENCHMARK_CELLS: [[usize; 3]; 2] = [[50, 50, 50], [50, 100, 150]];

/// Built-in configuration reproducing the published benchmark table:
/// 4 scenarios x 2 size cells, comparator plus the three Simpson variants,
/// all with the unbiased variance divisor the published values used.
pub fn table2_config(master_seed: u64, repetitions: usize) -> Result<SimulationConfig> {
    let mut scenarios = Vec::new();
    for (name, populations, delta) in benchmark_scenarios() {
        for cell in BENCHMARK_CELLS {
            scenarios.push(Scenario::new(
                name,
                populations.clone(),
                cell.to_vec(),
                Some(delta),
            )?);
        }
    }
    let estimators = vec![
        EstimatorSpec::comparator(),
        EstimatorSpec::simpson_alpha(1.0).with_convention(VarianceConvention::Unbiased),
        EstimatorSpec::simpson_alpha(2.0).with_convention(VarianceConvention::Unbiased),
        EstimatorSpec::simpson_data_driven().with_convention(VarianceConvention::Unbiased),
    ];
    SimulationConfig::new(scenarios, repetitions, master_seed, estimators)
}

/// Published benchmark values the `table2` command compares against.
pub mod reference {
    /// One published cell: metrics for one estimator at one scenario and
    /// size cell (sizes given as the data-generating sizes).
    #[derive(Debug, Clone, Copy)]
    pub struct Table2Row {
        pub scenario: &'static str,
        pub sizes: [usize; 3],
        pub estimator: &'static str,
        pub av: f64,
        pub rb: f64,
        pub rrmse: f64,
        pub eff: f64,
    }

    /// Printed reference deltas of the four benchmark scenarios.
    ///
    /// Two known defects, documented in the README: the S2 value belongs to
    /// mean spacing ±0.4 rather than the printed ±0.1 parameters (the true
    /// value is 2Φ(−0.1) ≈ 0.9203), and the S4 value is a 3-decimal rounding
    /// of the true 0.07347.
    pub const TABLE1_DELTAS: [(&str, f64); 4] = [
        ("S1", 0.929),
        ("S2", 0.689),
        ("S3", 0.469),
        ("S4", 0.074),
    ];

    /// Exact overlap of the S2 populations as printed: 2Φ(−0.1).
    pub const S2_ORACLE_DELTA: f64 = 0.920344325445942;

    /// True overlap of the S4 populations (40-digit quadrature, junction
    /// splitting); the printed 0.074 is this value rounded twice.
    pub const S4_TRUE_DELTA: f64 = 0.0734708912472;

    const fn row(
        scenario: &'static str,
        sizes: [usize; 3],
        estimator: &'static str,
        av: f64,
        rb: f64,
        rrmse: f64,
        eff: f64,
    ) -> Table2Row {
        Table2Row {
            scenario,
            sizes,
            estimator,
            av,
            rb,
            rrmse,
            eff,
        }
    }

    /// The full published table: 4 scenarios x 2 size cells x 4 estimators.
    pub const TABLE2: [Table2Row; 32] = [
        row("S1", [50, 50, 50], "comparator", 0.85073, -0.08425, 0.10149, 1.00000),
        row("S1", [50, 50, 50], "simpson(1)", 0.85029, -0.08473, 0.10156, 0.99888),
        row("S1", [50, 50, 50], "simpson(2)", 0.84800, -0.08719, 0.10302, 0.97052),
        row("S1", [50, 50, 50], "simpson(ml)", 0.85031, -0.08471, 0.10155, 0.99888),
        row("S1", [50, 100, 150], "comparator", 0.87408, -0.05912, 0.07673, 1.00000),
        row("S1", [50, 100, 150], "simpson(1)", 0.87370, -0.05953, 0.07700, 0.99219),
        row("S1", [50, 100, 150], "simpson(2)", 0.87093, -0.06251, 0.07838, 0.95849),
        row("S1", [50, 100, 150], "simpson(ml)", 0.87373, -0.05949, 0.07699, 0.99219),
        row("S2", [50, 50, 50], "comparator", 0.84738, 0.22986, 0.24319, 1.00000),
        row("S2", [50, 50, 50], "simpson(1)", 0.84669, 0.22887, 0.24214, 1.00898),
        row("S2", [50, 50, 50], "simpson(2)", 0.84441, 0.22555, 0.23861, 1.03885),
        row("S2", [50, 50, 50], "simpson(ml)", 0.84672, 0.22891, 0.24218, 1.00862),
        row("S2", [50, 100, 150], "comparator", 0.87485, 0.26974, 0.27789, 1.00000),
        row("S2", [50, 100, 150], "simpson(1)", 0.87450, 0.26924, 0.27735, 1.00383),
        row("S2", [50, 100, 150], "simpson(2)", 0.87165, 0.26510, 0.27306, 1.03559),
        row("S2", [50, 100, 150], "simpson(ml)", 0.87454, 0.26929, 0.27740, 1.00356),
        row("S3", [50, 50, 50], "comparator", 0.45462, -0.0307, 0.12102, 1.00000),
        row("S3", [50, 50, 50], "simpson(1)", 0.45375, -0.0325, 0.11762, 1.05921),
        row("S3", [50, 50, 50], "simpson(2)", 0.45372, -0.0326, 0.11758, 1.05921),
        row("S3", [50, 50, 50], "simpson(ml)", 0.45375, -0.0325, 0.11759, 1.05921),
        row("S3", [50, 100, 150], "comparator", 0.45879, -0.02176, 0.08720, 1.00000),
        row("S3", [50, 100, 150], "simpson(1)", 0.45902, -0.02128, 0.08474, 1.05696),
        row("S3", [50, 100, 150], "simpson(2)", 0.45899, -0.02135, 0.08471, 1.05696),
        row("S3", [50, 100, 150], "simpson(ml)", 0.45903, -0.02126, 0.08473, 1.05696),
        row("S4", [50, 50, 50], "comparator", 0.06711, -0.0931, 0.30476, 1.00000),
        row("S4", [50, 50, 50], "simpson(1)", 0.06835, -0.07637, 0.26544, 1.30769),
        row("S4", [50, 50, 50], "simpson(2)", 0.06863, -0.07251, 0.26616, 1.30769),
        row("S4", [50, 50, 50], "simpson(ml)", 0.06842, -0.07544, 0.26499, 1.34211),
        row("S4", [50, 100, 150], "comparator", 0.06940, -0.06216, 0.25685, 1.00000),
        row("S4", [50, 100, 150], "simpson(1)", 0.06919, -0.0650, 0.22058, 1.33333),
        row("S4", [50, 100, 150], "simpson(2)", 0.07089, -0.0421, 0.22370, 1.33333),
        row("S4", [50, 100, 150], "simpson(ml)", 0.06936, -0.0627, 0.22117, 1.33333),
    ];
}
