//! Monte Carlo studies.
//!
//! Every study is a [`Study`]: an independent computation per ensemble
//! member (seeded by [`crate::rng::member_rng`]) followed by an ordered
//! reduction, so reports do not depend on scheduling or thread count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::basis::{RadialGrid, SpectralField};
use crate::error::{Error, Result};
use crate::flow::{
    duhamel_cumulative, linear_propagate, linear_trajectory, StrangSplitting,
    Trajectory, DEFAULT_DT, DEFAULT_STRIDE,
};
use crate::norms::{field_lp_norm, mixed_norm, sobolev_norm, xsb_norm, TimeWindow, DEFAULT_B, MAX_XSB_WINDOW};
use crate::random_data::{
    complex_gaussian, hamiltonian_on, potential_energy_on, sample_free, sample_gibbs_on,
    ModelParams,
};
use crate::rng::member_rng;
use crate::stats::{
    bonferroni, ks_two_sample, log_log_fit, linear_fit, mean, quantile, survival, LinearFit,
    SurvivalPoint,
};

/// Significance level of the two-sample tests.
pub const TEST_LEVEL: f64 = 0.01;

/// Quantile range of the sub-Gaussian tail fit.
pub const TAIL_FIT_RANGE: (f64, f64) = (0.5, 0.99);

/// Points of the tail fit, evenly spaced in probability over [`TAIL_FIT_RANGE`].
pub const TAIL_FIT_POINTS: usize = 50;

/// `q` in the bootstrap exponent `γ = (2 - α/2 - α/q)/2`.
pub const SCHEDULE_Q: f64 = 64.0;

/// A Monte Carlo computation split into independent members.
pub trait Study: Sync {
    type Member: Serialize + DeserializeOwned + Clone + Send + Sync;
    type Report: Serialize;

    fn count(&self) -> usize;
    fn master_seed(&self) -> u64;
    fn validate(&self) -> Result<()>;
    fn member(&self, index: u64) -> Result<Self::Member>;
    fn reduce(&self, members: &[Self::Member]) -> Result<Self::Report>;
    /// Column names of the per-member summary rows (after `index`).
    fn columns(&self) -> Vec<String>;
    fn row(&self, member: &Self::Member) -> Vec<f64>;
}

/// Runs every member on the current rayon pool and reduces in index order.
pub fn execute<S: Study>(study: &S) -> Result<S::Report> {
    study.validate()?;
    let members = run_members(study, 0..study.count() as u64)?;
    study.reduce(&members)
}

pub fn run_members<S: Study>(study: &S, indices: std::ops::Range<u64>) -> Result<Vec<S::Member>> {
    indices
        .into_par_iter()
        .map(|i| study.member(i))
        .collect()
}

/// Law of the initial data of an ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    Free,
    Gibbs,
    Zero,
}

/// Scalar functionals of a state compared by the invariance test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// `‖u‖²_{L²}`
    L2Mass,
    /// `V(u)`
    Potential,
    /// `Re c_1`
    ReC1,
    /// `|c_N|`
    AbsCN,
}

impl Observable {
    pub const DEFAULTS: [Observable; 4] = [Self::L2Mass, Self::Potential, Self::ReC1, Self::AbsCN];

    pub fn name(&self) -> &'static str {
        match self {
            Self::L2Mass => "l2_mass",
            Self::Potential => "potential",
            Self::ReC1 => "re_c1",
            Self::AbsCN => "abs_cN",
        }
    }

    pub fn evaluate(&self, grid: &mut RadialGrid, field: &SpectralField, alpha: f64) -> Result<f64> {
        Ok(match self {
            Self::L2Mass => field.l2_norm_squared(),
            Self::Potential => potential_energy_on(grid, field, alpha)?,
            Self::ReC1 => field.coeff(1).re,
            Self::AbsCN => field.coeff(field.cutoff()).norm(),
        })
    }
}

fn default_observables() -> Vec<Observable> {
    Observable::DEFAULTS.to_vec()
}

fn default_stride() -> usize {
    DEFAULT_STRIDE
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_data() -> InitialData {
    InitialData::Gibbs
}

/// Reproducibility key of a Monte Carlo ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub params: ModelParams,
    pub horizon: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub count: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub lambda_grid: Vec<f64>,
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    #[serde(default = "default_data")]
    pub data: InitialData,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

impl EnsembleConfig {
    pub fn new(params: ModelParams, horizon: f64, count: usize, master_seed: u64) -> Self {
        Self {
            params,
            horizon,
            dt: DEFAULT_DT,
            count,
            master_seed,
            lambda_grid: Vec::new(),
            observables: default_observables(),
            data: InitialData::Gibbs,
            stride: DEFAULT_STRIDE,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_data(mut self, data: InitialData) -> Self {
        self.data = data;
        self
    }

    pub fn with_lambda_grid(mut self, grid: Vec<f64>) -> Self {
        self.lambda_grid = grid;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.count < 2 {
            return Err(Error::Usage(format!("count = {} must be at least 2", self.count)));
        }
        if self.lambda_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Usage("lambda_grid must be strictly increasing".into()));
        }
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return Err(Error::Usage(format!("horizon = {} must be finite and nonnegative", self.horizon)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Usage(format!("dt = {} must be positive", self.dt)));
        }
        if self.stride == 0 {
            return Err(Error::Usage("stride must be at least 1".into()));
        }
        if self.data == InitialData::Gibbs {
            self.params.require_gibbs()?;
        }
        Ok(())
    }

    /// Initial datum of member `index` and its rejection count.
    pub fn initial_data(&self, grid: &mut RadialGrid, index: u64) -> Result<(SpectralField, u64)> {
        let mut rng = member_rng(self.master_seed, index);
        draw(self.data, grid, &self.params, &mut rng)
    }

    fn evolve(&self, field: &SpectralField, stride: usize) -> Result<Trajectory> {
        StrangSplitting::new(&self.params, self.dt)?.run(field, self.horizon, stride)
    }
}

fn draw(data: InitialData, grid: &mut RadialGrid, params: &ModelParams, rng: &mut ChaCha20Rng) -> Result<(SpectralField, u64)> {
    Ok(match data {
        InitialData::Free => (sample_free(params.cutoff, rng), 1),
        InitialData::Gibbs => {
            let s = sample_gibbs_on(grid, params, rng)?;
            (s.field, s.attempts)
        }
        InitialData::Zero => (SpectralField::zeros(params.cutoff), 1),
    })
}

/// `max_t |H(u(t)) - H(u(0))| / H(u(0))` sequence along a trajectory,
/// with the discrete Hamiltonian of the trajectory's grid.
pub fn hamiltonian_deviation(traj: &Trajectory) -> Result<Vec<f64>> {
    let params = traj.params();
    let mut grid = params.grid()?;
    let h0 = hamiltonian_on(&mut grid, &traj.states()[0], params.alpha)?;
    traj.states()
        .iter()
        .map(|u| {
            let h = hamiltonian_on(&mut grid, u, params.alpha)?;
            Ok(if h0 == 0.0 { (h - h0).abs() } else { ((h - h0) / h0).abs() })
        })
        .collect()
}

/// Quantiles reported for every per-member statistic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileSummary {
    pub q10: f64,
    pub q50: f64,
    pub q90: f64,
    pub max: f64,
    pub mean: f64,
}

impl QuantileSummary {
    pub fn of(values: &[f64]) -> Result<Self> {
        Ok(Self {
            q10: quantile(values, 0.1)?,
            q50: quantile(values, 0.5)?,
            q90: quantile(values, 0.9)?,
            max: quantile(values, 1.0)?,
            mean: mean(values),
        })
    }
}

// ---------------------------------------------------------------------------
// sampling and plain evolution

/// Draws initial data and records the configured observables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleStudy {
    pub config: EnsembleConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMember {
    pub index: u64,
    pub attempts: u64,
    pub observables: Vec<f64>,
    pub hamiltonian: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub count: usize,
    pub acceptance_rate: f64,
    pub observables: Vec<(Observable, QuantileSummary)>,
}

impl Study for SampleStudy {
    type Member = SampleMember;
    type Report = SampleReport;

    fn count(&self) -> usize {
        self.config.count
    }

    fn master_seed(&self) -> u64 {
        self.config.master_seed
    }

    fn validate(&self) -> Result<()> {
        self.config.validate()
    }

    fn member(&self, index: u64) -> Result<SampleMember> {
        let cfg = &self.config;
        let mut grid = cfg.params.grid()?;
        let (field, attempts) = cfg.initial_data(&mut grid, index)?;
        let observables = cfg
            .observables
            .iter()
            .map(|o| o.evaluate(&mut grid, &field, cfg.params.alpha))
            .collect::<Result<_>>()?;
        Ok(SampleMember {
            index,
            attempts,
            observables,
            hamiltonian: hamiltonian_on(&mut grid, &field, cfg.params.alpha)?,
        })
    }

    fn reduce(&self, members: &[SampleMember]) -> Result<SampleReport> {
        let attempts: u64 = members.iter().map(|m| m.attempts).sum();
        let observables = self
            .config
            .observables
            .iter()
            .enumerate()
            .map(|(k, o)| {
                let v: Vec<f64> = members.iter().map(|m| m.observables[k]).collect();
                Ok((*o, QuantileSummary::of(&v)?))
            })
            .collect::<Result<_>>()?;
        Ok(SampleReport {
            count: members.len(),
            acceptance_rate: members.len() as f64 / attempts as f64,
            observables,
        })
    }

    fn columns(&self) -> Vec<String> {
        let mut c = vec!["attempts".to_string()];
        c.extend(self.config.observables.iter().map(|o| o.name().to_string()));
        c.push("hamiltonian".into());
        c
    }

    fn row(&self, m: &SampleMember) -> Vec<f64> {
        let mut r = vec![m.attempts as f64];
        r.extend(&m.observables);
        r.push(m.hamiltonian);
        r
    }
}

/// Evolves each member to the horizon and records energy conservation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveStudy {
    pub config: EnsembleConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveMember {
    pub index: u64,
    pub initial_hamiltonian: f64,
    pub max_relative_deviation: f64,
    pub final_observables: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveReport {
    pub count: usize,
    pub deviation: QuantileSummary,
}

impl Study for EvolveStudy {
    type Member = EvolveMember;
    type Report = EvolveReport;

    fn count(&self) -> usize {
        self.config.count
    }

    fn master_seed(&self) -> u64 {
        self.config.master_seed
    }

    fn validate(&self) -> Result<()> {
        self.config.validate()
    }

    fn member(&self, index: u64) -> Result<EvolveMember> {
        let cfg = &self.config;
        let mut grid = cfg.params.grid()?;
        let (field, _) = cfg.initial_data(&mut grid, index)?;
        let traj = cfg.evolve(&field, cfg.stride)?;
        let deviation = hamiltonian_deviation(&traj)?;
        let last = traj.final_state();
        Ok(EvolveMember {
            index,
            initial_hamiltonian: hamiltonian_on(&mut grid, &field, cfg.params.alpha)?,
            max_relative_deviation: deviation.into_iter().fold(0.0, f64::max),
            final_observables: cfg
                .observables
                .iter()
                .map(|o| o.evaluate(&mut grid, last, cfg.params.alpha))
                .collect::<Result<_>>()?,
        })
    }

    fn reduce(&self, members: &[EvolveMember]) -> Result<EvolveReport> {
        let d: Vec<f64> = members.iter().map(|m| m.max_relative_deviation).collect();
        Ok(EvolveReport {
            count: members.len(),
            deviation: QuantileSummary::of(&d)?,
        })
    }

    fn columns(&self) -> Vec<String> {
        let mut c = vec!["initial_hamiltonian".to_string(), "max_relative_deviation".into()];
        c.extend(self.config.observables.iter().map(|o| format!("final_{}", o.name())));
        c
    }

    fn row(&self, m: &EvolveMember) -> Vec<f64> {
        let mut r = vec![m.initial_hamiltonian, m.max_relative_deviation];
        r.extend(&m.final_observables);
        r
    }
}

// ---------------------------------------------------------------------------
// invariance

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceStudy {
    pub config: EnsembleConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceMember {
    pub index: u64,
    pub attempts: u64,
    pub initial: Vec<f64>,
    pub terminal: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableTest {
    pub observable: Observable,
    pub statistic: f64,
    pub p_value: f64,
    pub adjusted_p_value: f64,
    pub rejects: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub count: usize,
    pub horizon: f64,
    pub level: f64,
    pub tests: Vec<ObservableTest>,
    pub any_rejects: bool,
}

impl Study for InvarianceStudy {
    type Member = InvarianceMember;
    type Report = InvarianceReport;

    fn count(&self) -> usize {
        self.config.count
    }

    fn master_seed(&self) -> u64 {
        self.config.master_seed
    }

    fn validate(&self) -> Result<()> {
        self.config.params.require_gibbs()?;
        self.config.validate()?;
        if self.config.observables.is_empty() {
            return Err(Error::Usage("observables must not be empty".into()));
        }
        Ok(())
    }

    fn member(&self, index: u64) -> Result<InvarianceMember> {
        let cfg = &self.config;
        let mut grid = cfg.params.grid()?;
        let (field, attempts) = cfg.initial_data(&mut grid, index)?;
        let traj = cfg.evolve(&field, usize::MAX)?;
        let eval = |grid: &mut RadialGrid, u: &SpectralField| -> Result<Vec<f64>> {
            cfg.observables
                .iter()
                .map(|o| o.evaluate(grid, u, cfg.params.alpha))
                .collect()
        };
        Ok(InvarianceMember {
            index,
            attempts,
            initial: eval(&mut grid, &field)?,
            terminal: eval(&mut grid, traj.final_state())?,
        })
    }

    fn reduce(&self, members: &[InvarianceMember]) -> Result<InvarianceReport> {
        let raw = self
            .config
            .observables
            .iter()
            .enumerate()
            .map(|(k, _)| {
                let a: Vec<f64> = members.iter().map(|m| m.initial[k]).collect();
                let b: Vec<f64> = members.iter().map(|m| m.terminal[k]).collect();
                ks_two_sample(&a, &b)
            })
            .collect::<Result<Vec<_>>>()?;
        let adjusted = bonferroni(&raw.iter().map(|r| r.p_value).collect::<Vec<_>>());
        let tests: Vec<ObservableTest> = self
            .config
            .observables
            .iter()
            .zip(raw)
            .zip(adjusted)
            .map(|((o, r), adj)| ObservableTest {
                observable: *o,
                statistic: r.statistic,
                p_value: r.p_value,
                adjusted_p_value: adj,
                rejects: adj < TEST_LEVEL,
            })
            .collect();
        Ok(InvarianceReport {
            count: members.len(),
            horizon: self.config.horizon,
            level: TEST_LEVEL,
            any_rejects: tests.iter().any(|t| t.rejects),
            tests,
        })
    }

    fn columns(&self) -> Vec<String> {
        let mut c = vec!["attempts".to_string()];
        for o in &self.config.observables {
            c.push(format!("initial_{}", o.name()));
        }
        for o in &self.config.observables {
            c.push(format!("terminal_{}", o.name()));
        }
        c
    }

    fn row(&self, m: &InvarianceMember) -> Vec<f64> {
        let mut r = vec![m.attempts as f64];
        r.extend(&m.initial);
        r.extend(&m.terminal);
        r
    }
}

/// Two-sample comparison of the observables at times `0` and `T` under the
/// Gibbs ensemble.
pub fn invariance_test(cfg: &EnsembleConfig) -> Result<InvarianceReport> {
    execute(&InvarianceStudy { config: cfg.clone() })
}

// ---------------------------------------------------------------------------
// tails

/// Random functional whose tail is estimated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum TailQuantity {
    /// `‖S(t)φ_N‖_{L^p_x L^q_t([0,T])}`
    LinearMixedNorm { p: f64, q: f64 },
    /// `‖(√-Δ)^s φ_N‖_{L^p_x}`
    DataSobolevLp { s: f64, p: f64 },
    /// `‖u_N‖_{L^p_x L^q_t([0,T])}`
    NonlinearMixedNorm { p: f64, q: f64 },
    /// `‖u_N - P_M u_N‖_{L^p_x L^q_t([0,T])}` for each `M` in `cutoffs`.
    HighPassNonlinear { p: f64, q: f64, cutoffs: Vec<usize> },
}

impl TailQuantity {
    /// Checks the integrability conditions under which the tail bound holds.
    pub fn validate(&self, cutoff: usize) -> Result<()> {
        let (p, q) = match self {
            Self::LinearMixedNorm { p, q }
            | Self::NonlinearMixedNorm { p, q }
            | Self::HighPassNonlinear { p, q, .. } => (*p, Some(*q)),
            Self::DataSobolevLp { p, .. } => (*p, None),
        };
        if !(p >= 1.0 && p < 6.0) {
            return Err(Error::Parameter(format!("p = {p} violates 1 ≤ p < 6")));
        }
        if let Some(q) = q {
            if !(q >= 1.0) || !q.is_finite() {
                return Err(Error::Parameter(format!("q = {q} violates 1 ≤ q < ∞")));
            }
        }
        match self {
            Self::DataSobolevLp { s, p } => {
                if !(*s >= 0.0) {
                    return Err(Error::Parameter(format!("s = {s} violates s ≥ 0")));
                }
                let bound = 6.0 / (1.0 + 2.0 * s);
                if !(*p < bound) {
                    return Err(Error::Parameter(format!(
                        "p = {p} violates p < 6/(1+2s) = {bound} for s = {s}"
                    )));
                }
            }
            Self::HighPassNonlinear { cutoffs, .. } => {
                if cutoffs.is_empty() {
                    return Err(Error::Parameter("high-pass tail needs at least one cutoff M".into()));
                }
                if let Some(m) = cutoffs.iter().find(|&&m| m == 0 || m >= cutoff) {
                    return Err(Error::Parameter(format!("cutoff M = {m} violates 1 ≤ M < N = {cutoff}")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn series_names(&self) -> Vec<String> {
        match self {
            Self::HighPassNonlinear { cutoffs, .. } => cutoffs.iter().map(|m| format!("M{m}")).collect(),
            _ => vec!["value".into()],
        }
    }

    /// `θ = T^{-1/q} M^{3/p - 1/2}` for each high-pass cutoff.
    pub fn theta(&self, horizon: f64) -> Option<Vec<f64>> {
        match self {
            Self::HighPassNonlinear { p, q, cutoffs } => Some(
                cutoffs
                    .iter()
                    .map(|&m| horizon.powf(-1.0 / q) * (m as f64).powf(3.0 / p - 0.5))
                    .collect(),
            ),
            _ => None,
        }
    }
}

/// Sub-Gaussian fit `log P(X > λ) ≈ a - cλ²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubGaussianFit {
    pub intercept: f64,
    pub rate: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Tail of one random variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSeries {
    pub name: String,
    pub mean: f64,
    pub survival: Vec<SurvivalPoint>,
    pub fit: SubGaussianFit,
    pub theta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCollapse {
    /// Common grid of rescaled thresholds `θλ`.
    pub scaled_lambda: Vec<f64>,
    /// Survival of `θ_M X_M` for each series, on `scaled_lambda`.
    pub curves: Vec<Vec<SurvivalPoint>>,
    /// Largest `|S_i - S_j| / √(σ_i² + σ_j²)` over pairs and thresholds.
    pub max_discrepancy: f64,
    /// Whether every pair overlays within two combined standard errors.
    pub overlays: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub count: usize,
    pub series: Vec<TailSeries>,
    pub collapse: Option<TailCollapse>,
}

/// Empirical survival on `grid` (or on a quantile grid when `grid` is empty)
/// and the sub-Gaussian fit over [`TAIL_FIT_RANGE`].
pub fn tail_series_from_samples(name: &str, values: &[f64], grid: &[f64]) -> Result<TailSeries> {
    let grid: Vec<f64> = if grid.is_empty() {
        (0..=20)
            .map(|k| quantile(values, k as f64 / 20.0))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(Vec::new(), |mut acc: Vec<f64>, x| {
                if acc.last().is_none_or(|l| x > *l) {
                    acc.push(x);
                }
                acc
            })
    } else {
        grid.to_vec()
    };
    Ok(TailSeries {
        name: name.to_string(),
        mean: mean(values),
        survival: survival(values, &grid)?,
        fit: sub_gaussian_fit(values)?,
        theta: None,
    })
}

/// Least-squares fit of `log P(X > λ)` against `λ²` at the sample quantiles
/// `u ∈ [0.5, 0.99]`.
pub fn sub_gaussian_fit(values: &[f64]) -> Result<SubGaussianFit> {
    let (lo, hi) = TAIL_FIT_RANGE;
    let mut lambdas: Vec<f64> = (0..TAIL_FIT_POINTS)
        .map(|k| quantile(values, lo + (hi - lo) * k as f64 / (TAIL_FIT_POINTS - 1) as f64))
        .collect::<Result<_>>()?;
    lambdas.dedup();
    let curve = survival(values, &lambdas)?;
    let (x, y): (Vec<f64>, Vec<f64>) = curve
        .iter()
        .filter(|p| p.probability > 0.0)
        .map(|p| (p.lambda * p.lambda, p.probability.ln()))
        .unzip();
    if x.len() < 2 {
        // degenerate (e.g. constant) sample: no tail to fit
        return Ok(SubGaussianFit {
            intercept: y.first().copied().unwrap_or(f64::NEG_INFINITY),
            rate: f64::INFINITY,
            r_squared: 0.0,
            points: x.len(),
        });
    }
    let fit: LinearFit = linear_fit(&x, &y)?;
    Ok(SubGaussianFit {
        intercept: fit.intercept,
        rate: -fit.slope,
        r_squared: fit.r_squared,
        points: fit.points,
    })
}

/// Survival of `θ_k X_k` on a common grid spanning the rescaled medians to
/// the smallest rescaled 0.99-quantile; `overlays` when all pairs agree
/// within twice their combined binomial standard error.
pub fn tail_collapse(samples: &[Vec<f64>], theta: &[f64]) -> Result<TailCollapse> {
    let scaled: Vec<Vec<f64>> = samples
        .iter()
        .zip(theta)
        .map(|(s, t)| s.iter().map(|x| x * t).collect())
        .collect();
    let lo = scaled
        .iter()
        .map(|s| quantile(s, 0.1))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let hi = scaled
        .iter()
        .map(|s| quantile(s, 0.99))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let points = 20;
    let grid: Vec<f64> = (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect();
    let curves: Vec<Vec<SurvivalPoint>> = scaled
        .iter()
        .map(|s| survival(s, &grid))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            for (a, b) in curves[i].iter().zip(&curves[j]) {
                let diff = (a.probability - b.probability).abs();
                let se = (a.error.powi(2) + b.error.powi(2)).sqrt();
                let z = if se == 0.0 {
                    if diff == 0.0 { 0.0 } else { f64::INFINITY }
                } else {
                    diff / se
                };
                worst = worst.max(z);
            }
        }
    }
    Ok(TailCollapse {
        scaled_lambda: grid,
        curves,
        max_discrepancy: worst,
        overlays: worst <= 2.0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailStudy {
    pub config: EnsembleConfig,
    pub quantity: TailQuantity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailMember {
    pub index: u64,
    pub values: Vec<f64>,
}

impl TailStudy {
    fn times(&self) -> Vec<f64> {
        let steps = (self.config.horizon / self.config.dt).round().max(1.0) as usize;
        let h = self.config.horizon / steps as f64;
        (0..=steps).map(|k| k as f64 * h).collect()
    }
}

impl Study for TailStudy {
    type Member = TailMember;
    type Report = TailReport;

    fn count(&self) -> usize {
        self.config.count
    }

    fn master_seed(&self) -> u64 {
        self.config.master_seed
    }

    fn validate(&self) -> Result<()> {
        self.config.validate()?;
        self.quantity.validate(self.config.params.cutoff)?;
        let needs_time = !matches!(self.quantity, TailQuantity::DataSobolevLp { .. });
        if needs_time && !(self.config.horizon > 0.0) {
            return Err(Error::Usage("time-integrated tails need a positive horizon".into()));
        }
        Ok(())
    }

    fn member(&self, index: u64) -> Result<TailMember> {
        let cfg = &self.config;
        let mut grid = cfg.params.grid()?;
        let (field, _) = cfg.initial_data(&mut grid, index)?;
        let values = match &self.quantity {
            TailQuantity::LinearMixedNorm { p, q } => {
                let traj = linear_trajectory(&field, &cfg.params, self.times())?;
                vec![mixed_norm(&traj, *p, *q, TimeWindow::whole(&traj))?]
            }
            TailQuantity::DataSobolevLp { s, p } => {
                let lifted = SpectralField::from_coeffs(
                    field
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c * ((i + 1) as f64 * PI).powf(*s))
                        .collect(),
                )?;
                vec![field_lp_norm(&lifted, *p)?]
            }
            TailQuantity::NonlinearMixedNorm { p, q } => {
                let traj = cfg.evolve(&field, cfg.stride)?;
                vec![mixed_norm(&traj, *p, *q, TimeWindow::whole(&traj))?]
            }
            TailQuantity::HighPassNonlinear { p, q, cutoffs } => {
                let traj = cfg.evolve(&field, cfg.stride)?;
                cutoffs
                    .iter()
                    .map(|&m| {
                        let high = traj.map_states(|_, u| {
                            let mut c = u.coeffs().to_vec();
                            c[..m].fill(Complex64::new(0.0, 0.0));
                            SpectralField::from_coeffs(c).expect("finite")
                        })?;
                        mixed_norm(&high, *p, *q, TimeWindow::whole(&high))
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(TailMember { index, values })
    }

    fn reduce(&self, members: &[TailMember]) -> Result<TailReport> {
        tail_report_from_samples(
            &self.quantity,
            self.config.horizon,
            &self.config.lambda_grid,
            &(0..self.quantity.series_names().len())
                .map(|k| members.iter().map(|m| m.values[k]).collect())
                .collect::<Vec<Vec<f64>>>(),
        )
    }

    fn columns(&self) -> Vec<String> {
        self.quantity.series_names()
    }

    fn row(&self, m: &TailMember) -> Vec<f64> {
        m.values.clone()
    }
}

/// Assembles a [`TailReport`] from per-series samples.
pub fn tail_report_from_samples(
    quantity: &TailQuantity,
    horizon: f64,
    grid: &[f64],
    samples: &[Vec<f64>],
) -> Result<TailReport> {
    let names = quantity.series_names();
    let theta = quantity.theta(horizon);
    let series = names
        .iter()
        .zip(samples)
        .enumerate()
        .map(|(k, (name, values))| {
            let mut s = tail_series_from_samples(name, values, grid)?;
            s.theta = theta.as_ref().map(|t| t[k]);
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    let collapse = match &theta {
        Some(t) if t.len() > 1 => Some(tail_collapse(samples, t)?),
        _ => None,
    };
    Ok(TailReport {
        count: samples.first().map_or(0, Vec::len),
        series,
        collapse,
    })
}

pub fn tail_estimate(cfg: &EnsembleConfig, quantity: &TailQuantity) -> Result<TailReport> {
    execute(&TailStudy {
        config: cfg.clone(),
        quantity: quantity.clone(),
    })
}

// ---------------------------------------------------------------------------
// Galerkin convergence and smoothing

/// Bootstrap schedule of the convergence argument, reported as diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub gamma: f64,
    pub bound: f64,
    pub step: f64,
}

/// `γ = (2 - α/2 - α/64)/2`, `B(N₀) = (log N₀)^{γ/α}`, `Δt = [1/(2B^α)]^{1/γ}`.
pub fn bootstrap_schedule(alpha: f64, n0: usize) -> Schedule {
    let gamma = (2.0 - alpha / 2.0 - alpha / SCHEDULE_Q) / 2.0;
    let bound = (n0 as f64).ln().powf(gamma / alpha);
    let step = (1.0 / (2.0 * bound.powf(alpha))).powf(1.0 / gamma);
    Schedule { gamma, bound, step }
}

fn check_dyadic(n_list: &[usize]) -> Result<()> {
    if n_list.len() < 2 {
        return Err(Error::Usage("cutoff list needs at least two entries".into()));
    }
    if n_list.iter().any(|n| !n.is_power_of_two()) || n_list.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Usage(format!("cutoffs {n_list:?} must be consecutive powers of two")));
    }
    Ok(())
}

/// Nonlinear trajectories at every cutoff of `n_list` from one coupled draw
/// `φ_{N_max}`, projected to each cutoff.
fn coupled_trajectories(
    alpha: f64,
    n_list: &[usize],
    horizon: f64,
    dt: f64,
    stride: usize,
    data: &SpectralField,
) -> Result<Vec<Trajectory>> {
    n_list
        .iter()
        .map(|&n| {
            let params = ModelParams::new(alpha, n)?;
            StrangSplitting::new(&params, dt)?.run(&data.project(n), horizon, stride)
        })
        .collect()
}

/// `sup_k ‖u(t_k) - v(t_k)‖_{H^s}` over common sample times, zero-padding the
/// lower cutoff.
pub fn sup_difference(u: &Trajectory, v: &Trajectory, s: f64) -> Result<f64> {
    if u.times().len() != v.times().len()
        || u.times().iter().zip(v.times()).any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Error::Domain("trajectories are not sampled at common times".into()));
    }
    let cutoff = u.params().cutoff.max(v.params().cutoff);
    Ok(u.states()
        .iter()
        .zip(v.states())
        .map(|(a, b)| sobolev_norm(&a.resized(cutoff).difference(&b.resized(cutoff)), s))
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceStudy {
    pub alpha: f64,
    pub s: f64,
    pub n_list: Vec<usize>,
    pub horizon: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub count: usize,
    pub master_seed: u64,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceMember {
    pub index: u64,
    /// `sup_t ‖u_{N₁} - u_{N₀}‖_{H^s}` per adjacent pair.
    pub differences: Vec<f64>,
    /// `‖φ_{N₁} - φ_{N₀}‖_{H^s}` per adjacent pair.
    pub data_differences: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePair {
    pub n0: usize,
    pub n1: usize,
    pub difference: QuantileSummary,
    pub data_difference: QuantileSummary,
    pub schedule: Schedule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub s: f64,
    pub pairs: Vec<ConvergencePair>,
    /// `κ` in `median ≈ C N₀^{-κ}`.
    pub decay_exponent: f64,
    pub fit_r_squared: f64,
    pub medians_strictly_decreasing: bool,
}

impl Study for ConvergenceStudy {
    type Member = ConvergenceMember;
    type Report = ConvergenceReport;

    fn count(&self) -> usize {
        self.count
    }

    fn master_seed(&self) -> u64 {
        self.master_seed
    }

    fn validate(&self) -> Result<()> {
        ModelParams::new(self.alpha, 1)?.require_gibbs()?;
        if !(self.s > 0.0 && self.s < 0.5) {
            return Err(Error::Parameter(format!("s = {} violates 0 < s < 1/2", self.s)));
        }
        check_dyadic(&self.n_list)?;
        if self.count < 2 {
            return Err(Error::Usage(format!("count = {} must be at least 2", self.count)));
        }
        if !(self.dt > 0.0 && self.horizon >= 0.0 && self.stride > 0) {
            return Err(Error::Usage("dt, horizon and stride must be positive".into()));
        }
        Ok(())
    }

    fn member(&self, index: u64) -> Result<ConvergenceMember> {
        let top = *self.n_list.last().expect("validated");
        let data = sample_free(top, &mut member_rng(self.master_seed, index));
        let trajs = coupled_trajectories(self.alpha, &self.n_list, self.horizon, self.dt, self.stride, &data)?;
        let mut differences = Vec::new();
        let mut data_differences = Vec::new();
        for (k, w) in self.n_list.windows(2).enumerate() {
            differences.push(sup_difference(&trajs[k + 1], &trajs[k], self.s)?);
            data_differences.push(sobolev_norm(
                &data.project(w[1]).difference(&data.project(w[0]).resized(w[1])),
                self.s,
            ));
        }
        Ok(ConvergenceMember {
            index,
            differences,
            data_differences,
        })
    }

    fn reduce(&self, members: &[ConvergenceMember]) -> Result<ConvergenceReport> {
        let pairs = self
            .n_list
            .windows(2)
            .enumerate()
            .map(|(k, w)| {
                let d: Vec<f64> = members.iter().map(|m| m.differences[k]).collect();
                let dd: Vec<f64> = members.iter().map(|m| m.data_differences[k]).collect();
                Ok(ConvergencePair {
                    n0: w[0],
                    n1: w[1],
                    difference: QuantileSummary::of(&d)?,
                    data_difference: QuantileSummary::of(&dd)?,
                    schedule: bootstrap_schedule(self.alpha, w[0]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let n0: Vec<f64> = pairs.iter().map(|p| p.n0 as f64).collect();
        let med: Vec<f64> = pairs.iter().map(|p| p.difference.q50).collect();
        let (decay_exponent, fit_r_squared) = if pairs.len() >= 2 && med.iter().all(|m| *m > 0.0) {
            let fit = log_log_fit(&n0, &med)?;
            (-fit.slope, fit.r_squared)
        } else {
            (f64::NAN, f64::NAN)
        };
        Ok(ConvergenceReport {
            s: self.s,
            medians_strictly_decreasing: med.windows(2).all(|w| w[1] < w[0]),
            pairs,
            decay_exponent,
            fit_r_squared,
        })
    }

    fn columns(&self) -> Vec<String> {
        let mut c = Vec::new();
        for w in self.n_list.windows(2) {
            c.push(format!("diff_{}_{}", w[0], w[1]));
        }
        for w in self.n_list.windows(2) {
            c.push(format!("data_diff_{}_{}", w[0], w[1]));
        }
        c
    }

    fn row(&self, m: &ConvergenceMember) -> Vec<f64> {
        m.differences.iter().chain(&m.data_differences).copied().collect()
    }
}

pub fn convergence_study(study: &ConvergenceStudy) -> Result<ConvergenceReport> {
    execute(study)
}

/// Fitted exponent of the median `‖φ_{2N} - φ_N‖_{H^s}` in `N` for coupled
/// free data, with no time evolution.
pub fn data_only_exponent(s: f64, n_list: &[usize], count: usize, master_seed: u64) -> Result<LinearFit> {
    if !(s >= 0.0 && s < 0.5) {
        return Err(Error::Parameter(format!("s = {s} violates 0 ≤ s < 1/2")));
    }
    if n_list.is_empty() || count < 2 {
        return Err(Error::Usage("data-only exponent needs cutoffs and count ≥ 2".into()));
    }
    let top = 2 * n_list.iter().copied().max().expect("non-empty");
    let rows: Vec<Vec<f64>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let data = sample_free(top, &mut member_rng(master_seed, i));
            n_list
                .iter()
                .map(|&n| sobolev_norm(&data.project(2 * n).difference(&data.project(n).resized(2 * n)), s))
                .collect()
        })
        .collect();
    let medians = (0..n_list.len())
        .map(|k| quantile(&rows.iter().map(|r| r[k]).collect::<Vec<_>>(), 0.5))
        .collect::<Result<Vec<_>>>()?;
    let n: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    log_log_fit(&n, &medians)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingStudy {
    pub alpha: f64,
    pub sigma: f64,
    pub n_list: Vec<usize>,
    pub horizon: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub count: usize,
    pub master_seed: u64,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_data_free")]
    pub data: InitialData,
}

fn default_data_free() -> InitialData {
    InitialData::Free
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingMember {
    pub index: u64,
    /// `sup_t ‖u_N(t) - S(t)P_Nφ‖_{H^σ}` per cutoff.
    pub nonlinear_parts: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingRow {
    pub cutoff: usize,
    pub quantiles: QuantileSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingReport {
    pub sigma: f64,
    /// `σ < (5-α)/2`; outside it the run is a diagnostic only.
    pub bounded_regime: bool,
    pub rows: Vec<SmoothingRow>,
    /// `max_N median / min_N median`.
    pub median_ratio: f64,
    pub bounded: bool,
}

/// Largest admissible median ratio for the smoothing check.
pub const SMOOTHING_RATIO_BOUND: f64 = 2.0;

impl SmoothingStudy {
    pub fn regime_bound(&self) -> f64 {
        (5.0 - self.alpha) / 2.0
    }
}

impl Study for SmoothingStudy {
    type Member = SmoothingMember;
    type Report = SmoothingReport;

    fn count(&self) -> usize {
        self.count
    }

    fn master_seed(&self) -> u64 {
        self.master_seed
    }

    fn validate(&self) -> Result<()> {
        ModelParams::new(self.alpha, 1)?.require_gibbs()?;
        if !(self.sigma > 0.0) {
            return Err(Error::Parameter(format!("σ = {} violates σ > 0", self.sigma)));
        }
        if self.n_list.is_empty() || self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Usage("cutoff list must be non-empty and increasing".into()));
        }
        if self.data == InitialData::Gibbs {
            return Err(Error::Usage("smoothing needs coupled data: use free or zero".into()));
        }
        if self.count < 2 {
            return Err(Error::Usage(format!("count = {} must be at least 2", self.count)));
        }
        if !(self.dt > 0.0 && self.horizon >= 0.0 && self.stride > 0) {
            return Err(Error::Usage("dt, horizon and stride must be positive".into()));
        }
        Ok(())
    }

    fn member(&self, index: u64) -> Result<SmoothingMember> {
        let top = *self.n_list.last().expect("validated");
        let data = match self.data {
            InitialData::Zero => SpectralField::zeros(top),
            _ => sample_free(top, &mut member_rng(self.master_seed, index)),
        };
        let trajs = coupled_trajectories(self.alpha, &self.n_list, self.horizon, self.dt, self.stride, &data)?;
        let nonlinear_parts = trajs
            .iter()
            .map(|traj| {
                let phi = &traj.states()[0];
                traj.iter()
                    .map(|(t, u)| sobolev_norm(&u.difference(&linear_propagate(phi, t)), self.sigma))
                    .fold(0.0, f64::max)
            })
            .collect();
        Ok(SmoothingMember {
            index,
            nonlinear_parts,
        })
    }

    fn reduce(&self, members: &[SmoothingMember]) -> Result<SmoothingReport> {
        let rows = self
            .n_list
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let v: Vec<f64> = members.iter().map(|m| m.nonlinear_parts[k]).collect();
                Ok(SmoothingRow {
                    cutoff: n,
                    quantiles: QuantileSummary::of(&v)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let med: Vec<f64> = rows.iter().map(|r| r.quantiles.q50).collect();
        let hi = med.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = med.iter().copied().fold(f64::INFINITY, f64::min);
        let median_ratio = if hi == 0.0 { 1.0 } else { hi / lo };
        Ok(SmoothingReport {
            sigma: self.sigma,
            bounded_regime: self.sigma < self.regime_bound(),
            rows,
            median_ratio,
            bounded: median_ratio <= SMOOTHING_RATIO_BOUND,
        })
    }

    fn columns(&self) -> Vec<String> {
        self.n_list.iter().map(|n| format!("nonlinear_N{n}")).collect()
    }

    fn row(&self, m: &SmoothingMember) -> Vec<f64> {
        m.nonlinear_parts.clone()
    }
}

pub fn smoothing_check(study: &SmoothingStudy) -> Result<SmoothingReport> {
    execute(study)
}

// ---------------------------------------------------------------------------
// Strichartz-type inequality

/// Temporal half-bandwidth of the random forcings around each mode's
/// resonant frequency.
pub const FORCING_BANDWIDTH: i64 = 2;

/// Ensemble of ratios `‖∫S(t-τ)(√-Δ)^{-1}f dτ‖_{X^{s,b}} / ‖f‖_{L^p_x L²_t}`
/// over random forcings on `[0, T]`, `T = config.horizon ≤ 1/2`, sampled with
/// spacing `config.dt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzStudy {
    pub config: EnsembleConfig,
    pub s: f64,
    #[serde(default = "default_b")]
    pub b: f64,
    pub p: f64,
}

fn default_b() -> f64 {
    DEFAULT_B
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzMember {
    pub index: u64,
    /// `None` for a vanishing forcing.
    pub ratio: Option<f64>,
    pub xsb: f64,
    pub forcing_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzReport {
    pub used: usize,
    pub excluded: usize,
    pub max: f64,
    pub median: f64,
    pub max_over_median: f64,
}

/// Random forcing `f_n(τ) = (nπ)^{-1} Σ_{|j|≤J} g_{n,j} e^{-iπ(n+j)τ} / √(2J+1)`
/// sampled at `times`.
pub fn random_forcing(params: &ModelParams, times: &[f64], rng: &mut impl Rng) -> Result<Trajectory> {
    let cutoff = params.cutoff;
    let width = (2 * FORCING_BANDWIDTH + 1) as f64;
    let amplitudes: Vec<Vec<Complex64>> = (1..=cutoff)
        .map(|n| {
            (-FORCING_BANDWIDTH..=FORCING_BANDWIDTH)
                .map(|_| complex_gaussian(rng) / (n as f64 * PI * width.sqrt()))
                .collect()
        })
        .collect();
    let states = times
        .iter()
        .map(|&t| {
            SpectralField::from_coeffs(
                amplitudes
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let n = (i + 1) as i64;
                        row.iter()
                            .zip(-FORCING_BANDWIDTH..=FORCING_BANDWIDTH)
                            .map(|(g, j)| g * Complex64::from_polar(1.0, -PI * (n + j) as f64 * t))
                            .sum()
                    })
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let dt = times.get(1).copied().unwrap_or(0.0);
    Trajectory::new(*params, times.to_vec(), states, dt, crate::flow::Method::Sampled)
}

/// The proxy ratio for one forcing, or `None` when the forcing vanishes.
pub fn strichartz_ratio_of(forcing: &Trajectory, s: f64, b: f64, p: f64) -> Result<(Option<f64>, f64, f64)> {
    let denominator = mixed_norm(forcing, p, 2.0, TimeWindow::whole(forcing))?;
    let duhamel = Trajectory::sampled(*forcing.params(), forcing.dt(), duhamel_cumulative(forcing)?)?;
    let numerator = xsb_norm(&duhamel, s, b)?;
    let ratio = (denominator > 0.0).then(|| numerator / denominator);
    Ok((ratio, numerator, denominator))
}

impl StrichartzStudy {
    fn times(&self) -> Vec<f64> {
        let steps = (self.config.horizon / self.config.dt).round() as usize;
        (0..=steps).map(|k| k as f64 * self.config.dt).collect()
    }
}

impl Study for StrichartzStudy {
    type Member = StrichartzMember;
    type Report = StrichartzReport;

    fn count(&self) -> usize {
        self.config.count
    }

    fn master_seed(&self) -> u64 {
        self.config.master_seed
    }

    fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(Error::Parameter(format!("s = {} violates 0 < s < 1", self.s)));
        }
        let bound = 3.0 / (3.0 - self.s);
        if !(self.p > bound) {
            return Err(Error::Parameter(format!(
                "p = {} violates p > 3/(3-s) = {bound} for s = {}",
                self.p, self.s
            )));
        }
        if !(self.b > 0.5) {
            return Err(Error::Parameter(format!("b = {} violates b > 1/2", self.b)));
        }
        let mut cfg = self.config.clone();
        cfg.data = InitialData::Free;
        cfg.validate()?;
        if !(cfg.horizon > 0.0 && cfg.horizon <= MAX_XSB_WINDOW) {
            return Err(Error::Parameter(format!(
                "window length {} violates 0 < T ≤ {MAX_XSB_WINDOW}",
                cfg.horizon
            )));
        }
        let steps = cfg.horizon / cfg.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps {
            return Err(Error::Usage(format!("dt = {} must divide the horizon {}", cfg.dt, cfg.horizon)));
        }
        Ok(())
    }

    fn member(&self, index: u64) -> Result<StrichartzMember> {
        let mut rng = member_rng(self.config.master_seed, index);
        let forcing = match self.config.data {
            InitialData::Zero => Trajectory::sampled(
                self.config.params,
                self.config.dt,
                vec![SpectralField::zeros(self.config.params.cutoff); self.times().len()],
            )?,
            _ => random_forcing(&self.config.params, &self.times(), &mut rng)?,
        };
        let (ratio, xsb, forcing_norm) = strichartz_ratio_of(&forcing, self.s, self.b, self.p)?;
        Ok(StrichartzMember {
            index,
            ratio,
            xsb,
            forcing_norm,
        })
    }

    fn reduce(&self, members: &[StrichartzMember]) -> Result<StrichartzReport> {
        let ratios: Vec<f64> = members.iter().filter_map(|m| m.ratio).collect();
        if ratios.is_empty() {
            return Err(Error::Domain("every forcing vanished; no ratio to report".into()));
        }
        let max = quantile(&ratios, 1.0)?;
        let median = quantile(&ratios, 0.5)?;
        Ok(StrichartzReport {
            used: ratios.len(),
            excluded: members.len() - ratios.len(),
            max,
            median,
            max_over_median: max / median,
        })
    }

    fn columns(&self) -> Vec<String> {
        vec!["ratio".into(), "xsb".into(), "forcing_norm".into()]
    }

    fn row(&self, m: &StrichartzMember) -> Vec<f64> {
        vec![m.ratio.unwrap_or(f64::NAN), m.xsb, m.forcing_norm]
    }
}

pub fn strichartz_ratio(cfg: &EnsembleConfig, s: f64, b: f64, p: f64) -> Result<StrichartzReport> {
    execute(&StrichartzStudy {
        config: cfg.clone(),
        s,
        b,
        p,
    })
}
