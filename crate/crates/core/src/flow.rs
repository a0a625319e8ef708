//! Time evolution of the truncated first-order equation
//!
//! ```text
//! i ċ_n = ω_n c_n + κ F_n(Re c) / ω_n,     F_n = ⟨|Re u|^α Re u, e_n⟩
//! ```
//!
//! whose real part solves the radial wave equation with a defocusing power
//! nonlinearity. Both halves of the splitting are solved exactly: the linear
//! part is a phase rotation, and the kick leaves `Re c` fixed so `Im c`
//! moves linearly in time.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisConvention, RadialGrid, SpectralField};
use crate::error::{Error, Result};
use crate::norms::sobolev_norm;
use crate::random_data::{ModelParams, GIBBS_ALPHA_LIMIT};

/// `‖u‖_{L²}` above which integration is aborted.
pub const BLOW_UP_GUARD: f64 = 1e6;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_STRIDE: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Method {
    Linear,
    Splitting,
    Picard { iterations: usize },
    /// Samples supplied by the caller, e.g. a forcing term.
    Sampled,
}

/// Time-stamped states on `[0, T]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    params: ModelParams,
    times: Vec<f64>,
    states: Vec<SpectralField>,
    dt: f64,
    method: Method,
}

impl Trajectory {
    pub fn new(
        params: ModelParams,
        times: Vec<f64>,
        states: Vec<SpectralField>,
        dt: f64,
        method: Method,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() {
            return Err(Error::Domain(format!(
                "trajectory needs matching non-empty times and states ({} vs {})",
                times.len(),
                states.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::Domain(format!("trajectory starts at {} instead of 0", times[0])));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("trajectory times must increase strictly".into()));
        }
        if let Some(k) = states.iter().position(|s| s.cutoff() != params.cutoff) {
            return Err(Error::Domain(format!(
                "state {k} has cutoff {} but the model cutoff is {}",
                states[k].cutoff(),
                params.cutoff
            )));
        }
        Ok(Self {
            params,
            times,
            states,
            dt,
            method,
        })
    }

    /// Uniformly sampled trajectory `t_k = k·spacing`.
    pub fn sampled(params: ModelParams, spacing: f64, states: Vec<SpectralField>) -> Result<Self> {
        let times = (0..states.len()).map(|k| k as f64 * spacing).collect();
        Self::new(params, times, states, spacing, Method::Sampled)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SpectralField] {
        &self.states
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("non-empty")
    }

    pub fn final_state(&self) -> &SpectralField {
        self.states.last().expect("non-empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &SpectralField)> {
        self.times.iter().copied().zip(&self.states)
    }

    /// Common spacing of the samples, if they are uniform to a relative `1e-9`.
    pub fn uniform_spacing(&self) -> Option<f64> {
        uniform_spacing(&self.times)
    }

    /// Same samples with every state mapped through `f`.
    pub fn map_states(&self, f: impl Fn(f64, &SpectralField) -> SpectralField) -> Result<Self> {
        let states = self.iter().map(|(t, s)| f(t, s)).collect();
        Self::new(self.params, self.times.clone(), states, self.dt, Method::Sampled)
    }

    /// Index of the sample at time `t`, if there is one.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * self.horizon().max(1.0);
        self.times.iter().position(|&s| (s - t).abs() <= tol)
    }
}

fn uniform_spacing(times: &[f64]) -> Option<f64> {
    if times.len() < 2 {
        return None;
    }
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    let ok = times
        .iter()
        .enumerate()
        .all(|(k, &t)| (t - (times[0] + k as f64 * h)).abs() <= 1e-9 * h.max(1e-300) * times.len() as f64);
    ok.then_some(h)
}

/// `e^{-iω_n t}`, reducing `n·t` modulo the period 2 exactly before scaling by π.
pub fn phase(n: usize, t: f64) -> Complex64 {
    let turns = (n as f64 * t).rem_euclid(2.0);
    Complex64::from_polar(1.0, -PI * turns)
}

/// `S(t)`: `c_n ↦ e^{-iω_n t} c_n`.
pub fn linear_propagate(field: &SpectralField, t: f64) -> SpectralField {
    let coeffs = field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * phase(i + 1, t))
        .collect();
    SpectralField::from_coeffs(coeffs).expect("unimodular rotation keeps coefficients finite")
}

/// Linear trajectory `S(t_k)φ` on the given times.
pub fn linear_trajectory(field: &SpectralField, params: &ModelParams, times: Vec<f64>) -> Result<Trajectory> {
    let states = times.iter().map(|&t| linear_propagate(field, t)).collect();
    let dt = uniform_spacing(&times).unwrap_or(0.0);
    Trajectory::new(*params, times, states, dt, Method::Linear)
}

/// Strang splitting `A(dt/2) B(dt) A(dt/2)` with exact sub-flows.
#[derive(Clone, Debug)]
pub struct StrangSplitting {
    params: ModelParams,
    grid: RadialGrid,
    dt: f64,
    half_phases: Vec<Complex64>,
    re: Vec<f64>,
    force: Vec<f64>,
}

impl StrangSplitting {
    pub fn new(params: &ModelParams, dt: f64) -> Result<Self> {
        params.validate()?;
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::Domain(format!("time step {dt} must be finite and nonzero")));
        }
        Ok(Self {
            params: *params,
            grid: params.grid()?,
            dt,
            half_phases: (1..=params.cutoff).map(|n| phase(n, 0.5 * dt)).collect(),
            re: vec![0.0; params.cutoff],
            force: vec![0.0; params.cutoff],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One step of the configured size.
    pub fn step(&mut self, coeffs: &mut [Complex64]) -> Result<()> {
        for (c, p) in coeffs.iter_mut().zip(&self.half_phases) {
            *c *= p;
        }
        self.kick(coeffs, self.dt)?;
        for (c, p) in coeffs.iter_mut().zip(&self.half_phases) {
            *c *= p;
        }
        Ok(())
    }

    /// One step of arbitrary (possibly negative) size.
    pub fn step_by(&mut self, coeffs: &mut [Complex64], dt: f64) -> Result<()> {
        rotate(coeffs, 0.5 * dt);
        self.kick(coeffs, dt)?;
        rotate(coeffs, 0.5 * dt);
        Ok(())
    }

    /// Exact flow of `i ċ_n = κ F_n(Re c)/ω_n`: `Re c` is frozen, so
    /// `Im c_n` decreases by `dt·κ·F_n/ω_n`.
    pub fn kick(&mut self, coeffs: &mut [Complex64], dt: f64) -> Result<()> {
        if self.params.coupling == 0.0 {
            return Ok(());
        }
        for (r, c) in self.re.iter_mut().zip(coeffs.iter()) {
            *r = c.re;
        }
        self.grid
            .nonlinearity_real(&self.re, self.params.alpha, &mut self.force)?;
        let scale = dt * self.params.coupling;
        for (n, (c, f)) in coeffs.iter_mut().zip(&self.force).enumerate() {
            c.im -= scale * f / BasisConvention::frequency(n + 1);
        }
        Ok(())
    }

    /// Integrates to `horizon`, recording every `stride`-th step and the final state.
    pub fn run(&mut self, field: &SpectralField, horizon: f64, stride: usize) -> Result<Trajectory> {
        if field.cutoff() != self.params.cutoff {
            return Err(Error::Domain(format!(
                "initial data has cutoff {} but the model cutoff is {}",
                field.cutoff(),
                self.params.cutoff
            )));
        }
        if !(self.dt > 0.0) {
            return Err(Error::Domain("evolution needs a positive time step".into()));
        }
        if !(horizon >= 0.0) || !horizon.is_finite() {
            return Err(Error::Domain(format!("horizon {horizon} must be finite and nonnegative")));
        }
        let stride = stride.max(1);
        let steps = (horizon / self.dt - 1e-9).ceil().max(0.0) as usize;
        let mut coeffs = field.coeffs().to_vec();
        let mut times = vec![0.0];
        let mut states = vec![field.clone()];
        for k in 1..=steps {
            let t = (k as f64 * self.dt).min(horizon);
            if k == steps && (t - (k - 1) as f64 * self.dt - self.dt).abs() > 1e-12 {
                let last = t - (k - 1) as f64 * self.dt;
                self.step_by(&mut coeffs, last)?;
            } else {
                self.step(&mut coeffs)?;
            }
            let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if !(norm <= BLOW_UP_GUARD) {
                return Err(Error::Integration { time: t, norm });
            }
            if k % stride == 0 || k == steps {
                times.push(t);
                states.push(SpectralField::from_coeffs(coeffs.clone())?);
            }
        }
        Trajectory::new(self.params, times, states, self.dt, Method::Splitting)
    }
}

fn rotate(coeffs: &mut [Complex64], t: f64) {
    for (i, c) in coeffs.iter_mut().enumerate() {
        *c *= phase(i + 1, t);
    }
}

/// Solves the truncated problem on `[0, horizon]`, recording every step.
pub fn evolve(field: &SpectralField, params: &ModelParams, horizon: f64, dt: f64) -> Result<Trajectory> {
    evolve_strided(field, params, horizon, dt, 1)
}

pub fn evolve_strided(
    field: &SpectralField,
    params: &ModelParams,
    horizon: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step {dt} must be positive")));
    }
    StrangSplitting::new(params, dt)?.run(field, horizon, stride)
}

/// `∫_0^{t_k} S(t_k-τ)(√-Δ)^{-1} f(τ) dτ` at every sample time `t_k`,
/// i.e. `(1/ω_n)∫_0^{t_k} e^{-iω_n(t_k-τ)} f_n(τ) dτ` per mode.
///
/// Composite Simpson on the even nodes; the first odd node uses the
/// quadratic through the first three samples, later odd nodes chain Simpson
/// panels from it.
pub fn duhamel_cumulative(source: &Trajectory) -> Result<Vec<SpectralField>> {
    let cutoff = source.params().cutoff;
    let len = source.len();
    if len == 1 {
        return Ok(vec![SpectralField::zeros(cutoff)]);
    }
    let h = source.uniform_spacing().ok_or_else(|| {
        Error::Domain("Duhamel quadrature needs uniformly spaced samples".into())
    })?;
    let times = source.times();
    // integrand g_n(τ) = e^{iω_n τ} f_n(τ)
    let integrand: Vec<Vec<Complex64>> = source
        .iter()
        .map(|(tau, f)| {
            f.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| c * phase(i + 1, -tau))
                .collect()
        })
        .collect();
    let zero = vec![Complex64::new(0.0, 0.0); cutoff];
    let mut cumulative = vec![zero; len];
    for n in 0..cutoff {
        let g = |k: usize| integrand[k][n];
        if len == 2 {
            cumulative[1][n] = 0.5 * h * (g(0) + g(1));
            continue;
        }
        cumulative[1][n] = h / 12.0 * (5.0 * g(0) + 8.0 * g(1) - g(2));
        for k in 2..len {
            cumulative[k][n] = cumulative[k - 2][n] + h / 3.0 * (g(k - 2) + 4.0 * g(k - 1) + g(k));
        }
    }
    cumulative
        .into_iter()
        .zip(times)
        .map(|(integral, &t)| {
            SpectralField::from_coeffs(
                integral
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| v * phase(i + 1, t) / BasisConvention::frequency(i + 1))
                    .collect(),
            )
        })
        .collect()
}

/// Duhamel integral at a single sample time of the source.
pub fn duhamel_integral(source: &Trajectory, t: f64) -> Result<SpectralField> {
    if t < 0.0 || t > source.horizon() * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "time {t} outside the source horizon [0, {}]",
            source.horizon()
        )));
    }
    let k = source.index_of(t).ok_or_else(|| {
        Error::Domain(format!("time {t} is not a sample time of the source"))
    })?;
    Ok(duhamel_cumulative(source)?.swap_remove(k))
}

/// Controls for [`PicardSolver`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardOptions {
    /// Number of Simpson intervals on `[0, T_loc]`; must be even.
    pub intervals: usize,
    pub tol: f64,
    pub max_iterations: usize,
    /// Sobolev index of the convergence test.
    pub norm_index: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            intervals: 64,
            tol: 1e-10,
            max_iterations: 50,
            norm_index: 0.4,
        }
    }
}

/// Fixed-point iteration of the Duhamel formula
/// `u = S(t)φ - iκ ∫_0^t S(t-τ)(√-Δ)^{-1} P_N[|Re u|^α Re u] dτ`.
#[derive(Clone, Debug)]
pub struct PicardSolver {
    params: ModelParams,
    options: PicardOptions,
    spacing: f64,
    free: Vec<SpectralField>,
    grid: RadialGrid,
}

impl PicardSolver {
    pub fn new(field: &SpectralField, params: &ModelParams, horizon: f64, options: PicardOptions) -> Result<Self> {
        params.validate()?;
        if field.cutoff() != params.cutoff {
            return Err(Error::Domain("initial data cutoff differs from the model cutoff".into()));
        }
        if !(horizon > 0.0) {
            return Err(Error::Domain(format!("local horizon {horizon} must be positive")));
        }
        if options.intervals < 2 || options.intervals % 2 != 0 {
            return Err(Error::Domain("Simpson quadrature needs an even number of intervals".into()));
        }
        let spacing = horizon / options.intervals as f64;
        let free = (0..=options.intervals)
            .map(|k| linear_propagate(field, k as f64 * spacing))
            .collect();
        Ok(Self {
            params: *params,
            options,
            spacing,
            free,
            grid: params.grid()?,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.options.intervals)
            .map(|k| k as f64 * self.spacing)
            .collect()
    }

    /// `u^{(0)}(t) = S(t)φ`.
    pub fn initial_iterate(&self) -> Vec<SpectralField> {
        self.free.clone()
    }

    /// One application of the Duhamel map.
    pub fn iterate(&mut self, current: &[SpectralField]) -> Result<Vec<SpectralField>> {
        let forcing = current
            .iter()
            .map(|u| self.grid.apply_nonlinearity(u, self.params.alpha, self.params.cutoff))
            .collect::<Result<Vec<_>>>()?;
        let source = Trajectory::sampled(self.params, self.spacing, forcing)?;
        let integral = duhamel_cumulative(&source)?;
        let kappa = self.params.coupling;
        Ok(self
            .free
            .iter()
            .zip(integral)
            .map(|(free, d)| {
                let coeffs = free
                    .coeffs()
                    .iter()
                    .zip(d.coeffs())
                    .map(|(a, b)| a - Complex64::new(0.0, kappa) * b)
                    .collect();
                SpectralField::from_coeffs(coeffs)
            })
            .collect::<Result<Vec<_>>>()?)
    }

    fn increment(&self, next: &[SpectralField], current: &[SpectralField]) -> f64 {
        next.iter()
            .zip(current)
            .map(|(a, b)| sobolev_norm(&a.difference(b), self.options.norm_index))
            .fold(0.0, f64::max)
    }

    pub fn solve(mut self) -> Result<Trajectory> {
        let mut current = self.initial_iterate();
        let mut increments = Vec::new();
        for iteration in 1..=self.options.max_iterations {
            let next = match self.iterate(&current) {
                Ok(next) => next,
                Err(Error::Domain(_)) => {
                    return Err(Error::NoConvergence {
                        iterations: iteration,
                        reason: "iterate is not finite",
                        increments,
                    })
                }
                Err(e) => return Err(e),
            };
            let inc = self.increment(&next, &current);
            if !inc.is_finite() {
                return Err(Error::NoConvergence {
                    iterations: iteration,
                    reason: "iterate is not finite",
                    increments,
                });
            }
            increments.push(inc);
            current = next;
            if inc < self.options.tol {
                return Trajectory::new(
                    self.params,
                    self.times(),
                    current,
                    self.spacing,
                    Method::Picard {
                        iterations: iteration,
                    },
                );
            }
            let k = increments.len();
            if k >= 4 && (k - 3..k).all(|i| increments[i] > increments[i - 1]) {
                return Err(Error::NoConvergence {
                    iterations: iteration,
                    reason: "increment grew for 3 consecutive iterations",
                    increments,
                });
            }
        }
        Err(Error::NoConvergence {
            iterations: self.options.max_iterations,
            reason: "iteration limit reached",
            increments,
        })
    }
}

/// Picard solution on `[0, t_loc]` with default quadrature and iteration limits.
pub fn picard_solve(field: &SpectralField, params: &ModelParams, t_loc: f64, tol: f64) -> Result<Trajectory> {
    let options = PicardOptions {
        tol,
        ..PicardOptions::default()
    };
    PicardSolver::new(field, params, t_loc, options)?.solve()
}

/// Classification of `(α, s)` against the contraction window and the
/// existence range of the Gibbs measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    ContractionAdmissible,
    ConvergenceOnly,
    NoGibbs,
}

/// `α² - 2α - 4 < 0` exactly when `α < 1 + √5`.
pub fn contraction_threshold() -> f64 {
    1.0 + 5f64.sqrt()
}

/// The open interval `((3α-4)/(2α), (5-α)/2)` of Sobolev indices for which
/// the fixed-point argument closes, or `None` when it is empty.
pub fn contraction_window(alpha: f64) -> Option<(f64, f64)> {
    if !(alpha > 0.0) || alpha >= contraction_threshold() {
        return None;
    }
    Some(((3.0 * alpha - 4.0) / (2.0 * alpha), (5.0 - alpha) / 2.0))
}

pub fn regime_check(alpha: f64, s: f64) -> Regime {
    if alpha >= GIBBS_ALPHA_LIMIT {
        return Regime::NoGibbs;
    }
    match contraction_window(alpha) {
        Some((lo, hi)) if lo < s && s < hi => Regime::ContractionAdmissible,
        _ => Regime::ConvergenceOnly,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_data::sample_free;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn propagator_period_two() {
        let f = sample_free(64, &mut ChaCha20Rng::seed_from_u64(1));
        assert_eq!(linear_propagate(&f, 0.0), f);
        let back = linear_propagate(&f, 2.0);
        assert!(back.difference(&f).l2_norm_squared().sqrt() < 1e-12);
    }

    #[test]
    fn zero_data_stays_zero() {
        let params = ModelParams::new(3.0, 8).unwrap();
        let traj = evolve(&SpectralField::zeros(8), &params, 0.05, 1e-3).unwrap();
        assert_eq!(traj.len(), 51);
        assert!(traj.states().iter().all(|s| s.l2_norm_squared() == 0.0));
    }

    #[test]
    fn stride_records_endpoints() {
        let params = ModelParams::new(2.0, 4).unwrap();
        let f = sample_free(4, &mut ChaCha20Rng::seed_from_u64(2));
        let traj = evolve_strided(&f, &params, 0.1, 1e-3, 10).unwrap();
        assert_eq!(traj.len(), 11);
        assert!((traj.horizon() - 0.1).abs() < 1e-15);
        let odd = evolve_strided(&f, &params, 0.0105, 1e-3, 4).unwrap();
        assert!((odd.horizon() - 0.0105).abs() < 1e-15);
    }

    #[test]
    fn evolve_rejects_bad_step() {
        let params = ModelParams::new(2.0, 4).unwrap();
        assert!(evolve(&SpectralField::zeros(4), &params, 1.0, 0.0).is_err());
        assert!(evolve(&SpectralField::zeros(4), &params, 1.0, -1e-3).is_err());
    }

    #[test]
    fn kick_keeps_real_part() {
        let params = ModelParams::new(3.0, 16).unwrap();
        let f = sample_free(16, &mut ChaCha20Rng::seed_from_u64(5)).scaled(4.0);
        let mut coeffs = f.coeffs().to_vec();
        let mut split = StrangSplitting::new(&params, 1e-2).unwrap();
        for _ in 0..50 {
            split.kick(&mut coeffs, 1e-2).unwrap();
        }
        for (a, b) in coeffs.iter().zip(f.coeffs()) {
            assert!((a.re - b.re).abs() <= 1e-14);
        }
        assert!(coeffs.iter().zip(f.coeffs()).any(|(a, b)| a.im != b.im));
    }

    #[test]
    fn duhamel_of_zero() {
        let params = ModelParams::new(2.0, 4).unwrap();
        let src = Trajectory::sampled(params, 0.01, vec![SpectralField::zeros(4); 11]).unwrap();
        assert_eq!(duhamel_integral(&src, 0.1).unwrap(), SpectralField::zeros(4));
        assert!(duhamel_integral(&src, 0.2).is_err());
        assert!(duhamel_integral(&src, 0.015).is_err());
    }

    #[test]
    fn picard_zero_data() {
        let params = ModelParams::new(3.0, 8).unwrap();
        let traj = picard_solve(&SpectralField::zeros(8), &params, 0.1, 1e-10).unwrap();
        assert_eq!(traj.method(), Method::Picard { iterations: 1 });
        assert!(traj.states().iter().all(|s| s.l2_norm_squared() == 0.0));
    }

    #[test]
    fn picard_reports_divergence() {
        let params = ModelParams::new(3.0, 8).unwrap();
        let big = sample_free(8, &mut ChaCha20Rng::seed_from_u64(4)).scaled(400.0);
        let err = picard_solve(&big, &params, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }), "{err}");
    }

    #[test]
    fn regimes() {
        assert_eq!(contraction_window(3.0), Some((5.0 / 6.0, 1.0)));
        assert_eq!(contraction_window(1.0 + 5f64.sqrt()), None);
        assert_eq!(regime_check(3.0, 0.9), Regime::ContractionAdmissible);
        assert_eq!(regime_check(3.0, 0.5), Regime::ConvergenceOnly);
        assert_eq!(regime_check(3.5, 0.9), Regime::ConvergenceOnly);
        assert_eq!(regime_check(4.0, 0.1), Regime::NoGibbs);
        assert_eq!(regime_check(1.0 + 5f64.sqrt(), 0.38), Regime::ConvergenceOnly);
    }
}
