//! Sobolev, mixed Lebesgue and restriction-type norms of fields and trajectories.
//!
//! Exponents `p`, `q` are `f64` in `[1, ∞]`; pass [`f64::INFINITY`] for a
//! supremum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::basis::{RadialGrid, SpectralField, MODE_NORMALIZATION};
use crate::error::{Error, Result};
use crate::flow::{phase, Trajectory};

pub const DEFAULT_B: f64 = 0.55;

/// Longest window accepted by [`xsb_norm`].
pub const MAX_XSB_WINDOW: f64 = 0.5;

/// Fraction of the window length covered by each raised-cosine ramp.
pub const RAMP_FRACTION: f64 = 0.1;

/// Period of the linear flow.
pub const TIME_PERIOD: f64 = 2.0;

/// Closed time interval inside a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && start >= 0.0) {
            return Err(Error::Domain(format!("window [{start}, {end}] must be finite and start at t ≥ 0")));
        }
        if !(end > start) {
            return Err(Error::Domain(format!("window [{start}, {end}] is empty")));
        }
        Ok(Self { start, end })
    }

    pub fn whole(traj: &Trajectory) -> Self {
        Self {
            start: 0.0,
            end: traj.horizon(),
        }
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    fn contains(&self, t: f64) -> bool {
        let tol = 1e-12 * self.end.abs().max(1.0);
        t >= self.start - tol && t <= self.end + tol
    }
}

/// Indices and exponents of one norm evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub s: f64,
    pub b: f64,
    pub p: f64,
    pub q: f64,
    pub window: Option<TimeWindow>,
}

impl Default for NormSpec {
    fn default() -> Self {
        Self {
            s: 0.0,
            b: DEFAULT_B,
            p: 2.0,
            q: 2.0,
            window: None,
        }
    }
}

impl NormSpec {
    pub fn mixed(p: f64, q: f64) -> Self {
        Self {
            p,
            q,
            ..Self::default()
        }
    }

    pub fn xsb(s: f64, b: f64) -> Self {
        Self {
            s,
            b,
            ..Self::default()
        }
    }

    pub fn with_window(mut self, window: TimeWindow) -> Self {
        self.window = Some(window);
        self
    }

    pub fn mixed_norm(&self, traj: &Trajectory) -> Result<f64> {
        let window = self.window.unwrap_or_else(|| TimeWindow::whole(traj));
        mixed_norm(traj, self.p, self.q, window)
    }

    pub fn xsb_norm(&self, traj: &Trajectory) -> Result<f64> {
        xsb_norm(traj, self.s, self.b)
    }
}

/// `⟨n⟩ = (1 + n²)^{1/2}`.
pub fn bracket(n: f64) -> f64 {
    (1.0 + n * n).sqrt()
}

/// `(Σ ⟨n⟩^{2s} |c_n|²)^{1/2}`.
pub fn sobolev_norm(field: &SpectralField, s: f64) -> f64 {
    field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = (i + 1) as f64;
            (1.0 + n * n).powf(s) * c.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// `sup_k ‖u(t_k)‖_{H^s}` over the recorded states.
pub fn sup_sobolev(traj: &Trajectory, s: f64) -> f64 {
    traj.states()
        .iter()
        .map(|u| sobolev_norm(u, s))
        .fold(0.0, f64::max)
}

/// Radial panel count used for space quadrature of a cutoff-`N` trajectory.
pub fn quadrature_panels(cutoff: usize, panels: usize) -> usize {
    panels.max(8 * cutoff).max(512).next_power_of_two()
}

/// `x^p`, using repeated multiplication for small integer `p`.
fn power(x: f64, p: f64) -> f64 {
    if p.fract() == 0.0 && p <= 32.0 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

fn check_exponent(name: &str, value: f64) -> Result<()> {
    if value.is_nan() || value < 1.0 {
        return Err(Error::Domain(format!("exponent {name} = {value} must lie in [1, ∞]")));
    }
    Ok(())
}

/// `‖u‖_{L^p_x L^q_t}` over `window`: `(∫_B (∫ |u(t,x)|^q dt)^{p/q} dx)^{1/p}`.
///
/// Time integrals use the trapezoid rule on the recorded samples inside the
/// window, space integrals the trapezoid rule on a uniform radial grid; the
/// infinite exponents become maxima over the samples (including `r = 0`).
pub fn mixed_norm(traj: &Trajectory, p: f64, q: f64, window: TimeWindow) -> Result<f64> {
    let panels = quadrature_panels(traj.params().cutoff, traj.params().panels);
    mixed_norm_on(&mut RadialGrid::new(panels)?, traj, p, q, window)
}

pub fn mixed_norm_on(grid: &mut RadialGrid, traj: &Trajectory, p: f64, q: f64, window: TimeWindow) -> Result<f64> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    let window = TimeWindow::new(window.start, window.end)?;
    let tol = 1e-12 * traj.horizon().max(1.0);
    if window.start < -tol || window.end > traj.horizon() + tol {
        return Err(Error::Domain(format!(
            "window [{}, {}] exceeds the trajectory horizon {}",
            window.start,
            window.end,
            traj.horizon()
        )));
    }
    let selected: Vec<(f64, &SpectralField)> = traj.iter().filter(|(t, _)| window.contains(*t)).collect();
    if selected.is_empty() || (selected.len() < 2 && q.is_finite()) {
        return Err(Error::Domain(format!(
            "window [{}, {}] holds too few samples for time quadrature",
            window.start, window.end
        )));
    }

    let panels = grid.panels();
    let points = panels - 1;
    // time-integrated |u|^q (or running max) per radius; slot `points` is r = 0
    let mut acc = vec![0.0_f64; points + 1];
    let mut previous: Option<(f64, Vec<f64>)> = None;
    for (t, state) in &selected {
        let mut modulus = grid.modulus(state)?;
        modulus.push(origin_value(state).norm());
        if q.is_infinite() {
            for (a, m) in acc.iter_mut().zip(&modulus) {
                *a = a.max(*m);
            }
        } else {
            let powered: Vec<f64> = modulus.iter().map(|m| power(*m, q)).collect();
            if let Some((t0, prev)) = &previous {
                let h = t - t0;
                for ((a, x), y) in acc.iter_mut().zip(prev).zip(&powered) {
                    *a += 0.5 * h * (x + y);
                }
            }
            previous = Some((*t, powered));
        }
    }
    let time_norm: Vec<f64> = if q.is_infinite() {
        acc
    } else {
        acc.into_iter().map(|a| a.powf(1.0 / q)).collect()
    };
    if p.is_infinite() {
        return Ok(time_norm.into_iter().fold(0.0, f64::max));
    }
    let m = panels as f64;
    let sum: f64 = time_norm[..points]
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let r = (j + 1) as f64 / m;
            r * r * power(*v, p)
        })
        .sum();
    Ok((4.0 * PI * sum / m).powf(1.0 / p))
}

/// `‖f‖_{L^p(B)}` of a single field on the quadrature grid of its cutoff.
pub fn field_lp_norm(field: &SpectralField, p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    let mut grid = RadialGrid::new(quadrature_panels(field.cutoff(), 0))?;
    let modulus = grid.modulus(field)?;
    if p.is_infinite() {
        return Ok(modulus.into_iter().fold(origin_value(field).norm(), f64::max));
    }
    let m = grid.panels() as f64;
    let sum: f64 = modulus
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let r = (j + 1) as f64 / m;
            r * r * power(*v, p)
        })
        .sum();
    Ok((4.0 * PI * sum / m).powf(1.0 / p))
}

fn origin_value(field: &SpectralField) -> Complex64 {
    field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * (PI * (i + 1) as f64 * MODE_NORMALIZATION))
        .sum()
}

/// `C_b = (Σ_{k∈ℤ} ⟨k⟩^{-2b})^{1/2}`, so that
/// `sup_t ‖u(t)‖_{H^s} ≤ C_b · xsb_norm(u, s, b)` holds at every sample time.
///
/// Finite for `b > 1/2`; the tail beyond `K` is summed by Euler–Maclaurin.
pub fn embedding_constant(b: f64) -> Result<f64> {
    if !(b > 0.5) {
        return Err(Error::Domain(format!("embedding needs b > 1/2, got {b}")));
    }
    const K: usize = 100_000;
    let term = |k: f64| (1.0 + k * k).powf(-b);
    let head: f64 = (1..K).map(|k| term(k as f64)).sum();
    let x = K as f64;
    // ∫_K^∞ (1+k²)^{-b} dk ≈ ∫ k^{-2b}(1 - b/k²) dk, plus the half endpoint weight
    let tail = x.powf(1.0 - 2.0 * b) / (2.0 * b - 1.0) - b * x.powf(-1.0 - 2.0 * b) / (2.0 * b + 1.0)
        + 0.5 * term(x)
        - (-2.0 * b * x * (1.0 + x * x).powf(-b - 1.0)) / 12.0;
    Ok((1.0 + 2.0 * (head + tail)).sqrt())
}

/// Space-time Fourier coefficients `f̂(m, n)` of the canonical extension of a
/// trajectory, indexed `[n-1][m + K/2]` for `m ∈ [-K/2, K/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceTimeSpectrum {
    pub harmonics: usize,
    pub coeffs: Vec<Vec<Complex64>>,
}

impl SpaceTimeSpectrum {
    pub fn frequency(&self, slot: usize) -> i64 {
        slot as i64 - (self.harmonics / 2) as i64
    }

    /// `Σ ⟨n-m⟩^{2b}⟨n⟩^{2s}|f̂(m,n)|²` restricted to `|n-m| ≥ min_offset`.
    pub fn weighted_energy(&self, s: f64, b: f64, min_offset: u64) -> f64 {
        let mut total = 0.0;
        for (i, row) in self.coeffs.iter().enumerate() {
            let n = (i + 1) as i64;
            let spatial = bracket(n as f64).powf(2.0 * s);
            for (slot, c) in row.iter().enumerate() {
                let offset = n - self.frequency(slot);
                if offset.unsigned_abs() >= min_offset {
                    total += bracket(offset as f64).powf(2.0 * b) * spatial * c.norm_sqr();
                }
            }
        }
        total
    }
}

/// Raised-cosine weight: 1 on `[0, L]`, falling to 0 over `ρ` on either side.
fn ramp_weight(t: f64, length: f64, width: f64) -> f64 {
    let outside = if t < 0.0 {
        -t
    } else if t > length {
        t - length
    } else {
        return 1.0;
    };
    if outside >= width {
        0.0
    } else {
        0.5 * (1.0 + (PI * outside / width).cos())
    }
}

/// Extends the trajectory to one period of the linear flow and takes the
/// time Fourier series `F_n(t) = Σ_m f̂(m,n) e^{-iπmt}`.
///
/// Outside `[0, L]` the extension follows the linear flow from the nearest
/// endpoint, damped by raised-cosine ramps of width `0.1·L`, and vanishes
/// beyond them.
pub fn space_time_spectrum(traj: &Trajectory) -> Result<SpaceTimeSpectrum> {
    let length = traj.horizon();
    if length > MAX_XSB_WINDOW * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "restriction norm needs a window of length ≤ {MAX_XSB_WINDOW}, got {length}"
        )));
    }
    let h = traj
        .uniform_spacing()
        .ok_or_else(|| Error::Domain("restriction norm needs at least two uniform time samples".into()))?;
    let periods = TIME_PERIOD / h;
    let harmonics = periods.round() as usize;
    if (periods - harmonics as f64).abs() > 1e-6 * periods {
        return Err(Error::Domain(format!(
            "time step {h} does not divide the period {TIME_PERIOD}"
        )));
    }
    let cutoff = traj.params().cutoff;
    if harmonics < 4 * cutoff {
        return Err(Error::Resolution(format!(
            "{harmonics} time samples per period cannot resolve frequencies up to {cutoff}; need at least {}",
            4 * cutoff
        )));
    }
    let width = RAMP_FRACTION * length;
    let first = traj.states().first().expect("non-empty");
    let last = traj.final_state();
    let count = traj.len();

    let fft = FftPlanner::<f64>::new().plan_fft_inverse(harmonics);
    let mut coeffs = Vec::with_capacity(cutoff);
    let mut buffer = vec![Complex64::new(0.0, 0.0); harmonics];
    for i in 0..cutoff {
        let n = i + 1;
        for (k, slot) in buffer.iter_mut().enumerate() {
            // times t_k = k h, read periodically on (-1, 1]
            let mut t = k as f64 * h;
            if t > 1.0 {
                t -= TIME_PERIOD;
            }
            *slot = if k < count {
                traj.states()[k].coeffs()[i]
            } else if t < 0.0 {
                first.coeffs()[i] * phase(n, t) * ramp_weight(t, length, width)
            } else {
                last.coeffs()[i] * phase(n, t - length) * ramp_weight(t, length, width)
            };
        }
        fft.process(&mut buffer);
        // inverse DFT gives Σ_k F(t_k) e^{+2πi jk/K}; slot j ↔ harmonic m ≡ j
        let scale = 1.0 / harmonics as f64;
        let half = harmonics / 2;
        let row = (0..harmonics)
            .map(|slot| {
                let m = slot as i64 - half as i64;
                buffer[m.rem_euclid(harmonics as i64) as usize] * scale
            })
            .collect();
        coeffs.push(row);
    }
    Ok(SpaceTimeSpectrum { harmonics, coeffs })
}

/// Canonical-representation proxy for `‖u‖_{X^{s,b}}`:
/// `(Σ_{m,n} ⟨n-m⟩^{2b}⟨n⟩^{2s}|f̂(m,n)|²)^{1/2}` with `f̂` from
/// [`space_time_spectrum`]. An upper bound for the infimum over
/// representations.
pub fn xsb_norm(traj: &Trajectory, s: f64, b: f64) -> Result<f64> {
    Ok(space_time_spectrum(traj)?.weighted_energy(s, b, 0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::linear_trajectory;
    use crate::random_data::{sample_free, ModelParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn sobolev_of_single_mode() {
        let f = SpectralField::mode(3, Complex64::new(1.0, 0.0), 4).unwrap();
        assert!((sobolev_norm(&f, 1.0) - 10f64.sqrt()).abs() < 1e-15);
        assert_eq!(sobolev_norm(&SpectralField::zeros(5), 0.7), 0.0);
    }

    #[test]
    fn sobolev_zero_is_l2() {
        let f = sample_free(40, &mut ChaCha20Rng::seed_from_u64(8));
        assert!((sobolev_norm(&f, 0.0) - f.l2_norm_squared().sqrt()).abs() < 1e-15);
    }

    #[test]
    fn empty_window_rejected() {
        let params = ModelParams::new(2.0, 2).unwrap();
        let traj = linear_trajectory(&SpectralField::zeros(2), &params, vec![0.0, 0.1, 0.2]).unwrap();
        assert!(TimeWindow::new(0.1, 0.1).is_err());
        let w = TimeWindow { start: 0.15, end: 0.16 };
        assert!(mixed_norm(&traj, 2.0, 2.0, w).is_err());
        assert_eq!(mixed_norm(&traj, 2.0, 2.0, TimeWindow::whole(&traj)).unwrap(), 0.0);
    }

    #[test]
    fn embedding_constant_is_finite() {
        let c = embedding_constant(0.55).unwrap();
        assert!(c > 1.0 && c.is_finite());
        assert!(embedding_constant(0.5).is_err());
        assert!(embedding_constant(0.75).unwrap() < c);
    }

    #[test]
    fn ramp_shape() {
        assert_eq!(ramp_weight(0.2, 0.4, 0.04), 1.0);
        assert_eq!(ramp_weight(-0.05, 0.4, 0.04), 0.0);
        assert!((ramp_weight(0.42, 0.4, 0.04) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn xsb_window_guard() {
        let params = ModelParams::new(2.0, 2).unwrap();
        let times: Vec<f64> = (0..=64).map(|k| k as f64 / 64.0).collect();
        let traj = linear_trajectory(&SpectralField::zeros(2), &params, times).unwrap();
        assert!(matches!(xsb_norm(&traj, 0.0, 0.55), Err(Error::Domain(_))));
    }
}
