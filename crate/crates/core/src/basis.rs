//! Radial Dirichlet eigenbasis of `-Δ` on the unit ball of R³.
//!
//! Radial functions are handled through `w(r) = r·f(r)`. In that variable
//! the eigenfunctions
//!
//! ```text
//! e_n(r) = sin(nπr) / (√(2π) r),     -Δ e_n = (nπ)² e_n,     ‖e_n‖_{L²(B)} = 1
//! ```
//!
//! become a plain sine series on `[0, 1]`, so the forward and inverse
//! transforms are a type-I discrete sine transform on the uniform grid
//! `r_j = j/M`, `j = 1..M-1`. The trapezoid rule on that grid is exact for
//! products of band-limited fields, which is what makes Parseval and the
//! round trip hold to rounding.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustdct::{Dst1, DctPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `1/√(2π)`, the normalisation of every radial mode.
pub const MODE_NORMALIZATION: f64 = 0.398_942_280_401_432_7;

/// Normalisation, frequency rule and radial grid size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisConvention {
    panels: usize,
}

impl BasisConvention {
    pub fn new(panels: usize) -> Result<Self> {
        if panels < 2 {
            return Err(Error::Resolution(format!(
                "radial grid needs at least 2 panels, got {panels}"
            )));
        }
        Ok(Self { panels })
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Constant multiplying `sin(nπr)/r`; the same for every mode.
    pub fn normalization(&self, _n: usize) -> f64 {
        MODE_NORMALIZATION
    }

    /// `ω_n = nπ`, the square root of the Dirichlet eigenvalue.
    pub fn frequency(n: usize) -> f64 {
        n as f64 * PI
    }

    /// Interior grid radius `r_j = j/M`.
    pub fn radius(&self, j: usize) -> f64 {
        j as f64 / self.panels as f64
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.panels).map(|j| self.radius(j))
    }
}

/// Samples of `w(r) = r·f(r)` at the interior radii `j/M`, `j = 1..M-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    values: Vec<Complex64>,
    panels: usize,
}

impl GridField {
    pub fn new(values: Vec<Complex64>, panels: usize) -> Result<Self> {
        if panels < 2 || values.len() != panels - 1 {
            return Err(Error::Resolution(format!(
                "grid field with {} samples does not match {panels} panels",
                values.len()
            )));
        }
        Ok(Self { values, panels })
    }

    pub fn from_real(values: Vec<f64>, panels: usize) -> Result<Self> {
        Self::new(values.into_iter().map(Complex64::from).collect(), panels)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Point values `f(r_j) = w_j / r_j`.
    pub fn point_values(&self) -> Vec<Complex64> {
        let m = self.panels as f64;
        self.values
            .iter()
            .enumerate()
            .map(|(i, w)| w * (m / (i + 1) as f64))
            .collect()
    }

    /// `∫_B |f|² dx` by the trapezoid rule in `w`.
    pub fn l2_norm_squared(&self) -> f64 {
        4.0 * PI / self.panels as f64 * self.values.iter().map(|w| w.norm_sqr()).sum::<f64>()
    }
}

/// Coefficients `c_1..c_N` of `Σ c_n e_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(cutoff: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); cutoff],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain(format!("coefficient c_{} is not finite", i + 1)));
        }
        Ok(Self { coeffs })
    }

    /// A single mode `value · e_n` inside a field of the given cutoff.
    pub fn mode(n: usize, value: Complex64, cutoff: usize) -> Result<Self> {
        if n == 0 || n > cutoff {
            return Err(Error::Domain(format!("mode {n} outside 1..={cutoff}")));
        }
        let mut field = Self::zeros(cutoff);
        field.coeffs[n - 1] = value;
        Ok(field)
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `c_n` with the 1-based mode index; zero above the cutoff.
    pub fn coeff(&self, n: usize) -> Complex64 {
        match n {
            0 => Complex64::new(0.0, 0.0),
            n => self.coeffs.get(n - 1).copied().unwrap_or_default(),
        }
    }

    /// The projection `P_N`. Identity when `n` is at least the current cutoff.
    pub fn project(&self, n: usize) -> Self {
        Self {
            coeffs: self.coeffs[..n.min(self.coeffs.len())].to_vec(),
        }
    }

    /// Zero-pads (or truncates) to exactly `n` coefficients.
    pub fn resized(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn real_part(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| Complex64::new(c.re, 0.0)).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Coefficientwise difference; the shorter field is zero-padded.
    pub fn difference(&self, other: &Self) -> Self {
        let n = self.cutoff().max(other.cutoff());
        Self {
            coeffs: (1..=n).map(|k| self.coeff(k) - other.coeff(k)).collect(),
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let n = self.cutoff().max(other.cutoff());
        Self {
            coeffs: (1..=n).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    /// `Σ |c_n|²`, the squared `L²(B)` norm.
    pub fn l2_norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Evaluates `e_n(r)`; at `r = 0` returns the limit `nπ/√(2π)`.
pub fn eigenfunction_value(n: usize, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("mode index starts at 1".into()));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    let omega = BasisConvention::frequency(n);
    if r == 0.0 {
        Ok(omega * MODE_NORMALIZATION)
    } else {
        Ok((omega * r).sin() * MODE_NORMALIZATION / r)
    }
}

/// `‖e_n‖_{L^p(B)}` by the trapezoid rule on `M` radial panels.
pub fn lp_norm(n: usize, p: f64, panels: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("mode index starts at 1".into()));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("exponent p = {p} must be at least 1")));
    }
    let convention = BasisConvention::new(panels)?;
    let omega = BasisConvention::frequency(n);
    if omega / panels as f64 >= 1.0 {
        return Err(Error::Resolution(format!(
            "mode {n} is under-resolved on {panels} panels (nπ/M ≥ 1)"
        )));
    }
    if p.is_infinite() {
        return Err(Error::Domain("p = ∞ eigenfunction norms are not supported".into()));
    }
    let sum: f64 = convention
        .radii()
        .map(|r| r * r * ((omega * r).sin() * MODE_NORMALIZATION / r).abs().powf(p))
        .sum();
    Ok((4.0 * PI * sum / panels as f64).powf(1.0 / p))
}

/// Smallest admissible panel count for the nonlinearity `|v|^α v` at cutoff `N`.
pub fn min_panels(alpha: f64, cutoff: usize) -> usize {
    (alpha.ceil() as usize + 1) * cutoff + 1
}

/// Default panel count: the dealiasing minimum rounded up to a power of
/// two for integer powers, `8N` otherwise.
pub fn default_panels(alpha: f64, cutoff: usize) -> usize {
    let rule = min_panels(alpha, cutoff);
    if alpha.fract() == 0.0 {
        rule.next_power_of_two().max(32)
    } else {
        (8 * cutoff).max(rule).max(32)
    }
}

/// Transform workspace for one radial grid.
///
/// Holds the DST plan and scratch buffers, so it is owned by a single
/// integrator or worker at a time.
#[derive(Clone)]
pub struct RadialGrid {
    convention: BasisConvention,
    plan: Arc<dyn Dst1<f64>>,
    buffer: Vec<f64>,
    scratch: Vec<f64>,
}

impl fmt::Debug for RadialGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialGrid")
            .field("panels", &self.convention.panels)
            .finish()
    }
}

impl RadialGrid {
    pub fn new(panels: usize) -> Result<Self> {
        let convention = BasisConvention::new(panels)?;
        let plan = DctPlanner::new().plan_dst1(panels - 1);
        let scratch = vec![0.0; plan.get_scratch_len()];
        Ok(Self {
            convention,
            plan,
            buffer: vec![0.0; panels - 1],
            scratch,
        })
    }

    pub fn panels(&self) -> usize {
        self.convention.panels
    }

    pub fn convention(&self) -> BasisConvention {
        self.convention
    }

    fn check_cutoff(&self, cutoff: usize) -> Result<()> {
        if cutoff > self.panels() - 1 {
            return Err(Error::Resolution(format!(
                "cutoff {cutoff} exceeds M-1 = {} radial samples",
                self.panels() - 1
            )));
        }
        Ok(())
    }

    /// Real sine synthesis into `self.buffer`: `w_j = Σ a_n sin(nπj/M)/√(2π)`.
    fn synthesize_real_in_place(&mut self, coeffs: impl Iterator<Item = f64>) {
        self.buffer.fill(0.0);
        for (slot, a) in self.buffer.iter_mut().zip(coeffs) {
            *slot = a * MODE_NORMALIZATION;
        }
        self.plan
            .process_dst1_with_scratch(&mut self.buffer, &mut self.scratch);
    }

    /// Real sine analysis of `self.buffer` into `out`:
    /// `c_n = 2√(2π)/M Σ_j w_j sin(nπj/M)`.
    fn analyze_real_in_place(&mut self, out: &mut [f64]) {
        self.plan
            .process_dst1_with_scratch(&mut self.buffer, &mut self.scratch);
        let scale = 2.0 / (MODE_NORMALIZATION * self.panels() as f64);
        for (o, b) in out.iter_mut().zip(&self.buffer) {
            *o = b * scale;
        }
    }

    pub fn synthesize(&mut self, field: &SpectralField) -> Result<GridField> {
        self.check_cutoff(field.cutoff())?;
        self.synthesize_real_in_place(field.coeffs().iter().map(|c| c.re));
        let re = self.buffer.clone();
        self.synthesize_real_in_place(field.coeffs().iter().map(|c| c.im));
        let values = re
            .into_iter()
            .zip(&self.buffer)
            .map(|(a, &b)| Complex64::new(a, b))
            .collect();
        GridField::new(values, self.panels())
    }

    pub fn analyze(&mut self, grid: &GridField, cutoff: usize) -> Result<SpectralField> {
        if grid.panels() != self.panels() {
            return Err(Error::Resolution(format!(
                "grid field has {} panels, workspace has {}",
                grid.panels(),
                self.panels()
            )));
        }
        self.check_cutoff(cutoff)?;
        let mut re = vec![0.0; cutoff];
        let mut im = vec![0.0; cutoff];
        for (b, w) in self.buffer.iter_mut().zip(grid.values()) {
            *b = w.re;
        }
        self.analyze_real_in_place(&mut re);
        for (b, w) in self.buffer.iter_mut().zip(grid.values()) {
            *b = w.im;
        }
        self.analyze_real_in_place(&mut im);
        SpectralField::from_coeffs(
            re.into_iter()
                .zip(im)
                .map(|(a, b)| Complex64::new(a, b))
                .collect(),
        )
    }

    /// `|f(r_j)|` for every interior radius, `f = Σ c_n e_n`.
    pub fn modulus(&mut self, field: &SpectralField) -> Result<Vec<f64>> {
        let grid = self.synthesize(field)?;
        Ok(grid.point_values().iter().map(|v| v.norm()).collect())
    }

    /// Coefficients `⟨|Re u|^α Re u, e_n⟩`, `n = 1..out.len()`, from the real
    /// parts of `coeffs`. Pure pseudospectral: synthesize, map pointwise, analyze.
    pub fn nonlinearity_real(&mut self, re_coeffs: &[f64], alpha: f64, out: &mut [f64]) -> Result<()> {
        self.check_cutoff(re_coeffs.len())?;
        self.check_cutoff(out.len())?;
        self.synthesize_real_in_place(re_coeffs.iter().copied());
        let m = self.panels() as f64;
        for (j, w) in self.buffer.iter_mut().enumerate() {
            // r·|f|^α f = w·|w/r|^α
            let f = *w * m / (j + 1) as f64;
            *w *= f.abs().powf(alpha);
        }
        self.analyze_real_in_place(out);
        Ok(())
    }

    /// `(1/(α+2)) ∫_B |Re u|^{α+2} dx` by the same trapezoid rule whose
    /// gradient is [`RadialGrid::nonlinearity_real`].
    pub fn potential_real(&mut self, re_coeffs: &[f64], alpha: f64) -> Result<f64> {
        self.check_cutoff(re_coeffs.len())?;
        self.synthesize_real_in_place(re_coeffs.iter().copied());
        let m = self.panels() as f64;
        let sum: f64 = self
            .buffer
            .iter()
            .enumerate()
            .map(|(j, &w)| {
                let f = w * m / (j + 1) as f64;
                w * w * f.abs().powf(alpha)
            })
            .sum();
        Ok(4.0 * PI * sum / (m * (alpha + 2.0)))
    }

    pub fn apply_nonlinearity(
        &mut self,
        field: &SpectralField,
        alpha: f64,
        cutoff_out: usize,
    ) -> Result<SpectralField> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("power alpha = {alpha} must be positive")));
        }
        let needed = min_panels(alpha, field.cutoff().max(cutoff_out));
        if self.panels() < needed {
            return Err(Error::Resolution(format!(
                "nonlinearity with alpha = {alpha} at cutoff {} needs at least {needed} panels, got {}",
                field.cutoff().max(cutoff_out),
                self.panels()
            )));
        }
        let re: Vec<f64> = field.coeffs().iter().map(|c| c.re).collect();
        let mut out = vec![0.0; cutoff_out];
        self.nonlinearity_real(&re, alpha, &mut out)?;
        SpectralField::from_coeffs(out.into_iter().map(Complex64::from).collect())
    }
}

/// Inverse transform on `M` panels.
pub fn synthesize(field: &SpectralField, panels: usize) -> Result<GridField> {
    RadialGrid::new(panels)?.synthesize(field)
}

/// Forward transform: `c_n = ⟨f, e_n⟩` for `n ≤ cutoff`.
pub fn analyze(grid: &GridField, cutoff: usize) -> Result<SpectralField> {
    RadialGrid::new(grid.panels())?.analyze(grid, cutoff)
}

/// `P_{N_out}(|Re u|^α Re u)` computed pseudospectrally on `M` panels.
pub fn apply_nonlinearity(
    field: &SpectralField,
    alpha: f64,
    cutoff_out: usize,
    panels: usize,
) -> Result<SpectralField> {
    RadialGrid::new(panels)?.apply_nonlinearity(field, alpha, cutoff_out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenfunction_values() {
        assert!(eigenfunction_value(1, 1.0).unwrap().abs() < 1e-15);
        let half = eigenfunction_value(1, 0.5).unwrap();
        assert!((half - (2.0 / PI).sqrt()).abs() < 1e-15);
        let origin = eigenfunction_value(5, 0.0).unwrap();
        assert!((origin - 5.0 * PI / (2.0 * PI).sqrt()).abs() < 1e-14);
        assert!(matches!(eigenfunction_value(1, 1.5), Err(Error::Domain(_))));
        assert!(matches!(eigenfunction_value(1, -0.1), Err(Error::Domain(_))));
        assert!(matches!(eigenfunction_value(0, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn normalization_constant() {
        assert!((MODE_NORMALIZATION - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-17);
    }

    #[test]
    fn frequencies_increase() {
        assert!((1..100).all(|n| BasisConvention::frequency(n + 1) > BasisConvention::frequency(n)));
    }

    #[test]
    fn l2_norm_is_one() {
        assert!((lp_norm(7, 2.0, 4096).unwrap() - 1.0).abs() < 1e-8);
        for n in 1..=512 / 8 {
            assert!((lp_norm(n, 2.0, 512).unwrap() - 1.0).abs() < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn lp_norm_rejects_under_resolved() {
        assert!(matches!(lp_norm(400, 4.0, 1000), Err(Error::Resolution(_))));
        assert!(lp_norm(300, 4.0, 1000).is_ok());
    }

    #[test]
    fn zero_field_synthesizes_to_zero() {
        let grid = synthesize(&SpectralField::zeros(8), 64).unwrap();
        assert_eq!(grid.values().len(), 63);
        assert!(grid.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn single_mode_synthesis() {
        let field = SpectralField::mode(3, c(1.0, 0.0), 5).unwrap();
        let grid = synthesize(&field, 40).unwrap();
        for (j, w) in grid.values().iter().enumerate() {
            let r = (j + 1) as f64 / 40.0;
            let expected = (3.0 * PI * r).sin() * MODE_NORMALIZATION;
            assert!((w.re - expected).abs() < 1e-14);
            assert!(w.im.abs() < 1e-15);
        }
    }

    #[test]
    fn analyze_recovers_single_mode() {
        let field = SpectralField::mode(2, c(1.0, 0.0), 6).unwrap();
        let back = analyze(&synthesize(&field, 32).unwrap(), 6).unwrap();
        assert!((back.coeff(2) - c(1.0, 0.0)).norm() < 1e-12);
        for n in [1, 3, 4, 5, 6] {
            assert!(back.coeff(n).norm() <= 1e-12);
        }
    }

    #[test]
    fn synthesize_rejects_large_cutoff() {
        assert!(matches!(
            synthesize(&SpectralField::zeros(10), 10),
            Err(Error::Resolution(_))
        ));
        assert!(synthesize(&SpectralField::zeros(9), 10).is_ok());
    }

    #[test]
    fn nonlinearity_of_zero_is_zero() {
        let out = apply_nonlinearity(&SpectralField::zeros(8), 2.0, 8, 64).unwrap();
        assert!(out.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn nonlinearity_checks_resolution() {
        let f = SpectralField::zeros(8);
        assert!(matches!(apply_nonlinearity(&f, 3.0, 8, 32), Err(Error::Resolution(_))));
        assert!(apply_nonlinearity(&f, 3.0, 8, 33).is_ok());
        assert!(matches!(apply_nonlinearity(&f, 0.0, 8, 64), Err(Error::Domain(_))));
    }

    #[test]
    fn default_panels_follow_rule() {
        assert_eq!(default_panels(3.0, 8), 64);
        assert_eq!(default_panels(2.0, 32), 128);
        assert_eq!(default_panels(2.5, 16), 128);
        for (alpha, n) in [(1.0, 100), (2.0, 64), (3.0, 128), (3.5, 20)] {
            assert!(default_panels(alpha, n) >= min_panels(alpha, n));
        }
    }

    #[test]
    fn projection_above_cutoff_is_identity() {
        let f = SpectralField::from_coeffs(vec![c(1.0, 2.0), c(-0.5, 0.25)]).unwrap();
        assert_eq!(f.project(2), f);
        assert_eq!(f.project(10), f);
        assert_eq!(f.project(1).cutoff(), 1);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(SpectralField::from_coeffs(vec![c(f64::NAN, 0.0)]).is_err());
    }
}
