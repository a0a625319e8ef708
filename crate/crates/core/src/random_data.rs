//! Free Gaussian and Gibbs measures on the truncated phase space.
//!
//! The free measure draws `c_n = g_n/(nπ)` with `g_n` independent standard
//! complex Gaussians (`E|g_n|² = 1`). Its density is `∝ exp(-Σ ω_n²|c_n|²)`,
//! the quadratic part of `H`, so the Gibbs measure `e^{-H}` is the free
//! measure reweighted by `e^{-V}` and can be sampled exactly by rejection.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::basis::{default_panels, min_panels, BasisConvention, RadialGrid, SpectralField};
use crate::error::{Error, Result};

/// Coupling of the Hamiltonian flow of `H = ∫|∇u|² + V` under the weighted
/// structure `i u_t = (√-Δ)^{-1} ∂H/∂ū`.
pub const HAMILTONIAN_COUPLING: f64 = 0.5;

/// Largest power for which the Gibbs measure exists.
pub const GIBBS_ALPHA_LIMIT: f64 = 4.0;

const MAX_ATTEMPTS: u64 = 100_000_000;

/// Power, truncation and grid of the model.
///
/// Deserializes from `{"alpha", "cutoff"}` with optional `panels` (default
/// [`default_panels`]) and `coupling` (default [`HAMILTONIAN_COUPLING`]).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ModelParams {
    pub alpha: f64,
    pub cutoff: usize,
    pub panels: usize,
    /// Strength `κ` of the nonlinear term in `i ċ_n = ω_n c_n + κ F_n/ω_n`.
    pub coupling: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    alpha: f64,
    cutoff: usize,
    panels: Option<usize>,
    coupling: Option<f64>,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        let mut params = Self::new(raw.alpha, raw.cutoff)?;
        if let Some(panels) = raw.panels {
            params = params.with_panels(panels)?;
        }
        if let Some(coupling) = raw.coupling {
            params = params.with_coupling(coupling);
        }
        params.validate()?;
        Ok(params)
    }
}

impl ModelParams {
    pub fn new(alpha: f64, cutoff: usize) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("power alpha = {alpha} must be positive")));
        }
        if cutoff == 0 {
            return Err(Error::Domain("cutoff N must be at least 1".into()));
        }
        Ok(Self {
            alpha,
            cutoff,
            panels: default_panels(alpha, cutoff),
            coupling: HAMILTONIAN_COUPLING,
        })
    }

    pub fn with_panels(mut self, panels: usize) -> Result<Self> {
        let needed = min_panels(self.alpha, self.cutoff);
        if panels < needed {
            return Err(Error::Resolution(format!(
                "alpha = {} at cutoff {} needs at least {needed} panels, got {panels}",
                self.alpha, self.cutoff
            )));
        }
        self.panels = panels;
        Ok(self)
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_cutoff(self, cutoff: usize) -> Result<Self> {
        let fresh = Self::new(self.alpha, cutoff)?;
        Ok(fresh.with_coupling(self.coupling))
    }

    pub fn gibbs_defined(&self) -> bool {
        self.alpha < GIBBS_ALPHA_LIMIT
    }

    pub fn require_gibbs(&self) -> Result<()> {
        if self.gibbs_defined() {
            Ok(())
        } else {
            Err(Error::MeasureUndefined { alpha: self.alpha })
        }
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.alpha, self.cutoff)?.with_panels(self.panels)?;
        if !self.coupling.is_finite() {
            return Err(Error::Domain("coupling must be finite".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        RadialGrid::new(self.panels)
    }
}

/// One draw from `μ_G^{(N)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsSample {
    pub field: SpectralField,
    pub potential: f64,
    pub attempts: u64,
}

/// Standard complex Gaussian with `E|g|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Draws `P_N φ = Σ_{n≤N} g_n/(nπ) e_n`.
///
/// Gaussians are consumed in mode order, so a draw at cutoff `N₁` truncated
/// to `N₀` equals the draw at `N₀` from the same stream.
pub fn sample_free<R: Rng + ?Sized>(cutoff: usize, rng: &mut R) -> SpectralField {
    let coeffs = (1..=cutoff)
        .map(|n| complex_gaussian(rng) / BasisConvention::frequency(n))
        .collect();
    SpectralField::from_coeffs(coeffs).expect("Gaussian draws are finite")
}

/// `V = (1/(α+2)) ∫_B |Re φ|^{α+2} dx` on the default grid for `(α, N)`.
pub fn potential_energy(field: &SpectralField, alpha: f64) -> Result<f64> {
    let params = ModelParams::new(alpha, field.cutoff().max(1))?;
    potential_energy_on(&mut params.grid()?, field, alpha)
}

pub fn potential_energy_on(grid: &mut RadialGrid, field: &SpectralField, alpha: f64) -> Result<f64> {
    let needed = min_panels(alpha, field.cutoff());
    if grid.panels() < needed {
        return Err(Error::Resolution(format!(
            "potential at cutoff {} needs at least {needed} panels, got {}",
            field.cutoff(),
            grid.panels()
        )));
    }
    let re: Vec<f64> = field.coeffs().iter().map(|c| c.re).collect();
    grid.potential_real(&re, alpha)
}

/// `Σ ω_n²|c_n|²`, the gradient term `∫_B |∇φ|²` evaluated spectrally.
pub fn kinetic_energy(field: &SpectralField) -> f64 {
    field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| BasisConvention::frequency(i + 1).powi(2) * c.norm_sqr())
        .sum()
}

/// `H(φ) = ∫|∇φ|² + (1/(α+2))∫|Re φ|^{α+2}` on the default grid.
pub fn hamiltonian(field: &SpectralField, alpha: f64) -> Result<f64> {
    Ok(kinetic_energy(field) + potential_energy(field, alpha)?)
}

pub fn hamiltonian_on(grid: &mut RadialGrid, field: &SpectralField, alpha: f64) -> Result<f64> {
    Ok(kinetic_energy(field) + potential_energy_on(grid, field, alpha)?)
}

/// Exact draw from `μ_G^{(N)}` by rejection from the free measure, accepting
/// with probability `e^{-V}`.
pub fn sample_gibbs<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> Result<GibbsSample> {
    params.require_gibbs()?;
    let mut grid = params.grid()?;
    sample_gibbs_on(&mut grid, params, rng)
}

pub fn sample_gibbs_on<R: Rng + ?Sized>(
    grid: &mut RadialGrid,
    params: &ModelParams,
    rng: &mut R,
) -> Result<GibbsSample> {
    params.require_gibbs()?;
    let mut attempts = 0;
    while attempts < MAX_ATTEMPTS {
        attempts += 1;
        let field = sample_free(params.cutoff, rng);
        let potential = potential_energy_on(grid, &field, params.alpha)?;
        let u: f64 = rng.random();
        if u < (-potential).exp() {
            return Ok(GibbsSample {
                field,
                potential,
                attempts,
            });
        }
    }
    Err(Error::SamplerExhausted { attempts })
}
