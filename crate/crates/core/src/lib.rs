//! Spectral simulation of the radial defocusing wave equation
//! `u_tt - Δu + |u|^α u = 0` on the unit ball of ℝ³, with Gaussian and Gibbs
//! random data and Monte Carlo checks of its statistical structure.
//!
//! Fields are expanded in the radial Dirichlet modes
//! `e_n(r) = sin(nπr)/(√(2π) r)` with frequencies `ω_n = nπ`.
//!
//! ```
//! use radial_nlw::{flow, random_data, rng};
//!
//! let params = random_data::ModelParams::new(2.0, 16)?;
//! let sample = random_data::sample_gibbs(&params, &mut rng::member_rng(1, 0))?;
//! let traj = flow::evolve_strided(&sample.field, &params, 0.1, 1e-3, 10)?;
//! assert_eq!(traj.len(), 11);
//! # Ok::<(), radial_nlw::Error>(())
//! ```

pub mod basis;
pub mod error;
pub mod experiments;
pub mod flow;
pub mod norms;
pub mod random_data;
pub mod rng;
pub mod run;
pub mod stats;

pub use basis::{GridField, RadialGrid, SpectralField};
pub use error::{Error, Result};
pub use flow::{Regime, Trajectory};
pub use random_data::ModelParams;
