use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The radial grid or time grid cannot represent the request.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// The Gibbs measure only exists for 0 < alpha < 4.
    #[error("Gibbs measure undefined for alpha = {alpha} (requires 0 < alpha < 4)")]
    MeasureUndefined { alpha: f64 },

    /// A parameter violates an admissibility condition of the estimate being probed.
    #[error("inadmissible parameters: {0}")]
    Parameter(String),

    #[error("integration error at t = {time}: L2 norm {norm:e} exceeds the blow-up guard")]
    Integration { time: f64, norm: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations ({reason}); increments: {increments:?}")]
    NoConvergence {
        iterations: usize,
        reason: &'static str,
        increments: Vec<f64>,
    },

    #[error("rejection sampler gave up after {attempts} attempts")]
    SamplerExhausted { attempts: u64 },

    /// Invalid run configuration; names the offending key.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("output directory {0} holds a partial run; pass --resume to continue it")]
    PartialRun(PathBuf),

    #[error("output directory {0} already holds a completed run")]
    CompletedRun(PathBuf),

    #[error("manifest version {found} does not match this binary ({expected})")]
    VersionMismatch { expected: String, found: String },

    #[error("resume config differs from the manifest: {0}")]
    ConfigMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
