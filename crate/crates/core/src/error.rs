use thiserror::Error;

/// Errors produced by the slab resonance library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("{quantity} = {value} is outside the domain {domain}")]
    Domain {
        quantity: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("quantization condition is singular (branch point K = 0 or Q = 0)")]
    Pole,

    #[error("Newton refinement of mode {mode} did not converge after {iterations} iterations (|f| = {residual:e})")]
    NoConvergence {
        mode: u32,
        iterations: usize,
        residual: f64,
    },

    #[error("refined root of mode {mode} moved {distance:e} from its seed, beyond the trust radius {radius:e}")]
    RootJumped {
        mode: u32,
        distance: f64,
        radius: f64,
    },

    #[error("mode matching failed: quantization residual {residual:e} exceeds {limit:e}")]
    MatchingFailure { residual: f64, limit: f64 },

    #[error("propagation unstable at step {step}: norm grew by factor {growth}")]
    Instability { step: usize, growth: f64 },

    #[error("decay is not exponential over the fit window (R^2 = {r_squared})")]
    NonExponential { r_squared: f64 },

    #[error("wave packet support [{lower}, {upper}] leaves the radiation band (0, {cutoff})")]
    PacketSupport { lower: f64, upper: f64, cutoff: f64 },

    #[error(
        "transmitted packet envelope is multimodal: secondary peak at {ratio} of the main peak"
    )]
    PeakAmbiguity { ratio: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
