//! Error types shared across the crate.

use thiserror::Error;

/// Errors surfaced by the symbolic, kernel, evaluator and oracle layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    /// Source expansions are implemented up to third order in the coupling.
    #[error("unsupported expansion order {0} (maximum 3)")]
    UnsupportedOrder(u32),
    /// Atomic statistical functions need a positive transition frequency.
    #[error("invalid transition frequency {0} (must be > 0)")]
    InvalidFrequency(f64),
    /// Field kernels need at least one mode.
    #[error("invalid mode set: {0}")]
    InvalidModes(String),
    /// Continuum kernels need a positive separation.
    #[error("invalid separation {0} (must be > 0)")]
    InvalidSeparation(f64),
    /// A nested integral hit a vanishing denominator at ε = 0.
    #[error("resonant frequency sum; evaluation requires a regulator ε > 0")]
    RequiresRegulator,
    /// The ε → 0 extrapolation did not settle within the requested tolerance.
    #[error("extrapolation did not converge: error estimate {err:e} > tolerance {tol:e}")]
    NotConverged { err: f64, tol: f64 },
    /// The real-potential consistency check failed.
    #[error("imaginary residual {residual:e} exceeds tolerance {tol:e}: derivation or kernel inconsistency")]
    ImaginaryResidual { residual: f64, tol: f64 },
    /// Fock-space truncation too small for an exact fourth-order sum.
    #[error("insufficient truncation {0} (need at least 2)")]
    InsufficientTruncation(u32),
    /// An unperturbed level spacing underflowed in a perturbation-theory denominator.
    #[error("degenerate unperturbed spectrum: |gap| = {0:e}")]
    DegenerateSpectrum(f64),
    /// Polynomial fit of the ground energy in μ was too ill-conditioned to trust.
    #[error("quartic fit failed: {0}")]
    FitFailure(String),
    /// Ground-state averaging met an atom-operator pattern outside its contract.
    #[error("unsupported atom-operator pattern: {0}")]
    UnsupportedPattern(String),
    /// Oracle/evaluator comparison was asked to mix two different mode sets.
    #[error("mismatched mode sets: {0}")]
    MismatchedModeSets(String),
    /// Bad run configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
