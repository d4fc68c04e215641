use thiserror::Error;

/// Errors raised by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The displaced-operator series is only defined for |U| < 1.
    #[error(
        "|U| = {stark_u} is outside the series domain |U| < 1; \
         use the unity-Stark solver with alpha = {alpha}, kappa = {kappa}"
    )]
    Domain {
        stark_u: f64,
        alpha: f64,
        kappa: f64,
    },

    #[error("g1 * g2 = 0: the displacement vanishes and the recurrences are singular")]
    DegenerateCoupling,

    #[error("energy {energy} lies within {distance:e} of the pole at {pole} (index {index})")]
    PoleHit {
        energy: f64,
        pole: f64,
        index: usize,
        distance: f64,
    },

    #[error("series did not converge after {terms} terms (last term {last_term:e})")]
    NotConverged { terms: usize, last_term: f64 },

    #[error("coefficient residual {residual:e} at m = {m} exceeds tolerance {tol:e}")]
    ResidualTooLarge { m: usize, residual: f64, tol: f64 },

    #[error("energy {energy} is not a root: |G| = {g_abs:e} >= {tol:e}")]
    NotARoot { energy: f64, g_abs: f64, tol: f64 },

    #[error("expansion amplitudes only decayed to {amplitude:e} within {size} states")]
    TruncationTooSmall { size: usize, amplitude: f64 },

    #[error("eigensolver failed to converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("no real lower-branch solution: alpha = {alpha} >= critical alpha {critical}")]
    NoRealSolution { alpha: f64, critical: f64 },

    #[error("no sign change of the self-consistency residual in the branch interval")]
    BranchEmpty,

    #[error("no continuous transition: critical radicand {radicand} < 0")]
    NoTransition { radicand: f64 },

    #[error("effective frequency is complex at E = {energy}")]
    ComplexFrequency { energy: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
