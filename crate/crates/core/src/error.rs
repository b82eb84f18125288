use thiserror::Error;

use crate::polariton::ModeLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `g_N = Ω = 0`: the single-particle Hamiltonian vanishes and the mixing
    /// angle is undefined.
    #[error("degenerate model: g_N and Omega are both zero")]
    DegenerateModel,

    #[error("invalid cutoff {cutoff} for mode {mode}: every cutoff must be at least 1")]
    BadCutoff { mode: ModeLabel, cutoff: usize },

    #[error("occupation {needed} of mode {mode} exceeds cutoff {cutoff}")]
    CutoffOverflow {
        mode: ModeLabel,
        needed: usize,
        cutoff: usize,
    },

    #[error("state carries no excitation-sector metadata")]
    SectorMissing,

    #[error("Omega/sqrt(Omega^2 + 4 g_N^2) = {ratio} is not within 1e-12 of a rational p/q with q <= 64")]
    IrrationalRatio { ratio: f64 },

    #[error("time is not a photon-only instant (atomic residual {residual:e} > 1e-8)")]
    NotPhotonOnly { residual: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    QuadratureFailure { tolerance: f64, estimate: f64 },

    #[error("integrator failure: {0}")]
    IntegratorFailure(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid cat state: {0}")]
    InvalidCat(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of a numerical contract (tolerance not reached,
    /// precondition residual too large) as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureFailure { .. }
                | Error::IntegratorFailure(_)
                | Error::NotPhotonOnly { .. }
        )
    }
}
