use thiserror::Error;

use crate::Dim;

/// Errors raised by the numerical kernels.
///
/// Variants fall in two classes: rejected inputs ([`Error::is_input_error`])
/// and solver failures ([`Error::is_convergence_failure`]). Front ends map
/// these to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} potential has no pointwise evaluation")]
    NoPointwiseEvaluation(&'static str),

    #[error("integral of a {0} potential diverges")]
    IntegralDiverges(&'static str),

    #[error("{0} potential has no Fourier transform")]
    NoFourierTransform(&'static str),

    #[error("{kind} potential is not admissible in dimension {dim}")]
    IncompatibleDimension { kind: &'static str, dim: Dim },

    #[error("scattering solution changes sign at r = {r}")]
    SignChange { r: f64 },

    #[error("free 1D gas: the scattering length is -infinity")]
    FreeGas1D,

    #[error("identity 8*pi*a = int v u is not evaluable for a {0} potential")]
    IdentityNotEvaluable(&'static str),

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("depletion {depletion} exceeds total density {rho}")]
    DepletionExceedsDensity { depletion: f64, rho: f64 },

    #[error("{what}: no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("not in dilute regime: {0}")]
    NotDilute(String),

    #[error("jammed: density {rho} exceeds close packing 1/a = {limit}")]
    Jammed { rho: f64, limit: f64 },

    #[error("quadrature too coarse: residual {residual:e} above tolerance {tolerance:e}")]
    QuadratureTooCoarse { residual: f64, tolerance: f64 },

    #[error("coupling {gamma} is below {smallest:e}, the smallest a {nodes}-node rule resolves; use more nodes")]
    CouplingUnresolved { gamma: f64, smallest: f64, nodes: usize },
}

impl Error {
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::QuadratureTooCoarse { .. }
                | Error::CouplingUnresolved { .. }
                | Error::SignChange { .. }
                | Error::DepletionExceedsDensity { .. }
        )
    }

    pub fn is_input_error(&self) -> bool {
        !self.is_convergence_failure()
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
