//! Sharp pointwise gradient constants for bounded harmonic functions in the
//! unit ball of `R^n`.
//!
//! For `|x| = rho` and a unit direction `l_alpha = e1 cos(alpha) + e2 sin(alpha)`
//! the best constant in `|<grad u(x), l>| <= C(x, l) sup |u|` is evaluated by
//! three independent routes:
//!
//! * a one-dimensional hypergeometric representation ([`constants::directional_constant`]),
//! * a direct sphere integral of the Poisson-kernel gradient ([`oracle::constant_oracle_direct`]),
//! * the Möbius-reduced sphere integral ([`oracle::constant_oracle_moebius`]).
//!
//! On top of these the crate checks every auxiliary identity used to show that
//! in dimension three the radial direction is extremal, with the closed form
//! `C(x) = ((1 + rho^2/3)^{3/2} / (1 - rho^2) - 1) / rho^2`
//! ([`constants::radial_constant_closed3`]). The three-dimensional majorant
//! pipeline lives in [`majorant3`]; [`verify`] bundles everything into named
//! suites that the `sharpgrad` binary and the acceptance tests run.

pub mod cli;
pub mod constants;
pub mod identities;
pub mod majorant3;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use constants::{ConstantEstimate, Method, ProblemPoint};
pub use quadrature::QuadratureResult;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative procedure stopped before reaching its tolerance.
    #[error("{context} did not converge (partial value {partial})")]
    NotConverged { context: &'static str, partial: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Best available value carried by a convergence failure.
    pub fn partial(&self) -> Option<f64> {
        match self {
            Error::NotConverged { partial, .. } => Some(*partial),
            Error::Domain(_) => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
