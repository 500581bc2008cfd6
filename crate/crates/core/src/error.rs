// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised across the kernel, classification, solver and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),

    #[error("Jacobi identity violated: max residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    JacobiViolation { residual: f64, tol: f64 },

    #[error("ambiguous classification: {quantity} = {magnitude:.3e} lies inside the ambiguity band ({tol:.1e}, {band:.1e})")]
    AmbiguousClassification {
        quantity: &'static str,
        magnitude: f64,
        tol: f64,
        band: f64,
    },

    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),

    #[error("parameter `{0}` is fixed by the Jacobi identity for this type and cannot be supplied")]
    ExtraneousParameter(&'static str),

    #[error("degenerate division: `{0}` vanishes in a constraint equation")]
    DegenerateDivision(&'static str),

    #[error("degenerate denominator: `{0}` vanishes in the alpha formula")]
    DegenerateDenominator(&'static str),

    #[error("no admissible alpha: every candidate hits an excluded point v - alpha u or w - beta z in 2 pi i Z")]
    InadmissibleOnly,

    #[error("unsupported shape: {0}")]
    UnsupportedShape(&'static str),

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("u/z = {0} is not a ratio of small integers and no seed was supplied")]
    UnsupportedRatio(String),

    #[error("equation vanishes identically; alpha has no isolated roots")]
    NoIsolatedRoots,

    #[error("two-factor limit unstable: extrapolations differ by {0:.3e}")]
    LimitUnstable(f64),

    #[error("series order {0} outside [1, 20]")]
    OrderOutOfRange(usize),

    #[error("matrix is not in the domain of the principal logarithm: {0}")]
    NotNearIdentity(String),

    #[error("representation does not match the algebra: bracket discrepancy {0:.3e}")]
    RepSpecMismatch(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
