// SPDX-License-Identifier: Apache-2.0

//! Closed Baker-Campbell-Hausdorff formulas for three-factor products.
//!
//! Given a commutator algebra on span{X, Y, Z, I} with `I` central,
//!
//! ```text
//! [X,Y] = uX + vY + cI,   [Y,Z] = wY + zZ + dI,   [X,Z] = mX + nY + pZ + eI,
//! ```
//!
//! this crate classifies the algebra into one of thirteen Jacobi-consistent
//! types, solves for the splitting parameter `alpha` in
//! `exp(Y) = exp(alpha Y) exp((1 - alpha) Y)`, and returns coefficients
//! `A, B, C, D` with `exp(X) exp(Y) exp(Z) = exp(AX + BY + CZ + DI)`.
//!
//! Two independent engines in [`oracle`] check the result: a truncated BCH
//! series evaluated inside the structure-constant algebra, and dense matrix
//! exponentials in explicit representations.

pub mod algebra;
pub mod alpha;
pub mod closed_form;
mod error;
pub mod json;
pub mod kernels;
pub mod oracle;
pub mod virasoro;

pub use algebra::{classify, complete_spec, jacobi_residual, sample_spec, AlgebraSpec, AlgebraType, JacobiResidual, Param, TypeTag};
pub use alpha::{
    build_alpha_polynomial, fundamental_residual, solve_alpha, solve_alpha_generic, AlphaEquation, AlphaSolution, Branch,
};
pub use closed_form::{compose2_limit, compose2_vbv, compose3, compose3_typed, tilde_params, ClosedForm, TildeParams};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use virasoro::{virasoro_compose, VirasoroComposition};

/// Default relative tolerance for zero tests in classification.
pub const CLASSIFY_TOL: f64 = 1e-12;
