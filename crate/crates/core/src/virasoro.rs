// SPDX-License-Identifier: Apache-2.0

//! `exp(l_{-k} L_{-k}) exp(l_0 L_0) exp(l_k L_k)` in the Virasoro algebra.
//!
//! With `[L_j, L_k] = (k - j) L_{j+k} + (c/12)(k^3 - k) delta_{j+k,0} I`,
//! the choice `X = l_{-k} L_{-k}`, `Y = l_0 L_0`, `Z = l_k L_k` gives
//! `u = z = k l_0`, `n = 2k l_{-k} l_k / l_0`, `e = l_{-k} l_k (c/12)(k^3 - k)`
//! and everything else zero. The result has the explicit form
//!
//! ```text
//! (lp - lm)/(e^{-k lm} - e^{-k lp}) [k l_{-k} L_{-k} + (2 - e^{-k lp} - e^{-k lm}) L_0 + k l_k L_k + c_k I]
//! ```
//!
//! where `e^{-k l±}` are the roots of `r^2 - q r + e^{-k l_0}`,
//! `q = 1 + e^{-k l_0} - k^2 l_{-k} l_k`. At `l_0 = 0` the same expression
//! reduces to `(lp / sinh(k lp)) [.. + k^2 l_{-k} l_k L_0 + ..]` with
//! `c_k = l_{-k} l_k (c/24)(k^4 - k^2)`.

use num_complex::Complex64 as C64;

use crate::algebra::AlgebraSpec;
use crate::alpha::quadratic_roots;
use crate::closed_form::{compose2_limit, compose3, ClosedForm};
use crate::error::{Error, Result};
use crate::kernels::{exprel, exprel_divided, s};

/// Everything computed for one Virasoro product.
#[derive(Debug, Clone, PartialEq)]
pub struct VirasoroComposition {
    pub k: i32,
    pub lambda_minus_k: C64,
    pub lambda_0: C64,
    pub lambda_k: C64,
    pub central: C64,
    /// Structure constants; with `lambda_0 = 0` the basis uses `Y = L_0`.
    pub spec: AlgebraSpec,
    /// `e^{-k lambda_+}`, `e^{-k lambda_-}`.
    pub exp_roots: (C64, C64),
    pub lambda_plus: C64,
    pub lambda_minus: C64,
    pub c_k: C64,
    /// Explicit coefficients of `L_{-k}, L_0, L_k, I`.
    pub explicit: [C64; 4],
    /// The closed form closest to the explicit coefficients.
    pub closed_form: ClosedForm,
    /// Every closed form produced by the general algorithm.
    pub closed_forms: Vec<ClosedForm>,
    /// Largest coefficient difference between `closed_form` and `explicit`.
    pub discrepancy: f64,
}

impl VirasoroComposition {
    /// `closed_form` coefficients on `L_{-k}, L_0, L_k, I`.
    pub fn l_basis(&self, cf: &ClosedForm) -> [C64; 4] {
        let y = y_scale(self.lambda_0);
        [cf.a * self.lambda_minus_k, cf.b * y, cf.c * self.lambda_k, cf.d]
    }
}

fn y_scale(l0: C64) -> C64 {
    if l0 == C64::new(0.0, 0.0) {
        C64::new(1.0, 0.0)
    } else {
        l0
    }
}

/// Structure constants of the Virasoro triple; `Y = L_0` when `l0 = 0`.
pub fn virasoro_spec(k: i32, lm: C64, l0: C64, lk: C64, central: C64) -> Result<AlgebraSpec> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be nonzero".into()));
    }
    let kf = k as f64;
    let y = y_scale(l0);
    Ok(AlgebraSpec {
        u: kf * y,
        z: kf * y,
        n: 2.0 * kf * lm * lk / y,
        e: lm * lk * central / 12.0 * (kf * kf * kf - kf),
        ..Default::default()
    })
}

/// `(e^{-k lambda_+}, e^{-k lambda_-})`.
pub fn exp_roots(k: i32, lm: C64, l0: C64, lk: C64) -> (C64, C64) {
    let kf = k as f64;
    let e0 = (-kf * l0).exp();
    let q = 1.0 + e0 - kf * kf * lm * lk;
    quadratic_roots(-q, e0)
}

/// Explicit coefficients on `L_{-k}, L_0, L_k, I` and `c_k`.
pub fn explicit_coefficients(k: i32, lm: C64, l0: C64, lk: C64, central: C64) -> ([C64; 4], C64) {
    let kf = k as f64;
    let (rp, rm) = exp_roots(k, lm, l0, lk);
    // a = -k lambda_-, b = -k lambda_+.
    let a = rm.ln();
    let b = rp.ln();
    let pre = (-(a + b) * 0.5).exp() / (kf * s(a - b));
    let kk = kf * kf * kf * kf - kf * kf;
    let c_k = lm * lk * central / 12.0 * kk * exprel_divided(b, a) / (exprel(b) * exprel(a));
    let coeffs = [pre * kf * lm, pre * (2.0 - rp - rm), pre * kf * lk, pre * c_k];
    (coeffs, c_k)
}

/// The `l_0 = 0` form: `(lp / sinh(k lp)) [k l_{-k}, k^2 l_{-k} l_k, k l_k, c_k]`.
pub fn explicit_lambda0_zero(k: i32, lm: C64, lk: C64, central: C64) -> ([C64; 4], C64) {
    let kf = k as f64;
    let (rp, _) = exp_roots(k, lm, C64::new(0.0, 0.0), lk);
    let kl = -rp.ln();
    // lp / sinh(k lp) = 1 / (k s(2 k lp)), finite at lp = 0.
    let pre = 1.0 / (kf * s(2.0 * kl));
    let c_k = lm * lk * central / 24.0 * (kf.powi(4) - kf * kf);
    ([pre * kf * lm, pre * kf * kf * lm * lk, pre * kf * lk, pre * c_k], c_k)
}

fn gap(x: &[C64; 4], y: &[C64; 4]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Closed form for the Virasoro triple, cross-checked against the explicit formulas.
pub fn virasoro_compose(k: i32, lm: C64, l0: C64, lk: C64, central: C64) -> Result<VirasoroComposition> {
    let spec = virasoro_spec(k, lm, l0, lk, central)?;
    let zero_l0 = l0 == C64::new(0.0, 0.0);
    let (explicit, c_k) = if zero_l0 {
        explicit_lambda0_zero(k, lm, lk, central)
    } else {
        explicit_coefficients(k, lm, l0, lk, central)
    };
    let closed_forms = if zero_l0 { vec![compose2_limit(&spec)?] } else { compose3(&spec)? };
    let roots = exp_roots(k, lm, l0, lk);
    let kf = k as f64;
    let mut out = VirasoroComposition {
        k,
        lambda_minus_k: lm,
        lambda_0: l0,
        lambda_k: lk,
        central,
        spec,
        exp_roots: roots,
        lambda_plus: -roots.0.ln() / kf,
        lambda_minus: -roots.1.ln() / kf,
        c_k,
        explicit,
        closed_form: closed_forms[0].clone(),
        closed_forms: closed_forms.clone(),
        discrepancy: f64::INFINITY,
    };
    for cf in &closed_forms {
        let d = gap(&out.l_basis(cf), &explicit);
        if d < out.discrepancy {
            out.discrepancy = d;
            out.closed_form = cf.clone();
        }
    }
    Ok(out)
}
