// SPDX-License-Identifier: Apache-2.0

//! Assembly of the closed exponent `A X + B Y + C Z + D I`.
//!
//! With `alpha` fixed, the two regrouped pairs collapse to
//!
//! ```text
//! X~ = log(e^X e^{alpha Y}) = g_a(u,v) X + h_a(u,v) Y + l_a(u,v) c I
//! Y~ = log(e^{beta Y} e^Z)  = h_b(z,w) Y + g_b(z,w) Z + l_b(z,w) d I
//! ```
//!
//! and `[X~, Y~] = u~ X~ + v~ Y~ + c~ I`, so one more two-factor step gives
//! `X~ + Y~ + f(u~, v~)(u~ X~ + v~ Y~ + c~ I)`. Everything is assembled from
//! the kernels, which carry no `1/u`, `1/z` or `1/u~` singularities.

use serde::Serialize;

use crate::algebra::{classify, AlgebraSpec, AlgebraType};
use crate::alpha::{solve_alpha, AlphaSolution};
use crate::error::{Error, Result};
use crate::kernels::{f_vbv, g_kernel, h_kernel, l_kernel};
use crate::CLASSIFY_TOL;
use num_complex::Complex64 as C64;

/// Structure constants of the collapsed pair: `[X~, Y~] = u~ X~ + v~ Y~ + c~ I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TildeParams {
    pub u_tilde: C64,
    pub v_tilde: C64,
    pub c_tilde: C64,
}

/// Coefficients of `exp(X) exp(Y) exp(Z) = exp(A X + B Y + C Z + D I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub alpha: AlphaSolution,
    pub tilde: TildeParams,
    pub algebra_type: AlgebraType,
    pub spec: AlgebraSpec,
    /// Set when the coefficients describe `exp(X) exp(Z)` (no `Y` factor).
    pub two_factor: bool,
}

impl ClosedForm {
    /// `[A, B, C, D]`.
    pub fn coeffs(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

struct Halves {
    ga: C64,
    ha: C64,
    la: C64,
    gb: C64,
    hb: C64,
    lb: C64,
}

fn halves(spec: &AlgebraSpec, alpha: C64) -> Result<Halves> {
    let beta = 1.0 - alpha;
    Ok(Halves {
        ga: g_kernel(alpha, spec.u, spec.v)?,
        ha: h_kernel(alpha, spec.u, spec.v)?,
        la: l_kernel(alpha, spec.u, spec.v)?,
        gb: g_kernel(beta, spec.z, spec.w)?,
        hb: h_kernel(beta, spec.z, spec.w)?,
        lb: l_kernel(beta, spec.z, spec.w)?,
    })
}

/// Coefficient vectors `(X, Y, Z, I)` of `X~` and `Y~` at the given `alpha`.
pub fn collapsed_pair(spec: &AlgebraSpec, alpha: C64) -> Result<([C64; 4], [C64; 4])> {
    let k = halves(spec, alpha)?;
    let zero = C64::new(0.0, 0.0);
    Ok(([k.ga, k.ha, zero, k.la * spec.c], [zero, k.hb, k.gb, k.lb * spec.d]))
}

fn tilde_from(spec: &AlgebraSpec, k: &Halves) -> TildeParams {
    let AlgebraSpec { u, c, z, d, m, p, e, .. } = *spec;
    TildeParams {
        u_tilde: k.hb * u + k.gb * m,
        v_tilde: k.ha * z + k.ga * p,
        c_tilde: (k.hb - k.gb * k.la * m) * c + (k.ha - k.ga * k.lb * p) * d + k.ga * k.gb * e,
    }
}

/// `u~`, `v~`, `c~` at the given `alpha`.
pub fn tilde_params(spec: &AlgebraSpec, alpha: &AlphaSolution) -> Result<TildeParams> {
    let k = halves(spec, alpha.alpha)?;
    Ok(tilde_from(spec, &k))
}

fn assemble(spec: &AlgebraSpec, ty: &AlgebraType, alpha: AlphaSolution) -> Result<ClosedForm> {
    let k = halves(spec, alpha.alpha)?;
    let t = tilde_from(spec, &k);
    let f = f_vbv(t.u_tilde, t.v_tilde)
        .map_err(|_| Error::Pole(format!("s(v~ - u~) = 0 at alpha = {}", alpha.alpha)))?;
    let xa = t.u_tilde * f;
    let ya = t.v_tilde * f;
    let ci = k.la * spec.c;
    let di = k.lb * spec.d;
    Ok(ClosedForm {
        a: k.ga * (1.0 + xa),
        b: k.ha * (1.0 + xa) + k.hb * (1.0 + ya),
        c: k.gb * (1.0 + ya),
        d: ci * (1.0 + xa) + di * (1.0 + ya) + f * t.c_tilde,
        alpha,
        tilde: t,
        algebra_type: ty.clone(),
        spec: *spec,
        two_factor: false,
    })
}

/// Closed form of `exp(X) exp(Y) exp(Z)`, one entry per admissible `alpha`.
pub fn compose3(spec: &AlgebraSpec) -> Result<Vec<ClosedForm>> {
    let ty = classify(spec, CLASSIFY_TOL)?;
    compose3_typed(spec, &ty)
}

/// As [`compose3`] with the algebra type already known.
pub fn compose3_typed(spec: &AlgebraSpec, ty: &AlgebraType) -> Result<Vec<ClosedForm>> {
    let sols = solve_alpha(spec, ty)?;
    let mut out = Vec::new();
    let mut last_err = None;
    for sol in sols.into_iter().filter(|s| s.admissible) {
        match assemble(spec, ty, sol) {
            Ok(cf) => out.push(cf),
            Err(e) => last_err = Some(e),
        }
    }
    match (out.is_empty(), last_err) {
        (true, Some(e)) => Err(e),
        (true, None) => Err(Error::InadmissibleOnly),
        _ => Ok(out),
    }
}

/// `exp(X) exp(Y) = exp(X + Y + f(u,v)[X,Y])` for `[X,Y] = uX + vY + cI`,
/// returned as the `X`, `Y`, `I` coefficients.
pub fn compose2_vbv(u: C64, v: C64, c: C64) -> Result<(C64, C64, C64)> {
    let f = f_vbv(u, v)?;
    Ok((1.0 + u * f, 1.0 + v * f, c * f))
}

const LIMIT_LAMBDAS: [f64; 3] = [1e-3, 1e-4, 1e-5];
const LIMIT_TOL: f64 = 1e-6;

/// Closed form of `exp(X) exp(Z)`, the `Y -> 0` limit of [`compose3`].
///
/// `Y` is replaced by `lambda Y` for three small `lambda`, each coefficient is
/// read back in the original basis and extrapolated to `lambda = 0` through
/// the quadratic interpolant. The returned `alpha`/`tilde` belong to the
/// smallest `lambda`.
pub fn compose2_limit(spec: &AlgebraSpec) -> Result<ClosedForm> {
    let ty = classify(&spec.with_y_scaled(LIMIT_LAMBDAS[0]), CLASSIFY_TOL)?;
    let mut levels: Vec<Vec<ClosedForm>> = Vec::new();
    for &lam in &LIMIT_LAMBDAS {
        let scaled = spec.with_y_scaled(lam);
        let mut forms = compose3_typed(&scaled, &ty)?;
        for cf in &mut forms {
            cf.b *= lam;
        }
        levels.push(forms);
    }
    let mut worst = f64::INFINITY;
    for (i, first) in levels[0].iter().enumerate() {
        let branch = first.alpha.branch;
        let picks: Vec<&ClosedForm> = levels
            .iter()
            .map(|lv| lv.iter().find(|cf| cf.alpha.branch == branch).unwrap_or(&lv[i.min(lv.len() - 1)]))
            .collect();
        let mut out = [C64::new(0.0, 0.0); 4];
        let mut spread: f64 = 0.0;
        for (j, slot) in out.iter_mut().enumerate() {
            let ys: Vec<C64> = picks.iter().map(|cf| cf.coeffs()[j]).collect();
            let (lin_hi, lin_lo, quad) = extrapolate(&LIMIT_LAMBDAS, &ys);
            let scale = quad.norm().max(1.0);
            spread = spread.max((lin_hi - lin_lo).norm() / scale);
            *slot = quad;
        }
        if spread <= LIMIT_TOL {
            let last = picks[2];
            return Ok(ClosedForm {
                a: out[0],
                b: out[1],
                c: out[2],
                d: out[3],
                alpha: last.alpha,
                tilde: last.tilde,
                algebra_type: ty.clone(),
                spec: *spec,
                two_factor: true,
            });
        }
        worst = worst.min(spread);
    }
    Err(Error::LimitUnstable(worst))
}

/// Linear extrapolations to zero from the two leading and two trailing
/// points, and the quadratic (Neville) extrapolation through all three.
fn extrapolate(x: &[f64; 3], y: &[C64]) -> (C64, C64, C64) {
    let lin = |i: usize, j: usize| (y[i] * x[j] - y[j] * x[i]) / (x[j] - x[i]);
    let p01 = lin(0, 1);
    let p12 = lin(1, 2);
    let p012 = (p01 * x[2] - p12 * x[0]) / (x[2] - x[0]);
    (p01, p12, p012)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sample_spec, Param, TypeTag};
    use crate::kernels::{s, s_alpha};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    /// `[a, b]` from the structure constants, written out by hand.
    fn bracket(sp: &AlgebraSpec, a: [C64; 4], b: [C64; 4]) -> [C64; 4] {
        let xy = a[0] * b[1] - a[1] * b[0];
        let yz = a[1] * b[2] - a[2] * b[1];
        let xz = a[0] * b[2] - a[2] * b[0];
        [
            xy * sp.u + xz * sp.m,
            xy * sp.v + yz * sp.w + xz * sp.n,
            yz * sp.z + xz * sp.p,
            xy * sp.c + yz * sp.d + xz * sp.e,
        ]
    }

    /// Tilde parameters written with explicit `1/u`, `1/z` divisions.
    fn tilde_divided(sp: &AlgebraSpec, alpha: C64) -> TildeParams {
        let AlgebraSpec { u, v, c, w, z, d, m, p, e, .. } = *sp;
        let beta = 1.0 - alpha;
        let gx = (alpha * u * 0.5).exp() * s(v) / s(v - alpha * u);
        let gz = (beta * z * 0.5).exp() * s(w) / s(w - beta * z);
        TildeParams {
            u_tilde: ((w * 0.5).exp() * s_alpha(beta, z) * u + (beta * z * 0.5).exp() * s(w) * m) / s(w - beta * z),
            v_tilde: ((alpha * u * 0.5).exp() * s(v) * p + (v * 0.5).exp() * s_alpha(alpha, u) * z) / s(v - alpha * u),
            c_tilde: (e - c * m / u - d * p / z) * gx * gz
                + ((w / z + m / u) * gz + beta - w / z) * c
                + ((v / u + p / z) * gx + alpha - v / u) * d,
        }
    }

    /// Exponent coefficients written with explicit `1/u`, `1/z`, `1/u~` divisions.
    fn coeffs_divided(sp: &AlgebraSpec, alpha: C64, t: &TildeParams) -> [C64; 4] {
        let AlgebraSpec { u, v, c, w, z, d, .. } = *sp;
        let beta = 1.0 - alpha;
        let (ut, vt) = (t.u_tilde, t.v_tilde);
        let pre = 1.0 / s(vt - ut);
        let sva = s(v - alpha * u);
        let swb = s(w - beta * z);
        [
            pre * ((ut + alpha * u) * 0.5).exp() * s(vt) * s(v) / sva,
            pre * (((ut + v) * 0.5).exp() * s(vt) * s_alpha(alpha, u) / sva
                + ((vt + w) * 0.5).exp() * s(ut) * s_alpha(beta, z) / swb),
            pre * ((vt + beta * z) * 0.5).exp() * s(ut) * s(w) / swb,
            pre * ((ut * 0.5).exp() * s(vt) / u * ((alpha * u * 0.5).exp() * s(v) / sva - 1.0) * c
                + (vt * 0.5).exp() * s(ut) / z * ((beta * z * 0.5).exp() * s(w) / swb - 1.0) * d
                + ((ut * 0.5).exp() * s(vt) - s(vt - ut)) / ut * t.c_tilde),
        ]
    }

    #[test]
    fn kernel_assembly_matches_divided_forms() {
        for tag in [TypeTag::T4, TypeTag::T5] {
            for seed in 0..10 {
                let sp = sample_spec(tag, seed, 0.7).unwrap();
                for cf in compose3(&sp).unwrap() {
                    let want = tilde_divided(&sp, cf.alpha.alpha);
                    let got = cf.tilde;
                    let tol = 1e-11;
                    assert!((want.u_tilde - got.u_tilde).norm() < tol, "{tag} {seed}: {} vs {}", want.u_tilde, got.u_tilde);
                    assert!((want.v_tilde - got.v_tilde).norm() < tol, "{tag} {seed}: {} vs {} {:?}", want.v_tilde, got.v_tilde, sp);
                    assert!((want.c_tilde - got.c_tilde).norm() < tol, "{tag} {seed}: {} vs {}", want.c_tilde, got.c_tilde);
                    if got.u_tilde.norm() > 1e-3 && sp.u.norm() > 1e-3 && sp.z.norm() > 1e-3 {
                        let cd = coeffs_divided(&sp, cf.alpha.alpha, &got);
                        for (x, y) in cd.iter().zip(cf.coeffs().iter()) {
                            assert!((x - y).norm() < 1e-9 * (1.0 + y.norm()), "{tag} {seed}: {x} vs {y}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tilde_condition_holds() {
        for tag in TypeTag::ALL {
            for seed in 0..10 {
                let sp = sample_spec(tag, seed, 0.5).unwrap();
                for cf in compose3(&sp).unwrap() {
                    let (xt, yt) = collapsed_pair(&sp, cf.alpha.alpha).unwrap();
                    let br = bracket(&sp, xt, yt);
                    let t = cf.tilde;
                    for j in 0..4 {
                        let mut want = t.u_tilde * xt[j] + t.v_tilde * yt[j];
                        if j == 3 {
                            want += t.c_tilde;
                        }
                        assert!((br[j] - want).norm() < 1e-11, "{tag} {seed} comp {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn t1c_v_tilde_values() {
        let sp = AlgebraSpec::default().with(Param::M, 2.0).with(Param::N, 1.0).with(Param::E, 5.0);
        let cf = &compose3(&sp).unwrap()[0];
        assert_eq!(cf.alpha.alpha, r(0.5));
        assert!((cf.tilde.u_tilde - 2.0).norm() < 1e-15);
        assert!(cf.tilde.v_tilde.norm() < 1e-15);
        assert!((cf.tilde.c_tilde - 5.0).norm() < 1e-15);
    }

    #[test]
    fn t3b_has_vanishing_v_tilde() {
        for seed in 0..5 {
            let sp = sample_spec(TypeTag::T3b, seed, 0.8).unwrap();
            for cf in compose3(&sp).unwrap() {
                assert!(cf.tilde.v_tilde.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn t5_first_solution_tilde() {
        let sp = AlgebraSpec::default()
            .with(Param::U, 1.0)
            .with(Param::V, 1.0)
            .with(Param::W, 1.0)
            .with(Param::Z, 2.0)
            .with(Param::M, -0.5)
            .with(Param::N, -1.5)
            .with(Param::P, -2.0);
        let forms = compose3(&sp).unwrap();
        let first = forms.iter().find(|cf| cf.alpha.alpha == r(1.0)).unwrap();
        assert!((first.tilde.u_tilde - (-0.5)).norm() < 1e-14);
        assert!(first.tilde.v_tilde.norm() < 1e-14);
    }

    #[test]
    fn central_only_is_half_e() {
        let sp = AlgebraSpec::default().with(Param::E, 0.8);
        let cf = &compose3(&sp).unwrap()[0];
        for (x, want) in cf.coeffs().iter().zip([1.0, 1.0, 1.0, 0.4]) {
            assert!((x - want).norm() < 1e-15);
        }
        let lim = compose2_limit(&sp).unwrap();
        for (x, want) in lim.coeffs().iter().zip([1.0, 0.0, 1.0, 0.4]) {
            assert!((x - want).norm() < 1e-12, "{x} vs {want}");
        }
    }

    #[test]
    fn vbv_basics() {
        assert_eq!(compose2_vbv(r(0.0), r(0.0), r(1.0)).unwrap(), (r(1.0), r(1.0), r(0.5)));
        let (x, y, _) = compose2_vbv(r(0.3), r(0.1), r(0.0)).unwrap();
        let (y2, x2, _) = compose2_vbv(r(0.1), r(0.3), r(0.0)).unwrap();
        assert_eq!((x, y), (x2, y2));
    }

    #[test]
    fn extrapolation_is_exact_for_quadratics() {
        let xs = LIMIT_LAMBDAS;
        let ys: Vec<C64> = xs.iter().map(|&x| C64::new(2.0 + 3.0 * x - 5.0 * x * x, x)).collect();
        let (_, _, q) = extrapolate(&xs, &ys);
        assert!((q - 2.0).norm() < 1e-12);
    }
}
