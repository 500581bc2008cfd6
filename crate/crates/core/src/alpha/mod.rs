// SPDX-License-Identifier: Apache-2.0

//! The splitting parameter `alpha`.
//!
//! Writing `exp(Y) = exp(alpha Y) exp(beta Y)` with `beta = 1 - alpha`, the
//! two regrouped pairs `(X, alpha Y)` and `(beta Y, Z)` each collapse to a
//! single exponential. `alpha` is fixed by requiring that the bracket of the
//! two collapsed exponents close again on themselves and `I`. That
//! requirement is one scalar equation in `alpha`; this module solves it per
//! algebra type, and in the generic `u z != 0` case as an exponential
//! polynomial in `x = e^alpha`.

mod poly;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::algebra::{AlgebraSpec, AlgebraType, TypeTag};
use crate::error::{Error, Result};
use crate::kernels::{distance_to_excluded, g_kernel, h_kernel, on_excluded_point, s, s_alpha};

pub use poly::{horner, roots as polynomial_roots};

/// Largest `|k|` scanned when checking `v - alpha u` and `w - beta z` against `2 pi i k`.
pub const ADMISSIBILITY_K_MAX: i64 = 64;
/// Minimum distance to an excluded point for a root to count as admissible.
pub const ADMISSIBILITY_MARGIN: f64 = 1e-8;

const NEWTON_MAX_STEPS: usize = 200;
const NEWTON_MAX_HALVINGS: usize = 20;
const NEWTON_TOL: f64 = 1e-12;

/// How a candidate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    ClosedForm,
    QuadraticRootPlus,
    QuadraticRootMinus,
    FactorXu,
    FactorXz,
    PolynomialRoot,
    Newton,
}

/// A solution of the splitting equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSolution {
    pub alpha: C64,
    pub beta: C64,
    /// `|fundamental_residual(spec, alpha)|`, infinite at a pole.
    pub residual: f64,
    pub branch: Branch,
    pub admissible: bool,
}

impl AlphaSolution {
    pub fn new(spec: &AlgebraSpec, alpha: C64, branch: Branch) -> Self {
        let beta = 1.0 - alpha;
        let residual = fundamental_residual(spec, alpha).map(|r| r.norm()).unwrap_or(f64::INFINITY);
        AlphaSolution {
            alpha,
            beta,
            residual,
            branch,
            admissible: is_admissible(spec, alpha),
        }
    }
}

/// Whether `v - alpha u` and `w - beta z` avoid the points `2 pi i k`, `k != 0`.
pub fn is_admissible(spec: &AlgebraSpec, alpha: C64) -> bool {
    let beta = 1.0 - alpha;
    let a = spec.v - alpha * spec.u;
    let b = spec.w - beta * spec.z;
    let finite = alpha.re.is_finite() && alpha.im.is_finite();
    finite
        && distance_to_excluded(a, ADMISSIBILITY_K_MAX) > ADMISSIBILITY_MARGIN
        && distance_to_excluded(b, ADMISSIBILITY_K_MAX) > ADMISSIBILITY_MARGIN
}

/// Left side of the splitting equation in exponential form:
///
/// ```text
/// [ e^{v/2} s_a(u) (e^{w/2} s_b(z)(u+z) + e^{bz/2} s(w)(m-w))
///   + e^{au/2} s(v) (e^{w/2} s_b(z)(p-v) - e^{bz/2} s(w) n) ] / (s(v-au) s(w-bz))
/// ```
pub fn fundamental_residual(spec: &AlgebraSpec, alpha: C64) -> Result<C64> {
    let AlgebraSpec { u, v, w, z, m, n, p, .. } = *spec;
    let beta = 1.0 - alpha;
    let a1 = v - alpha * u;
    let a2 = w - beta * z;
    if on_excluded_point(a1) || on_excluded_point(a2) {
        return Err(Error::Pole(format!("s(v - alpha u) s(w - beta z) = 0 at alpha = {alpha}")));
    }
    let ev2 = (v * 0.5).exp();
    let ew2 = (w * 0.5).exp();
    let ebz2 = (beta * z * 0.5).exp();
    let eau2 = (alpha * u * 0.5).exp();
    let sbz = s_alpha(beta, z);
    let num = ev2 * s_alpha(alpha, u) * (ew2 * sbz * (u + z) + ebz2 * s(w) * (m - w))
        + eau2 * s(v) * (ew2 * sbz * (p - v) - ebz2 * s(w) * n);
    Ok(num / (s(a1) * s(a2)))
}

/// The same equation assembled from the `g`, `h` kernels:
/// `h_a(u,v)[h_b(z,w)(u+z) + g_b(z,w)(m-w)] + g_a(u,v)[h_b(z,w)(p-v) - g_b(z,w) n]`.
pub fn fundamental_kernel_form(spec: &AlgebraSpec, alpha: C64) -> Result<C64> {
    let AlgebraSpec { u, v, w, z, m, n, p, .. } = *spec;
    let beta = 1.0 - alpha;
    let ga = g_kernel(alpha, u, v)?;
    let ha = h_kernel(alpha, u, v)?;
    let gb = g_kernel(beta, z, w)?;
    let hb = h_kernel(beta, z, w)?;
    Ok(ha * (hb * (u + z) + gb * (m - w)) + ga * (hb * (p - v) - gb * n))
}

/// Whether the splitting equation vanishes at several unrelated `alpha`.
fn holds_identically(spec: &AlgebraSpec) -> bool {
    let tol = 1e-14 * spec.max_modulus();
    [C64::new(0.5, 0.0), C64::new(0.3, 0.2), C64::new(-0.4, 0.0), C64::new(1.3, -0.1)]
        .into_iter()
        .all(|a| matches!(fundamental_kernel_form(spec, a), Ok(r) if r.norm() <= tol))
}

fn guarded(num: C64, den: C64, what: &'static str) -> Result<C64> {
    if den.norm() <= 1e-300 || den.norm() <= 1e-15 * num.norm() {
        Err(Error::DegenerateDenominator(what))
    } else {
        Ok(num / den)
    }
}

/// Roots `x^u_+`, `x^u_-` of the quadratic `x^{2u} + b x^u + e^{u+v-w} = 0`
/// that the splitting equation reduces to when `u = z`, with
/// `b = (n u / 2) s(v) s(w) e^{(2u+v-w)/2} - e^u - e^v + e^{u+v} - e^{u+v-w}`.
pub fn equal_rate_quadratic(spec: &AlgebraSpec) -> (C64, C64, C64) {
    let AlgebraSpec { u, v, w, n, .. } = *spec;
    let b = n * u * 0.5 * s(v) * s(w) * ((2.0 * u + v - w) * 0.5).exp() - u.exp() - v.exp() + (u + v).exp()
        - (u + v - w).exp();
    let k = (u + v - w).exp();
    (b, k, C64::new(1.0, 0.0))
}

/// Both roots of `y^2 + b y + k = 0`, as `(plus, minus)` with
/// `plus = (-b + sqrt(b^2 - 4k)) / 2`.
pub fn quadratic_roots(b: C64, k: C64) -> (C64, C64) {
    let sq = (b * b - 4.0 * k).sqrt();
    let plus = (-b + sq) * 0.5;
    let minus = (-b - sq) * 0.5;
    // Recover the smaller-magnitude root from the product to avoid cancellation.
    if plus.norm() >= minus.norm() {
        (plus, if plus.norm() > 0.0 { k / plus } else { minus })
    } else {
        (k / minus, minus)
    }
}

/// Closed-form candidates for `alpha`, one list per algebra type.
///
/// When the equation holds for every `alpha` (e.g. an abelian spec or a purely
/// central `[X, Z]`), the symmetric split `alpha = 1/2` is returned.
pub fn solve_alpha(spec: &AlgebraSpec, ty: &AlgebraType) -> Result<Vec<AlphaSolution>> {
    if holds_identically(spec) {
        return Ok(vec![AlphaSolution::new(spec, C64::new(0.5, 0.0), Branch::ClosedForm)]);
    }
    let AlgebraSpec { u, v, c, w, z, d, m, n, p, .. } = *spec;
    let one = C64::new(1.0, 0.0);
    let closed = |alpha: C64| vec![AlphaSolution::new(spec, alpha, Branch::ClosedForm)];
    let sols = match ty.tag {
        TypeTag::T1a => {
            let num = s(v) * 0.5 * (2.0 * (w * 0.5).exp() * v + n * s(w));
            let den = (w * 0.5).exp() * v * s(v) - (v * 0.5).exp() * w * s(w);
            closed(guarded(num, den, "e^{w/2} v s(v) - e^{v/2} w s(w)")?)
        }
        TypeTag::T1b => {
            let num = s(v) * ((w * 0.5).exp() * v * (w - m) + n * w * s(w));
            let inner = (v * 0.5).exp() * w * s(w) - (w * 0.5).exp() * v * s(v);
            let den = (m - w) * inner;
            if (m - w).norm() == 0.0 {
                return Err(Error::DegenerateDenominator("m - w"));
            }
            closed(guarded(num, den, "e^{v/2} w s(w) - e^{w/2} v s(v)")?)
        }
        TypeTag::T1cI => {
            let num = n * s(v) * w * s(w) - (w * 0.5).exp() * v * s(v) * (m - w);
            if (m - w).norm() == 0.0 {
                return Err(Error::DegenerateDenominator("m - w"));
            }
            let den = (m - w) * (w - v) * s(w - v);
            closed(guarded(num, den, "w - v")?)
        }
        TypeTag::T1cII => {
            if m.norm() == 0.0 {
                return Err(Error::DegenerateDenominator("m"));
            }
            closed(guarded(d * n - c * m, m * (d - c), "d - c")?)
        }
        TypeTag::T1cIII => closed(guarded(n, m - w, "m - w")?),
        TypeTag::T1cIV => closed(one - guarded(n, p - v, "p - v")?),
        TypeTag::T1cV => closed(guarded(n - p, m - p, "m - p")?),
        TypeTag::T2a => closed(-guarded(p, z, "z")?),
        TypeTag::T2b => closed(-guarded(n, w, "w")?),
        TypeTag::T3a => closed(guarded(m + u, u, "u")?),
        TypeTag::T3b => closed(guarded(v, u, "u")?),
        TypeTag::T4 => {
            if u.norm() == 0.0 {
                return Err(Error::DegenerateDenominator("u"));
            }
            let (b, k, _) = equal_rate_quadratic(spec);
            let (xp, xm) = quadratic_roots(b, k);
            vec![
                AlphaSolution::new(spec, xp.ln() / u, Branch::QuadraticRootPlus),
                AlphaSolution::new(spec, xm.ln() / u, Branch::QuadraticRootMinus),
            ]
        }
        TypeTag::T5 => vec![
            AlphaSolution::new(spec, guarded(v, u, "u")?, Branch::FactorXu),
            AlphaSolution::new(spec, one - guarded(w, z, "z")?, Branch::FactorXz),
        ],
    };
    if sols.iter().all(|s| !s.admissible) {
        return Err(Error::InadmissibleOnly);
    }
    Ok(sols)
}

/// The splitting equation multiplied through to an exponential polynomial in
/// `x = e^alpha` (valid for `u z != 0`):
///
/// ```text
/// k_uz x^{u+z} + k_u x^u + k_z x^z + k_0 = 0.
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEquation {
    pub spec: AlgebraSpec,
    pub k_uz: C64,
    pub k_u: C64,
    pub k_z: C64,
    pub k_0: C64,
}

impl AlphaEquation {
    pub fn coefficients(&self) -> [C64; 4] {
        [self.k_uz, self.k_u, self.k_z, self.k_0]
    }

    /// Value at `x = e^alpha`.
    pub fn evaluate(&self, alpha: C64) -> C64 {
        let AlgebraSpec { u, z, .. } = self.spec;
        self.k_uz * (alpha * (u + z)).exp() + self.k_u * (alpha * u).exp() + self.k_z * (alpha * z).exp() + self.k_0
    }

    /// Derivative with respect to `alpha`.
    pub fn derivative(&self, alpha: C64) -> C64 {
        let AlgebraSpec { u, z, .. } = self.spec;
        self.k_uz * (u + z) * (alpha * (u + z)).exp() + self.k_u * u * (alpha * u).exp() + self.k_z * z * (alpha * z).exp()
    }
}

/// Coefficients of the exponential polynomial form of the splitting equation.
pub fn build_alpha_polynomial(spec: &AlgebraSpec) -> Result<AlphaEquation> {
    let AlgebraSpec { u, v, w, z, m, n, p, .. } = *spec;
    let scale = spec.max_modulus().max(f64::MIN_POSITIVE);
    if u.norm() <= 1e-12 * scale {
        return Err(Error::UnsupportedShape("u = 0: use the per-type formula"));
    }
    if z.norm() <= 1e-12 * scale {
        return Err(Error::UnsupportedShape("z = 0: use the per-type formula"));
    }
    let q = (u + z) / (u * z);
    let ev2 = (v * 0.5).exp();
    let ew2 = (w * 0.5).exp();
    let evw2 = ((v + w) * 0.5).exp();
    let k_uz = ((w - 2.0 * z) * 0.5).exp() * (q * ev2 + (p - v) / z * s(v));
    let k_u = n * s(v) * s(w) - q * evw2 - (m - w) / u * s(w) * ev2 - (p - v) / z * s(v) * ew2;
    let k_z = -q * ((v + w - 2.0 * z) * 0.5).exp();
    let k_0 = q * evw2 + (m - w) / u * s(w) * ev2;
    Ok(AlphaEquation { spec: *spec, k_uz, k_u, k_z, k_0 })
}

/// `u / z` as `P / Q` with `|P|, |Q| <= 16`, if it is one.
pub fn rational_ratio(u: C64, z: C64) -> Option<(i64, i64)> {
    let r = u / z;
    for q in 1..=16_i64 {
        let pf = (r.re * q as f64).round();
        if pf == 0.0 || pf.abs() > 16.0 {
            continue;
        }
        let cand = C64::new(pf / q as f64, 0.0);
        if (r - cand).norm() <= 1e-10 * r.norm().max(1.0) {
            return Some((pf as i64, q));
        }
    }
    None
}

/// Solve the exponential polynomial generically.
///
/// When `u / z = P / Q` is a ratio of small integers, `y = e^{alpha u / P}`
/// turns the equation into a polynomial whose roots are found exactly; each
/// is mapped back to `alpha` on the principal logarithm branch. Otherwise
/// `seed` is refined by damped Newton iteration on the splitting equation.
pub fn solve_alpha_generic(eq: &AlphaEquation, seed: Option<C64>) -> Result<Vec<AlphaSolution>> {
    let spec = &eq.spec;
    let coeffs = eq.coefficients();
    let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if cmax == 0.0 || !cmax.is_finite() {
        return Err(Error::NoIsolatedRoots);
    }
    match rational_ratio(spec.u, spec.z) {
        Some((pn, qn)) => {
            let t = spec.u / pn as f64;
            let exps = [pn + qn, pn, qn, 0];
            let lo = *exps.iter().min().unwrap();
            let hi = *exps.iter().max().unwrap();
            let mut poly = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
            for (k, &e) in coeffs.iter().zip(exps.iter()) {
                poly[(e - lo) as usize] += k;
            }
            let neg = |c: &C64| c.norm() <= 1e-14 * cmax;
            while poly.last().is_some_and(neg) {
                poly.pop();
            }
            // y = 0 is never e^{alpha t}; drop those factors.
            let first = poly.iter().position(|c| !neg(c)).ok_or(Error::NoIsolatedRoots)?;
            let poly = &poly[first..];
            Ok(polynomial_roots(poly)
                .into_iter()
                .map(|y| AlphaSolution::new(spec, y.ln() / t, Branch::PolynomialRoot))
                .collect())
        }
        None => match seed {
            Some(seed) => Ok(vec![newton(spec, seed)?]),
            None => Err(Error::UnsupportedRatio(format!("{}", spec.u / spec.z))),
        },
    }
}

/// Damped Newton iteration on [`fundamental_residual`] with a central
/// difference derivative.
pub fn newton(spec: &AlgebraSpec, seed: C64) -> Result<AlphaSolution> {
    let f = |a: C64| fundamental_residual(spec, a);
    let mut alpha = seed;
    let mut fa = f(alpha)?;
    for _ in 0..NEWTON_MAX_STEPS {
        if fa.norm() < NEWTON_TOL {
            return Ok(AlphaSolution::new(spec, alpha, Branch::Newton));
        }
        let h = 1e-6 * (1.0 + alpha.norm());
        let df = (f(alpha + h)? - f(alpha - h)?) / (2.0 * h);
        if df.norm() == 0.0 {
            break;
        }
        let mut step = fa / df;
        let mut accepted = false;
        for _ in 0..=NEWTON_MAX_HALVINGS {
            let cand = alpha - step;
            if let Ok(fc) = f(cand) {
                if fc.norm() < fa.norm() {
                    alpha = cand;
                    fa = fc;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted || step.norm() < 1e-15 * (1.0 + alpha.norm()) {
            if fa.norm() < NEWTON_TOL {
                return Ok(AlphaSolution::new(spec, alpha, Branch::Newton));
            }
            break;
        }
    }
    if fa.norm() < NEWTON_TOL {
        return Ok(AlphaSolution::new(spec, alpha, Branch::Newton));
    }
    Err(Error::NoConvergence {
        iterations: NEWTON_MAX_STEPS,
        residual: fa.norm(),
    })
}
