// SPDX-License-Identifier: Apache-2.0

//! Scalar special functions behind the closed BCH formulas.
//!
//! Every function here is analytic apart from genuine poles, but most are
//! written as quotients with removable singularities at the origin. Below
//! [`SERIES_THRESHOLD`] the Maclaurin series is summed instead.
//!
//! The Van-Brunt–Visser function is evaluated through the identity
//!
//! ```text
//! 1 + u f(u, v) = psi(v) / psi(v - u),     psi(x) = (e^x - 1) / x,
//! ```
//!
//! so `f(u, v)` is a divided difference of `psi` over the step `u`, divided by
//! `psi(v - u)`. The symmetric role of `u` and `v` lets the larger of the two
//! serve as the step, which keeps cancellation bounded.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this modulus a removable-singularity quotient is replaced by its series.
pub const SERIES_THRESHOLD: f64 = 1e-3;

const SERIES_TERM_FLOOR: f64 = 1e-20;
const SERIES_MAX_TERMS: usize = 64;
const POLE_REL_TOL: f64 = 1e-12;

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: C64) -> C64 {
    let em1 = z.re.exp_m1();
    let half_sin = (z.im * 0.5).sin();
    C64::new(em1 * z.im.cos() - 2.0 * half_sin * half_sin, z.re.exp() * z.im.sin())
}

/// `(e^z - 1) / z`, equal to 1 at the origin.
pub fn exprel(z: C64) -> C64 {
    if z.norm() < SERIES_THRESHOLD {
        let mut sum = C64::new(1.0, 0.0);
        let mut term = C64::new(1.0, 0.0);
        for k in 1..SERIES_MAX_TERMS {
            term *= z / (k as f64 + 1.0);
            sum += term;
            if term.norm() < SERIES_TERM_FLOOR {
                break;
            }
        }
        sum
    } else {
        expm1(z) / z
    }
}

/// True when `x` sits on one of the zeros `2 pi i k`, `k != 0`, of `sinh(x/2)`.
pub fn on_excluded_point(x: C64) -> bool {
    let k = (x.im / (2.0 * PI)).round();
    if k == 0.0 {
        return false;
    }
    let target = C64::new(0.0, 2.0 * PI * k);
    (x - target).norm() <= POLE_REL_TOL * target.norm()
}

/// Distance from `x` to the nearest excluded point `2 pi i k` with `k != 0` and `|k| <= k_max`.
pub fn distance_to_excluded(x: C64, k_max: i64) -> f64 {
    let mut k = (x.im / (2.0 * PI)).round() as i64;
    k = k.clamp(-k_max, k_max);
    let mut best = f64::INFINITY;
    for cand in [k - 1, k, k + 1] {
        if cand == 0 || cand.abs() > k_max {
            continue;
        }
        let d = (x - C64::new(0.0, 2.0 * PI * cand as f64)).norm();
        best = best.min(d);
    }
    best
}

/// `s(a) = sinh(a/2) / (a/2)`.
pub fn s(a: C64) -> C64 {
    if a.norm() < SERIES_THRESHOLD {
        // sum_k a^{2k} / (4^k (2k+1)!)
        let a2 = a * a;
        let mut sum = C64::new(1.0, 0.0);
        let mut term = C64::new(1.0, 0.0);
        for k in 1..SERIES_MAX_TERMS {
            let kf = k as f64;
            term *= a2 / (4.0 * (2.0 * kf) * (2.0 * kf + 1.0));
            sum += term;
            if term.norm() < SERIES_TERM_FLOOR {
                break;
            }
        }
        sum
    } else {
        let half = a * 0.5;
        half.sinh() / half
    }
}

/// `s_alpha(a) = sinh(alpha a / 2) / (a/2)`; tends to `alpha` as `a -> 0`.
pub fn s_alpha(alpha: C64, a: C64) -> C64 {
    alpha * s(alpha * a)
}

/// Divided difference `(psi(a) - psi(b)) / (a - b)` as the series
/// `sum_k h_k(a, b) / (k+2)!` with `h_k` the complete homogeneous polynomial.
fn exprel_divided_series(a: C64, b: C64) -> C64 {
    let mut h = C64::new(1.0, 0.0);
    let mut b_pow = C64::new(1.0, 0.0);
    let mut fact = 2.0;
    let mut sum = h / fact;
    for k in 1..SERIES_MAX_TERMS {
        b_pow *= b;
        h = a * h + b_pow;
        fact *= k as f64 + 2.0;
        let term = h / fact;
        sum += term;
        if term.norm() < SERIES_TERM_FLOOR {
            break;
        }
    }
    sum
}

/// `(psi(a) - psi(b)) / (a - b)` with `psi = exprel`; `psi'(a)` when `a = b`.
pub fn exprel_divided(a: C64, b: C64) -> C64 {
    let d = a - b;
    // The series has no cancellation for moderate arguments.
    if d.norm() < SERIES_THRESHOLD || a.norm().max(b.norm()) <= 2.0 {
        exprel_divided_series(a, b)
    } else {
        (exprel(a) - exprel(b)) / d
    }
}

/// Van-Brunt–Visser function
/// `f(u,v) = ((u-v) e^{u+v} - (u e^u - v e^v)) / (u v (e^u - e^v))`.
///
/// Symmetric in its arguments. `f(0,0) = 1/2`. Poles where `u - v` is a nonzero
/// multiple of `2 pi i`.
pub fn f_vbv(u: C64, v: C64) -> Result<C64> {
    let (a, step) = if u.norm() >= v.norm() { (v, u) } else { (u, v) };
    let b = a - step;
    if on_excluded_point(b) {
        return Err(Error::Pole(format!("f(u, v) with u - v = {b} in 2 pi i Z")));
    }
    let psi_b = exprel(b);
    if step.norm() < SERIES_THRESHOLD {
        Ok(exprel_divided_series(a, b) / psi_b)
    } else {
        Ok((exprel(a) - psi_b) / step / psi_b)
    }
}

/// `g_alpha(u, v) = 1 + alpha u f(alpha u, v)`: coefficient of `X` in `log(e^X e^{alpha Y})`.
pub fn g_kernel(alpha: C64, u: C64, v: C64) -> Result<C64> {
    let au = alpha * u;
    Ok(1.0 + au * f_vbv(au, v)?)
}

/// `h_alpha(u, v) = alpha (1 + v f(alpha u, v))`: coefficient of `Y`.
pub fn h_kernel(alpha: C64, u: C64, v: C64) -> Result<C64> {
    Ok(alpha * (1.0 + v * f_vbv(alpha * u, v)?))
}

/// `l_alpha(u, v) = alpha f(alpha u, v)`: coefficient of `c I`.
pub fn l_kernel(alpha: C64, u: C64, v: C64) -> Result<C64> {
    Ok(alpha * f_vbv(alpha * u, v)?)
}

fn pole_guard(x: C64, what: &str) -> Result<()> {
    if on_excluded_point(x) {
        Err(Error::Pole(format!("s({what}) = 0 at {what} = {x}")))
    } else {
        Ok(())
    }
}

/// Exponential form of `g`: `e^{alpha u/2} s(v) / s(v - alpha u)`.
pub fn g_closed(alpha: C64, u: C64, v: C64) -> Result<C64> {
    let arg = v - alpha * u;
    pole_guard(arg, "v - alpha u")?;
    Ok((alpha * u * 0.5).exp() * s(v) / s(arg))
}

/// Exponential form of `h`: `e^{v/2} s_alpha(u) / s(v - alpha u)`.
pub fn h_closed(alpha: C64, u: C64, v: C64) -> Result<C64> {
    let arg = v - alpha * u;
    pole_guard(arg, "v - alpha u")?;
    Ok((v * 0.5).exp() * s_alpha(alpha, u) / s(arg))
}

/// Exponential form of `l`: `(g_closed - 1) / u`.
///
/// For small `alpha u` the difference `g - 1` cancels, so the numerator
/// `e^{t/2} s(v) - s(v - t)` (`t = alpha u`) is expanded as
/// `t (s(v) exprel(t/2) / 2 + s[v, v - t])` with `s[., .]` a divided difference.
pub fn l_closed(alpha: C64, u: C64, v: C64) -> Result<C64> {
    let t = alpha * u;
    if t.norm() > 0.5 {
        return Ok((g_closed(alpha, u, v)? - 1.0) / u);
    }
    let arg = v - t;
    pole_guard(arg, "v - alpha u")?;
    Ok(alpha * (s(v) * 0.5 * exprel(t * 0.5) + s_divided(v, arg)) / s(arg))
}

/// `(s(x) - s(y)) / (x - y)`, using `s(x) = (exprel(x/2) + exprel(-x/2)) / 2`.
fn s_divided(x: C64, y: C64) -> C64 {
    (exprel_divided(x * 0.5, y * 0.5) - exprel_divided(-x * 0.5, -y * 0.5)) * 0.25
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    /// Direct 50-term Maclaurin sum of sinh(a/2)/(a/2), independent of `s`.
    fn s_taylor_50(a: C64) -> C64 {
        let mut sum = C64::new(0.0, 0.0);
        let mut fact = 1.0_f64;
        for k in 0..50 {
            if k > 0 {
                fact *= (2 * k) as f64 * (2 * k + 1) as f64;
            }
            sum += (a * 0.5).powu(2 * k as u32) / fact;
        }
        sum
    }

    #[test]
    fn s_values() {
        assert_eq!(s(c(0.0, 0.0)), c(1.0, 0.0));
        let v = s(c(2.0, 0.0));
        assert!((v.re - 1.1752011936438014).abs() < 1e-15);
        assert!(rel(v, s_taylor_50(c(2.0, 0.0))) < 1e-15);
        assert!(s(c(0.0, 2.0 * PI)).norm() < 1e-15);
    }

    #[test]
    fn s_alpha_values() {
        assert_eq!(s_alpha(c(0.7, 0.0), c(0.0, 0.0)), c(0.7, 0.0));
        let a = c(0.37, -1.2);
        assert!(rel(s_alpha(c(1.0, 0.0), a), s(a)) < 1e-15);
        let v = s_alpha(c(2.0, 0.0), c(1.0, 0.0));
        assert!((v.re - 2.3504023872876028).abs() < 1e-14);
    }

    #[test]
    fn f_values() {
        let half = f_vbv(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((half - c(0.5, 0.0)).norm() < 1e-16);
        let on_diag = f_vbv(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let near = f_vbv(c(1.0, 0.0), c(1.0 + 1e-8, 0.0)).unwrap();
        assert!((on_diag - near).norm() < 1e-6);
        let a = f_vbv(c(1.0, 0.0), c(2.0, 0.0)).unwrap();
        let b = f_vbv(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn f_matches_direct_quotient_away_from_singularities() {
        let direct = |u: C64, v: C64| {
            ((u - v) * (u + v).exp() - (u * u.exp() - v * v.exp())) / (u * v * (u.exp() - v.exp()))
        };
        for (u, v) in [(c(0.3, 0.1), c(-0.7, 0.4)), (c(1.5, 0.0), c(0.2, 0.0)), (c(-2.0, 1.0), c(0.5, -0.5))] {
            assert!(rel(f_vbv(u, v).unwrap(), direct(u, v)) < 1e-13);
        }
    }

    #[test]
    fn f_pole_is_an_error() {
        let r = f_vbv(c(0.3, 2.0 * PI), c(0.3, 0.0));
        assert!(matches!(r, Err(Error::Pole(_))));
        assert!(g_kernel(c(1.0, 0.0), c(0.0, -2.0 * PI), c(0.0, 0.0)).is_err());
        assert!(g_closed(c(1.0, 0.0), c(0.0, -2.0 * PI), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn kernel_trivial_values() {
        let u = c(0.4, -0.3);
        let v = c(-0.2, 0.9);
        let zero = c(0.0, 0.0);
        assert_eq!(g_kernel(zero, u, v).unwrap(), c(1.0, 0.0));
        assert_eq!(h_kernel(zero, u, v).unwrap(), zero);
        assert_eq!(l_kernel(zero, u, v).unwrap(), zero);
        assert!((g_kernel(c(1.0, 0.0), zero, zero).unwrap() - 1.0).norm() < 1e-16);
        let a0 = c(0.65, 0.1);
        assert!((h_kernel(a0, zero, zero).unwrap() - a0).norm() < 1e-16);
        assert!((l_kernel(c(1.0, 0.0), zero, zero).unwrap() - 0.5).norm() < 1e-16);
    }

    #[test]
    fn kernel_dual_forms_at_reference_point() {
        let (a, u, v) = (c(0.3, 0.0), c(0.5, 0.0), c(0.2, 0.0));
        assert!(rel(g_kernel(a, u, v).unwrap(), g_closed(a, u, v).unwrap()) < 1e-13);
        assert!(rel(h_kernel(a, u, v).unwrap(), h_closed(a, u, v).unwrap()) < 1e-13);
        assert!(rel(l_kernel(a, u, v).unwrap(), l_closed(a, u, v).unwrap()) < 1e-13);
    }

    #[test]
    fn crossover_continuity() {
        let dirs = [c(1.0, 0.0), c(0.0, 1.0), c(0.6, -0.8)];
        for d in dirs {
            // Points 2e-12 apart straddling the switch: any jump is the method gap.
            let lo = d * (SERIES_THRESHOLD - 1e-12);
            let hi = d * (SERIES_THRESHOLD + 1e-12);
            assert!((s(lo) - s(hi)).norm() < 1e-10);
            assert!((exprel(lo) - exprel(hi)).norm() < 1e-10);
            assert!((f_vbv(lo, lo * 0.3).unwrap() - f_vbv(hi, hi * 0.3).unwrap()).norm() < 1e-10);
            let other = c(0.7, 0.2);
            assert!((f_vbv(lo, other).unwrap() - f_vbv(hi, other).unwrap()).norm() < 1e-10);
            let a = c(1.0, 0.0);
            assert!((g_kernel(a, lo, lo).unwrap() - g_kernel(a, hi, hi).unwrap()).norm() < 1e-10);
            assert!((l_kernel(a, lo, c(0.0, 0.0)).unwrap() - l_kernel(a, hi, c(0.0, 0.0)).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn expm1_small_argument() {
        let z = c(1e-12, -3e-12);
        assert!(rel(expm1(z), z) < 1e-11);
    }

    fn arb_c(scale: f64) -> impl Strategy<Value = C64> {
        (-scale..scale, -scale..scale).prop_map(|(re, im)| C64::new(re, im))
    }

    proptest! {
        #[test]
        fn f_is_symmetric(u in arb_c(2.0), v in arb_c(2.0)) {
            let a = f_vbv(u, v).unwrap();
            let b = f_vbv(v, u).unwrap();
            prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
        }

        #[test]
        fn dual_forms_agree(alpha in arb_c(1.5), u in arb_c(2.0), v in arb_c(2.0)) {
            prop_assume!(distance_to_excluded(v - alpha * u, 64) > 0.5);
            let g1 = g_kernel(alpha, u, v).unwrap();
            let g2 = g_closed(alpha, u, v).unwrap();
            prop_assert!(rel(g1, g2) < 1e-12);
            let h1 = h_kernel(alpha, u, v).unwrap();
            let h2 = h_closed(alpha, u, v).unwrap();
            prop_assert!((h1 - h2).norm() <= 1e-12 * h2.norm().max(1e-3));
            if u.norm() > 1e-2 {
                let l1 = l_kernel(alpha, u, v).unwrap();
                let l2 = l_closed(alpha, u, v).unwrap();
                prop_assert!((l1 - l2).norm() <= 1e-12 * l2.norm().max(1.0) / u.norm().min(1.0));
            }
        }

        #[test]
        fn f_small_arguments_match_bch_expansion(u in arb_c(1e-3), v in arb_c(1e-3)) {
            // f = 1/2 + (u+v)/12 - uv/24... to second order; check the first-order part.
            let fv = f_vbv(u, v).unwrap();
            let approx = 0.5 + (u + v) / 12.0;
            prop_assert!((fv - approx).norm() < 1e-6);
        }
    }
}
