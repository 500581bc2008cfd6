// SPDX-License-Identifier: Apache-2.0

//! Complex polynomial roots from companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Evaluate `sum_k coeffs[k] y^k` and its derivative by Horner's rule.
pub fn horner(coeffs: &[C64], y: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        dp = dp * y + p;
        p = p * y + a;
    }
    (p, dp)
}

/// All roots of `sum_k coeffs[k] y^k` (ascending powers, leading coefficient nonzero).
///
/// Eigenvalues of the companion matrix, each polished by a few Newton steps on
/// the original coefficients.
pub fn roots(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    if deg == 1 {
        return vec![-coeffs[0] / lead];
    }
    let mut comp = DMatrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let (_, t) = comp.schur().unpack();
    (0..deg)
        .map(|i| {
            let mut y = t[(i, i)];
            for _ in 0..4 {
                let (p, dp) = horner(coeffs, y);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                y -= step;
            }
            y
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn quadratic_matches_formula() {
        // y^2 - 3y + 2 = (y-1)(y-2)
        let mut r = roots(&[c(2.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - 1.0).norm() < 1e-14);
        assert!((r[1] - 2.0).norm() < 1e-14);
    }

    #[test]
    fn complex_cubic_roots_reproduce_coefficients() {
        let want = [c(0.3, 1.1), c(-2.0, 0.5), c(1.7, -0.2)];
        // expand (y - r0)(y - r1)(y - r2)
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in want {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let got = roots(&coeffs);
        for r in want {
            assert!(got.iter().any(|g| (g - r).norm() < 1e-12), "missing root {r}");
        }
    }
}
