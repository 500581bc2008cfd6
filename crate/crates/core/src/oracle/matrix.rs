// SPDX-License-Identifier: Apache-2.0

//! Matrix representations and the exponentials that go with them.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::AlgebraElement;
use crate::algebra::AlgebraSpec;
use crate::closed_form::ClosedForm;
use crate::error::{Error, Result};

type Mat = DMatrix<C64>;

/// Images of `X, Y, Z, I` and the spec they realise.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRep {
    pub name: String,
    pub images: [Mat; 4],
    pub dim: usize,
    pub spec: AlgebraSpec,
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(i, j)] = C64::new(1.0, 0.0);
    m
}

fn comm(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

impl MatrixRep {
    /// Image of a coefficient vector on `(X, Y, Z, I)`.
    pub fn image(&self, coeffs: &[C64; 4]) -> Mat {
        let mut out = Mat::zeros(self.dim, self.dim);
        for (k, im) in coeffs.iter().zip(&self.images) {
            out += im * *k;
        }
        out
    }

    /// Largest deviation of the image commutators from `spec`.
    pub fn bracket_defect(&self, spec: &AlgebraSpec) -> f64 {
        let [x, y, z, i] = &self.images;
        let want = [
            (comm(x, y), [spec.u, spec.v, C64::new(0.0, 0.0), spec.c]),
            (comm(y, z), [C64::new(0.0, 0.0), spec.w, spec.z, spec.d]),
            (comm(x, z), [spec.m, spec.n, spec.p, spec.e]),
        ];
        let mut worst: f64 = 0.0;
        for (got, coeffs) in want {
            worst = worst.max((got - self.image(&coeffs)).norm());
        }
        for a in [x, y, z] {
            worst = worst.max(comm(a, i).norm());
        }
        worst
    }

    /// Rank of the four images as vectors.
    pub fn rank(&self) -> usize {
        let cols: Vec<_> = self.images.iter().map(|m| Mat::from_column_slice(m.len(), 1, m.as_slice())).collect();
        let a = Mat::from_fn(self.dim * self.dim, 4, |r, c| cols[c][(r, 0)]);
        a.rank(1e-12)
    }
}

/// Heisenberg algebra in 3x3: `X = c E12`, `Y = E23`, `I = E13`, `Z` the identity.
pub fn heisenberg3(c: C64) -> MatrixRep {
    let n = 3;
    let images = [unit(n, 0, 1) * c, unit(n, 1, 2), Mat::identity(n, n), unit(n, 0, 2)];
    let spec = AlgebraSpec { c, ..Default::default() };
    MatrixRep { name: "heisenberg3".into(), images, dim: n, spec }
}

/// Any central-only spec in 4x4.
///
/// Elements `[[0, x^T, t], [0, 0, y], [0, 0, 0]]` with `x, y` in C^2 bracket
/// to `(x.y' - x'.y) E14`; `X`, `Y`, `Z` are chosen to produce `c`, `d`, `e`.
/// `Z` carries an extra identity so the images stay independent.
pub fn heisenberg4(c: C64, d: C64, e: C64) -> MatrixRep {
    let n = 4;
    let one = C64::new(1.0, 0.0);
    let elem = |x: [C64; 2], y: [C64; 2]| {
        let mut m = Mat::zeros(n, n);
        m[(0, 1)] = x[0];
        m[(0, 2)] = x[1];
        m[(1, 3)] = y[0];
        m[(2, 3)] = y[1];
        m
    };
    let zero = C64::new(0.0, 0.0);
    let images = [
        elem([one, zero], [zero, zero]),
        elem([zero, one], [c, zero]),
        elem([zero, zero], [e, d]) + Mat::identity(n, n),
        unit(n, 0, 3),
    ];
    let spec = AlgebraSpec { c, d, e, ..Default::default() };
    MatrixRep { name: "heisenberg4".into(), images, dim: n, spec }
}

/// `X = lm L_{-k}`, `Y = l0 L_0`, `Z = lk L_k` for `k = +-1` in the
/// fundamental 2x2 representation of the restriction to `L_{-1}, L_0, L_1`,
/// with `[L_j, L_k] = (k - j) L_{j+k}`. The central element maps to zero.
pub fn sl2_virasoro(k: i32, lm: C64, l0: C64, lk: C64) -> Result<MatrixRep> {
    let n = 2;
    let l_minus = unit(n, 0, 1);
    let l_plus = -unit(n, 1, 0);
    let mut l_zero = Mat::zeros(n, n);
    l_zero[(0, 0)] = C64::new(-0.5, 0.0);
    l_zero[(1, 1)] = C64::new(0.5, 0.0);
    let (a, b) = match k {
        1 => (l_minus, l_plus),
        -1 => (l_plus, l_minus),
        _ => return Err(Error::InvalidArgument(format!("sl2 representation needs k = +-1, got {k}"))),
    };
    let kf = k as f64;
    let y_scale = if l0 == C64::new(0.0, 0.0) { C64::new(1.0, 0.0) } else { l0 };
    let spec = AlgebraSpec {
        u: kf * y_scale,
        z: kf * y_scale,
        n: 2.0 * kf * lm * lk / y_scale,
        ..Default::default()
    };
    Ok(MatrixRep {
        name: format!("sl2_virasoro_k{k}"),
        images: [a * lm, l_zero * y_scale, b * lk, Mat::zeros(n, n)],
        dim: n,
        spec,
    })
}

/// Representations shipped with the crate, each tied to a sample spec.
pub fn builtin_reps() -> Vec<MatrixRep> {
    let r = |x: f64| C64::new(x, 0.0);
    vec![
        heisenberg3(r(1.0)),
        heisenberg4(r(0.3), r(-0.2), r(0.5)),
        sl2_virasoro(1, r(0.1), r(0.2), r(0.1)).expect("k = 1"),
        sl2_virasoro(-1, r(0.1), r(0.2), r(0.1)).expect("k = -1"),
    ]
}

/// A representation realising `spec`, when one of the built-in families fits.
pub fn rep_for_spec(spec: &AlgebraSpec) -> Option<MatrixRep> {
    let tol = 1e-14 * spec.max_modulus().max(1.0);
    let zero = |x: C64| x.norm() <= tol;
    let AlgebraSpec { u, v, c, w, z, d, m, n, p, e } = *spec;
    if [u, v, w, z, m, n, p].into_iter().all(zero) {
        return Some(heisenberg4(c, d, e));
    }
    // Restriction to L_{-1}, L_0, L_1 with Y = u L_0 and X = L_{-1}.
    if [v, c, w, d, m, p, e].into_iter().all(zero) && (u - z).norm() <= tol && !zero(u) {
        let lk = n * u * 0.5;
        let mut rep = sl2_virasoro(1, C64::new(1.0, 0.0), u, lk).ok()?;
        rep.spec = *spec;
        return Some(rep);
    }
    None
}

/// `exp(M)` (Padé scaling and squaring).
pub fn matrix_exp(m: &Mat) -> Mat {
    m.exp()
}

fn eigenvalues(m: &Mat) -> Vec<C64> {
    let t = m.clone().schur().unpack().1;
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Principal logarithm by inverse scaling and squaring.
///
/// Square roots (Denman-Beavers) bring `M` within 0.25 of the identity,
/// the Mercator series finishes, and the result is scaled back.
pub fn matrix_log_near_identity(m: &Mat) -> Result<Mat> {
    let n = m.nrows();
    for ev in eigenvalues(m) {
        if ev.norm() < 1e-300 || (ev.im.abs() <= 1e-14 * ev.norm() && ev.re < 0.0) {
            return Err(Error::NotNearIdentity(format!("eigenvalue {ev} has no principal logarithm")));
        }
    }
    let id = Mat::identity(n, n);
    let mut a = m.clone();
    let mut halvings = 0;
    while (&a - &id).norm() >= 0.25 {
        if halvings >= 64 {
            return Err(Error::NotNearIdentity("square roots did not approach the identity".into()));
        }
        a = sqrt_db(&a)?;
        halvings += 1;
    }
    let e = &a - &id;
    let mut term = e.clone();
    let mut out = e.clone();
    for k in 2..200 {
        term = &term * &e;
        let add = &term * C64::new(if k % 2 == 0 { -1.0 } else { 1.0 } / k as f64, 0.0);
        let small = add.norm() <= 1e-18 * out.norm().max(1e-300);
        out += add;
        if small {
            break;
        }
    }
    Ok(out * C64::new(2f64.powi(halvings), 0.0))
}

fn sqrt_db(a: &Mat) -> Result<Mat> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = Mat::identity(n, n);
    for _ in 0..100 {
        let yi = y.clone().try_inverse().ok_or_else(|| Error::NotNearIdentity("singular square-root iterate".into()))?;
        let zi = z.clone().try_inverse().ok_or_else(|| Error::NotNearIdentity("singular square-root iterate".into()))?;
        let y_next = (&y + zi) * C64::new(0.5, 0.0);
        let z_next = (&z + yi) * C64::new(0.5, 0.0);
        let delta = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if delta <= 1e-16 * y.norm() {
            return Ok(y);
        }
    }
    Ok(y)
}

/// `|| e^X e^Y e^Z - exp(A X + B Y + C Z + D I) ||_F` in `rep`
/// (`e^X e^Z` on the left for a two-factor closed form).
pub fn verify_matrix(rep: &MatrixRep, cf: &ClosedForm) -> Result<f64> {
    let defect = rep.bracket_defect(&cf.spec);
    if defect > 1e-12 * cf.spec.max_modulus().max(1.0) {
        return Err(Error::RepSpecMismatch(defect));
    }
    let [x, y, z, _] = &rep.images;
    let lhs = if cf.two_factor {
        matrix_exp(x) * matrix_exp(z)
    } else {
        matrix_exp(x) * matrix_exp(y) * matrix_exp(z)
    };
    let rhs = matrix_exp(&rep.image(&cf.coeffs()));
    Ok((lhs - rhs).norm())
}

/// Least-squares coefficients of `log(M)` on the representation images.
///
/// Components along a zero image come back as zero.
pub fn extract_coefficients(rep: &MatrixRep, m: &Mat) -> Result<AlgebraElement> {
    let l = matrix_log_near_identity(m)?;
    let rows = rep.dim * rep.dim;
    let a = Mat::from_fn(rows, 4, |r, c| rep.images[c].as_slice()[r]);
    let b = Mat::from_column_slice(rows, 1, l.as_slice());
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-12)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    Ok(AlgebraElement::new(sol[0], sol[1], sol[2], sol[3]))
}
