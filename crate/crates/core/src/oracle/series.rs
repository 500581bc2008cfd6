// SPDX-License-Identifier: Apache-2.0

//! Truncated BCH series.
//!
//! Homogeneous components `Z_n` of `log(e^a e^b)` from the recursion
//!
//! ```text
//! Z_1 = a + b
//! (n+1) Z_{n+1} = 1/2 [a - b, Z_n]
//!               + sum_{p >= 1, 2p <= n} B_{2p}/(2p)! sum_{k_1+..+k_{2p} = n} [Z_{k_1}, [.., [Z_{k_2p}, a + b]..]]
//! ```
//!
//! with the inner sums memoised as `S(m, q)`. Only brackets are needed, so it
//! runs equally in the structure-constant algebra and on matrices.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{bracket, AlgebraElement, StructureAlgebra};
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 20;

// B_2, B_4, ..., B_20 divided by (2p)!.
const B_OVER_FACT: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
];

/// The linear structure the series needs.
pub trait LieVector: Clone {
    fn zero_like(&self) -> Self;
    /// `self += k x`.
    fn axpy(&mut self, k: C64, x: &Self);
    fn size(&self) -> f64;
}

impl LieVector for AlgebraElement {
    fn zero_like(&self) -> Self {
        AlgebraElement::default()
    }
    fn axpy(&mut self, k: C64, x: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(x.coeffs) {
            *a += k * b;
        }
    }
    fn size(&self) -> f64 {
        self.norm()
    }
}

impl LieVector for DMatrix<C64> {
    fn zero_like(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }
    fn axpy(&mut self, k: C64, x: &Self) {
        *self += x * k;
    }
    fn size(&self) -> f64 {
        self.norm()
    }
}

/// `log(e^a e^b)` through degree `order`, for any bracket.
pub fn bch_generic<T: LieVector>(a: &T, b: &T, order: usize, br: impl Fn(&T, &T) -> T) -> Result<T> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::OrderOutOfRange(order));
    }
    let one = C64::new(1.0, 0.0);
    let mut sum_ab = a.clone();
    sum_ab.axpy(one, b);
    let mut diff_ab = a.clone();
    diff_ab.axpy(-one, b);

    // z[n] is the degree-n component; s[m][q] as in the module docs.
    let mut z: Vec<T> = vec![a.zero_like(), sum_ab.clone()];
    let mut s: Vec<Vec<T>> = vec![vec![sum_ab.clone()]];
    for n in 1..order {
        // Extend S to total degree n: S(n, q) for q = 1..=n.
        let mut row = vec![a.zero_like(); n + 1];
        for (q, slot) in row.iter_mut().enumerate().skip(1) {
            for k in 1..=(n + 1 - q) {
                if let Some(prev) = s[n - k].get(q - 1) {
                    let t = br(&z[k], prev);
                    slot.axpy(one, &t);
                }
            }
        }
        s.push(row);

        let mut next = br(&diff_ab, &z[n]);
        let mut acc = a.zero_like();
        acc.axpy(C64::new(0.5, 0.0), &next);
        for p in 1..=n / 2 {
            acc.axpy(C64::new(B_OVER_FACT[p - 1], 0.0), &s[n][2 * p]);
        }
        next = a.zero_like();
        next.axpy(C64::new(1.0 / (n as f64 + 1.0), 0.0), &acc);
        z.push(next);
    }
    let mut out = a.zero_like();
    for zn in &z[1..] {
        out.axpy(one, zn);
    }
    let tail = z.last().map(|t| t.size()).unwrap_or(0.0);
    if tail > 1e-14 * out.size().max(1.0) {
        log::debug!("BCH series: last term at degree {order} has size {tail:.3e}");
    }
    Ok(out)
}

/// `log(e^a e^b)` through degree `order` inside the structure algebra.
pub fn bch_series(alg: &StructureAlgebra, a: &AlgebraElement, b: &AlgebraElement, order: usize) -> Result<AlgebraElement> {
    bch_generic(a, b, order, |x, y| bracket(alg, x, y))
}

/// `log(e^X e^Y e^Z)` through degree `order`, as `[A, B, C, D]`.
pub fn triple_product_series(alg: &StructureAlgebra, order: usize) -> Result<AlgebraElement> {
    let xy = bch_series(alg, &AlgebraElement::x(), &AlgebraElement::y(), order)?;
    bch_series(alg, &xy, &AlgebraElement::z(), order)
}
