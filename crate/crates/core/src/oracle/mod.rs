// SPDX-License-Identifier: Apache-2.0

//! Ground truth for the closed forms.
//!
//! Two engines that share nothing with the closed-form code path: the BCH
//! series summed term by term inside the structure-constant algebra, and
//! dense matrix exponentials in explicit representations.

mod matrix;
mod series;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::algebra::AlgebraSpec;

pub use matrix::{
    builtin_reps, extract_coefficients, heisenberg3, heisenberg4, matrix_exp, matrix_log_near_identity, rep_for_spec,
    sl2_virasoro, verify_matrix, MatrixRep,
};
pub use series::{bch_generic, bch_series, triple_product_series, LieVector, MAX_ORDER};

/// An element `a X + b Y + c Z + d I`, stored as `[a, b, c, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct AlgebraElement {
    pub coeffs: [C64; 4],
}

impl AlgebraElement {
    pub fn new(x: C64, y: C64, z: C64, i: C64) -> Self {
        AlgebraElement { coeffs: [x, y, z, i] }
    }

    pub fn basis(k: usize) -> Self {
        let mut coeffs = [C64::new(0.0, 0.0); 4];
        coeffs[k] = C64::new(1.0, 0.0);
        AlgebraElement { coeffs }
    }

    pub fn x() -> Self {
        Self::basis(0)
    }
    pub fn y() -> Self {
        Self::basis(1)
    }
    pub fn z() -> Self {
        Self::basis(2)
    }
    pub fn i() -> Self {
        Self::basis(3)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        self * C64::new(-1.0, 0.0)
    }
}

impl Mul<C64> for AlgebraElement {
    type Output = Self;
    fn mul(mut self, k: C64) -> Self {
        for a in &mut self.coeffs {
            *a *= k;
        }
        self
    }
}

/// Bracket table on the ordered basis `(X, Y, Z, I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureAlgebra {
    pub table: [[[C64; 4]; 4]; 4],
}

impl StructureAlgebra {
    pub fn from_spec(spec: &AlgebraSpec) -> Self {
        let zero = C64::new(0.0, 0.0);
        let mut table = [[[zero; 4]; 4]; 4];
        let xy = [spec.u, spec.v, zero, spec.c];
        let yz = [zero, spec.w, spec.z, spec.d];
        let xz = [spec.m, spec.n, spec.p, spec.e];
        for (i, j, v) in [(0, 1, xy), (1, 2, yz), (0, 2, xz)] {
            table[i][j] = v;
            table[j][i] = v.map(|c| -c);
        }
        StructureAlgebra { table }
    }

    /// Largest Jacobi residual over all basis triples.
    pub fn jacobi_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let (a, b, c) = (AlgebraElement::basis(i), AlgebraElement::basis(j), AlgebraElement::basis(k));
                    let r = bracket(self, &a, &bracket(self, &b, &c))
                        + bracket(self, &b, &bracket(self, &c, &a))
                        + bracket(self, &c, &bracket(self, &a, &b));
                    worst = worst.max(r.norm());
                }
            }
        }
        worst
    }
}

/// Bilinear extension of the bracket table.
pub fn bracket(alg: &StructureAlgebra, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let mut out = [C64::new(0.0, 0.0); 4];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let k = a.coeffs[i] * b.coeffs[j] - a.coeffs[j] * b.coeffs[i];
            if k == C64::new(0.0, 0.0) {
                continue;
            }
            for (o, t) in out.iter_mut().zip(alg.table[i][j]) {
                *o += k * t;
            }
        }
    }
    AlgebraElement { coeffs: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sample_spec, Param, TypeTag};

    #[test]
    fn bracket_reads_the_table() {
        let spec = sample_spec(TypeTag::T4, 1, 0.5).unwrap();
        let alg = StructureAlgebra::from_spec(&spec);
        let xy = bracket(&alg, &AlgebraElement::x(), &AlgebraElement::y());
        assert_eq!(xy.coeffs, [spec.u, spec.v, C64::new(0.0, 0.0), spec.c]);
        let a = AlgebraElement::new(C64::new(0.3, 0.1), C64::new(-1.0, 0.0), C64::new(0.2, 0.0), C64::new(5.0, 0.0));
        assert_eq!(bracket(&alg, &a, &a).norm(), 0.0);
        assert_eq!(bracket(&alg, &AlgebraElement::i(), &a).norm(), 0.0);
        assert_eq!(bracket(&alg, &a, &AlgebraElement::i()).norm(), 0.0);
    }

    #[test]
    fn sampled_algebras_satisfy_jacobi() {
        for tag in TypeTag::ALL {
            for seed in 0..20 {
                let alg = StructureAlgebra::from_spec(&sample_spec(tag, seed, 1.0).unwrap());
                assert!(alg.jacobi_defect() < 1e-13, "{tag} {seed}");
            }
        }
    }

    #[test]
    fn jacobi_violation_is_visible() {
        let spec = AlgebraSpec::default().with(Param::U, 1.0).with(Param::W, 1.0);
        assert!(StructureAlgebra::from_spec(&spec).jacobi_defect() > 0.5);
    }
}
