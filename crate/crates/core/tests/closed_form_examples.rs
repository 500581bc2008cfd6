// SPDX-License-Identifier: Apache-2.0

use bch_core::oracle::{sl2_virasoro, triple_product_series, verify_matrix, StructureAlgebra};
use bch_core::virasoro::{explicit_coefficients, explicit_lambda0_zero, virasoro_spec};
use bch_core::*;

type C = Complex64;

fn r(x: f64) -> C {
    C::new(x, 0.0)
}

fn gap(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn sl2_product_matches_explicit_formula_and_matrices() {
    let vc = virasoro_compose(1, r(0.1), r(0.2), r(0.1), r(0.0)).unwrap();
    assert!(vc.discrepancy < 1e-10);
    assert_eq!(vc.c_k, r(0.0));
    let rep = sl2_virasoro(1, r(0.1), r(0.2), r(0.1)).unwrap();
    for cf in &vc.closed_forms {
        assert!(verify_matrix(&rep, cf).unwrap() < 1e-10);
    }
}

#[test]
fn central_charge_term_at_k2_matches_series() {
    let (lm, l0, lk) = (r(0.05), r(0.1), r(0.05));
    let vc = virasoro_compose(2, lm, l0, lk, r(1.0)).unwrap();
    let truth = triple_product_series(&StructureAlgebra::from_spec(&vc.spec), 12).unwrap();
    assert!((vc.closed_form.d - truth.coeffs[3]).norm() < 1e-9);
    assert!((vc.explicit[3] - truth.coeffs[3]).norm() < 1e-9);
    assert!(truth.coeffs[3].norm() > 1e-5);
}

#[test]
fn lambda0_limit_is_continuous() {
    // The n parameter grows like 1/λ0, so λ0 cannot shrink far below the
    // classification tolerance; check that the gap to the limit shrinks linearly.
    for k in [1, 2] {
        let (at_zero, _) = explicit_lambda0_zero(k, r(0.1), r(0.2), r(1.0));
        let gaps: Vec<f64> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&l0| {
                let near = virasoro_compose(k, r(0.1), r(l0), r(0.2), r(1.0)).unwrap();
                let (explicit_near, _) = explicit_coefficients(k, r(0.1), r(l0), r(0.2), r(1.0));
                assert!(gap(&near.l_basis(&near.closed_form), &explicit_near) < 1e-8, "k = {k}");
                gap(&explicit_near, &at_zero)
            })
            .collect();
        assert!(gaps[2] < 1e-3, "k = {k}: {gaps:?}");
        for w in gaps.windows(2) {
            let ratio = w[0] / w[1];
            assert!((8.0..12.0).contains(&ratio), "k = {k}: {gaps:?}");
        }
    }
}

#[test]
fn lambda0_zero_uses_the_two_factor_limit() {
    let vc = virasoro_compose(2, r(0.05), r(0.0), r(0.04), r(1.0)).unwrap();
    assert!(vc.closed_form.two_factor);
    assert!(vc.discrepancy < 1e-8);
    assert!((vc.c_k - r(0.05 * 0.04 / 24.0 * 12.0)).norm() < 1e-15);
    let rep = sl2_virasoro(1, r(0.2), r(0.0), r(-0.1)).unwrap();
    let vc = virasoro_compose(1, r(0.2), r(0.0), r(-0.1), r(0.0)).unwrap();
    assert!(verify_matrix(&rep, &vc.closed_form).unwrap() < 1e-10);
}

#[test]
fn two_factor_limit_reduces_to_vbv_without_y() {
    // [X, Y] = [Y, Z] = 0 and n = 0: e^X e^Z only sees [X, Z] = mX + pZ + eI.
    let spec = AlgebraSpec { m: r(0.3), p: r(-0.2), e: r(0.5), ..Default::default() };
    let lim = compose2_limit(&spec).unwrap();
    let (cx, cz, ci) = compose2_vbv(spec.m, spec.p, spec.e).unwrap();
    assert!(gap(&lim.coeffs(), &[cx, r(0.0), cz, ci]) < 1e-10);
}

#[test]
fn two_factor_limit_on_virasoro_spec() {
    for k in [1, 2, 3] {
        let spec = virasoro_spec(k, r(0.15), r(0.0), r(-0.1), r(1.0)).unwrap();
        let lim = compose2_limit(&spec).unwrap();
        let (want, _) = explicit_lambda0_zero(k, r(0.15), r(-0.1), r(1.0));
        assert!(gap(&[lim.a * 0.15, lim.b, lim.c * -0.1, lim.d], &want) < 1e-8);
    }
}

#[test]
fn central_only_xz_commutator() {
    let spec = AlgebraSpec { e: r(0.6), ..Default::default() };
    let cf = &compose3(&spec).unwrap()[0];
    assert!(gap(&cf.coeffs(), &[r(1.0), r(1.0), r(1.0), r(0.3)]) < 1e-15);
    let truth = triple_product_series(&StructureAlgebra::from_spec(&spec), 8).unwrap();
    assert!(gap(&cf.coeffs(), &truth.coeffs) < 1e-15);
}

#[test]
fn t4_both_roots_match_series_oracle() {
    for seed in 0..25 {
        let spec = sample_spec(TypeTag::T4, seed, 0.05).unwrap();
        let truth = triple_product_series(&StructureAlgebra::from_spec(&spec), 12).unwrap();
        let forms = compose3(&spec).unwrap();
        assert_eq!(forms.len(), 2);
        for cf in forms {
            assert!(gap(&cf.coeffs(), &truth.coeffs) < 1e-9, "seed {seed} {:?}", cf.alpha.branch);
        }
    }
}

#[test]
fn t3a_alpha_formula() {
    let spec = sample_spec(TypeTag::T3a, 5, 0.5).unwrap();
    let forms = compose3(&spec).unwrap();
    assert_eq!(forms.len(), 1);
    assert!((forms[0].alpha.alpha - (spec.m + spec.u) / spec.u).norm() < 1e-15);
}

#[test]
fn errors_propagate() {
    let bad = AlgebraSpec { u: r(1.0), w: r(1.0), ..Default::default() };
    assert!(matches!(compose3(&bad), Err(Error::JacobiViolation { .. })));
    let degenerate = AlgebraSpec { m: r(0.5), p: r(0.5), n: r(1.0), ..Default::default() };
    assert_eq!(compose3(&degenerate), Err(Error::DegenerateDenominator("m - p")));
}
