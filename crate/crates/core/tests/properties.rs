use plateau_core::area::h_area_domain;
use plateau_core::domain::{BoundaryDatum, LenticularDomain, ZetaReport};
use plateau_core::graph::left_graph;
use plateau_core::harness::{compare_areas, make_competitor, BumpSpec};
use plateau_core::heisenberg::{horizontality_residual, lift_left, lift_right, project_right, WPoint};
use plateau_core::ruling::PlateauProblem;
use plateau_core::{Gate, ScalarFn1D};
use proptest::prelude::*;

fn lens() -> LenticularDomain {
    LenticularDomain::symmetric_quadratic(2.0, 0.25).unwrap()
}

/// `φ1 = a·s(2 − s)`, `φ2 = b·s(2 − s)`; `ζ = 9·max(|a|, |b|)`.
fn problem(a: f64, b: f64) -> PlateauProblem {
    let q = |k: f64| ScalarFn1D::polynomial(vec![0.0, 2.0 * k, -k], 2.0).unwrap();
    PlateauProblem::new(lens(), BoundaryDatum::new(q(a), q(b))).unwrap()
}

fn amplitude() -> impl Strategy<Value = f64> {
    -0.004..0.004f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn zeta_scales_linearly(a in amplitude(), b in amplitude(), k in 0.0..4.0f64) {
        let p = problem(a, b);
        let q = PlateauProblem::new(lens(), p.datum().scaled(k)).unwrap();
        let (z1, z2) = (p.zeta().zeta, q.zeta().zeta);
        prop_assert!((z2 - k * z1).abs() <= 1e-12 * (1.0 + z2));
    }

    #[test]
    fn gates_are_nested(gs in 0.0..2.0f64, gl in 0.0..2.0f64, ps in 0.0..1.0f64, pl in 0.0..1.0f64) {
        let z = ZetaReport::from_norms(gs, gl, ps, pl);
        prop_assert!(!z.passes(Gate::Right) || z.passes(Gate::Left));
        prop_assert!(!z.passes(Gate::Left) || z.passes(Gate::Interp));
    }

    #[test]
    fn rulings_are_horizontal(a in amplitude(), b in amplitude(), s in 0.01..1.99f64, h in 0.0..1.0f64) {
        let p = problem(a, b);
        let lam = p.solve_lambda_at(s).unwrap();
        let chord = p.p2(lam).sub(&p.p1(s));
        prop_assert!(horizontality_residual(p.rho(h, s).unwrap(), chord) <= 1e-11);
    }

    #[test]
    fn left_and_right_graphs_agree(a in amplitude(), b in amplitude(), s in 0.05..1.95f64, f in 0.05..0.95f64) {
        let p = problem(a, b);
        let d = p.domain();
        let y = d.gamma1().value(s) + f * (d.gamma2().value(s) - d.gamma1().value(s));
        let l = p.invert_left(y, s).unwrap();
        let q = lift_left(WPoint::new(y, s), l.u);
        let w = project_right(q);
        let r = p.invert_right(w.y, w.t).unwrap();
        prop_assert!((r.u - l.u).abs() <= 1e-12);
        prop_assert!(lift_right(w, r.u).max_dist(&q) <= 1e-12);
        prop_assert!((r.s - l.s).abs() <= 1e-9 && (r.h - l.h).abs() <= 1e-9);
    }

    #[test]
    fn area_is_at_least_lebesgue(a in amplitude(), b in amplitude()) {
        let p = problem(a, b);
        let u = left_graph(&p, 33, 33).unwrap();
        let area = h_area_domain(p.domain(), &u).unwrap();
        prop_assert!(area.area >= area.lebesgue);
        prop_assert!(area.excess >= 0.0);
    }

    #[test]
    fn zero_perturbation_is_an_equality_case(a in amplitude(), y0 in -0.05..0.05f64, t0 in 0.8..1.2f64) {
        let p = problem(a, 0.0);
        let u = left_graph(&p, 33, 33).unwrap();
        let v = make_competitor(p.domain(), &u, &BumpSpec::new((y0, t0), (0.08, 0.3), 1.0), 0.0).unwrap();
        let r = compare_areas(p.domain(), &u, &v).unwrap();
        prop_assert_eq!(r.margin, 0.0);
        prop_assert_eq!(r.sup_diff, 0.0);
    }
}

#[test]
fn flat_family_is_trivial() {
    let p = problem(0.0, 0.0);
    let u = left_graph(&p, 65, 65).unwrap();
    assert!(u.values.iter().all(|&v| v == 0.0));
    for k in 0..=20 {
        let s = 0.1 * k as f64;
        assert!((p.solve_lambda_at(s).unwrap() - s).abs() <= 1e-15);
    }
}
