mod common;

use num_rational::Ratio;
use proptest::prelude::*;
use symdisperse::error::Error;
use symdisperse::estimates::{
    dyadic_grid, fit_loglog_slope, interpolation_exponent, kunze_stein_functional, l2_conservation_check,
    majorant_integral, majorant_radius, sup_norm_dispersive, Exponent, TailStatus,
};
use symdisperse::kernels::ComplexTime;
use symdisperse::root_system::{catalog, Family, Multiplicity, RootSpace};
use symdisperse::spherical::{EstimateConstants, QuadratureSpec};
use symdisperse::strichartz::{ModelSpace, Spectrum};

use common::rel;

fn unit() -> EstimateConstants {
    EstimateConstants::new(1.0, 1.0).unwrap()
}

#[test]
fn functional_slope_and_monotonicity() {
    let spec = QuadratureSpec::default();
    let t = dyadic_grid(1.0, 64.0).unwrap();
    for family_rank in [(Family::A, 1), (Family::A, 2)] {
        let rs = RootSpace::build(family_rank.0, family_rank.1).unwrap();
        let q = 4.0;
        let values: Vec<f64> = t
            .iter()
            .map(|&t| {
                let v = kunze_stein_functional(&rs, q, t, &spec, unit()).unwrap();
                assert_eq!(v.status, TailStatus::Converged);
                v.value
            })
            .collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "{family_rank:?}: {values:?}");
        let slope = fit_loglog_slope(&t, &values).unwrap();
        let want = -(rs.big_n() as f64) * q / 4.0;
        assert!((slope - want).abs() <= 0.01 * want.abs(), "{family_rank:?}: slope {slope} vs {want}");
    }
}

#[test]
fn functional_near_the_critical_exponent() {
    let rs = RootSpace::build(Family::A, 1).unwrap();
    let spec = QuadratureSpec::default();
    let v = kunze_stein_functional(&rs, 2.05, 1.0, &spec, unit()).unwrap();
    assert_eq!(v.status, TailStatus::Converged, "{v:?}");
    assert!(v.value.is_finite() && v.value > 0.0);
    assert!(matches!(
        kunze_stein_functional(&rs, 2.0, 1.0, &spec, unit()),
        Err(Error::Divergent { .. })
    ));
}

#[test]
fn functional_at_fixed_radius() {
    let rs = RootSpace::build(Family::A, 1).unwrap();
    let spec = QuadratureSpec {
        radius: Some(60.0),
        ..Default::default()
    };
    let v = kunze_stein_functional(&rs, 4.0, 1.0, &spec, unit()).unwrap();
    assert_eq!(v.radius, 60.0);
    assert_eq!(v.status, TailStatus::Converged);
}

#[test]
fn majorant_matches_riemann_sum() {
    // A₁, q = 4, a = 1: ∫₀^200 (1+h)³ e^{-h/√2} dh along the single chamber ray
    let rs = RootSpace::build(Family::A, 1).unwrap();
    let rate = rs.rho(Multiplicity::Normal).apply(&rs.from_coweight_coords(&[1.0]))
        / rs.norm0(&rs.from_coweight_coords(&[1.0]));
    let steps = 400_000;
    let dh = 200.0 / steps as f64;
    let riemann: f64 = (0..steps)
        .map(|i| {
            let h = (i as f64 + 0.5) * dh;
            (1.0 + h).powi(3) * (-rate * h).exp() * dh
        })
        .sum();
    let quad = majorant_integral(&rs, 4.0, unit(), 200.0).unwrap();
    assert!(rel(quad.value, riemann) <= 1e-4, "{} vs {riemann}", quad.value);
}

#[test]
fn majorant_finite_above_two() {
    for rs in catalog(3) {
        for q in [2.1, 2.5, 3.0, 4.0, 8.0] {
            let r = majorant_radius(&rs, q, unit());
            let m = majorant_integral(&rs, q, unit(), r).unwrap();
            assert_eq!(m.status, TailStatus::Converged, "{}{} q = {q}: {m:?}", rs.family(), rs.rank());
        }
        let m = majorant_integral(&rs, 2.0, unit(), majorant_radius(&rs, 2.0, unit())).unwrap();
        assert_eq!(m.status, TailStatus::Diverged, "{}{} q = 2: {m:?}", rs.family(), rs.rank());
    }
}

#[test]
fn majorant_growth_at_the_critical_exponent() {
    // without exponential decay the rank-one majorant grows like R^{1+a(1+q/2)}
    let rs = RootSpace::build(Family::A, 1).unwrap();
    for (q, tol) in [(2.0, 0.03), (2.001, 0.1)] {
        let v100 = majorant_integral(&rs, q, unit(), 100.0).unwrap().value;
        let v200 = majorant_integral(&rs, q, unit(), 200.0).unwrap().value;
        let growth = (v200 / v100).log2();
        let want = 1.0 + 1.0 * (1.0 + q / 2.0);
        assert!((growth - want).abs() <= tol, "q = {q}: {growth} vs {want}");
    }
}

#[test]
fn majorant_monotone_in_radius() {
    let rs = RootSpace::build(Family::B, 2).unwrap();
    let mut last = 0.0;
    for r in [1.0, 5.0, 20.0, 80.0] {
        let v = majorant_integral(&rs, 3.0, unit(), r).unwrap().value;
        assert!(v >= last);
        last = v;
    }
}

#[test]
fn l2_conservation() {
    let model = ModelSpace::a1();
    let spec = QuadratureSpec::default();
    let gaussians = [Spectrum::gaussian_width(0.5).unwrap(), Spectrum::gaussian_width(1.5).unwrap()];
    assert!(l2_conservation_check(&model, 0.0, &gaussians, &spec)
        .unwrap()
        .iter()
        .all(|r| *r == 1.0));
    for t in [0.5, 1.0, 2.0, 5.0] {
        for r in l2_conservation_check(&model, t, &gaussians, &spec).unwrap() {
            assert!((r - 1.0).abs() <= 1e-5, "t = {t}: {r}");
        }
    }
}

#[test]
fn l2_conservation_by_quadrature() {
    // a non-Gaussian profile goes through the Bessel quadrature on both sides
    let model = ModelSpace::a1();
    let spec = QuadratureSpec {
        radius: Some(60.0),
        ..Default::default()
    };
    let f = Spectrum::general(9.0, |k| num_complex::Complex64::new(k * k * (-k * k).exp(), 0.0)).unwrap();
    for t in [1.0, 2.0] {
        let r = l2_conservation_check(&model, t, std::slice::from_ref(&f), &spec).unwrap()[0];
        assert!((r - 1.0).abs() <= 1e-5, "t = {t}: {r}");
    }
}

#[test]
fn interpolation_endpoints() {
    let i = interpolation_exponent(3, Exponent::Infinite).unwrap();
    assert_eq!(i.exponent, Ratio::new(3, 2));
    assert_eq!(i.p_theta, Exponent::finite(1, 1));
    assert!(interpolation_exponent(3, Exponent::finite(2, 1)).is_err());
    assert_eq!(interpolation_exponent(2, Exponent::finite(4, 1)).unwrap().exponent, Ratio::new(1, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sup_norm_is_homogeneous(rs in common::space(3), t in 0.1..100.0f64) {
        let a = sup_norm_dispersive(&rs, ComplexTime::schrodinger(t).unwrap()).unwrap();
        let b = sup_norm_dispersive(&rs, ComplexTime::schrodinger(2.0 * t).unwrap()).unwrap();
        prop_assert!(a.argmax.is_origin() && b.argmax.is_origin());
        let factor = 2f64.powf(-(rs.big_n() as f64) / 2.0);
        prop_assert!(rel(b.value, factor * a.value) <= 1e-13);
    }

    #[test]
    fn interpolation_exponent_increases_with_q(
        n in 1usize..8,
        (num, den) in (1i64..200, 1i64..50).prop_filter("q > 2", |(a, b)| *a > 2 * *b),
        bump in 1i64..50,
    ) {
        let q1 = Exponent::finite(num, den);
        let q2 = Exponent::finite(num * bump + 1, den * bump);
        let e1 = interpolation_exponent(n, q1).unwrap();
        let e2 = interpolation_exponent(n, q2).unwrap();
        let inf = interpolation_exponent(n, Exponent::Infinite).unwrap();
        prop_assert!(e1.exponent < e2.exponent);
        prop_assert!(e2.exponent < inf.exponent);
        prop_assert_eq!(inf.exponent, Ratio::new(n as i64, 2));
        prop_assert_eq!(e1.q_theta, q1);
        prop_assert_eq!(e1.p_theta, q1.conjugate());
    }
}
