mod common;

use proptest::prelude::*;
use symdisperse::root_system::{catalog, ChamberPoint, Family, Multiplicity, RootSpace, SpaceName};

use common::{space, space_and_point};

fn positive_root_count(family: Family, l: usize) -> usize {
    match family {
        Family::A => l * (l + 1) / 2,
        Family::B | Family::C => l * l,
        Family::D => l * (l - 1),
    }
}

#[test]
fn dimensions_by_enumeration() {
    for family in Family::ALL {
        for l in family.min_rank()..=6 {
            let rs = RootSpace::build(family, l).unwrap();
            let m = rs.num_positive_roots();
            assert_eq!(m, positive_root_count(family, l), "{family}{l}");
            assert_eq!(rs.n0(), l + m, "{family}{l}");
            assert_eq!(rs.big_n() - rs.n0(), m, "{family}{l}");
        }
    }
}

#[test]
fn rho_is_twice_rho0() {
    for family in Family::ALL {
        for l in family.min_rank()..=6 {
            let rs = RootSpace::build(family, l).unwrap();
            let r = rs.rho(Multiplicity::Complex);
            let r0 = rs.rho(Multiplicity::Normal);
            for (a, b) in r.components().iter().zip(r0.components()) {
                assert_eq!(*a, 2.0 * b, "{family}{l}");
            }
        }
    }
}

#[test]
fn space_names_build_catalog_members() {
    for rs in catalog(3) {
        let name: SpaceName = format!("{}:{}", rs.family(), rs.rank()).parse().unwrap();
        let built = name.build().unwrap();
        assert_eq!(built.positive_roots(), rs.positive_roots());
    }
    assert!("E:6".parse::<SpaceName>().is_err());
    assert!("D:1".parse::<SpaceName>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn delta0_below_exp_two_rho0((rs, h) in space_and_point(6, 20.0)) {
        let rho0 = rs.rho(Multiplicity::Normal);
        let rho = rs.rho(Multiplicity::Complex);
        // logarithms: δ₀ overflows nowhere here, but its ratio to e^{2ρ₀} is the sharp quantity
        let ln_d0 = rs.ln_delta_normal(&h).unwrap();
        prop_assert!(ln_d0 <= 2.0 * rho0.apply(&h) + 1e-12);
        prop_assert!(2.0 * ln_d0 <= 2.0 * rho.apply(&h) + 1e-12);
    }

    #[test]
    fn norm_homogeneity((rs, h) in space_and_point(4, 20.0), s in 0.0..10.0f64) {
        let n = rs.norm0(&h);
        prop_assert!((rs.norm0(&h.scaled(s)) - s * n).abs() <= 1e-13 * (1.0 + s * n));
        prop_assert!((rs.norm_complex(&h) - std::f64::consts::SQRT_2 * n).abs() <= 1e-13 * (1.0 + n));
    }

    #[test]
    fn chamber_points_are_in_chamber((rs, h) in space_and_point(6, 20.0)) {
        prop_assert!(rs.in_chamber(&h));
        prop_assert!(rs.chamber_values(&h).is_ok());
    }

    #[test]
    fn membership_agrees_with_root_values(rs in space(6), coords in prop::collection::vec(-1.0..1.0f64, 6)) {
        let h = ChamberPoint::new(coords[..rs.rank()].to_vec());
        let values = rs.root_values(&h);
        let smallest = values.iter().cloned().fold(f64::INFINITY, f64::min);
        // points within round-off of a wall are decided by the slack, not by sign
        prop_assume!(smallest.abs() > 1e-9);
        prop_assert_eq!(rs.in_chamber(&h), smallest >= 0.0);
    }

    #[test]
    fn folding_preserves_norm(rs in space(4), coords in prop::collection::vec(-5.0..5.0f64, 4)) {
        let h = ChamberPoint::new(coords[..rs.rank()].to_vec());
        let f = rs.fold_into_chamber(&h).unwrap();
        prop_assert!(rs.in_chamber(&f));
        prop_assert!((rs.norm0(&f) - rs.norm0(&h)).abs() <= 1e-12 * (1.0 + rs.norm0(&h)));
    }
}
