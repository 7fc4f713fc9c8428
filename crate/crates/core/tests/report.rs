use proptest::prelude::*;
use symdisperse::estimates::{dyadic_grid, sup_norm_dispersive, Check, EstimateReport, TailStatus};
use symdisperse::kernels::ComplexTime;
use symdisperse::report::{emit_report, parse_report, Format};
use symdisperse::root_system::{Family, RootSpace};

fn sup_norm_scan() -> EstimateReport {
    let rs = RootSpace::build(Family::A, 2).unwrap();
    let t = dyadic_grid(1.0, 128.0).unwrap();
    let v = t
        .iter()
        .map(|&t| sup_norm_dispersive(&rs, ComplexTime::schrodinger(t).unwrap()).unwrap().value)
        .collect();
    let n = rs.big_n() as f64;
    let n0 = rs.n0() as f64;
    EstimateReport::new("sup_norm", t, v, -n0 / 2.0, -n / 2.0, Check::MatchesFormula, 1e-3, None, TailStatus::Converged)
        .unwrap()
}

#[test]
fn identical_scans_give_identical_bytes() {
    for format in [Format::Json, Format::Csv] {
        let a = emit_report(&sup_norm_scan(), format).unwrap();
        let b = emit_report(&sup_norm_scan(), format).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.last(), Some(&b'\n'));
    }
}

#[test]
fn empty_grid_fails_at_construction() {
    assert!(EstimateReport::new("x", vec![], vec![], -1.0, -1.0, Check::MatchesFormula, 1e-3, None, TailStatus::Converged)
        .is_err());
}

#[test]
fn scan_report_passes() {
    let r = sup_norm_scan();
    assert!(r.pass);
    assert!((r.fitted_slope + 4.0).abs() <= 1e-3);
}

fn report() -> impl Strategy<Value = EstimateReport> {
    (
        prop::collection::vec(1e-3..1e3f64, 2..12),
        -5.0..0.0f64,
        1e-6..1e6f64,
        prop::sample::select(vec![Check::MatchesFormula, Check::MatchesClaimed, Check::DecaysAtLeastClaimed]),
        prop::sample::select(vec![TailStatus::Converged, TailStatus::Diverged, TailStatus::Inconclusive]),
        prop::option::of(1.0..2000.0f64),
    )
        .prop_map(|(mut t, slope, c, check, status, radius)| {
            t.sort_by(f64::total_cmp);
            t.dedup_by(|a, b| *a <= *b * (1.0 + 1e-9));
            if t.len() < 2 {
                t.push(t[0] * 2.0);
            }
            let v = t.iter().map(|x| c * x.powf(slope)).collect();
            EstimateReport::new("functional", t, v, slope + 0.5, slope, check, 0.01, radius, status).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn roundtrip_is_stable(r in report()) {
        let bytes = emit_report(&r, Format::Json).unwrap();
        let back = parse_report(&bytes).unwrap();
        // one pass rounds to 12 digits; after that emission is a fixed point
        prop_assert_eq!(emit_report(&back, Format::Json).unwrap(), bytes);
        prop_assert_eq!(&back.quantity, &r.quantity);
        prop_assert_eq!(back.pass, r.pass);
        prop_assert_eq!(back.tail_status, r.tail_status);
        prop_assert_eq!(back.truncation_radius.is_some(), r.truncation_radius.is_some());
        for (x, y) in back.values.iter().zip(&r.values) {
            prop_assert!((x - y).abs() <= 1e-11 * y.abs());
        }
    }
}
