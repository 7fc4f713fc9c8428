#![allow(dead_code)]

use proptest::prelude::*;
use symdisperse::root_system::{catalog, ChamberPoint, RootSpace};

/// A catalog space of rank ≤ `max_rank`, by index.
pub fn space(max_rank: usize) -> impl Strategy<Value = RootSpace> {
    let spaces = catalog(max_rank);
    (0..spaces.len()).prop_map(move |i| spaces[i].clone())
}

/// A closed-chamber point of `rs` with `‖H‖₀ = radius`, direction drawn
/// through coweight coordinates.
pub fn chamber_point(rs: &RootSpace, weights: &[f64], radius: f64) -> ChamberPoint {
    let h = rs.from_coweight_coords(&weights[..rs.rank()]);
    let n = rs.norm0(&h);
    if n == 0.0 {
        ChamberPoint::origin(rs.rank())
    } else {
        h.scaled(radius / n)
    }
}

/// Space, chamber point with `‖H‖₀ ≤ max_norm`.
pub fn space_and_point(max_rank: usize, max_norm: f64) -> impl Strategy<Value = (RootSpace, ChamberPoint)> {
    (
        space(max_rank),
        prop::collection::vec(0.0..1.0f64, max_rank),
        0.0..=max_norm,
    )
        .prop_map(|(rs, w, r)| {
            let h = chamber_point(&rs, &w, r);
            (rs, h)
        })
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
