#![allow(dead_code)]

use eqmap_core::endpoints::{one_cut_certificate, solve_endpoints_default, PotentialSpec};
use eqmap_core::hfunc::h_classical;
use proptest::prelude::*;

pub fn is_one_cut(pot: &PotentialSpec) -> bool {
    match solve_endpoints_default(pot) {
        Ok(ep) => one_cut_certificate(&h_classical(&ep), ep.alpha_minus(), ep.alpha_plus()),
        Err(_) => false,
    }
}

/// Degree-`d` potentials with `|t_j| < 0.004` below the top and a positive
/// top coefficient for even `d`, kept only if they are one-cut.
pub fn small_potential() -> impl Strategy<Value = PotentialSpec> {
    (2usize..=6, prop::collection::vec(-0.004f64..0.004, 6), 0.005f64..0.02, 0.5f64..1.5).prop_map(|(d, t, lead, x)| {
        let mut coeffs: Vec<(usize, f64)> = (1..=d).map(|j| (j, t[j - 1])).collect();
        if d % 2 == 0 {
            coeffs[d - 1].1 = lead;
        }
        PotentialSpec::new(x, coeffs).unwrap()
    })
    .prop_filter("one-cut", is_one_cut)
}

pub fn small_even_potential() -> impl Strategy<Value = PotentialSpec> {
    (prop::collection::vec(-0.004f64..0.004, 2), 0.005f64..0.02, 0.5f64..1.5)
        .prop_map(|(t, lead, x)| PotentialSpec::new(x, [(2, t[0]), (4, t[1]), (6, lead)]).unwrap())
}

pub fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(1.0)
}
