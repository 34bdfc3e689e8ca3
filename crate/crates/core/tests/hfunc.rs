use eqmap_core::coefftables::build_c_table;
use eqmap_core::endpoints::*;
use eqmap_core::hfunc::*;
use proptest::prelude::*;

mod common;
use common::{small_even_potential, small_potential};

#[test]
fn gaussian_h_is_one_on_every_route() {
    let table = build_c_table(4).unwrap();
    for x in [0.5, 1.0, 2.0] {
        let ep = uz_jets(&PotentialSpec::gaussian(x).unwrap(), 3, 0).unwrap();
        for h in [h_classical(&ep), h_general(&ep, &table).unwrap(), h_even(&ep).unwrap()] {
            assert_eq!(h.degree(), 0);
            assert!((h.monomial()[0] - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn quartic_h_closed_form() {
    // h = 1 + 4 t (lambda^2 + 2 z) for V = lambda^2/2 + t lambda^4 at x = 1
    let t = 0.01;
    let ep = uz_jets(&PotentialSpec::monomial(1.0, 4, t).unwrap(), 3, 0).unwrap();
    let h = h_even(&ep).unwrap();
    let m = h.monomial();
    assert!((m[0] - (1.0 + 8.0 * t * ep.z)).abs() < 1e-12);
    assert!(m[1].abs() < 1e-12);
    assert!((m[2] - 4.0 * t).abs() < 1e-12);
}

#[test]
fn endpoint_values_match_polynomial() {
    for pot in [PotentialSpec::monomial(1.0, 4, 0.01).unwrap(), PotentialSpec::monomial(1.0, 3, 0.05).unwrap()] {
        let ep = uz_jets(&pot, 2, 0).unwrap();
        let h = h_classical(&ep);
        let v = h_at_endpoints(&ep).unwrap();
        assert!((v.h_plus - h.eval(ep.alpha_plus())).abs() < 1e-10);
        assert!((v.h_minus - h.eval(ep.alpha_minus())).abs() < 1e-10);
        assert!((v.dh_plus - h.derivative_at(ep.alpha_plus())).abs() < 1e-9);
        assert!((v.dh_minus - h.derivative_at(ep.alpha_minus())).abs() < 1e-9);
    }
}

#[test]
fn missing_jets_are_reported() {
    let table = build_c_table(4).unwrap();
    let ep = solve_endpoints_default(&PotentialSpec::new(1.0, [(3, 0.01), (5, 0.001)]).unwrap()).unwrap();
    assert!(h_general(&ep, &table).is_err());
    assert!(h_even(&ep).is_err());
}

#[test]
fn odd_potential_has_no_even_route() {
    let ep = uz_jets(&PotentialSpec::monomial(1.0, 3, 0.02).unwrap(), 2, 0).unwrap();
    assert!(h_even(&ep).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn general_route_matches_classical(pot in small_potential()) {
        let table = build_c_table(4).unwrap();
        let ep = uz_jets(&pot, (pot.degree() - 1).max(4), 0).unwrap();
        let c = h_classical(&ep);
        let g = h_general(&ep, &table).unwrap();
        prop_assert!(g.agrees_with(&c, 1e-9));
        prop_assert!(h_left_variant(&g).agrees_with(&c, 1e-10));
        for m in 0..=4 {
            prop_assert!(verify_residue_representation(&ep, m, 1e-9).unwrap());
        }
    }

    #[test]
    fn even_route_matches_classical(pot in small_even_potential()) {
        let ep = uz_jets(&pot, (pot.degree() - 1).max(3), 0).unwrap();
        let c = h_classical(&ep);
        let e = h_even(&ep).unwrap();
        prop_assert!(e.agrees_with(&c, 1e-9));
        prop_assert!(h_left_variant(&e).agrees_with(&c, 1e-10));
        for m in 0..=3 {
            prop_assert!(verify_even_residue_formula(&ep, m, 1e-8).unwrap());
        }
    }

    #[test]
    fn centered_form_round_trips(coeffs in prop::collection::vec(-2.0f64..2.0, 1..7), c in -1.0f64..1.0) {
        let back = centered_to_monomial(&monomial_to_centered(&coeffs, c), c);
        for (a, b) in coeffs.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
