use eqmap_core::endpoints::*;
use eqmap_core::genfun::*;

#[test]
fn quartic_reference_formula_across_t() {
    for i in 0..=13 {
        let t4 = -0.015 + 0.005 * i as f64;
        let e = e1_value(&PotentialSpec::monomial(1.0, 4, t4).unwrap()).unwrap();
        let reference = -(2.0 - e.z).ln() / 12.0;
        assert!((e.value - reference).abs() < 1e-10, "t4={t4}");
        assert!((e1_monomial(4, t4).unwrap() - e.value).abs() < 1e-10);
    }
}

#[test]
fn quartic_spot_value() {
    let e = e1_value(&PotentialSpec::monomial(1.0, 4, 0.01).unwrap()).unwrap();
    let z = (-1.0 + 1.48f64.sqrt()) / 0.24;
    assert!((e.z - z).abs() < 1e-14);
    assert!((e.value + 0.00776793).abs() < 1e-8);
}

#[test]
fn even_valence_reference_formula() {
    for (nu, t) in [(3, 0.01), (3, 0.003), (4, 0.001)] {
        let e = e1_value(&PotentialSpec::monomial(1.0, 2 * nu, t).unwrap()).unwrap();
        assert!((e.value - e1_even_valence(nu, e.z)).abs() < 1e-10);
        assert!((e1_monomial(2 * nu, t).unwrap() - e.value).abs() < 1e-10);
    }
}

#[test]
fn odd_valence_routes_agree() {
    for t in [-0.05, -0.01, 0.02, 0.05] {
        let e = e1_value(&PotentialSpec::monomial(1.0, 3, t).unwrap()).unwrap();
        assert!((e1_monomial(3, t).unwrap() - e.value).abs() < 1e-10);
    }
}

#[test]
fn vanishes_at_gaussian_point() {
    for x in [0.3, 1.0, 2.0, 5.0] {
        assert!(e1_value(&PotentialSpec::gaussian(x).unwrap()).unwrap().value.abs() < 1e-15);
        assert!(e1_series(x, &[(3, 2), (4, 2)]).unwrap().constant_term().abs() < 1e-15);
    }
}

#[test]
fn x_derivative_matches_closed_form() {
    // the x^2 normalization adds 1/(12x) to the unnormalized derivative
    let pot = PotentialSpec::new(1.0, [(3, 0.02), (4, 0.01)]).unwrap();
    let f = |x: f64| e1_value(&pot.with_x(x).unwrap()).unwrap().value;
    for x in [0.8, 1.0, 1.3] {
        let h = 1e-4;
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        let ep = uz_jets(&pot.with_x(x).unwrap(), 2, 0).unwrap();
        let formula = e1_x_derivative_formula(&ep).unwrap() + 1.0 / (12.0 * x);
        assert!((fd - formula).abs() < 1e-8);
    }
}

#[test]
fn series_scales_with_faces() {
    // coefficient of t_j^k carries x^F, and F = E - V + 2 - 2g = (jk/2) - k for g = 1
    let s1 = e1_series(1.0, &[(4, 2)]).unwrap();
    let s2 = e1_series(2.0, &[(4, 2)]).unwrap();
    assert!((s2.coeff(&[1]) - 2.0 * s1.coeff(&[1])).abs() < 1e-12);
    assert!((s2.coeff(&[2]) - 4.0 * s1.coeff(&[2])).abs() < 1e-10);
}

#[test]
fn relations_hold() {
    for (j, t) in [(3, 0.05), (3, -0.02), (4, 0.01), (4, 0.04), (6, 0.01), (6, 0.002)] {
        let r = verify_relations(j, t).unwrap();
        assert!(r.max_abs() < 1e-9, "j={j} t={t}: {r:?}");
    }
}
