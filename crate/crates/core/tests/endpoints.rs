use eqmap_core::endpoints::*;
use eqmap_core::error::Error;
use proptest::prelude::*;

mod common;
use common::small_potential;

fn quartic_root(x: f64, t4: f64) -> f64 {
    if t4 == 0.0 {
        return x;
    }
    (-1.0 + (1.0 + 48.0 * t4 * x).sqrt()) / (24.0 * t4)
}

#[test]
fn quartic_matches_quadratic_root() {
    for i in 0..=26 {
        let t4 = -0.02 + 0.003 * i as f64;
        for x in [0.5, 1.0, 2.0] {
            if 1.0 + 48.0 * t4 * x < 0.02 {
                continue;
            }
            let pot = PotentialSpec::monomial(x, 4, t4).unwrap();
            let ep = solve_endpoints_default(&pot).unwrap();
            assert!(ep.u.abs() < 1e-14);
            let z = quartic_root(x, t4);
            assert!((ep.z - z).abs() <= 1e-12 * z, "t4={t4} x={x}");
        }
    }
}

#[test]
fn jets_match_finite_differences() {
    let pot = PotentialSpec::new(1.0, [(3, 0.03), (4, 0.015), (5, -0.01)]).unwrap();
    let ep = uz_jets(&pot, 3, 0).unwrap();
    let (u, z) = ep.x_jets().unwrap();
    let solve = |x: f64| {
        let e = solve_endpoints_default(&pot.with_x(x).unwrap()).unwrap();
        (e.u, e.z)
    };
    let h = 1e-3;
    let s: Vec<(f64, f64)> = (-2..=2).map(|i| solve(1.0 + i as f64 * h)).collect();
    let d1 = |f: &dyn Fn(usize) -> f64| (f(3) - f(1)) / (2.0 * h);
    let d2 = |f: &dyn Fn(usize) -> f64| (f(3) - 2.0 * f(2) + f(1)) / (h * h);
    let d3 = |f: &dyn Fn(usize) -> f64| (f(4) - 2.0 * f(3) + 2.0 * f(1) - f(0)) / (2.0 * h * h * h);
    let fu = |i: usize| s[i].0;
    let fz = |i: usize| s[i].1;
    assert!((u.partial(&[1]) - d1(&fu)).abs() < 1e-6);
    assert!((z.partial(&[1]) - d1(&fz)).abs() < 1e-6);
    assert!((u.partial(&[2]) - d2(&fu)).abs() < 1e-4);
    assert!((z.partial(&[2]) - d2(&fz)).abs() < 1e-4);
    assert!((u.partial(&[3]) - d3(&fu)).abs() < 1e-2);
    assert!((z.partial(&[3]) - d3(&fz)).abs() < 1e-2);
}

#[test]
fn t_jets_match_finite_differences() {
    let pot = PotentialSpec::new(1.0, [(3, 0.02), (6, 0.01)]).unwrap();
    let spec = JetSpec { x_order: 1, t_dirs: vec![(3, 2), (6, 1)] };
    let ep = uz_jets_in(&pot, &spec).unwrap();
    let jets = ep.jets().unwrap();
    let h = 1e-5;
    let at = |t3: f64| solve_endpoints_default(&PotentialSpec::new(1.0, [(3, t3), (6, 0.01)]).unwrap()).unwrap();
    let (p, m) = (at(0.02 + h), at(0.02 - h));
    assert!((jets.u.partial(&[0, 1, 0]) - (p.u - m.u) / (2.0 * h)).abs() < 1e-7);
    assert!((jets.z.partial(&[0, 1, 0]) - (p.z - m.z) / (2.0 * h)).abs() < 1e-7);
}

#[test]
fn odd_perturbation_shifts_center_left() {
    let ep = solve_endpoints_default(&PotentialSpec::monomial(1.0, 3, 0.05).unwrap()).unwrap();
    assert!(ep.u < 0.0);
    let (r1, r2) = endpoint_residuals(&ep.u, &ep.z, &ep.pot);
    assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
}

#[test]
fn supercritical_quartic_is_rejected() {
    let pot = PotentialSpec::monomial(1.0, 4, -0.1).unwrap();
    assert!(matches!(solve_endpoints_default(&pot), Err(Error::NoOneCutSolution { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residuals_vanish_at_solution(pot in small_potential()) {
        let ep = solve_endpoints_default(&pot).unwrap();
        let (r1, r2) = endpoint_residuals(&ep.u, &ep.z, &pot);
        prop_assert!(r1.abs() < 1e-11 && r2.abs() < 1e-11);
        let (c1, c2) = classical_endpoint_residuals(ep.u, ep.z, &pot).unwrap();
        prop_assert!(c1.abs() < 1e-10 && c2.abs() < 1e-10);
        prop_assert!(ep.z > 0.0);
    }

    #[test]
    fn classical_and_affine_residuals_coincide(pot in small_potential(), u in -0.5f64..0.5, z in 0.2f64..2.0) {
        let (a1, a2) = endpoint_residuals(&u, &z, &pot);
        let (c1, c2) = classical_endpoint_residuals(u, z, &pot).unwrap();
        prop_assert!((a1 - c1).abs() < 1e-10 * (1.0 + a1.abs()));
        prop_assert!((a2 - c2).abs() < 1e-10 * (1.0 + a2.abs()));
    }

    #[test]
    fn scaling_potential_rescales_solution(pot in small_potential(), s in 0.5f64..2.0) {
        // t_j -> s^{(2-j)/2} t_j, x -> s x gives z -> s z, u -> sqrt(s) u
        let base = solve_endpoints_default(&pot).unwrap();
        let t: Vec<(usize, f64)> = pot.coefficients().map(|(j, tj)| (j, tj * s.powf((2.0 - j as f64) / 2.0))).collect();
        let scaled = PotentialSpec::new(pot.x() * s, t).unwrap();
        let ep = solve_endpoints_default(&scaled).unwrap();
        prop_assert!((ep.z - s * base.z).abs() < 1e-10 * ep.z);
        prop_assert!((ep.u - s.sqrt() * base.u).abs() < 1e-10);
    }
}
