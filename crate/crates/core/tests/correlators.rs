use eqmap_core::correlators::*;
use eqmap_core::endpoints::PotentialSpec;
use eqmap_core::error::Error;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

fn contexts() -> Vec<CorrelatorContext> {
    [PotentialSpec::gaussian(1.0).unwrap(), PotentialSpec::monomial(1.0, 4, 0.01).unwrap(), PotentialSpec::monomial(1.0, 3, 0.05).unwrap()]
        .iter()
        .map(|p| CorrelatorContext::new(p).unwrap())
        .collect()
}

fn ring(ctx: &CorrelatorContext) -> Vec<C> {
    let rad = ctx.alpha_plus() - ctx.alpha_minus() + 1.0;
    (0..8).map(|k| C::new((ctx.alpha_plus() + ctx.alpha_minus()) / 2.0, 0.0) + C::from_polar(rad, 2.0 * PI * (k as f64 + 0.5) / 8.0)).collect()
}

#[test]
fn loop_equation_holds_off_the_cut() {
    for ctx in contexts() {
        for y in ring(&ctx) {
            assert!(loop_equation_residual(&ctx, y, DEFAULT_CONTOUR_NODES).unwrap().norm() < 1e-10);
        }
    }
}

#[test]
fn loop_residual_converges_with_nodes() {
    let ctx = CorrelatorContext::new(&PotentialSpec::monomial(1.0, 4, 0.01).unwrap()).unwrap();
    let y = C::new(0.5, 3.5);
    let r64 = loop_equation_residual(&ctx, y, 64).unwrap().norm();
    let r256 = loop_equation_residual(&ctx, y, 256).unwrap().norm();
    assert!(r256 < r64);
}

#[test]
fn gaussian_spot_values() {
    let ctx = CorrelatorContext::new(&PotentialSpec::gaussian(1.0).unwrap()).unwrap();
    let y = C::new(3.0, 0.0);
    assert!((w1_subleading(&ctx, y).unwrap().norm() - 5f64.powf(-2.5)).abs() < 1e-12);
    // resolvent of the semicircle: (y - sqrt(y^2 - 4)) / 2
    let w = w1_leading(&ctx, y).unwrap();
    assert!((w.re - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
}

#[test]
fn leading_resolvent_matches_quadrature() {
    for ctx in contexts() {
        for y in ring(&ctx) {
            let d = w1_leading(&ctx, y).unwrap() - w1_leading_quadrature(&ctx, y, 64);
            assert!(d.norm() < 1e-12);
        }
    }
}

#[test]
fn antiderivative_differentiates_back() {
    for ctx in contexts() {
        for y in [C::new(3.0, 0.7), C::new(-1.0, 2.5), C::new(-3.5, -0.2)] {
            let h = 1e-4;
            let d = (w1_subleading_antiderivative(&ctx, y + h).unwrap() - w1_subleading_antiderivative(&ctx, y - h).unwrap()) / (2.0 * h);
            assert!((d + w1_subleading(&ctx, y).unwrap() / ctx.x()).norm() < 1e-7);
        }
    }
}

#[test]
fn cut_and_interior_points_are_rejected() {
    let ctx = CorrelatorContext::new(&PotentialSpec::gaussian(1.0).unwrap()).unwrap();
    assert!(matches!(w1_leading(&ctx, C::new(0.5, 0.0)), Err(Error::Branch)));
    assert!(matches!(loop_equation_residual(&ctx, C::new(0.5, 0.2), 64), Err(Error::Geometry)));
}
