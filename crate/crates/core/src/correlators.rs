//! Planar and subleading one-point correlators, the diagonal two-point
//! correlator, and the loop-equation operator `K` by contour quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::endpoints::{uz_jets, xv_prime_coeffs, PotentialSpec};
use crate::error::{Error, Result};
use crate::hfunc::{h_at_endpoints, h_classical, EndpointValues};
use crate::measure::EquilibriumMeasure;
use crate::quadrature::gauss_chebyshev_second;

pub const DEFAULT_CONTOUR_NODES: usize = 256;

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorContext {
    pub em: EquilibriumMeasure,
    pub endpoints: EndpointValues,
    xvp: Vec<f64>,
}

impl CorrelatorContext {
    pub fn new(pot: &PotentialSpec) -> Result<Self> {
        let ep = uz_jets(pot, 2, 0)?;
        let h = h_classical(&ep);
        let endpoints = h_at_endpoints(&ep)?;
        if endpoints.h_plus == 0.0 || endpoints.h_minus == 0.0 {
            return Err(Error::DegeneratePoint("h at an endpoint"));
        }
        let xvp = xv_prime_coeffs(&pot.t_scalars::<f64>());
        Ok(Self { em: EquilibriumMeasure::new(pot.clone(), ep.u, ep.z, h), endpoints, xvp })
    }

    pub fn x(&self) -> f64 {
        self.em.x()
    }

    pub fn sqrt_z(&self) -> f64 {
        libm::sqrt(self.em.z)
    }

    pub fn alpha_minus(&self) -> f64 {
        self.em.alpha_minus()
    }

    pub fn alpha_plus(&self) -> f64 {
        self.em.alpha_plus()
    }

    /// `V'(y)`.
    pub fn v_prime(&self, y: C) -> C {
        self.xvp.iter().rev().fold(c(0.0), |acc, k| acc * y + k) / self.x()
    }

    pub fn h(&self, y: C) -> C {
        self.em.h.monomial().iter().rev().fold(c(0.0), |acc, k| acc * y + k)
    }

    /// `R(y) = sqrt(y - alpha_-) sqrt(y - alpha_+)` with principal roots,
    /// so `R ~ y` at infinity and the cut is `[alpha_-, alpha_+]`.
    pub fn r(&self, y: C) -> Result<C> {
        self.off_cut(y)?;
        Ok((y - self.alpha_minus()).sqrt() * (y - self.alpha_plus()).sqrt())
    }

    fn off_cut(&self, y: C) -> Result<()> {
        let scale = self.alpha_plus() - self.alpha_minus();
        if y.im.abs() <= 1e-14 * scale && y.re >= self.alpha_minus() && y.re <= self.alpha_plus() {
            return Err(Error::Branch);
        }
        Ok(())
    }
}

/// `W_1^(1)(y) = (V'(y) - R(y) h(y) / x) / 2`.
pub fn w1_leading(ctx: &CorrelatorContext, y: C) -> Result<C> {
    let r = ctx.r(y)?;
    Ok((ctx.v_prime(y) - r * ctx.h(y) / ctx.x()) * 0.5)
}

/// `int psi(lambda) / (y - lambda) d lambda` by Gauss–Chebyshev quadrature.
pub fn w1_leading_quadrature(ctx: &CorrelatorContext, y: C, n_nodes: usize) -> C {
    let em = &ctx.em;
    let (s, w) = gauss_chebyshev_second(n_nodes);
    let r = 2.0 * libm::sqrt(em.z);
    let sum = s.iter().zip(&w).fold(c(0.0), |acc, (s, w)| {
        let lam = em.u + r * s;
        acc + c(w * em.h.eval(lam)) / (y - lam)
    });
    sum * (2.0 * em.z / (PI * em.x()))
}

/// `-1/16 / (y - a_-)^2 + 1/8 / ((y - a_-)(y - a_+)) - 1/16 / (y - a_+)^2`.
pub fn w2_diag(ctx: &CorrelatorContext, y: C) -> Result<C> {
    let dm = y - ctx.alpha_minus();
    let dp = y - ctx.alpha_plus();
    if dm.norm() == 0.0 || dp.norm() == 0.0 {
        return Err(Error::Domain("two-point correlator has a pole at an endpoint"));
    }
    Ok(-c(1.0 / 16.0) / (dm * dm) + c(1.0 / 8.0) / (dm * dp) - c(1.0 / 16.0) / (dp * dp))
}

/// `W_1^(-1)(y) = x / R(y)` times
/// `(h_- - 2s h'_-) / (-32 s h_-^2 (y - a_-)) + 1 / (-16 h_- (y - a_-)^2)
///  + (h_+ + 2s h'_+) / (32 s h_+^2 (y - a_+)) + 1 / (-16 h_+ (y - a_+)^2)`.
pub fn w1_subleading(ctx: &CorrelatorContext, y: C) -> Result<C> {
    let r = ctx.r(y)?;
    let s = ctx.sqrt_z();
    let e = &ctx.endpoints;
    let dm = y - ctx.alpha_minus();
    let dp = y - ctx.alpha_plus();
    let bracket = c((e.h_minus - 2.0 * s * e.dh_minus) / (-32.0 * s * e.h_minus * e.h_minus)) / dm
        + c(1.0 / (-16.0 * e.h_minus)) / (dm * dm)
        + c((e.h_plus + 2.0 * s * e.dh_plus) / (32.0 * s * e.h_plus * e.h_plus)) / dp
        + c(1.0 / (-16.0 * e.h_plus)) / (dp * dp);
    Ok(bracket * ctx.x() / r)
}

/// `int_y^inf dy / ((y - a_-) R(y)) = (1 - (y - a_+)/R) / (2 sqrt(z))`; with
/// `mirror` the endpoints swap and `sqrt(z)` changes sign.
pub fn int_pole1(ctx: &CorrelatorContext, y: C, mirror: bool) -> Result<C> {
    let r = ctx.r(y)?;
    let (s, a_far) = if mirror { (-ctx.sqrt_z(), ctx.alpha_minus()) } else { (ctx.sqrt_z(), ctx.alpha_plus()) };
    Ok((c(1.0) - (y - a_far) / r) / (2.0 * s))
}

/// `int_y^inf dy / ((y - a_-)^2 R(y)) = (1 - (y - a_+)/R - 2 sqrt(z) (y - a_+) / ((y - a_-) R)) / (12 z)`.
pub fn int_pole2(ctx: &CorrelatorContext, y: C, mirror: bool) -> Result<C> {
    let r = ctx.r(y)?;
    let (s, a_near, a_far) = if mirror {
        (-ctx.sqrt_z(), ctx.alpha_plus(), ctx.alpha_minus())
    } else {
        (ctx.sqrt_z(), ctx.alpha_minus(), ctx.alpha_plus())
    };
    let z = s * s;
    Ok((c(1.0) - (y - a_far) / r - (y - a_far) * (2.0 * s) / ((y - a_near) * r)) / (12.0 * z))
}

/// `(1/x) int_y^inf W_1^(-1)`:
/// `(2h_- - 3s h'_-) / (-96 z h_-^2) (1 - (y - a_+)/R) + (y - a_+) / (96 s h_- (y - a_-) R)`
/// plus the same with `s -> -s`, `a_+- -> a_-+`.
pub fn w1_subleading_antiderivative(ctx: &CorrelatorContext, y: C) -> Result<C> {
    let r = ctx.r(y)?;
    let z = ctx.em.z;
    let e = &ctx.endpoints;
    let term = |s: f64, h: f64, dh: f64, a_near: f64, a_far: f64| {
        c((2.0 * h - 3.0 * s * dh) / (-96.0 * z * h * h)) * (c(1.0) - (y - a_far) / r)
            + (y - a_far) / ((y - a_near) * r) * (1.0 / (96.0 * s * h))
    };
    let s = ctx.sqrt_z();
    let (am, ap) = (ctx.alpha_minus(), ctx.alpha_plus());
    Ok(term(s, e.h_minus, e.dh_minus, am, ap) + term(-s, e.h_plus, e.dh_plus, ap, am))
}

/// Quadrature contour: ellipse about `u` with semi-axes
/// `(2 sqrt(z) + 0.5, 0.5 sqrt(z))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contour {
    pub center: f64,
    pub a: f64,
    pub b: f64,
}

impl Contour {
    pub fn around(ctx: &CorrelatorContext) -> Self {
        let s = ctx.sqrt_z();
        Self { center: ctx.em.u, a: 2.0 * s + 0.5, b: 0.5 * s }
    }

    pub fn contains(&self, y: C) -> bool {
        let p = (y.re - self.center) / self.a;
        let q = y.im / self.b;
        p * p + q * q <= 1.0
    }

    /// `(1 / 2 pi i) oint g(xi) d xi` by the trapezoidal rule, counterclockwise.
    pub fn integrate(&self, n: usize, mut g: impl FnMut(C) -> C) -> C {
        let mut acc = c(0.0);
        for k in 0..n {
            let th = 2.0 * PI * k as f64 / n as f64;
            let (sn, cs) = (libm::sin(th), libm::cos(th));
            let xi = C::new(self.center + self.a * cs, self.b * sn);
            let dxi = C::new(-self.a * sn, self.b * cs);
            acc += g(xi) * dxi;
        }
        acc / C::new(0.0, n as f64)
    }
}

/// `K f(y) = 2 W_1^(1)(y) f(y) - (1 / 2 pi i) oint V'(xi) f(xi) / (y - xi) d xi`.
pub fn apply_k(
    ctx: &CorrelatorContext,
    f: impl Fn(C) -> Result<C>,
    y: C,
    n_nodes: usize,
) -> Result<C> {
    let contour = Contour::around(ctx);
    if contour.contains(y) {
        return Err(Error::Geometry);
    }
    let mut err = None;
    let integral = contour.integrate(n_nodes, |xi| match f(xi) {
        Ok(v) => ctx.v_prime(xi) * v / (y - xi),
        Err(e) => {
            err = Some(e);
            c(0.0)
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(w1_leading(ctx, y)? * f(y)? * 2.0 - integral)
}

/// `W_2^(0)(y, y) + K W_1^(-1)(y)`, zero when the rank-one loop equation holds.
pub fn loop_equation_residual(ctx: &CorrelatorContext, y: C, n_nodes: usize) -> Result<C> {
    let k = apply_k(ctx, |xi| w1_subleading(ctx, xi), y, n_nodes)?;
    Ok(w2_diag(ctx, y)? + k)
}
