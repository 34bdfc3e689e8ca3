//! Equilibrium density, its mass and the variational (g-function) check.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::endpoints::{solve_endpoints_default, PotentialSpec};
use crate::error::Result;
use crate::hfunc::{h_classical, HPoly};
use crate::quadrature::{gauss_chebyshev_second, gauss_legendre, integrate_gl};

/// `psi(lambda) = (1 / 2 pi x) sqrt((alpha_+ - lambda)(lambda - alpha_-)) h(lambda)` on `[alpha_-, alpha_+]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumMeasure {
    pub pot: PotentialSpec,
    pub u: f64,
    pub z: f64,
    pub h: HPoly,
}

impl EquilibriumMeasure {
    pub fn new(pot: PotentialSpec, u: f64, z: f64, h: HPoly) -> Self {
        Self { pot, u, z, h }
    }

    /// Solves the endpoint equations and takes `h` from the classical formula.
    pub fn from_potential(pot: &PotentialSpec) -> Result<Self> {
        let ep = solve_endpoints_default(pot)?;
        let h = h_classical(&ep);
        Ok(Self { pot: pot.clone(), u: ep.u, z: ep.z, h })
    }

    pub fn x(&self) -> f64 {
        self.pot.x()
    }

    pub fn alpha_minus(&self) -> f64 {
        self.u - 2.0 * libm::sqrt(self.z)
    }

    pub fn alpha_plus(&self) -> f64 {
        self.u + 2.0 * libm::sqrt(self.z)
    }

    /// The same `u` and `h` on a support of a different width.
    pub fn with_z(&self, z: f64) -> Self {
        Self { z, ..self.clone() }
    }
}

pub fn density(em: &EquilibriumMeasure, lambda: f64) -> f64 {
    let (a, b) = (em.alpha_minus(), em.alpha_plus());
    if !(lambda > a && lambda < b) {
        return 0.0;
    }
    libm::sqrt((b - lambda) * (lambda - a)) * em.h.eval(lambda) / (2.0 * PI * em.x())
}

/// Gauss–Chebyshev (second kind) quadrature after `lambda = u + 2 sqrt(z) s`.
pub fn total_mass(em: &EquilibriumMeasure, n_nodes: usize) -> f64 {
    let (s, w) = gauss_chebyshev_second(n_nodes.max(1));
    let r = 2.0 * libm::sqrt(em.z);
    let sum: f64 = s.iter().zip(&w).map(|(s, w)| w * em.h.eval(em.u + r * s)).sum();
    2.0 * em.z / (PI * em.x()) * sum
}

#[derive(Clone, Debug, PartialEq)]
pub struct VariationalReport {
    /// Median of `G(lambda) - V(lambda)` over the support grid.
    pub l: f64,
    /// `max |G - V - l|` over the support grid.
    pub max_deviation: f64,
    /// `min (V + l - G)` over the off-support grid on `[alpha_- - 2, alpha_+ + 2]`.
    pub min_slack: f64,
    pub support_points: usize,
    pub off_support_points: usize,
}

/// `G(lambda) = 2 int log|lambda - s| psi(s) ds` in the angle variable
/// `s = u + 2 sqrt(z) cos(theta)`, where `psi ds = (2z / pi x) sin^2(theta) h dtheta`.
struct LogPotential<'a> {
    em: &'a EquilibriumMeasure,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl<'a> LogPotential<'a> {
    fn new(em: &'a EquilibriumMeasure, n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { em, nodes, weights }
    }

    fn r(&self) -> f64 {
        2.0 * libm::sqrt(self.em.z)
    }

    fn f(&self, theta: f64) -> f64 {
        let s = libm::sin(theta);
        s * s * self.em.h.eval(self.em.u + self.r() * libm::cos(theta))
    }

    fn pref(&self) -> f64 {
        2.0 * self.em.z / (PI * self.em.x())
    }

    fn gl(&self, a: f64, b: f64, g: impl FnMut(f64) -> f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        integrate_gl(a, b, &self.nodes, &self.weights, g)
    }

    fn mass(&self) -> f64 {
        self.pref() * self.gl(0.0, PI, |t| self.f(t))
    }

    /// On the support, with `lambda = u + r cos(theta0)`:
    /// `log|lambda - s| = log r + log|cos theta0 - cos theta|`, and the
    /// singular part is integrated exactly via
    /// `int_0^pi log|cos theta0 - cos theta| dtheta = -pi log 2`.
    fn on_support(&self, lambda: f64) -> f64 {
        let c0 = ((lambda - self.em.u) / self.r()).clamp(-1.0, 1.0);
        let th0 = libm::acos(c0);
        let f0 = self.f(th0);
        let g = |t: f64| {
            let d = (c0 - libm::cos(t)).abs();
            if d == 0.0 {
                0.0
            } else {
                libm::log(d) * (self.f(t) - f0)
            }
        };
        let regular = self.gl(0.0, th0, g) + self.gl(th0, PI, g);
        let singular = -PI * libm::log(2.0) * f0;
        let mass = self.mass();
        2.0 * (libm::log(self.r()) * mass + self.pref() * (regular + singular))
    }

    fn off_support(&self, lambda: f64) -> f64 {
        let (u, r) = (self.em.u, self.r());
        2.0 * self.pref() * self.gl(0.0, PI, |t| libm::log((lambda - u - r * libm::cos(t)).abs()) * self.f(t))
    }
}

/// Checks `G = V + l` on the support and `G <= V + l` off it. `grid_size`
/// sets both the number of evaluation points and the Gauss–Legendre order
/// of the angular quadrature, so increasing it refines everything.
pub fn variational_report(em: &EquilibriumMeasure, grid_size: usize) -> VariationalReport {
    let n = grid_size.max(16);
    let lp = LogPotential::new(em, n);
    let (a, b) = (em.alpha_minus(), em.alpha_plus());
    let support: Vec<f64> = (0..n).map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64).collect();
    let diffs: Vec<f64> = support.iter().map(|&lam| lp.on_support(lam) - em.pot.eval_v(lam)).collect();
    let mut sorted = diffs.clone();
    sorted.sort_by(|p, q| p.total_cmp(q));
    let l = if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) };
    let max_deviation = diffs.iter().fold(0.0f64, |m, d| m.max((d - l).abs()));
    let half = n / 2;
    let off: Vec<f64> = (1..=half)
        .map(|i| a - 2.0 * i as f64 / half as f64)
        .chain((1..=n - half).map(|i| b + 2.0 * i as f64 / (n - half) as f64))
        .collect();
    let min_slack = off
        .iter()
        .map(|&lam| em.pot.eval_v(lam) + l - lp.off_support(lam))
        .fold(f64::INFINITY, f64::min);
    VariationalReport { l, max_deviation, min_slack, support_points: n, off_support_points: off.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_density_and_mass() {
        let em = EquilibriumMeasure::from_potential(&PotentialSpec::gaussian(1.0).unwrap()).unwrap();
        assert!((density(&em, 0.0) - 1.0 / PI).abs() < 1e-15);
        assert_eq!(density(&em, 2.0), 0.0);
        assert_eq!(density(&em, -3.0), 0.0);
        assert!((total_mass(&em, 4) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_log_potential_is_quadratic_on_support() {
        // 2 int log|lambda - s| psi(s) ds = lambda^2 / 2 - 1 on [-2, 2]
        let em = EquilibriumMeasure::from_potential(&PotentialSpec::gaussian(1.0).unwrap()).unwrap();
        let rep = variational_report(&em, 64);
        assert!((rep.l + 1.0).abs() < 1e-6);
        assert!(rep.max_deviation < 1e-6);
        assert!(rep.min_slack >= 0.0);
    }
}
