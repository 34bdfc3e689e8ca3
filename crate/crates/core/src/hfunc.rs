//! The polynomial factor `h` of the equilibrium density, by the classical
//! residue formula, the valence-independent `phi/psi` formula and the
//! even-potential formula.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    binomial_f64, close, double_factorial_f64, inv_sqrt_r_series, residue_at_infinity, substitute_affine,
    substitute_scaled, Dd, Jet, LaurentPoly,
};
use crate::coefftables::CoeffTable;
use crate::endpoints::{xv_derivative_coeffs, xv_prime_coeffs, EndpointSolution, PotentialSpec};
use crate::error::{Error, Result};

/// Which formula produced an [`HPoly`], with what it needs to re-expand
/// about the other endpoint.
#[derive(Clone, Debug, PartialEq)]
pub enum HRoute {
    Classical,
    /// `phi_m`, `psi_m` values for `m = 0..` and the table rows used.
    General { phi: Vec<f64>, psi: Vec<f64>, c_phi: Vec<Vec<f64>>, c_psi: Vec<Vec<f64>> },
    /// `tau_m = (z_x^-1 d/dx)^m z_x^-1` for `m = 0..`.
    Even { tau: Vec<f64> },
}

/// `h(lambda)` in the monomial basis and centered at an endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoly {
    monomial: Vec<f64>,
    center: f64,
    centered: Vec<f64>,
    u: f64,
    z: f64,
    route: HRoute,
}

/// `sum_k a_k (lambda - c)^k` -> monomial coefficients.
pub fn centered_to_monomial(centered: &[f64], c: f64) -> Vec<f64> {
    let n = centered.len();
    (0..n)
        .map(|r| {
            (r..n)
                .map(|k| centered[k] * binomial_f64(k as i64, r as i64) * libm::pow(-c, (k - r) as f64))
                .sum()
        })
        .collect()
}

pub fn monomial_to_centered(monomial: &[f64], c: f64) -> Vec<f64> {
    let n = monomial.len();
    (0..n)
        .map(|k| {
            (k..n)
                .map(|r| monomial[r] * binomial_f64(r as i64, k as i64) * libm::pow(c, (r - k) as f64))
                .sum()
        })
        .collect()
}

impl HPoly {
    fn from_centered(centered: Vec<f64>, center: f64, u: f64, z: f64, route: HRoute) -> Self {
        let monomial = centered_to_monomial(&centered, center);
        Self { monomial, center, centered, u, z, route }
    }

    fn from_monomial(monomial: Vec<f64>, center: f64, u: f64, z: f64, route: HRoute) -> Self {
        let centered = monomial_to_centered(&monomial, center);
        Self { monomial, center, centered, u, z, route }
    }

    /// Coefficients of `lambda^r`.
    pub fn monomial(&self) -> &[f64] {
        &self.monomial
    }

    /// Coefficients of `(lambda - center)^k`.
    pub fn centered(&self) -> &[f64] {
        &self.centered
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn route(&self) -> &HRoute {
        &self.route
    }

    pub fn degree(&self) -> usize {
        self.monomial.len().saturating_sub(1)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.monomial.iter().rev().fold(0.0, |acc, c| acc * lambda + c)
    }

    pub fn derivative_at(&self, lambda: f64) -> f64 {
        let n = self.monomial.len();
        (1..n).rev().fold(0.0, |acc, r| acc * lambda + r as f64 * self.monomial[r])
    }

    /// Largest monomial coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.monomial.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Coefficientwise agreement in the monomial basis,
    /// `|a_r - b_r| <= rtol * max(|a_r|, |b_r|, max_abs)`.
    pub fn agrees_with(&self, other: &HPoly, rtol: f64) -> bool {
        let n = self.monomial.len().max(other.monomial.len());
        let floor = self.max_abs().max(other.max_abs());
        (0..n).all(|r| {
            let a = self.monomial.get(r).copied().unwrap_or(0.0);
            let b = other.monomial.get(r).copied().unwrap_or(0.0);
            close(a, b, rtol, floor)
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiPsi {
    pub m: usize,
    pub phi: Jet<f64>,
    pub psi: Jet<f64>,
}

fn x_jets_at_least(ep: &EndpointSolution, order: usize) -> Result<(Jet<f64>, Jet<f64>, Jet<f64>)> {
    ep.require_x_order(order)?;
    let (u, z) = ep.x_jets()?;
    let x = Jet::variable(ep.pot.x(), 0, &[ep.x_order()]);
    Ok((x, u, z))
}

/// `(phi_m, psi_m)` for `m = 0..=mmax` as jets in `x`, from
/// `(phi_0, psi_0) = (0, x)` and
/// `(phi, psi)_{m+1} = [[-z u_x, z_x], [z z_x, -z u_x]] d/dx (phi, psi)_m / (z_x^2 - z u_x^2)`,
/// evaluated in double-double.
pub fn phi_psi(ep: &EndpointSolution, mmax: usize) -> Result<Vec<PhiPsi>> {
    ep.require_x_order(mmax.max(1))?;
    let (u, z) = ep.x_jets_dd()?;
    let x = Jet::variable(Dd::new(ep.pot.x()), 0, &[ep.x_order()]);
    let ux = u.derivative(0)?;
    let zx = z.derivative(0)?;
    let det = zx.clone() * zx.clone() - z.clone() * ux.clone() * ux.clone();
    let inv = det.recip().map_err(|_| Error::DegeneratePoint("z_x^2 - z u_x^2"))?;
    let a = -(z.clone() * ux.clone()) * inv.clone();
    let b = zx.clone() * inv.clone();
    let c = z.clone() * zx * inv;
    let mut seq = vec![(Jet::constant_shaped(Dd::ZERO, x.orders()), x)];
    for m in 0..mmax {
        let (phi, psi) = &seq[m];
        let dphi = phi.derivative(0)?;
        let dpsi = psi.derivative(0)?;
        let next = (a.clone() * dphi.clone() + b.clone() * dpsi.clone(), c.clone() * dphi + a.clone() * dpsi);
        seq.push(next);
    }
    let round = |j: &Jet<Dd>| Jet::from_coeffs(j.orders(), j.coeffs().iter().map(|c| c.to_f64()).collect());
    Ok(seq.iter().enumerate().map(|(m, (phi, psi))| PhiPsi { m, phi: round(phi), psi: round(psi) }).collect())
}

/// Monomial coefficients `c_r = [y^r] x V'(y) / R(y)`, `r = 0..=d-2`.
pub fn h_classical(ep: &EndpointSolution) -> HPoly {
    let pot = &ep.pot;
    let d = pot.degree();
    let p = LaurentPoly::from_coeffs(0, xv_prime_coeffs(&pot.t_scalars::<f64>()));
    let q = inv_sqrt_r_series(&ep.alpha_minus(), &ep.alpha_plus(), d + 1);
    let prod = q.mul_poly(&p);
    let monomial = (0..=d - 2).map(|r| prod.coeff(r as i32).unwrap_or(0.0)).collect();
    HPoly::from_monomial(monomial, ep.alpha_plus(), ep.u, ep.z, HRoute::Classical)
}

/// `I_k = sum_{m=1}^{k+1} s^(m-k-2) (c^(phi)_{k,m} s phi_m + c^(psi)_{k,m} psi_m)`.
fn general_centered(s: f64, phi: &[f64], psi: &[f64], c_phi: &[Vec<f64>], c_psi: &[Vec<f64>]) -> Vec<f64> {
    c_phi
        .iter()
        .zip(c_psi)
        .enumerate()
        .map(|(k, (rp, rs))| {
            (1..=k + 1)
                .map(|m| {
                    let w = libm::pow(s, m as f64 - k as f64 - 2.0);
                    w * (rp[m - 1] * s * phi[m] + rs[m - 1] * psi[m])
                })
                .sum()
        })
        .collect()
}

/// The valence-independent formula, centered at `u + 2 sqrt(z)`.
/// Needs `x`-jets of order `d - 1` and a table with `kmax >= d - 2`.
pub fn h_general(ep: &EndpointSolution, table: &CoeffTable) -> Result<HPoly> {
    let d = ep.pot.degree();
    if table.kmax() + 2 < d {
        return Err(Error::Precondition(format!("coefficient table to k = {} needed, have {}", d - 2, table.kmax())));
    }
    let seq = phi_psi(ep, d - 1)?;
    let phi: Vec<f64> = seq.iter().map(|p| p.phi.value()).collect();
    let psi: Vec<f64> = seq.iter().map(|p| p.psi.value()).collect();
    let c_phi: Vec<Vec<f64>> = (0..=d - 2).map(|k| (1..=k + 1).map(|m| table.phi_f64(k, m)).collect()).collect();
    let c_psi: Vec<Vec<f64>> = (0..=d - 2).map(|k| (1..=k + 1).map(|m| table.psi_f64(k, m)).collect()).collect();
    let s = ep.sqrt_z();
    let centered = general_centered(s, &phi, &psi, &c_phi, &c_psi);
    Ok(HPoly::from_centered(centered, ep.u + 2.0 * s, ep.u, ep.z, HRoute::General { phi, psi, c_phi, c_psi }))
}

/// `tau_m = (z_x^-1 d/dx)^m z_x^-1`, `m = 0..=mmax`.
pub fn even_tower(ep: &EndpointSolution, mmax: usize) -> Result<Vec<f64>> {
    let (_, _, z) = x_jets_at_least(ep, mmax + 1)?;
    let zx = z.derivative(0)?;
    let inv = zx.recip().map_err(|_| Error::DegeneratePoint("z_x"))?;
    let mut cur = inv.clone();
    let mut out = vec![cur.value()];
    for _ in 0..mmax {
        cur = inv.clone() * cur.derivative(0)?;
        out.push(cur.value());
    }
    Ok(out)
}

/// `I_k = sum_{m=ceil(k/2)}^k 2^(3m-2k) / (2m+1)!! C(m, k-m) s^(2m-k) tau_m`.
fn even_centered(s: f64, tau: &[f64]) -> Vec<f64> {
    (0..tau.len())
        .map(|k| {
            (k.div_ceil(2)..=k)
                .map(|m| {
                    let p2 = libm::pow(2.0, 3.0 * m as f64 - 2.0 * k as f64);
                    p2 / double_factorial_f64(2 * m as i64 + 1)
                        * binomial_f64(m as i64, (k - m) as i64)
                        * libm::pow(s, (2 * m - k) as f64)
                        * tau[m]
                })
                .sum()
        })
        .collect()
}

/// The even-potential formula, centered at `2 sqrt(z)`. Needs `x`-jets of
/// order `d - 1`.
pub fn h_even(ep: &EndpointSolution) -> Result<HPoly> {
    if !ep.pot.is_even() {
        return Err(Error::Precondition("even-potential formula needs every odd t_j = 0".into()));
    }
    let d = ep.pot.degree();
    let tau = even_tower(ep, d - 2)?;
    let s = ep.sqrt_z();
    let centered = even_centered(s, &tau);
    Ok(HPoly::from_centered(centered, ep.u + 2.0 * s, ep.u, ep.z, HRoute::Even { tau }))
}

/// Re-expands about the left endpoint `u - 2 sqrt(z)` by flipping the sign
/// of `sqrt(z)` in the formula that produced `h`.
pub fn h_left_variant(h: &HPoly) -> HPoly {
    let s = -libm::sqrt(h.z);
    let center = h.u + 2.0 * s;
    match &h.route {
        HRoute::Classical => HPoly::from_monomial(h.monomial.clone(), center, h.u, h.z, HRoute::Classical),
        HRoute::General { phi, psi, c_phi, c_psi } => {
            let centered = general_centered(s, phi, psi, c_phi, c_psi);
            HPoly::from_centered(centered, center, h.u, h.z, h.route.clone())
        }
        HRoute::Even { tau } => HPoly::from_centered(even_centered(s, tau), center, h.u, h.z, h.route.clone()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndpointValues {
    pub h_plus: f64,
    pub dh_plus: f64,
    pub h_minus: f64,
    pub dh_minus: f64,
}

/// `h(alpha_+) = 1 / (s u_x + z_x)` and
/// `h'(alpha_+) = (s u_x^2 + 3 u_x z_x + 4 z u_xx + 4 s z_xx) / (-6 (s u_x + z_x)^3)`
/// with `s = sqrt(z)`; the left endpoint takes `s = -sqrt(z)`.
pub fn h_at_endpoints(ep: &EndpointSolution) -> Result<EndpointValues> {
    let (_, u, z) = x_jets_at_least(ep, 2)?;
    let d = |j: &Jet<f64>, k: usize| {
        let mut multi = [0usize; 1];
        multi[0] = k;
        j.partial(&multi)
    };
    let (ux, uxx, zx, zxx) = (d(&u, 1), d(&u, 2), d(&z, 1), d(&z, 2));
    let zv = ep.z;
    let at = |s: f64| -> Result<(f64, f64)> {
        let den = s * ux + zx;
        if den == 0.0 {
            return Err(Error::DegeneratePoint("sqrt(z) u_x + z_x"));
        }
        let h = 1.0 / den;
        let dh = (s * ux * ux + 3.0 * ux * zx + 4.0 * zv * uxx + 4.0 * s * zxx) / (-6.0 * den * den * den);
        Ok((h, dh))
    };
    let s = ep.sqrt_z();
    let (h_plus, dh_plus) = at(s)?;
    let (h_minus, dh_minus) = at(-s)?;
    Ok(EndpointValues { h_plus, dh_plus, h_minus, dh_minus })
}

/// `phi_m = [T^0] x V^(m+1)(T + u + z/T)` and
/// `psi_m = [T^0] T x V^(m+1)(T + u + z/T)`.
pub fn phi_psi_residues(pot: &PotentialSpec, u: f64, z: f64, m: usize) -> (f64, f64) {
    let p = xv_derivative_coeffs(&pot.t_scalars::<f64>(), m);
    let l = substitute_affine(&p, &u, &z);
    (l.coeff(0), l.coeff(-1))
}

/// Compares the recursion values with the residue representation at
/// relative tolerance `rtol`, scaled by the largest `|phi_k|, |psi_k|`
/// for `k <= m` (high `m` can vanish identically).
pub fn verify_residue_representation(ep: &EndpointSolution, m: usize, rtol: f64) -> Result<bool> {
    let seq = phi_psi(ep, m)?;
    let (phi, psi) = (seq[m].phi.value(), seq[m].psi.value());
    let (rphi, rpsi) = phi_psi_residues(&ep.pot, ep.u, ep.z, m);
    let floor = seq.iter().fold(0.0f64, |f, p| f.max(p.phi.value().abs()).max(p.psi.value().abs()));
    Ok(close(phi, rphi, rtol, floor) && close(psi, rpsi, rtol, floor))
}

/// `(z_x^-1 d/dx)^m x` from jets and
/// `2^(m-1) (2m-1)!! s^(1-2m) [T^0] x V'(s T + s/T) (T + 1/T) / (T - 1/T)^(2m)`
/// by expansion at infinity.
pub fn even_residue_sides(ep: &EndpointSolution, m: usize) -> Result<(f64, f64)> {
    if !ep.pot.is_even() {
        return Err(Error::Precondition("residue formula needs an even potential".into()));
    }
    let (x, _, z) = x_jets_at_least(ep, m.max(1))?;
    let zx = z.derivative(0)?;
    let inv = zx.recip().map_err(|_| Error::DegeneratePoint("z_x"))?;
    let mut cur = x;
    for _ in 0..m {
        cur = inv.clone() * cur.derivative(0)?;
    }
    let lhs = cur.value();
    let s = ep.sqrt_z();
    let p = xv_prime_coeffs(&ep.pot.t_scalars::<f64>());
    let l = substitute_scaled(&p, &0.0, &s);
    let t_plus_inv = LaurentPoly::from_coeffs(-1, vec![1.0, 0.0, 1.0]);
    let num = (&l * &t_plus_inv).shift(2 * m as i32);
    let res = residue_at_infinity(&num, 2 * m as u32, 2 * m as u32);
    let rhs = libm::pow(2.0, m as f64 - 1.0)
        * double_factorial_f64(2 * m as i64 - 1)
        * libm::pow(s, 1.0 - 2.0 * m as f64)
        * res;
    Ok((lhs, rhs))
}

pub fn verify_even_residue_formula(ep: &EndpointSolution, m: usize, rtol: f64) -> Result<bool> {
    let (a, b) = even_residue_sides(ep, m)?;
    Ok(close(a, b, rtol, 0.0))
}
