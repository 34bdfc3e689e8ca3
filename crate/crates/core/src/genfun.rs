//! The torus map generating function `e_1` from `(u, z)` and their
//! `x`-derivatives, its power series in `t`, and the monomial-potential
//! relations between `x`- and `t`-derivatives.

use alloc::vec::Vec;

use crate::algebra::Jet;
use crate::endpoints::{uz_jets, uz_jets_in, EndpointSolution, JetSpec, PotentialSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct E1Result {
    pub value: f64,
    pub x: f64,
    pub u: f64,
    pub z: f64,
    pub u_x: f64,
    pub z_x: f64,
}

/// `log(x^2 (z_x^2 - z u_x^2) / z^2) / 24` for jets of any shape.
fn e1_jet(x: &Jet<f64>, u: &Jet<f64>, z: &Jet<f64>) -> Result<Jet<f64>> {
    let ux = u.derivative(0)?;
    let zx = z.derivative(0)?;
    let disc = zx.clone() * zx - z.clone() * ux.clone() * ux;
    let arg = (x.clone() * x.clone() * disc).checked_div(&(z.clone() * z.clone()))?;
    if !(arg.value() > 0.0) {
        return Err(Error::OutsideOneCut("e_1 logarithm argument is not positive"));
    }
    Ok(arg.try_ln()?.scale(&(1.0 / 24.0)))
}

/// `e_1 = log(x^2 (z_x^2 - z u_x^2) / z^2) / 24`.
pub fn e1_value(pot: &PotentialSpec) -> Result<E1Result> {
    let ep = uz_jets(pot, 1, 0)?;
    e1_from_solution(&ep)
}

pub fn e1_from_solution(ep: &EndpointSolution) -> Result<E1Result> {
    ep.require_x_order(1)?;
    let (u, z) = ep.x_jets()?;
    let x = Jet::variable(ep.pot.x(), 0, &[ep.x_order()]);
    let e = e1_jet(&x, &u, &z)?;
    Ok(E1Result {
        value: e.value(),
        x: ep.pot.x(),
        u: ep.u,
        z: ep.z,
        u_x: u.partial(&[1]),
        z_x: z.partial(&[1]),
    })
}

/// `log((4 - u^2/z) / ((j - (j-2) z)^2 - (j-2)^2 u^2 z)) / 24` for
/// `V = lambda^2/2 + t lambda^j` at `x = 1`.
pub fn e1_monomial(j: usize, t: f64) -> Result<f64> {
    let pot = PotentialSpec::monomial(1.0, j, t)?;
    let ep = crate::endpoints::solve_endpoints_default(&pot)?;
    let (u, z) = (ep.u, ep.z);
    let jf = j as f64;
    let num = 4.0 - u * u / z;
    let a = jf - (jf - 2.0) * z;
    let den = a * a - (jf - 2.0) * (jf - 2.0) * u * u * z;
    let ratio = num / den;
    if !(ratio > 0.0) {
        return Err(Error::OutsideOneCut("monomial e_1 argument is not positive"));
    }
    Ok(libm::log(ratio) / 24.0)
}

/// `-log(nu - (nu - 1) z) / 12`, the even-valence `j = 2 nu` closed form
/// (`nu = 2` is the quartic case `-log(2 - z) / 12`).
pub fn e1_even_valence(nu: usize, z: f64) -> f64 {
    let n = nu as f64;
    -libm::log(n - (n - 1.0) * z) / 12.0
}

/// `-z_x / (12 z) + (z_x u_x^2 + 2 z u_x u_xx - 2 z_x z_xx) / (24 (z u_x^2 - z_x^2))`.
pub fn e1_x_derivative_formula(ep: &EndpointSolution) -> Result<f64> {
    ep.require_x_order(2)?;
    let (u, z) = ep.x_jets()?;
    let (ux, uxx, zx, zxx) = (u.partial(&[1]), u.partial(&[2]), z.partial(&[1]), z.partial(&[2]));
    let zv = ep.z;
    Ok(-zx / (12.0 * zv) + (zx * ux * ux + 2.0 * zv * ux * uxx - 2.0 * zx * zxx) / (24.0 * (zv * ux * ux - zx * zx)))
}

/// Truncated expansion of `e_1(x, t)` about `t = 0` in chosen directions.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesInT {
    pub x: f64,
    /// `(valence, order)` per direction.
    pub directions: Vec<(usize, usize)>,
    jet: Jet<f64>,
}

impl SeriesInT {
    /// Coefficient of `prod t_{j_i}^{k_i}` with `k` listed in direction order.
    pub fn coeff(&self, powers: &[usize]) -> f64 {
        let mut multi = Vec::with_capacity(powers.len() + 1);
        multi.push(0);
        multi.extend_from_slice(powers);
        self.jet.coeff(&multi)
    }

    /// Coefficient of `prod_j t_j^{k_j}` given as `(valence, power)` pairs.
    pub fn coeff_of(&self, monomial: &[(usize, usize)]) -> f64 {
        let mut powers = alloc::vec![0; self.directions.len()];
        for (j, k) in monomial {
            match self.directions.iter().position(|(v, _)| v == j) {
                Some(i) => powers[i] = *k,
                None if *k == 0 => {}
                None => return 0.0,
            }
        }
        self.coeff(&powers)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeff(&alloc::vec![0; self.directions.len()])
    }
}

/// Pushes jets of `(u, z)` in `(x, t_j...)` at `t = 0` through the `e_1`
/// formula. `directions` lists `(valence, order)`.
pub fn e1_series(x: f64, directions: &[(usize, usize)]) -> Result<SeriesInT> {
    let pot = PotentialSpec::gaussian(x)?;
    let spec = JetSpec { x_order: 1, t_dirs: directions.to_vec() };
    let ep = uz_jets_in(&pot, &spec)?;
    let jets = ep.jets()?;
    let xj = Jet::variable(x, 0, &spec.orders());
    let e = e1_jet(&xj, &jets.u, &jets.z)?;
    Ok(SeriesInT { x, directions: directions.to_vec(), jet: e })
}

/// Residuals of the six relations for `V = lambda^2/2 + t lambda^j` at `x = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelationReport {
    /// `u + j t u_t - 2 d_x(u z)`
    pub toda_u: f64,
    /// `2z + j t z_t - z d_x(u^2) - d_x(z^2)`
    pub toda_z: f64,
    /// `(j-2) t z_t + 2z - 2x z_x`
    pub scaling_z: f64,
    /// `(j-2) t u_t + u - 2x u_x`
    pub scaling_u: f64,
    /// `z_x - (2z(jx - (j-2)z) + (j-2)u^2 z) / D`
    pub reduce_z: f64,
    /// `u_x - (jxu + (j-2)uz) / D`, `D = (jx - (j-2)z)^2 - (j-2)^2 u^2 z`
    pub reduce_u: f64,
}

impl RelationReport {
    pub fn max_abs(&self) -> f64 {
        [self.toda_u, self.toda_z, self.scaling_z, self.scaling_u, self.reduce_z, self.reduce_u]
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

pub fn verify_relations(j: usize, t: f64) -> Result<RelationReport> {
    let x = 1.0;
    let pot = PotentialSpec::monomial(x, j, t)?;
    let spec = JetSpec { x_order: 2, t_dirs: alloc::vec![(j, 1)] };
    let ep = uz_jets_in(&pot, &spec)?;
    let jets = ep.jets()?;
    let (u, z) = (&jets.u, &jets.z);
    let d = |f: &Jet<f64>, a: usize, b: usize| f.partial(&[a, b]);
    let (uv, zv) = (ep.u, ep.z);
    let (ux, zx, ut, zt) = (d(u, 1, 0), d(z, 1, 0), d(u, 0, 1), d(z, 0, 1));
    let dx = |f: Jet<f64>| f.partial(&[1, 0]);
    let jf = j as f64;
    let toda_u = uv + jf * t * ut - 2.0 * dx(u.clone() * z.clone());
    let toda_z = 2.0 * zv + jf * t * zt - zv * dx(u.clone() * u.clone()) - dx(z.clone() * z.clone());
    let scaling_z = (jf - 2.0) * t * zt + 2.0 * zv - 2.0 * x * zx;
    let scaling_u = (jf - 2.0) * t * ut + uv - 2.0 * x * ux;
    let a = jf * x - (jf - 2.0) * zv;
    let den = a * a - (jf - 2.0) * (jf - 2.0) * uv * uv * zv;
    let reduce_z = zx - (2.0 * zv * a + (jf - 2.0) * uv * uv * zv) / den;
    let reduce_u = ux - (jf * x * uv + (jf - 2.0) * uv * zv) / den;
    Ok(RelationReport { toda_u, toda_z, scaling_z, scaling_u, reduce_z, reduce_u })
}
