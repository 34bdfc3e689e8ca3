//! Endpoint equations for the one-cut support `[u - 2 sqrt(z), u + 2 sqrt(z)]`,
//! their Newton/continuation solver and Taylor jets of `(u, z)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{inv_sqrt_r_series, Dd, substitute_affine, Jet, LaurentPoly, RealScalar, Scalar};
use crate::error::{Error, Result};
use crate::hfunc::HPoly;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 64;

/// `V(lambda) = (1/x) (lambda^2 / 2 + sum_j t_j lambda^j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    x: f64,
    t: BTreeMap<usize, f64>,
}

impl PotentialSpec {
    /// Zero coefficients are dropped.
    pub fn new(x: f64, t: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidPotential(format!("face weight x must be positive, got {x}")));
        }
        let mut map = BTreeMap::new();
        for (j, tj) in t {
            if j == 0 {
                return Err(Error::InvalidPotential("valence 0 is not a perturbation".into()));
            }
            if !tj.is_finite() {
                return Err(Error::InvalidPotential(format!("t_{j} is not finite")));
            }
            if tj != 0.0 {
                *map.entry(j).or_insert(0.0) += tj;
            }
        }
        map.retain(|_, v| *v != 0.0);
        Ok(Self { x, t: map })
    }

    pub fn gaussian(x: f64) -> Result<Self> {
        Self::new(x, [])
    }

    /// `lambda^2/2 + t lambda^j` with face weight `x`.
    pub fn monomial(x: f64, j: usize, t: f64) -> Result<Self> {
        Self::new(x, [(j, t)])
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn t(&self, j: usize) -> f64 {
        self.t.get(&j).copied().unwrap_or(0.0)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.t.iter().map(|(j, v)| (*j, *v))
    }

    /// Degree of `V`; at least 2, so `h` has degree `degree() - 2`.
    pub fn degree(&self) -> usize {
        self.t.keys().next_back().copied().unwrap_or(0).max(2)
    }

    pub fn is_even(&self) -> bool {
        self.t.keys().all(|j| j % 2 == 0)
    }

    pub fn is_gaussian(&self) -> bool {
        self.t.is_empty()
    }

    pub fn with_x(&self, x: f64) -> Result<Self> {
        Self::new(x, self.coefficients())
    }

    /// Every `t_j` multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self { x: self.x, t: self.t.iter().map(|(j, v)| (*j, v * s)).filter(|(_, v)| *v != 0.0).collect() }
    }

    /// `t_j` as scalars of type `S`.
    pub fn t_scalars<S: RealScalar>(&self) -> Vec<(usize, S)> {
        self.coefficients().map(|(j, v)| (j, S::from_f64(v))).collect()
    }

    /// `V(lambda)`.
    pub fn eval_v(&self, lambda: f64) -> f64 {
        let mut acc = 0.5 * lambda * lambda;
        for (j, tj) in self.coefficients() {
            acc += tj * libm::pow(lambda, j as f64);
        }
        acc / self.x
    }
}

/// Coefficients of `x V'(y) = y + sum_j j t_j y^(j-1)`.
pub fn xv_prime_coeffs<S: Scalar>(t: &[(usize, S)]) -> Vec<S> {
    xv_derivative_coeffs(t, 0)
}

/// Coefficients of `x V^(n+1)(y)`, the `n`-th derivative of `x V'`.
pub fn xv_derivative_coeffs<S: Scalar>(t: &[(usize, S)], n: usize) -> Vec<S> {
    let deg = t.iter().map(|(j, _)| *j).max().unwrap_or(0).max(2);
    let mut p = vec![S::zero(); deg];
    p[1] = S::one();
    for (j, tj) in t {
        p[j - 1] = p[j - 1].clone() + tj.scale_i64(*j as i64);
    }
    for _ in 0..n {
        if p.len() <= 1 {
            return vec![S::zero()];
        }
        p = p.iter().enumerate().skip(1).map(|(i, c)| c.scale_i64(i as i64)).collect();
    }
    p
}

/// `x V'(T + u + z/T)`.
fn xv_prime_affine<S: Scalar>(u: &S, z: &S, t: &[(usize, S)]) -> LaurentPoly<S> {
    substitute_affine(&xv_prime_coeffs(t), u, z)
}

/// `([T^0] V'(T + u + z/T), [T^0] T V'(T + u + z/T) - 1)` for arbitrary
/// scalar types; `x` and the `t_j` may themselves be jets or rationals.
pub fn endpoint_residuals_with<S: Scalar>(u: &S, z: &S, x: &S, t: &[(usize, S)]) -> (S, S) {
    let l = xv_prime_affine(u, z, t);
    let r1 = l.coeff(0) / x.clone();
    let r2 = l.coeff(-1) / x.clone() - S::one();
    (r1, r2)
}

/// Endpoint residuals `(r1, r2)` at `(u, z)`; both vanish exactly at a solution.
pub fn endpoint_residuals<S: RealScalar>(u: &S, z: &S, pot: &PotentialSpec) -> (S, S) {
    endpoint_residuals_with(u, z, &S::from_f64(pot.x()), &pot.t_scalars())
}

/// The same residuals computed from the expansion of `V'(y) / R(y)` at
/// infinity: `r1 = [y^-1]`, `r2 = ([y^-2] - u [y^-1]) / 2 - 1`.
pub fn classical_endpoint_residuals(u: f64, z: f64, pot: &PotentialSpec) -> Result<(f64, f64)> {
    if !(z > 0.0) {
        return Err(Error::Domain("z must be positive"));
    }
    let s = libm::sqrt(z);
    let coeffs: Vec<f64> = xv_prime_coeffs(&pot.t_scalars::<f64>()).iter().map(|c| c / pot.x()).collect();
    let deg = coeffs.len() as i32 - 1;
    let q = inv_sqrt_r_series(&(u - 2.0 * s), &(u + 2.0 * s), (deg + 3) as usize);
    let vp = LaurentPoly::from_coeffs(0, coeffs);
    let prod = q.mul_poly(&vp);
    let c1 = prod.coeff(-1).ok_or(Error::Domain("series truncated too early"))?;
    let c2 = prod.coeff(-2).ok_or(Error::Domain("series truncated too early"))?;
    Ok((c1, (c2 - u * c1) / 2.0 - 1.0))
}

/// Residuals scaled by `x` and their Jacobian in `(u, z)`.
fn scaled_system(u: f64, z: f64, x: f64, t: &[(usize, f64)]) -> ([f64; 2], [[f64; 2]; 2]) {
    let p = xv_prime_coeffs(t);
    let l = substitute_affine(&p, &u, &z);
    let dp: Vec<f64> = p.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    let dl = substitute_affine(&dp, &u, &z);
    let f = [l.coeff(0), l.coeff(-1) - x];
    let jac = [[dl.coeff(0), dl.coeff(1)], [dl.coeff(-1), dl.coeff(0)]];
    (f, jac)
}

fn solve2(jac: &[[f64; 2]; 2], f: &[f64; 2]) -> Option<[f64; 2]> {
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let scale = jac.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if det == 0.0 || det.abs() <= 1e-14 * scale * scale {
        return None;
    }
    Some([(jac[1][1] * f[0] - jac[0][1] * f[1]) / det, (jac[0][0] * f[1] - jac[1][0] * f[0]) / det])
}

fn newton(mut u: f64, mut z: f64, x: f64, t: &[(usize, f64)], tol: f64) -> Option<(f64, f64)> {
    for _ in 0..50 {
        let (f, jac) = scaled_system(u, z, x, t);
        let norm = libm::hypot(f[0], f[1]) / x;
        if !norm.is_finite() {
            return None;
        }
        if norm < tol {
            // one more step removes the error left by an ill-conditioned Jacobian
            if let Some(d) = solve2(&jac, &f) {
                if z - d[1] > 0.0 {
                    return Some((u - d[0], z - d[1]));
                }
            }
            return Some((u, z));
        }
        let d = solve2(&jac, &f)?;
        u -= d[0];
        z -= d[1];
        if !(z > 0.0) {
            return None;
        }
    }
    None
}

/// Which variables a jet of `(u, z)` is taken in: variable 0 is `x`,
/// variable `i >= 1` is `t_{valence}` of `t_dirs[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSpec {
    pub x_order: usize,
    pub t_dirs: Vec<(usize, usize)>,
}

impl JetSpec {
    pub fn x_only(x_order: usize) -> Self {
        Self { x_order, t_dirs: Vec::new() }
    }

    pub fn orders(&self) -> Vec<usize> {
        let mut o = vec![self.x_order];
        o.extend(self.t_dirs.iter().map(|(_, k)| *k));
        o
    }

    /// Jet variable index of `t_j`, if it is a direction.
    pub fn t_var(&self, j: usize) -> Option<usize> {
        self.t_dirs.iter().position(|(v, _)| *v == j).map(|i| i + 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UzJets {
    pub spec: JetSpec,
    pub u: Jet<f64>,
    pub z: Jet<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EndpointSolution {
    pub pot: PotentialSpec,
    pub u: f64,
    pub z: f64,
    pub jets: Option<UzJets>,
}

impl EndpointSolution {
    pub fn sqrt_z(&self) -> f64 {
        libm::sqrt(self.z)
    }

    pub fn alpha_minus(&self) -> f64 {
        self.u - 2.0 * self.sqrt_z()
    }

    pub fn alpha_plus(&self) -> f64 {
        self.u + 2.0 * self.sqrt_z()
    }

    pub fn jets(&self) -> Result<&UzJets> {
        self.jets.as_ref().ok_or_else(|| Error::Precondition("endpoint solution carries no jets".into()))
    }

    /// Jets truncated to the `x` variable alone.
    pub fn x_jets(&self) -> Result<(Jet<f64>, Jet<f64>)> {
        let j = self.jets()?;
        Ok((restrict_to_x(&j.u), restrict_to_x(&j.z)))
    }

    /// Double-double jets of `(u, z)` in `x` alone, to the order of the
    /// attached jets, recomputed from the base point.
    pub fn x_jets_dd(&self) -> Result<(Jet<Dd>, Jet<Dd>)> {
        self.jets()?;
        let inv = frozen_inverse(self)?;
        Ok(solve_jets(self, &JetSpec::x_only(self.x_order()), inv, Dd::new))
    }

    /// Order of the available jets in `x`.
    pub fn x_order(&self) -> usize {
        self.jets.as_ref().map(|j| j.spec.x_order).unwrap_or(0)
    }

    pub fn require_x_order(&self, needed: usize) -> Result<()> {
        let have = self.x_order();
        if self.jets.is_none() || have < needed {
            return Err(Error::Precondition(format!("need x-jets of order {needed}, have {have}")));
        }
        Ok(())
    }
}

/// Keeps only the `x` direction of a jet (all `t` offsets set to zero).
pub fn restrict_to_x(j: &Jet<f64>) -> Jet<f64> {
    let o = j.orders()[0];
    let mut multi = vec![0; j.nvars()];
    let coeffs = (0..=o)
        .map(|k| {
            multi[0] = k;
            j.coeff(&multi)
        })
        .collect();
    Jet::from_coeffs(&[o], coeffs)
}

/// Newton's method with linear homotopy `t -> s t` from the Gaussian point
/// `(u, z) = (0, x)`, halving the step whenever Newton fails.
pub fn solve_endpoints(pot: &PotentialSpec, tol: f64, max_steps: usize) -> Result<EndpointSolution> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let x = pot.x();
    let (mut u, mut z) = (0.0, x);
    let mut s = 0.0f64;
    let mut ds = 1.0f64;
    let mut steps = 0;
    while s < 1.0 {
        if steps >= max_steps {
            return Err(Error::NoOneCutSolution { steps, reached: s });
        }
        steps += 1;
        let target = (s + ds).min(1.0);
        let t = pot.scaled(target).t_scalars::<f64>();
        match newton(u, z, x, &t, tol) {
            Some((un, zn)) => {
                u = un;
                z = zn;
                s = target;
                ds *= 2.0;
            }
            None => ds *= 0.5,
        }
    }
    let (_, jac) = scaled_system(u, z, x, &pot.t_scalars());
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if solve2(&jac, &[0.0, 0.0]).is_none() {
        return Err(Error::DegeneratePotential { det });
    }
    Ok(EndpointSolution { pot: pot.clone(), u, z, jets: None })
}

/// `solve_endpoints` with the default tolerance and step budget.
pub fn solve_endpoints_default(pot: &PotentialSpec) -> Result<EndpointSolution> {
    solve_endpoints(pot, DEFAULT_TOL, DEFAULT_MAX_STEPS)
}

/// Parameter jets `(x, [(j, t_j)])` for a jet specification; valences that
/// are not directions enter as constants.
pub fn parameter_jets(pot: &PotentialSpec, spec: &JetSpec) -> (Jet<f64>, Vec<(usize, Jet<f64>)>) {
    parameter_jets_in(pot, spec, |v| v)
}

fn parameter_jets_in<S: Scalar>(
    pot: &PotentialSpec,
    spec: &JetSpec,
    lift: impl Fn(f64) -> S,
) -> (Jet<S>, Vec<(usize, Jet<S>)>) {
    let orders = spec.orders();
    let x = Jet::variable(lift(pot.x()), 0, &orders);
    let mut valences: Vec<usize> = pot.coefficients().map(|(j, _)| j).collect();
    for (j, _) in &spec.t_dirs {
        if !valences.contains(j) {
            valences.push(*j);
        }
    }
    valences.sort_unstable();
    let t = valences
        .into_iter()
        .map(|j| {
            let jet = match spec.t_var(j) {
                Some(v) => Jet::variable(lift(pot.t(j)), v, &orders),
                None => Jet::constant_shaped(lift(pot.t(j)), &orders),
            };
            (j, jet)
        })
        .collect();
    (x, t)
}

/// Taylor jets of `(u, z)` in the variables of `spec`. Each sweep of the
/// simplified Newton iteration with the frozen base Jacobian fixes one more
/// total order, which is the order-by-order 2x2 solve.
pub fn uz_jets_in(pot: &PotentialSpec, spec: &JetSpec) -> Result<EndpointSolution> {
    let base = solve_endpoints_default(pot)?;
    jets_at(base, spec)
}

/// Jets in `x` to `x_order` and in every `t_j` of the potential to `t_order`.
pub fn uz_jets(pot: &PotentialSpec, x_order: usize, t_order: usize) -> Result<EndpointSolution> {
    let t_dirs = if t_order == 0 { Vec::new() } else { pot.coefficients().map(|(j, _)| (j, t_order)).collect() };
    uz_jets_in(pot, &JetSpec { x_order, t_dirs })
}

fn frozen_inverse(base: &EndpointSolution) -> Result<[[f64; 2]; 2]> {
    let pot = &base.pot;
    let (_, jac) = scaled_system(base.u, base.z, pot.x(), &pot.t_scalars());
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if solve2(&jac, &[0.0, 0.0]).is_none() {
        return Err(Error::DegeneratePotential { det });
    }
    Ok([[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]])
}

/// Simplified Newton on the jet system; the constant term is refined too,
/// so with `Dd` the base point is polished past `f64` accuracy.
fn solve_jets<S: Scalar + Copy>(
    base: &EndpointSolution,
    spec: &JetSpec,
    inv: [[f64; 2]; 2],
    lift: impl Fn(f64) -> S + Copy,
) -> (Jet<S>, Jet<S>) {
    let orders = spec.orders();
    let (xj, tj) = parameter_jets_in(&base.pot, spec, lift);
    let p = xv_prime_coeffs(&tj);
    let inv = inv.map(|row| row.map(lift));
    let mut u = Jet::constant_shaped(lift(base.u), &orders);
    let mut z = Jet::constant_shaped(lift(base.z), &orders);
    let sweeps = orders.iter().sum::<usize>() + 3;
    for _ in 0..sweeps {
        let l = substitute_affine(&p, &u, &z);
        let f1 = l.coeff(0);
        let f2 = l.coeff(-1) - xj.clone();
        let du = f1.scale(&inv[0][0]) + f2.scale(&inv[0][1]);
        let dz = f1.scale(&inv[1][0]) + f2.scale(&inv[1][1]);
        u = u - du;
        z = z - dz;
    }
    (u, z)
}

/// Attaches jets to an already solved base point. The jets are solved in
/// double-double and rounded to `f64`.
pub fn jets_at(base: EndpointSolution, spec: &JetSpec) -> Result<EndpointSolution> {
    let inv = frozen_inverse(&base)?;
    let (u, z) = solve_jets(&base, spec, inv, Dd::new);
    let orders = spec.orders();
    let mut uc: Vec<f64> = u.coeffs().iter().map(|c| c.to_f64()).collect();
    let mut zc: Vec<f64> = z.coeffs().iter().map(|c| c.to_f64()).collect();
    // keep the base values bit-identical to the solver output
    uc[0] = base.u;
    zc[0] = base.z;
    let u = Jet::from_coeffs(&orders, uc);
    let z = Jet::from_coeffs(&orders, zc);
    Ok(EndpointSolution { jets: Some(UzJets { spec: spec.clone(), u, z }), ..base })
}

/// Numerical one-cut check: `h > 0` on a dense grid over the support and at
/// every interior critical point of `h` (located by bisection on `h'`).
pub fn one_cut_certificate(h: &HPoly, alpha_minus: f64, alpha_plus: f64) -> bool {
    if !(alpha_minus < alpha_plus) {
        return false;
    }
    let n = 1024;
    let step = (alpha_plus - alpha_minus) / n as f64;
    let at = |i: usize| if i == n { alpha_plus } else { alpha_minus + step * i as f64 };
    let mut prev_d = h.derivative_at(at(0));
    for i in 0..=n {
        let lam = at(i);
        let v = h.eval(lam);
        if !(v > 0.0) {
            return false;
        }
        if i == 0 {
            continue;
        }
        let d = h.derivative_at(lam);
        if prev_d.signum() != d.signum() && prev_d != 0.0 && d != 0.0 {
            let (mut a, mut b) = (at(i - 1), lam);
            let sa = prev_d.signum();
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if h.derivative_at(m).signum() == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            if !(h.eval(0.5 * (a + b)) > 0.0) {
                return false;
            }
        }
        prev_d = d;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn gaussian_point_solves_the_equations() {
        let pot = PotentialSpec::gaussian(1.7).unwrap();
        let (r1, r2) = endpoint_residuals(&0.0, &1.7, &pot);
        assert_eq!((r1, r2), (0.0, 0.0));
    }

    #[test]
    fn quartic_second_residual_in_exact_arithmetic() {
        // (z + 12 t z^2)/x - 1 with t = 1/7, z = 2/3, x = 5
        let t = vec![(4usize, q(1, 7))];
        let (r1, r2) = endpoint_residuals_with(&q(0, 1), &q(2, 3), &q(5, 1), &t);
        assert_eq!(r1, q(0, 1));
        let z = q(2, 3);
        let expect = (z.clone() + q(12, 7) * z.clone() * z) / q(5, 1) - q(1, 1);
        assert_eq!(r2, expect);
    }

    #[test]
    fn cubic_first_residual_in_exact_arithmetic() {
        let t = vec![(3usize, q(1, 20))];
        let (u, z) = (q(-1, 3), q(4, 5));
        let (r1, _) = endpoint_residuals_with(&u, &z, &q(2, 1), &t);
        let expect = (u.clone() + q(3, 20) * (u.clone() * u + q(2, 1) * z)) / q(2, 1);
        assert_eq!(r1, expect);
    }

    #[test]
    fn derivative_coefficients() {
        let t = vec![(4usize, 0.5f64), (3, 1.0)];
        assert_eq!(xv_prime_coeffs(&t), vec![0.0, 1.0, 3.0, 2.0]);
        assert_eq!(xv_derivative_coeffs(&t, 1), vec![1.0, 6.0, 6.0]);
        assert_eq!(xv_derivative_coeffs(&t, 3), vec![12.0]);
        assert_eq!(xv_derivative_coeffs(&t, 5), vec![0.0]);
    }

    #[test]
    fn quartic_root_and_jet() {
        let t4 = 0.01;
        let pot = PotentialSpec::monomial(1.0, 4, t4).unwrap();
        let sol = uz_jets(&pot, 2, 0).unwrap();
        let z0 = (-1.0 + libm::sqrt(1.0 + 48.0 * t4)) / (24.0 * t4);
        assert!((sol.z - z0).abs() < 1e-12);
        assert_eq!(sol.u, 0.0);
        let (u, z) = sol.x_jets().unwrap();
        assert!((z.partial(&[1]) - 1.0 / (1.0 + 24.0 * t4 * z0)).abs() < 1e-12);
        assert!(u.max_abs() == 0.0);
    }

    #[test]
    fn cubic_converges_with_negative_center() {
        let pot = PotentialSpec::monomial(1.0, 3, 0.05).unwrap();
        let sol = solve_endpoints_default(&pot).unwrap();
        assert!(sol.u < 0.0);
        let (r1, r2) = endpoint_residuals(&sol.u, &sol.z, &pot);
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
    }

    #[test]
    fn supercritical_quartic_has_no_solution() {
        let pot = PotentialSpec::monomial(1.0, 4, -0.1).unwrap();
        assert!(matches!(solve_endpoints_default(&pot), Err(Error::NoOneCutSolution { .. })));
    }

    #[test]
    fn classical_and_affine_residuals_agree_off_solution() {
        let pot = PotentialSpec::new(1.3, [(3, 0.02), (5, -0.01), (6, 0.015)]).unwrap();
        for &(u, z) in &[(0.1, 0.8), (-0.3, 1.4), (0.0, 2.0)] {
            let (a1, a2) = endpoint_residuals(&u, &z, &pot);
            let (b1, b2) = classical_endpoint_residuals(u, z, &pot).unwrap();
            assert!((a1 - b1).abs() < 1e-12 && (a2 - b2).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_potentials() {
        assert!(PotentialSpec::new(0.0, []).is_err());
        assert!(PotentialSpec::new(1.0, [(0, 1.0)]).is_err());
        assert!(PotentialSpec::new(1.0, [(3, f64::NAN)]).is_err());
        assert_eq!(PotentialSpec::new(1.0, [(3, 0.0)]).unwrap().degree(), 2);
    }
}
