use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::scalar::{RealScalar, Scalar};
use crate::error::Result;

/// Finite Laurent polynomial `sum_k c_k T^k` over a generic scalar.
///
/// `coeffs[i]` is the coefficient of `T^(min_exp + i)`. The stored range is
/// exactly what arithmetic produces; it is never trimmed, so exponent ranges
/// of sums and products are predictable.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<S> {
    min_exp: i32,
    coeffs: Vec<S>,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero() -> Self {
        Self { min_exp: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self { min_exp: 0, coeffs: vec![c] }
    }

    pub fn monomial(c: S, exp: i32) -> Self {
        Self { min_exp: exp, coeffs: vec![c] }
    }

    pub fn from_coeffs(min_exp: i32, coeffs: Vec<S>) -> Self {
        Self { min_exp, coeffs }
    }

    /// Builds `sum_k f(k) T^k` for `k` in `lo..=hi`.
    pub fn from_fn(lo: i32, hi: i32, mut f: impl FnMut(i32) -> S) -> Self {
        if hi < lo {
            return Self::zero();
        }
        Self { min_exp: lo, coeffs: (lo..=hi).map(&mut f).collect() }
    }

    pub fn min_exp(&self) -> i32 {
        self.min_exp
    }

    /// Largest stored exponent (`min_exp - 1` when empty).
    pub fn max_exp(&self) -> i32 {
        self.min_exp + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> S {
        let i = exp - self.min_exp;
        if i < 0 || i as usize >= self.coeffs.len() {
            S::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// `[T^0] p`.
    pub fn zero_coeff(&self) -> S {
        self.coeff(0)
    }

    /// Multiplies by `T^r`.
    pub fn shift(mut self, r: i32) -> Self {
        self.min_exp += r;
        self
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn map<R: Scalar>(&self, f: impl Fn(&S) -> R) -> LaurentPoly<R> {
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Formal derivative with respect to `T`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.is_empty() {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale_i64((self.min_exp + i as i32) as i64))
            .collect();
        Self { min_exp: self.min_exp - 1, coeffs }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(S::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Structural zero test over the stored range.
    pub fn is_identically_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Image under `T -> c / T`: the coefficient of `T^k` becomes `c^(-k)`
    /// times the old coefficient of `T^(-k)`, i.e. `sum_k a_k c^k T^(-k)`.
    pub fn invert_variable(&self, c: &S) -> Self {
        let lo = -self.max_exp();
        let hi = -self.min_exp;
        Self::from_fn(lo, hi, |k| {
            let a = self.coeff(-k);
            let e = -k;
            if e >= 0 {
                a * c.powi(e as u32)
            } else {
                a / c.powi((-e) as u32)
            }
        })
    }
}

/// `[T^0] p`, the constant-term extraction every residue computation reduces to.
pub fn laurent_zero_coeff<S: Scalar>(p: &LaurentPoly<S>) -> S {
    p.zero_coeff()
}

impl<S: Scalar> Add for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn add(self, rhs: Self) -> LaurentPoly<S> {
        if self.coeffs.is_empty() {
            return rhs.clone();
        }
        if rhs.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = self.max_exp().max(rhs.max_exp());
        LaurentPoly::from_fn(lo, hi, |k| self.coeff(k) + rhs.coeff(k))
    }
}

impl<S: Scalar> Sub for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn sub(self, rhs: Self) -> LaurentPoly<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Neg for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn neg(self) -> LaurentPoly<S> {
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<S: Scalar> Mul for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn mul(self, rhs: Self) -> LaurentPoly<S> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return LaurentPoly::zero();
        }
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out: Vec<Option<S>> = vec![None; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let term = a.clone() * b.clone();
                out[i + j] = Some(match out[i + j].take() {
                    Some(acc) => acc + term,
                    None => term,
                });
            }
        }
        LaurentPoly {
            min_exp: self.min_exp + rhs.min_exp,
            coeffs: out.into_iter().map(|c| c.unwrap_or_else(S::zero)).collect(),
        }
    }
}

impl<S: Scalar> Add for LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn add(self, rhs: Self) -> LaurentPoly<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn sub(self, rhs: Self) -> LaurentPoly<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn mul(self, rhs: Self) -> LaurentPoly<S> {
        &self * &rhs
    }
}

/// Horner evaluation of `sum_i p[i] Y^i` with `Y` a Laurent polynomial.
pub fn compose_poly<S: Scalar>(p: &[S], y: &LaurentPoly<S>) -> LaurentPoly<S> {
    let mut acc = LaurentPoly::zero();
    for c in p.iter().rev() {
        acc = &(&acc * y) + &LaurentPoly::constant(c.clone());
    }
    acc
}

/// Which uniformizing substitution to apply to a polynomial in `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uniformizer {
    /// `y = T + u + z T^-1`
    Affine,
    /// `y = sqrt(z) T + u + sqrt(z) T^-1`
    Symmetric,
}

/// `P(T + u + z/T)`; exponent range `[-deg P, deg P]`.
pub fn substitute_affine<S: Scalar>(p: &[S], u: &S, z: &S) -> LaurentPoly<S> {
    let y = LaurentPoly::from_coeffs(-1, vec![z.clone(), u.clone(), S::one()]);
    compose_poly(p, &y)
}

/// `P(s T + u + s/T)` for a given half-width parameter `s` (either branch of `sqrt(z)`).
pub fn substitute_scaled<S: Scalar>(p: &[S], u: &S, s: &S) -> LaurentPoly<S> {
    let y = LaurentPoly::from_coeffs(-1, vec![s.clone(), u.clone(), s.clone()]);
    compose_poly(p, &y)
}

/// `P(sqrt(z) T + u + sqrt(z)/T)`; fails unless the leading part of `z` is positive.
pub fn substitute_symmetric<S: RealScalar>(p: &[S], u: &S, z: &S) -> Result<LaurentPoly<S>> {
    if !(z.lead() > 0.0) {
        return Err(crate::error::Error::Domain("symmetric uniformizer needs z > 0"));
    }
    let s = z.try_sqrt()?;
    Ok(substitute_scaled(p, u, &s))
}

pub fn substitute_uniformizer<S: RealScalar>(
    p: &[S],
    u: &S,
    z: &S,
    mode: Uniformizer,
) -> Result<LaurentPoly<S>> {
    match mode {
        Uniformizer::Affine => Ok(substitute_affine(p, u, z)),
        Uniformizer::Symmetric => substitute_symmetric(p, u, z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn zero_coefficient_examples() {
        let p = LaurentPoly::from_coeffs(-1, vec![1.0, 3.0, 1.0]);
        assert_eq!(laurent_zero_coeff(&p), 3.0);
        let p = LaurentPoly::monomial(1.0, 2);
        assert_eq!(laurent_zero_coeff(&p), 0.0);
    }

    #[test]
    fn zero_coefficient_of_cubed_affine_variable() {
        // [T^0] T (T + z/T)^3 = 3 z^2, checked with a rational z
        let z = q(5, 3);
        let y = LaurentPoly::from_coeffs(-1, vec![z.clone(), q(0, 1), q(1, 1)]);
        let p = y.pow(3).shift(1);
        assert_eq!(p.zero_coeff(), q(3, 1) * z.clone() * z);
    }

    #[test]
    fn affine_substitution_examples() {
        let p = substitute_affine(&[0.0, 1.0], &0.0, &2.0);
        assert_eq!((p.min_exp(), p.coeffs().to_vec()), (-1, vec![2.0, 0.0, 1.0]));
        let p = substitute_affine(&[0.0, 0.0, 1.0], &1.0, &1.0);
        assert_eq!(p.min_exp(), -2);
        assert_eq!(p.coeffs(), &[1.0, 2.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn symmetric_substitution_examples() {
        let p = substitute_uniformizer(&[0.0, 1.0], &0.0, &4.0, Uniformizer::Symmetric).unwrap();
        assert_eq!(p.coeffs(), &[2.0, 0.0, 2.0]);
        assert!(substitute_uniformizer(&[0.0, 1.0], &0.0, &-1.0, Uniformizer::Symmetric).is_err());
        assert!(substitute_uniformizer(&[0.0, 1.0], &0.0, &0.0, Uniformizer::Symmetric).is_err());
    }

    #[test]
    fn derivative_of_laurent() {
        let p = LaurentPoly::from_coeffs(-2, vec![1.0, 0.0, 5.0, 2.0]);
        let d = p.derivative();
        assert_eq!(d.coeff(-3), -2.0);
        assert_eq!(d.coeff(-1), 0.0);
        assert_eq!(d.coeff(0), 2.0);
    }

    proptest! {
        #[test]
        fn zero_coeff_after_shift_reads_coefficient(
            coeffs in proptest::collection::vec(-50i64..50, 1..8),
            lo in -4i32..4,
            r in -8i32..8,
        ) {
            let p = LaurentPoly::from_coeffs(lo, coeffs.iter().map(|&c| q(c, 1)).collect());
            prop_assert_eq!(p.clone().shift(-r).zero_coeff(), p.coeff(r));
        }

        #[test]
        fn affine_substitution_is_symmetric_under_inversion(
            coeffs in proptest::collection::vec(-9i64..9, 1..7),
            un in -5i64..5,
            zn in 1i64..7,
            zd in 1i64..5,
        ) {
            // c_{-k} = z^k c_k
            let p: Vec<BigRational> = coeffs.iter().map(|&c| q(c, 1)).collect();
            let u = q(un, 3);
            let z = q(zn, zd);
            let l = substitute_affine(&p, &u, &z);
            prop_assert_eq!(l.min_exp(), -(p.len() as i32 - 1));
            for k in 0..=l.max_exp() {
                prop_assert_eq!(l.coeff(-k), Scalar::powi(&z, k as u32) * l.coeff(k));
            }
            prop_assert_eq!(l.invert_variable(&z).coeff(0), l.coeff(0));
        }
    }
}
