use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use super::scalar::{RealScalar, Scalar};
use crate::error::{Error, Result};

/// Truncated multivariate Taylor expansion about a base point.
///
/// Each variable carries its own truncation order and the coefficient array
/// is the dense tensor product `prod_v (order_v + 1)`, stored row-major with
/// the last variable fastest. Coefficients are normalized Taylor
/// coefficients: `f = sum_a c_a d^a`, so the partial derivative of
/// multi-index `a` is `a! c_a`.
///
/// A jet with no variables is a plain constant and broadcasts against any
/// shape. Binary operations on two shaped jets truncate to the elementwise
/// minimum of the orders.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S> {
    orders: Vec<usize>,
    coeffs: Vec<S>,
}

fn shape_len(orders: &[usize]) -> usize {
    orders.iter().map(|o| o + 1).product()
}

fn strides(orders: &[usize]) -> Vec<usize> {
    let mut s = vec![1; orders.len()];
    for v in (0..orders.len().saturating_sub(1)).rev() {
        s[v] = s[v + 1] * (orders[v + 1] + 1);
    }
    s
}

fn unflatten(mut idx: usize, orders: &[usize], out: &mut [usize]) {
    for v in (0..orders.len()).rev() {
        let n = orders[v] + 1;
        out[v] = idx % n;
        idx /= n;
    }
}

fn flatten(multi: &[usize], orders: &[usize]) -> Option<usize> {
    let mut idx = 0;
    for (v, &i) in multi.iter().enumerate() {
        if i > orders[v] {
            return None;
        }
        idx = idx * (orders[v] + 1) + i;
    }
    Some(idx)
}

fn factorial_i64(n: usize) -> i64 {
    (1..=n as i64).product()
}

impl<S: Scalar> Jet<S> {
    /// Shapeless constant.
    pub fn constant(c: S) -> Self {
        Self { orders: Vec::new(), coeffs: vec![c] }
    }

    /// Constant embedded in a given shape.
    pub fn constant_shaped(c: S, orders: &[usize]) -> Self {
        let mut coeffs = vec![S::zero(); shape_len(orders)];
        coeffs[0] = c;
        Self { orders: orders.to_vec(), coeffs }
    }

    /// The coordinate function `base + d_var`.
    pub fn variable(base: S, var: usize, orders: &[usize]) -> Self {
        let mut j = Self::constant_shaped(base, orders);
        if orders[var] >= 1 {
            let mut multi = vec![0; orders.len()];
            multi[var] = 1;
            let idx = flatten(&multi, orders).expect("in shape");
            j.coeffs[idx] = S::one();
        }
        j
    }

    pub fn from_coeffs(orders: &[usize], coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), shape_len(orders), "coefficient count does not match shape");
        Self { orders: orders.to_vec(), coeffs }
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn nvars(&self) -> usize {
        self.orders.len()
    }

    pub fn is_constant(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Value at the base point.
    pub fn value(&self) -> S {
        self.coeffs[0].clone()
    }

    /// Taylor coefficient of `d^multi` (zero outside the stored shape).
    pub fn coeff(&self, multi: &[usize]) -> S {
        if self.is_constant() {
            return if multi.iter().all(|&i| i == 0) { self.value() } else { S::zero() };
        }
        match flatten(multi, &self.orders) {
            Some(i) => self.coeffs[i].clone(),
            None => S::zero(),
        }
    }

    /// Partial derivative `d^multi f` at the base point.
    pub fn partial(&self, multi: &[usize]) -> S {
        let scale: i64 = multi.iter().map(|&k| factorial_i64(k)).product();
        self.coeff(multi).scale_i64(scale)
    }

    /// Partial derivative as a jet; the order in `var` drops by one.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        if self.is_constant() {
            return Ok(Self::constant(S::zero()));
        }
        if self.orders[var] == 0 {
            return Err(Error::Precondition(alloc::format!(
                "jet has order 0 in variable {var}; derivative is not determined"
            )));
        }
        let mut orders = self.orders.clone();
        orders[var] -= 1;
        let mut out = Vec::with_capacity(shape_len(&orders));
        let mut multi = vec![0; orders.len()];
        for idx in 0..shape_len(&orders) {
            unflatten(idx, &orders, &mut multi);
            let k = multi[var];
            multi[var] += 1;
            let c = self.coeffs[flatten(&multi, &self.orders).expect("in shape")].clone();
            multi[var] -= 1;
            out.push(c.scale_i64(k as i64 + 1));
        }
        Ok(Self { orders, coeffs: out })
    }

    /// Drops higher-order information so that every order is at most `orders`.
    pub fn truncate(&self, orders: &[usize]) -> Self {
        if self.is_constant() {
            return self.clone();
        }
        assert_eq!(orders.len(), self.orders.len());
        let new: Vec<usize> = self.orders.iter().zip(orders).map(|(a, b)| *a.min(b)).collect();
        self.reshape(&new)
    }

    fn reshape(&self, orders: &[usize]) -> Self {
        if !self.is_constant() && self.orders == orders {
            return self.clone();
        }
        let mut out = Vec::with_capacity(shape_len(orders));
        let mut multi = vec![0; orders.len()];
        for idx in 0..shape_len(orders) {
            unflatten(idx, orders, &mut multi);
            out.push(self.coeff(&multi));
        }
        Self { orders: orders.to_vec(), coeffs: out }
    }

    fn common_orders(&self, other: &Self) -> Vec<usize> {
        match (self.is_constant(), other.is_constant()) {
            (true, true) => Vec::new(),
            (true, false) => other.orders.clone(),
            (false, true) => self.orders.clone(),
            (false, false) => {
                assert_eq!(self.orders.len(), other.orders.len(), "jets over different variable sets");
                self.orders.iter().zip(&other.orders).map(|(a, b)| *a.min(b)).collect()
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { orders: self.orders.clone(), coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Largest total degree present in the shape; `(f - f(0))^(K+1) = 0`.
    pub fn nilpotency(&self) -> usize {
        self.orders.iter().sum()
    }

    fn mul_jet(&self, other: &Self) -> Self {
        let orders = self.common_orders(other);
        if orders.is_empty() {
            return Self::constant(self.value() * other.value());
        }
        let a = self.reshape(&orders);
        let b = other.reshape(&orders);
        let n = shape_len(&orders);
        let st = strides(&orders);
        let nv = orders.len();
        let mut out: Vec<Option<S>> = vec![None; n];
        let mut ma = vec![0; nv];
        let mut mb = vec![0; nv];
        for ia in 0..n {
            if a.coeffs[ia].is_zero() {
                continue;
            }
            unflatten(ia, &orders, &mut ma);
            for ib in 0..n {
                unflatten(ib, &orders, &mut mb);
                if (0..nv).any(|v| ma[v] + mb[v] > orders[v]) {
                    continue;
                }
                let ic: usize = (0..nv).map(|v| (ma[v] + mb[v]) * st[v]).sum();
                let term = a.coeffs[ia].clone() * b.coeffs[ib].clone();
                out[ic] = Some(match out[ic].take() {
                    Some(acc) => acc + term,
                    None => term,
                });
            }
        }
        Self { orders, coeffs: out.into_iter().map(|c| c.unwrap_or_else(S::zero)).collect() }
    }

    /// Quotient without a check on the divisor's constant term.
    fn div_unchecked(&self, other: &Self) -> Self {
        let orders = self.common_orders(other);
        if orders.is_empty() {
            return Self::constant(self.value() / other.value());
        }
        let a = self.reshape(&orders);
        let b = other.reshape(&orders);
        let n = shape_len(&orders);
        let nv = orders.len();
        let st = strides(&orders);
        let b0 = b.coeffs[0].clone();
        let mut q: Vec<S> = Vec::with_capacity(n);
        let mut mq = vec![0; nv];
        let mut ma = vec![0; nv];
        // row-major order is a linear extension of the componentwise order
        for ia in 0..n {
            unflatten(ia, &orders, &mut ma);
            let mut acc = a.coeffs[ia].clone();
            for (iq, qc) in q.iter().enumerate() {
                unflatten(iq, &orders, &mut mq);
                if (0..nv).any(|v| mq[v] > ma[v]) {
                    continue;
                }
                let ib: usize = (0..nv).map(|v| (ma[v] - mq[v]) * st[v]).sum();
                if !b.coeffs[ib].is_zero() {
                    acc = acc - qc.clone() * b.coeffs[ib].clone();
                }
            }
            q.push(acc / b0.clone());
        }
        Self { orders, coeffs: q }
    }

    /// Quotient; fails when the divisor's constant term is exactly zero.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.value().is_zero() {
            return Err(Error::SingularJet);
        }
        Ok(self.div_unchecked(other))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::constant(S::one()).checked_div(self)
    }

    /// `sum_k taylor[k] (self - self(0))^k`, i.e. composition with a
    /// univariate function whose Taylor coefficients at `self(0)` are given.
    pub fn compose(&self, taylor: &[S]) -> Self {
        let mut nil = self.clone();
        nil.coeffs[0] = S::zero();
        let k = self.nilpotency().min(taylor.len().saturating_sub(1));
        let mut acc = Self::constant_shaped(taylor[k].clone(), &self.orders);
        for c in taylor[..k].iter().rev() {
            acc = acc.mul_jet(&nil);
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        acc
    }
}

impl Jet<f64> {
    pub fn try_ln(&self) -> Result<Self> {
        let g0 = self.value();
        if !(g0 > 0.0) {
            return Err(Error::Domain("jet logarithm needs a positive constant term"));
        }
        let k = self.nilpotency();
        let mut taylor = vec![libm::log(g0)];
        let mut p = 1.0;
        for i in 1..=k {
            p /= g0;
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            taylor.push(sign * p / i as f64);
        }
        Ok(self.compose(&taylor))
    }

    pub fn try_sqrt(&self) -> Result<Self> {
        let g0 = self.value();
        if !(g0 > 0.0) {
            return Err(Error::Domain("jet square root needs a positive constant term"));
        }
        let k = self.nilpotency();
        // binom(1/2, i) g0^(1/2 - i)
        let mut taylor = Vec::with_capacity(k + 1);
        let mut c = libm::sqrt(g0);
        taylor.push(c);
        for i in 1..=k {
            c *= (0.5 - (i as f64 - 1.0)) / (i as f64) / g0;
            taylor.push(c);
        }
        Ok(self.compose(&taylor))
    }

    pub fn exp(&self) -> Self {
        let g0 = self.value();
        let k = self.nilpotency();
        let mut taylor = Vec::with_capacity(k + 1);
        let mut c = libm::exp(g0);
        taylor.push(c);
        for i in 1..=k {
            c /= i as f64;
            taylor.push(c);
        }
        self.compose(&taylor)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let orders = self.common_orders(&rhs);
        if orders.is_empty() {
            return Self::constant(self.value() + rhs.value());
        }
        let a = self.reshape(&orders);
        let b = rhs.reshape(&orders);
        Self { orders, coeffs: a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect() }
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { orders: self.orders, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_jet(&rhs)
    }
}

/// Unchecked: a zero constant term in the divisor yields whatever the
/// scalar's own division does (inf/NaN for floats). Use [`Jet::checked_div`]
/// where the divisor may be singular.
impl<S: Scalar> Div for Jet<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.div_unchecked(&rhs)
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    fn zero() -> Self {
        Self::constant(S::zero())
    }
    fn one() -> Self {
        Self::constant(S::one())
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(S::from_i64(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(S::from_ratio(num, den))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }
    fn scale_i64(&self, n: i64) -> Self {
        self.scale(&S::from_i64(n))
    }
}

impl RealScalar for Jet<f64> {
    fn lead(&self) -> f64 {
        self.value()
    }
    fn from_f64(v: f64) -> Self {
        Self::constant(v)
    }
    fn try_sqrt(&self) -> Result<Self> {
        Jet::try_sqrt(self)
    }
    fn try_ln(&self) -> Result<Self> {
        Jet::try_ln(self)
    }
}
