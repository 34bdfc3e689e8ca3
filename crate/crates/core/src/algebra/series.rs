use alloc::vec;
use alloc::vec::Vec;

use super::laurent::LaurentPoly;
use super::scalar::Scalar;

/// Truncated Laurent series about infinity, `sum_{n < len} c_n y^(top - n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeriesAtInfinity<S> {
    top: i32,
    coeffs: Vec<S>,
}

impl<S: Scalar> LaurentSeriesAtInfinity<S> {
    pub fn new(top: i32, coeffs: Vec<S>) -> Self {
        Self { top, coeffs }
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Lowest exponent that is still exact.
    pub fn valid_down_to(&self) -> i32 {
        self.top - self.coeffs.len() as i32 + 1
    }

    /// `[y^r]`; `None` when `r` lies below the truncation.
    pub fn coeff(&self, r: i32) -> Option<S> {
        if r > self.top {
            return Some(S::zero());
        }
        let n = (self.top - r) as usize;
        self.coeffs.get(n).cloned()
    }

    /// Product of two truncated series; the result is exact as far as both are.
    pub fn mul(&self, other: &Self) -> Self {
        let len = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![S::zero(); len];
        for i in 0..len {
            for j in 0..len - i {
                out[i + j] = out[i + j].clone() + self.coeffs[i].clone() * other.coeffs[j].clone();
            }
        }
        Self { top: self.top + other.top, coeffs: out }
    }

    /// Multiplies by a finite Laurent polynomial. The result is exact down to
    /// `valid_down_to() + p.max_exp()`.
    pub fn mul_poly(&self, p: &LaurentPoly<S>) -> Self {
        if p.is_empty() {
            return Self { top: self.top, coeffs: Vec::new() };
        }
        let top = self.top + p.max_exp();
        let bottom = self.valid_down_to() + p.max_exp();
        let len = (top - bottom + 1).max(0) as usize;
        let mut out = vec![S::zero(); len];
        for (n, c) in self.coeffs.iter().enumerate() {
            let e_s = self.top - n as i32;
            for k in p.min_exp()..=p.max_exp() {
                let e = e_s + k;
                if e < bottom {
                    continue;
                }
                let idx = (top - e) as usize;
                out[idx] = out[idx].clone() + c.clone() * p.coeff(k);
            }
        }
        Self { top, coeffs: out }
    }
}

/// `1/R(y)` with `R(y) = sqrt((y - a)(y - b))` expanded at infinity,
/// `sum_{n < n_terms} q_n y^(-n-1)`, `q_0 = 1`.
///
/// Computed by requiring `Q(y)^2 (y - a)(y - b) = 1` term by term: with
/// `w = 1/y`, `G = (1 - s w + p w^2)^-1` obeys `G_n = s G_(n-1) - p G_(n-2)`
/// and `F = G^(1/2)` follows from `2 F_n = G_n - sum_{0<i<n} F_i F_(n-i)`.
pub fn inv_sqrt_r_series<S: Scalar>(alpha_minus: &S, alpha_plus: &S, n_terms: usize) -> LaurentSeriesAtInfinity<S> {
    let n_terms = n_terms.max(1);
    let s = alpha_minus.clone() + alpha_plus.clone();
    let p = alpha_minus.clone() * alpha_plus.clone();
    let mut g: Vec<S> = Vec::with_capacity(n_terms);
    for n in 0..n_terms {
        let v = match n {
            0 => S::one(),
            1 => s.clone(),
            _ => s.clone() * g[n - 1].clone() - p.clone() * g[n - 2].clone(),
        };
        g.push(v);
    }
    let two = S::from_i64(2);
    let mut f: Vec<S> = Vec::with_capacity(n_terms);
    f.push(S::one());
    for n in 1..n_terms {
        let mut acc = g[n].clone();
        for i in 1..n {
            acc = acc - f[i].clone() * f[n - i].clone();
        }
        f.push(acc / two.clone());
    }
    LaurentSeriesAtInfinity::new(-1, f)
}

/// Expansion at `T = infinity` of `1 / ((T - 1)^a (T + 1)^b)` with `len` terms.
pub fn pole_factor_at_infinity<S: Scalar>(a: u32, b: u32, len: usize) -> LaurentSeriesAtInfinity<S> {
    // (1 - 1/T)^-a = sum C(a+n-1, n) T^-n ; (1 + 1/T)^-b = sum (-1)^n C(b+n-1, n) T^-n
    let series = |k: u32, alt: bool| -> LaurentSeriesAtInfinity<S> {
        let mut c = Vec::with_capacity(len);
        let mut cur = S::one();
        for n in 0..len {
            if n > 0 {
                // C(k+n-1, n) = C(k+n-2, n-1) * (k+n-1) / n
                cur = cur * S::from_i64(k as i64 + n as i64 - 1) / S::from_i64(n as i64);
            }
            let v = if alt && n % 2 == 1 { -cur.clone() } else { cur.clone() };
            c.push(v);
        }
        LaurentSeriesAtInfinity::new(0, c)
    };
    let mut out = series(a, false).mul(&series(b, true));
    out.top = -((a + b) as i32);
    out
}

/// `[T^0]_inf` of `num(T) / ((T - 1)^a (T + 1)^b)`, expanding the rational
/// factor at infinity as far as the numerator's top degree requires.
pub fn residue_at_infinity<S: Scalar>(num: &LaurentPoly<S>, a: u32, b: u32) -> S {
    if num.is_empty() {
        return S::zero();
    }
    let top = num.max_exp() - (a + b) as i32;
    if top < 0 {
        return S::zero();
    }
    let len = top as usize + 1;
    let series = pole_factor_at_infinity::<S>(a, b, len);
    let prod = series.mul_poly(num);
    prod.coeff(0).expect("series long enough for the constant term")
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
    fn semicircle_endpoints() {
        let s = inv_sqrt_r_series(&q(-2, 1), &q(2, 1), 4);
        assert_eq!(s.coeffs(), &[q(1, 1), q(0, 1), q(2, 1), q(0, 1)]);
    }

    #[test]
    fn degenerate_interval_is_pure_inverse() {
        let s = inv_sqrt_r_series(&q(0, 1), &q(0, 1), 6);
        assert_eq!(s.coeff(-1), Some(q(1, 1)));
        for r in -6..-1 {
            assert_eq!(s.coeff(r), Some(q(0, 1)));
        }
    }

    #[test]
    fn symmetric_endpoints_have_no_odd_terms() {
        let s = inv_sqrt_r_series(&-1.3f64, &1.3, 12);
        for (n, c) in s.coeffs().iter().enumerate() {
            if n % 2 == 1 {
                assert_eq!(*c, 0.0);
            }
        }
    }

    #[test]
    fn residue_of_simple_pole_factor() {
        // T / (T - 1)^2 = T^-1 + 2 T^-2 + ...; times T -> [T^0] = 1
        let num = LaurentPoly::monomial(q(1, 1), 2);
        assert_eq!(residue_at_infinity(&num, 2, 0), q(1, 1));
        // T^3 / ((T-1)(T+1)) = T + T^-1 + ... -> [T^0] = 0
        let num = LaurentPoly::monomial(q(1, 1), 3);
        assert_eq!(residue_at_infinity(&num, 1, 1), q(0, 1));
        let num = LaurentPoly::monomial(q(1, 1), 2);
        assert_eq!(residue_at_infinity(&num, 1, 1), q(1, 1));
    }

    proptest! {
        #[test]
        fn squared_series_inverts_quadratic(
            an in -6i64..6, ad in 1i64..4, bn in -6i64..6, bd in 1i64..4, n in 2usize..10,
        ) {
            // Q(y)^2 (y-a)(y-b) = 1 + O(y^-n), exactly
            let a = q(an, ad);
            let b = q(bn, bd);
            let s = inv_sqrt_r_series(&a, &b, n);
            let quad = LaurentPoly::from_coeffs(0, vec![a.clone() * b.clone(), -(a + b), q(1, 1)]);
            let prod = s.mul(&s).mul_poly(&quad);
            prop_assert_eq!(prod.coeff(0), Some(q(1, 1)));
            for r in prod.valid_down_to()..0 {
                prop_assert_eq!(prod.coeff(r), Some(q(0, 1)));
            }
            prop_assert_eq!(prod.valid_down_to(), -(n as i32) + 1);
        }
    }
}
