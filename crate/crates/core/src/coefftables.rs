//! Exact coefficients expanding `(T - 2 + 1/T)^-(k+1)` in the `phi~_m`,
//! `psi~_m` basis, and the exact combinatorial identities behind them.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{binomial, double_factorial, factorial, rational_to_f64, LaurentPoly, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_KMAX: usize = 16;

fn rat(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `sum_l C(m, l)^2 T^(2l - m)`.
pub fn phi_numerator(m: usize) -> LaurentPoly<Rational> {
    let m = m as i64;
    LaurentPoly::from_fn(-(m as i32), m as i32, |e| {
        let e = e as i64;
        if (e + m) % 2 != 0 {
            return int(0);
        }
        let l = (e + m) / 2;
        let c = binomial(m, l);
        rat(&c * &c)
    })
}

/// `sum_l C(m-1, l) C(m+1, l+1) T^(2l + 1 - m)`.
pub fn psi_numerator(m: usize) -> LaurentPoly<Rational> {
    let m = m as i64;
    LaurentPoly::from_fn((1 - m) as i32, (m + 1) as i32, |e| {
        let e = e as i64;
        if (e + m - 1) % 2 != 0 {
            return int(0);
        }
        let l = (e + m - 1) / 2;
        rat(binomial(m - 1, l) * binomial(m + 1, l + 1))
    })
}

fn t_squared_minus_one() -> LaurentPoly<Rational> {
    LaurentPoly::from_coeffs(0, vec![int(-1), int(0), int(1)])
}

/// `m! T^(2m) N(T) (T^2 - 1)^(2(k+1-m))`: a basis function times
/// `(T - 1)^(2k+2) (T + 1)^(2k+2)`.
fn cleared_basis(numerator: &LaurentPoly<Rational>, m: usize, k: usize) -> LaurentPoly<Rational> {
    let f = rat(factorial(m as u64));
    let p = numerator.scale(&f).shift(2 * m as i32);
    &p * &t_squared_minus_one().pow(2 * (k + 1 - m) as u32)
}

/// `T^(k+1) (T + 1)^(2k+2)`: the left side times the same factor.
fn cleared_target(k: usize) -> LaurentPoly<Rational> {
    let tp1 = LaurentPoly::from_coeffs(0, vec![int(1), int(1)]);
    tp1.pow(2 * k as u32 + 2).shift(k as i32 + 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    kmax: usize,
    /// `phi[k][m - 1]`
    phi: Vec<Vec<Rational>>,
    psi: Vec<Vec<Rational>>,
}

impl CoeffTable {
    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// `c^(phi)_{k,m}`, zero outside `1 <= m <= k+1`.
    pub fn phi(&self, k: usize, m: usize) -> Rational {
        entry(&self.phi, k, m)
    }

    pub fn psi(&self, k: usize, m: usize) -> Rational {
        entry(&self.psi, k, m)
    }

    pub fn phi_f64(&self, k: usize, m: usize) -> f64 {
        rational_to_f64(&self.phi(k, m))
    }

    pub fn psi_f64(&self, k: usize, m: usize) -> f64 {
        rational_to_f64(&self.psi(k, m))
    }

    /// Rows `k <= kmax` as `(k, m, c_phi, c_psi)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational, &Rational)> + '_ {
        self.phi.iter().zip(&self.psi).enumerate().flat_map(|(k, (pr, sr))| {
            pr.iter().zip(sr).enumerate().map(move |(i, (p, s))| (k, i + 1, p, s))
        })
    }
}

fn entry(rows: &[Vec<Rational>], k: usize, m: usize) -> Rational {
    if m == 0 {
        return int(0);
    }
    rows.get(k).and_then(|r| r.get(m - 1)).cloned().unwrap_or_else(|| int(0))
}

fn to_integer(r: &Rational) -> BigInt {
    debug_assert!(r.denom().is_one());
    r.numer().clone()
}

/// Solves the overdetermined integer system `a x = b` exactly by
/// fraction-free (Bareiss) elimination. Returns `None` when the columns are
/// dependent or the system is inconsistent.
fn solve_exact(mut a: Vec<Vec<BigInt>>, ncols: usize) -> Option<Vec<Rational>> {
    let nrows = a.len();
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let piv = (col..nrows).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        for i in col + 1..nrows {
            for j in col + 1..=ncols {
                let v = (&a[col][col] * &a[i][j] - &a[i][col] * &a[col][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[col][col].clone();
    }
    if a[ncols..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![int(0); ncols];
    for i in (0..ncols).rev() {
        let mut acc = rat(a[i][ncols].clone());
        for j in i + 1..ncols {
            acc -= rat(a[i][j].clone()) * x[j].clone();
        }
        x[i] = acc / rat(a[i][i].clone());
    }
    Some(x)
}

fn solve_row(k: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let n = k + 1;
    let mut cols: Vec<LaurentPoly<Rational>> = Vec::with_capacity(2 * n);
    for m in 1..=n {
        cols.push(cleared_basis(&phi_numerator(m), m, k));
    }
    for m in 1..=n {
        cols.push(cleared_basis(&psi_numerator(m), m, k));
    }
    let rhs = cleared_target(k);
    let lo = cols.iter().map(|c| c.min_exp()).chain([rhs.min_exp()]).min().unwrap_or(0);
    let hi = cols.iter().map(|c| c.max_exp()).chain([rhs.max_exp()]).max().unwrap_or(0);
    let rows: Vec<Vec<BigInt>> = (lo..=hi)
        .map(|e| {
            let mut row: Vec<BigInt> = cols.iter().map(|c| to_integer(&c.coeff(e))).collect();
            row.push(to_integer(&rhs.coeff(e)));
            row
        })
        .collect();
    let sol = solve_exact(rows, 2 * n).ok_or(Error::SingularSystem(k))?;
    Ok((sol[..n].to_vec(), sol[n..].to_vec()))
}

/// Builds rows `k = 0..=kmax` by coefficient matching after clearing the
/// denominators `(T - 1)^(2k+2) (T + 1)^(2k+2)`.
pub fn build_c_table(kmax: usize) -> Result<CoeffTable> {
    let mut phi = Vec::with_capacity(kmax + 1);
    let mut psi = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let (p, s) = solve_row(k)?;
        phi.push(p);
        psi.push(s);
    }
    Ok(CoeffTable { kmax, phi, psi })
}

/// Checks that every row reproduces `(T - 2 + 1/T)^-(k+1)` exactly.
pub fn verify_reconstruction(table: &CoeffTable) -> bool {
    (0..=table.kmax).all(|k| {
        let mut acc = cleared_target(k);
        for m in 1..=k + 1 {
            acc = &acc - &cleared_basis(&phi_numerator(m), m, k).scale(&table.phi(k, m));
            acc = &acc - &cleared_basis(&psi_numerator(m), m, k).scale(&table.psi(k, m));
        }
        acc.is_identically_zero()
    })
}

/// `N / (1 - T^-2)^e`.
#[derive(Clone, Debug, PartialEq)]
struct ClearedFraction {
    num: LaurentPoly<Rational>,
    e: u32,
}

impl ClearedFraction {
    /// `-d/dT (f / (1 - T^-2))`.
    fn step(&self) -> Self {
        let one_minus = LaurentPoly::from_coeffs(-2, vec![int(-1), int(0), int(1)]);
        let a = &self.num.derivative() * &one_minus;
        let b = self.num.scale(&int(2 * (self.e as i64 + 1))).shift(-3);
        Self { num: &b - &a, e: self.e + 2 }
    }
}

/// Applies `(-d/dT o (1 - T^-2)^-1)^m` to `1/T` and to `1` and compares with
/// the closed forms
/// `m! / (T - 1/T)^(2m) sum_l C(m,l)^2 T^(2l-m-1)` and
/// `m! / (T - 1/T)^(2m) sum_l C(m-1,l) C(m+1,l+1) T^(2l-m)`.
pub fn verify_derivative_closed_forms(m: usize) -> bool {
    let mut a = ClearedFraction { num: LaurentPoly::monomial(int(1), -1), e: 0 };
    let mut b = ClearedFraction { num: LaurentPoly::constant(int(1)), e: 0 };
    for _ in 0..m {
        a = a.step();
        b = b.step();
    }
    // (T - 1/T)^(2m) = T^(2m) (1 - T^-2)^(2m)
    let f = rat(factorial(m as u64));
    let mi = m as i32;
    let closed_a = phi_numerator(m).scale(&f).shift(-2 * mi - 1);
    let closed_b = psi_numerator(m).scale(&f).shift(-2 * mi - 1);
    a.e == 2 * m as u32
        && b.e == 2 * m as u32
        && (&a.num - &closed_a).is_identically_zero()
        && (&b.num - &closed_b).is_identically_zero()
}

/// The odd-part identity
/// `T^(k+1)/2 ((T-1)^-(2k+2) + (-1)^k (T+1)^-(2k+2)) = sum_m 2^(4m-2k) C(m,k-m) (T+1/T)/(T-1/T)^(2m+2)`
/// after multiplying both sides by `2 (T^2 - 1)^(2k+2)`.
pub fn verify_odd_part_expansion(k: usize) -> bool {
    let tp1 = LaurentPoly::from_coeffs(0, vec![int(1), int(1)]);
    let tm1 = LaurentPoly::from_coeffs(0, vec![int(-1), int(1)]);
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    let lhs = (&tp1.pow(2 * k as u32 + 2) + &tm1.pow(2 * k as u32 + 2).scale(&int(sign))).shift(k as i32 + 1);
    let t_plus_inv = LaurentPoly::from_coeffs(-1, vec![int(1), int(0), int(1)]);
    let mut rhs = LaurentPoly::zero();
    for m in 0..=k {
        let c = binomial(m as i64, (k - m) as i64);
        if c.is_zero() {
            continue;
        }
        let e = 4 * m as i32 - 2 * k as i32;
        let pow2 = if e >= 0 { int(1i64 << e) } else { int(1) / int(1i64 << -e) };
        let coef = rat(c) * pow2 * int(2);
        let term = &t_plus_inv.clone().shift(2 * m as i32 + 2) * &t_squared_minus_one().pow(2 * (k - m) as u32);
        rhs = &rhs + &term.scale(&coef);
    }
    (&lhs - &rhs).is_identically_zero()
}

fn sign(n: i64) -> BigInt {
    if n.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// The four summation identities used for linear independence, with the
/// `psi` sums indexed as `C(m-1, l) C(m+1, l+1)`:
/// `sum C(m,l)^2 = C(2m,m)`, `sum C(m-1,l) C(m+1,l+1) = C(2m,m)`, and their
/// alternating versions with the parity split closed forms.
pub fn verify_binomial_identities(m: usize) -> bool {
    let m = m as i64;
    let c2m = binomial(2 * m, m);
    let a: BigInt = (0..=m).map(|l| binomial(m, l).pow(2)).sum();
    let b: BigInt = (0..m).map(|l| binomial(m - 1, l) * binomial(m + 1, l + 1)).sum();
    let c: BigInt = (0..=m).map(|l| binomial(m, l).pow(2) * sign(l)).sum();
    let d: BigInt = (0..m).map(|l| binomial(m - 1, l) * binomial(m + 1, l + 1) * sign(l)).sum();
    let c_closed = if m % 2 == 0 { sign(m / 2) * binomial(m, m / 2) } else { BigInt::zero() };
    let d_closed = if m % 2 == 0 {
        int(0)
    } else {
        rat(sign((m - 1) / 2) * (BigInt::one() << m as usize))
            * Rational::new(double_factorial(m - 2), double_factorial(m - 1))
    };
    a == c2m && b == c2m && c == c_closed && rat(d) == d_closed
}

/// Leading Laurent coefficients of `phi~_m`, `psi~_m` at `T = 1` and
/// `T = -1` (coefficients of `(T - 1)^-2m` and `(T + 1)^-2m`).
#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceData {
    pub phi_at_one: Rational,
    pub psi_at_one: Rational,
    pub phi_at_minus_one: Rational,
    pub psi_at_minus_one: Rational,
}

fn eval_at(p: &LaurentPoly<Rational>, t: i64) -> Rational {
    (p.min_exp()..=p.max_exp())
        .map(|e| p.coeff(e) * if e.rem_euclid(2) == 0 || t == 1 { int(1) } else { int(-1) })
        .fold(int(0), |a, b| a + b)
}

pub fn independence_data(m: usize) -> IndependenceData {
    // phi~_m = m! T^(2m) P(T) / ((T-1)^(2m) (T+1)^(2m)); the other pole factor at +-1 is 2^(2m)
    let f = rat(factorial(m as u64));
    let four_m = rat(BigInt::one() << (2 * m));
    let lead = |p: &LaurentPoly<Rational>, t: i64| f.clone() * eval_at(p, t) / four_m.clone();
    let p = phi_numerator(m);
    let q = psi_numerator(m);
    IndependenceData {
        phi_at_one: lead(&p, 1),
        psi_at_one: lead(&q, 1),
        phi_at_minus_one: lead(&p, -1),
        psi_at_minus_one: lead(&q, -1),
    }
}

/// Both functions have poles of full order `2m` at `T = 1`, and the ratio of
/// their leading coefficients at `T = -1` differs from the ratio at `T = 1`,
/// so no combination of `phi~_m`, `psi~_m` has a pole of order below `2m`
/// at both points.
pub fn independence_holds(m: usize) -> bool {
    let d = independence_data(m);
    if d.phi_at_one.is_zero() || d.psi_at_one.is_zero() {
        return false;
    }
    let expect = rat(factorial(m as u64)) * rat(binomial(2 * m as i64, m as i64)) / rat(BigInt::one() << (2 * m));
    let full = d.phi_at_one == expect && d.psi_at_one == expect;
    full && d.phi_at_minus_one.clone() * d.psi_at_one.clone() != d.psi_at_minus_one.clone() * d.phi_at_one.clone()
}

/// `c^(phi)_{k,k+1} = c^(psi)_{k,k+1} = 2^k / (2k+1)!!` for every `k <= kmax`.
pub fn check_diagonal_conjecture(table: &CoeffTable, kmax: usize) -> bool {
    if kmax > table.kmax {
        return false;
    }
    (0..=kmax).all(|k| {
        let expect = Rational::new(BigInt::one() << k, double_factorial(2 * k as i64 + 1));
        table.phi(k, k + 1) == expect && table.psi(k, k + 1) == expect
    })
}
