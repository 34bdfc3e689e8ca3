//! Gauss rules used by the measure and correlator checks.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// `int_a^b f` by `n`-point Gauss–Legendre.
pub fn integrate_gl(a: f64, b: f64, nodes: &[f64], weights: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes.iter().zip(weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Gauss–Chebyshev rule of the second kind:
/// `int_{-1}^{1} sqrt(1 - s^2) f(s) ds ~ sum w_i f(s_i)`, exact for
/// polynomials of degree `<= 2n - 1`.
pub fn gauss_chebyshev_second(n: usize) -> (Vec<f64>, Vec<f64>) {
    (1..=n)
        .map(|i| {
            let th = i as f64 * PI / (n as f64 + 1.0);
            let s = libm::sin(th);
            (libm::cos(th), PI / (n as f64 + 1.0) * s * s)
        })
        .unzip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(5);
        let sum: f64 = w.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        // int_0^2 t^9 dt = 102.4
        let v = integrate_gl(0.0, 2.0, &x, &w, |t| libm::pow(t, 9.0));
        assert!((v - 102.4).abs() < 1e-11);
    }

    #[test]
    fn chebyshev_second_kind_moments() {
        let (s, w) = gauss_chebyshev_second(4);
        let m0: f64 = w.iter().sum();
        let m2: f64 = s.iter().zip(&w).map(|(s, w)| w * s * s).sum();
        assert!((m0 - PI / 2.0).abs() < 1e-14);
        assert!((m2 - PI / 8.0).abs() < 1e-14);
    }
}
