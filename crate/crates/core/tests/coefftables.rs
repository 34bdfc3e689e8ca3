use eqmap_core::algebra::{double_factorial, Rational};
use eqmap_core::coefftables::*;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn r(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[test]
fn first_rows() {
    let t = build_c_table(4).unwrap();
    assert_eq!(t.phi(0, 1), Rational::one());
    assert_eq!(t.psi(0, 1), Rational::one());
    assert!(t.phi(1, 1).is_zero());
    assert_eq!(t.psi(1, 1), r(-1, 6));
    assert_eq!(t.phi(1, 2), r(2, 3));
    assert_eq!(t.psi(1, 2), r(2, 3));
    assert_eq!(t.phi(2, 2), r(-1, 30));
    assert_eq!(t.psi(2, 1), r(1, 30));
    assert_eq!(t.psi(2, 2), r(-1, 10));
    for k in 1..=4 {
        assert!(t.phi(k, 1).is_zero());
    }
}

#[test]
fn tables_reconstruct_the_expansion() {
    for kmax in [0, 1, 4, 8] {
        assert!(verify_reconstruction(&build_c_table(kmax).unwrap()));
    }
}

#[test]
fn diagonal_is_two_power_over_double_factorial() {
    let t = build_c_table(10).unwrap();
    assert!(check_diagonal_conjecture(&t, 10));
    for k in 0..=10usize {
        let expect = Rational::new(BigInt::from(2).pow(k as u32), double_factorial(2 * k as i64 + 1));
        assert_eq!(t.phi(k, k + 1), expect);
        assert_eq!(t.psi(k, k + 1), expect);
    }
}

#[test]
fn larger_tables_extend_smaller_ones() {
    let small = build_c_table(4).unwrap();
    let large = build_c_table(8).unwrap();
    for (k, m, phi, psi) in small.entries() {
        assert_eq!(&large.phi(k, m), phi);
        assert_eq!(&large.psi(k, m), psi);
    }
}

#[test]
fn identities_hold() {
    for m in 0..=10 {
        assert!(verify_derivative_closed_forms(m), "m={m}");
        assert!(verify_odd_part_expansion(m), "k={m}");
    }
    for m in 1..=20 {
        assert!(verify_binomial_identities(m), "m={m}");
    }
}

#[test]
fn phi_and_psi_are_independent() {
    for m in 1..=8 {
        assert!(independence_holds(m));
    }
}

#[test]
fn row_entries_vanish_above_diagonal() {
    let t = build_c_table(6).unwrap();
    for k in 0..=6 {
        for m in k + 2..=8 {
            assert!(t.phi(k, m).is_zero() && t.psi(k, m).is_zero());
        }
    }
}
