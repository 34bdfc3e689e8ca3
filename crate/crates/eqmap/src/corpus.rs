//! Seeded random corpus of one-cut potentials.

use eqmap_core::endpoints::{one_cut_certificate, solve_endpoints_default, PotentialSpec};
use eqmap_core::hfunc::h_classical;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_e9a9;

#[derive(Clone, Debug)]
pub struct Corpus {
    pub potentials: Vec<PotentialSpec>,
    /// Draws discarded because they are not one-cut.
    pub rejected: usize,
}

impl Corpus {
    pub fn even(&self) -> impl Iterator<Item = &PotentialSpec> {
        self.potentials.iter().filter(|p| p.is_even())
    }
}

pub fn is_one_cut(pot: &PotentialSpec) -> bool {
    match solve_endpoints_default(pot) {
        Ok(ep) => one_cut_certificate(&h_classical(&ep), ep.alpha_minus(), ep.alpha_plus()),
        Err(_) => false,
    }
}

/// `n` potentials at `x = 1` of degree 3 to 6 with `|t_j| <= bound` and
/// `t_d > 0` for even `d`. Every fourth draw uses even powers only.
pub fn random_corpus(seed: u64, n: usize, bound: f64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut potentials = Vec::with_capacity(n);
    let mut rejected = 0;
    let mut draw = 0usize;
    while potentials.len() < n {
        let even_only = draw % 4 == 3;
        draw += 1;
        let d = if even_only { 2 * rng.gen_range(2..=3) } else { rng.gen_range(3..=6) };
        let mut t: Vec<(usize, f64)> = (1..=d)
            .filter(|j| !even_only || j % 2 == 0)
            .map(|j| (j, rng.gen_range(-bound..=bound)))
            .collect();
        if d % 2 == 0 {
            let last = t.last_mut().expect("degree at least 2");
            last.1 = last.1.abs().max(1e-4);
        }
        let pot = PotentialSpec::new(1.0, t).expect("finite coefficients");
        if is_one_cut(&pot) {
            potentials.push(pot);
        } else {
            rejected += 1;
        }
    }
    Corpus { potentials, rejected }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_within_bounds() {
        let a = random_corpus(7, 20, 0.02);
        let b = random_corpus(7, 20, 0.02);
        assert_eq!(a.potentials, b.potentials);
        for p in &a.potentials {
            assert!(p.degree() <= 6);
            assert!(p.coefficients().all(|(_, t)| t.abs() <= 0.02));
            if p.degree() % 2 == 0 {
                assert!(p.t(p.degree()) > 0.0);
            }
        }
        assert!(a.even().count() >= 4);
    }
}
