//! The acceptance suite: thirteen numbered checks, each reporting pass/fail
//! with the worst observed error.

use std::cell::OnceCell;
use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use eqmap_core::algebra::{double_factorial, Rational};
use eqmap_core::coefftables::{
    build_c_table, check_diagonal_conjecture, verify_binomial_identities, verify_derivative_closed_forms, verify_odd_part_expansion,
};
use eqmap_core::correlators::{loop_equation_residual, w1_subleading, CorrelatorContext, DEFAULT_CONTOUR_NODES};
use eqmap_core::endpoints::{solve_endpoints_default, uz_jets, PotentialSpec};
use eqmap_core::genfun::{e1_even_valence, e1_monomial, e1_series, e1_value, verify_relations};
use eqmap_core::hfunc::{h_classical, h_even, h_general, h_left_variant, verify_residue_representation, HPoly};
use eqmap_core::measure::{density, total_mass, variational_report, EquilibriumMeasure};
use eqmap_core::oracle::{e1_coeff_from_census, VertexProfile};
use num_complex::Complex64 as C;

use crate::census::{parallel_census, thread_limit};
use crate::corpus::{random_corpus, Corpus, DEFAULT_SEED};

/// Reference `c^(phi)_{k,m}` values, rows `k = 0..=4`, columns `m = 1..=5`.
pub const REFERENCE_PHI: [[(i64, i64); 5]; 5] = [
    [(1, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
    [(0, 1), (2, 3), (0, 1), (0, 1), (0, 1)],
    [(0, 1), (-1, 30), (4, 15), (0, 1), (0, 1)],
    [(0, 1), (1, 140), (-2, 105), (8, 105), (0, 1)],
    [(0, 1), (-1, 630), (1, 252), (-2, 315), (16, 945)],
];

/// Reference `c^(psi)_{k,m}` values.
pub const REFERENCE_PSI: [[(i64, i64); 5]; 5] = [
    [(1, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
    [(-1, 6), (2, 3), (0, 1), (0, 1), (0, 1)],
    [(1, 30), (-1, 10), (4, 15), (0, 1), (0, 1)],
    [(-1, 140), (2, 105), (-4, 105), (8, 105), (0, 1)],
    [(1, 630), (-1, 252), (-1, 140), (-2, 189), (16, 945)],
];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {}: {} [{:.2?}]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub corpus_size: usize,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, corpus_size: 100, threads: thread_limit() }
    }
}

pub const CRITERIA: [(u8, &str); 13] = [
    (1, "c-table reproduction"),
    (2, "identity suite"),
    (3, "diagonal entries"),
    (4, "h route agreement"),
    (5, "left-endpoint variant"),
    (6, "residue representation of phi, psi"),
    (7, "measure checks"),
    (8, "Gaussian anchors"),
    (9, "loop-equation residual"),
    (10, "e1 special cases"),
    (11, "Toda, scaling and reduction relations"),
    (12, "census equivalence"),
    (13, "quartic endpoint oracle"),
];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn failed(e: impl fmt::Display) -> Outcome {
    outcome(false, format!("error: {e}"))
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// A corpus entry with its three `h` routes.
struct CorpusCase {
    pot: PotentialSpec,
    classical: HPoly,
    general: HPoly,
    even: Option<HPoly>,
    residues_ok: bool,
}

pub struct Suite {
    opts: VerifyOptions,
    corpus: OnceCell<Result<(Corpus, Vec<CorpusCase>), String>>,
}

impl Suite {
    pub fn new(opts: VerifyOptions) -> Self {
        Self { opts, corpus: OnceCell::new() }
    }

    pub fn run_all(&self) -> Vec<CriterionResult> {
        CRITERIA.iter().map(|(id, _)| self.run(*id)).collect()
    }

    pub fn run(&self, id: u8) -> CriterionResult {
        let title = CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, t)| *t).unwrap_or("unknown");
        let start = Instant::now();
        let o = match id {
            1 => self.c_table(),
            2 => self.identities(),
            3 => self.diagonal(),
            4 => self.routes(),
            5 => self.left_variant(),
            6 => self.residues(),
            7 => self.measure(),
            8 => self.gaussian(),
            9 => self.loop_equation(),
            10 => self.e1_cases(),
            11 => self.relations(),
            12 => self.census(),
            13 => self.quartic(),
            _ => outcome(false, "no such criterion"),
        };
        CriterionResult { id, title, passed: o.passed, detail: o.detail, elapsed: start.elapsed() }
    }

    fn c_table(&self) -> Outcome {
        let start = Instant::now();
        let table = match build_c_table(4) {
            Ok(t) => t,
            Err(e) => return failed(e),
        };
        let elapsed = start.elapsed();
        let mut mismatches = Vec::new();
        let mut compared = 0;
        for k in 0..5 {
            for m in 1..=5 {
                let (pp, pq) = REFERENCE_PHI[k][m - 1];
                let (sp, sq) = REFERENCE_PSI[k][m - 1];
                compared += 2;
                if table.phi(k, m) != rat(pp, pq) {
                    mismatches.push(format!("phi({k},{m}) computed {} reference {}", table.phi(k, m), rat(pp, pq)));
                }
                if table.psi(k, m) != rat(sp, sq) {
                    mismatches.push(format!("psi({k},{m}) computed {} reference {}", table.psi(k, m), rat(sp, sq)));
                }
            }
        }
        let fast = elapsed < Duration::from_secs(1);
        let detail = if mismatches.is_empty() {
            format!("{compared} entries match, built in {elapsed:.2?}")
        } else {
            format!("{} of {compared} entries differ: {}", mismatches.len(), mismatches.join("; "))
        };
        outcome(mismatches.is_empty() && fast, detail)
    }

    fn identities(&self) -> Outcome {
        let start = Instant::now();
        let l2: Vec<usize> = (0..=10).filter(|&m| !verify_derivative_closed_forms(m)).collect();
        let l4: Vec<usize> = (0..=10).filter(|&k| !verify_odd_part_expansion(k)).collect();
        let bi: Vec<usize> = (1..=20).filter(|&m| !verify_binomial_identities(m)).collect();
        let elapsed = start.elapsed();
        let ok = l2.is_empty() && l4.is_empty() && bi.is_empty() && elapsed < Duration::from_secs(10);
        outcome(
            ok,
            format!("derivative closed forms m<=10 failures {l2:?}, even-route identity k<=10 failures {l4:?}, binomial sums m<=20 failures {bi:?}"),
        )
    }

    fn diagonal(&self) -> Outcome {
        let table = match build_c_table(8) {
            Ok(t) => t,
            Err(e) => return failed(e),
        };
        let mut bad = Vec::new();
        for k in 0..=8usize {
            let expect = Rational::new((1i64 << k).into(), double_factorial(2 * k as i64 + 1));
            if table.phi(k, k + 1) != expect || table.psi(k, k + 1) != expect {
                bad.push(k);
            }
        }
        let ok = bad.is_empty() && check_diagonal_conjecture(&table, 8);
        outcome(ok, format!("2^k/(2k+1)!! for k<=8, failures {bad:?}"))
    }

    fn corpus(&self) -> Result<&(Corpus, Vec<CorpusCase>), &String> {
        self.corpus
            .get_or_init(|| {
                let corpus = random_corpus(self.opts.seed, self.opts.corpus_size, 0.02);
                let table = build_c_table(4).map_err(|e| e.to_string())?;
                let mut cases = Vec::with_capacity(corpus.potentials.len());
                for pot in &corpus.potentials {
                    let ep = uz_jets(pot, (pot.degree() - 1).max(4), 0).map_err(|e| e.to_string())?;
                    let classical = h_classical(&ep);
                    let general = h_general(&ep, &table).map_err(|e| e.to_string())?;
                    let even = if pot.is_even() { Some(h_even(&ep).map_err(|e| e.to_string())?) } else { None };
                    let mut residues_ok = true;
                    for m in 0..=4 {
                        residues_ok &= verify_residue_representation(&ep, m, 1e-9).map_err(|e| e.to_string())?;
                    }
                    cases.push(CorpusCase { pot: pot.clone(), classical, general, even, residues_ok });
                }
                Ok((corpus, cases))
            })
            .as_ref()
    }

    fn routes(&self) -> Outcome {
        let start = Instant::now();
        let (corpus, cases) = match self.corpus() {
            Ok(c) => c,
            Err(e) => return failed(e),
        };
        let mut worst = 0.0f64;
        let mut bad = 0;
        let mut even = 0;
        for c in cases {
            worst = worst.max(relative_gap(&c.general, &c.classical));
            let mut ok = c.general.agrees_with(&c.classical, 1e-9);
            if let Some(e) = &c.even {
                even += 1;
                worst = worst.max(relative_gap(e, &c.classical));
                ok &= e.agrees_with(&c.classical, 1e-9);
            }
            if !ok {
                bad += 1;
            }
        }
        let elapsed = start.elapsed();
        outcome(
            bad == 0 && elapsed < Duration::from_secs(30),
            format!(
                "{} potentials ({even} even, {} non-one-cut draws rejected), {bad} disagree, worst relative gap {worst:.1e}",
                cases.len(),
                corpus.rejected
            ),
        )
    }

    fn left_variant(&self) -> Outcome {
        let (_, cases) = match self.corpus() {
            Ok(c) => c,
            Err(e) => return failed(e),
        };
        let mut worst = 0.0f64;
        let mut bad = 0;
        for c in cases {
            let mut routes = vec![&c.general, &c.classical];
            routes.extend(c.even.as_ref());
            for h in routes {
                let left = h_left_variant(h);
                worst = worst.max(relative_gap(&left, h));
                if !left.agrees_with(h, 1e-10) {
                    bad += 1;
                }
            }
        }
        outcome(bad == 0, format!("{} potentials, {bad} disagree, worst relative gap {worst:.1e}", cases.len()))
    }

    fn residues(&self) -> Outcome {
        let (_, cases) = match self.corpus() {
            Ok(c) => c,
            Err(e) => return failed(e),
        };
        let bad: Vec<String> =
            cases.iter().filter(|c| !c.residues_ok).map(|c| format!("{:?}", c.pot.coefficients().collect::<Vec<_>>())).collect();
        outcome(bad.is_empty(), format!("m<=4 on {} potentials, {} fail {}", cases.len(), bad.len(), bad.join(" ")))
    }

    fn measure(&self) -> Outcome {
        let run = || -> eqmap_core::Result<Outcome> {
            let gue = EquilibriumMeasure::from_potential(&PotentialSpec::gaussian(1.0)?)?;
            let quartic = EquilibriumMeasure::from_potential(&PotentialSpec::monomial(1.0, 4, 0.01)?)?;
            let cubic = EquilibriumMeasure::from_potential(&PotentialSpec::monomial(1.0, 3, 0.05)?)?;
            let mut mass_err = 0.0f64;
            for em in [&gue, &quartic, &cubic] {
                mass_err = mass_err.max((total_mass(em, 32) - 1.0).abs());
            }
            if let Ok((corpus, _)) = self.corpus() {
                for pot in &corpus.potentials {
                    let em = EquilibriumMeasure::from_potential(pot)?;
                    mass_err = mass_err.max((total_mass(&em, 32) - 1.0).abs());
                }
            }
            let dev_gue = variational_report(&gue, 64);
            let dev_quartic = variational_report(&quartic, 64);
            let control_quartic = variational_report(&quartic.with_z(quartic.z + 0.1), 64).max_deviation;
            let control_cubic = variational_report(&cubic.with_z(cubic.z + 0.1), 64).max_deviation;
            let control_gue = variational_report(&gue.with_z(gue.z + 0.1), 64).max_deviation;
            let ok = mass_err < 1e-10
                && dev_gue.max_deviation < 1e-5
                && dev_quartic.max_deviation < 1e-5
                && dev_gue.min_slack >= 0.0
                && dev_quartic.min_slack >= 0.0
                && control_quartic > 1e-2
                && control_cubic > 1e-2;
            Ok(outcome(
                ok,
                format!(
                    "mass error {mass_err:.1e}; deviation GUE {:.1e}, quartic {:.1e}; min slack {:.2}, {:.2}; \
                     z+0.1 control quartic {control_quartic:.1e}, cubic {control_cubic:.1e} \
                     (GUE {control_gue:.1e}, a semicircle of any width is stationary for a quadratic potential)",
                    dev_gue.max_deviation, dev_quartic.max_deviation, dev_gue.min_slack, dev_quartic.min_slack
                ),
            ))
        };
        run().unwrap_or_else(failed)
    }

    fn gaussian(&self) -> Outcome {
        let run = || -> eqmap_core::Result<Outcome> {
            let pot = PotentialSpec::gaussian(1.0)?;
            let ep = uz_jets(&pot, 3, 0)?;
            let table = build_c_table(4)?;
            let mut h_err = 0.0f64;
            for h in [h_classical(&ep), h_general(&ep, &table)?, h_even(&ep)?] {
                for (i, c) in h.monomial().iter().enumerate() {
                    h_err = h_err.max((c - if i == 0 { 1.0 } else { 0.0 }).abs());
                }
            }
            let end_err = (ep.alpha_minus() + 2.0).abs().max((ep.alpha_plus() - 2.0).abs());
            let em = EquilibriumMeasure::from_potential(&pot)?;
            let dens_err = (density(&em, 0.0) - 1.0 / PI).abs();
            Ok(outcome(
                end_err < 1e-12 && h_err < 1e-12 && dens_err < 1e-12,
                format!("endpoint error {end_err:.1e}, |h - 1| {h_err:.1e}, density(0) error {dens_err:.1e}"),
            ))
        };
        run().unwrap_or_else(failed)
    }

    fn loop_equation(&self) -> Outcome {
        let run = || -> eqmap_core::Result<Outcome> {
            let mut worst = 0.0f64;
            for pot in [PotentialSpec::gaussian(1.0)?, PotentialSpec::monomial(1.0, 4, 0.01)?] {
                let ctx = CorrelatorContext::new(&pot)?;
                let center = (ctx.alpha_minus() + ctx.alpha_plus()) / 2.0;
                let rad = ctx.alpha_plus() - ctx.alpha_minus() + 1.0;
                for k in 0..8 {
                    let y = C::new(center, 0.0) + C::from_polar(rad, 2.0 * PI * (k as f64 + 0.5) / 8.0);
                    worst = worst.max(loop_equation_residual(&ctx, y, DEFAULT_CONTOUR_NODES)?.norm());
                }
            }
            let ctx = CorrelatorContext::new(&PotentialSpec::gaussian(1.0)?)?;
            let spot = w1_subleading(&ctx, C::new(3.0, 0.0))?.norm();
            let spot_err = (spot - 5f64.powf(-2.5)).abs();
            Ok(outcome(
                worst < 1e-6 && spot_err < 1e-10,
                format!("worst residual {worst:.1e} at 16 points; |W(3)| - 5^(-5/2) = {spot_err:.1e}"),
            ))
        };
        run().unwrap_or_else(failed)
    }

    fn e1_cases(&self) -> Outcome {
        let run = || -> eqmap_core::Result<Outcome> {
            let mut quartic = 0.0f64;
            for i in 0..=13 {
                let t4 = -0.015 + 0.005 * i as f64;
                let e = e1_value(&PotentialSpec::monomial(1.0, 4, t4)?)?;
                quartic = quartic.max((e.value + (2.0 - e.z).ln() / 12.0).abs());
            }
            let e6 = e1_value(&PotentialSpec::monomial(1.0, 6, 0.01)?)?;
            let sextic = (e6.value - e1_even_valence(3, e6.z)).abs();
            let mut cubic = 0.0f64;
            for t3 in [-0.05, 0.02, 0.05] {
                let e = e1_value(&PotentialSpec::monomial(1.0, 3, t3)?)?;
                cubic = cubic.max((e1_monomial(3, t3)? - e.value).abs());
            }
            Ok(outcome(
                quartic < 1e-10 && sextic < 1e-10 && cubic < 1e-10,
                format!("quartic grid {quartic:.1e}, sextic {sextic:.1e}, cubic monomial route {cubic:.1e}"),
            ))
        };
        run().unwrap_or_else(failed)
    }

    fn relations(&self) -> Outcome {
        let mut worst = 0.0f64;
        for (j, t) in [(3, 0.05), (3, -0.02), (4, 0.01), (4, 0.04), (6, 0.01)] {
            match verify_relations(j, t) {
                Ok(r) => worst = worst.max(r.max_abs()),
                Err(e) => return failed(e),
            }
        }
        outcome(worst < 1e-9, format!("worst residual {worst:.1e} over j in {{3, 4, 6}}"))
    }

    fn census(&self) -> Outcome {
        let start = Instant::now();
        let run = || -> Result<Outcome, String> {
            let profiles: [&[(usize, usize)]; 5] = [&[(4, 1)], &[(4, 2)], &[(3, 2)], &[(6, 1)], &[(4, 3)]];
            let mut worst = 0.0f64;
            let mut anchors = (f64::NAN, f64::NAN);
            for prof in profiles {
                let p = VertexProfile::new(prof.iter().copied()).map_err(|e| e.to_string())?;
                let c = parallel_census(&p, self.opts.threads).map_err(|e| e.to_string())?;
                for x in [1.0, 2.0] {
                    let s = e1_series(x, prof).map_err(|e| e.to_string())?;
                    let (a, b) = (e1_coeff_from_census(&c, x), s.coeff_of(prof));
                    worst = worst.max((a - b).abs() / a.abs().max(1.0));
                    if x == 1.0 && prof == [(4, 1)] {
                        anchors.0 = b;
                    }
                    if x == 1.0 && prof == [(4, 2)] {
                        anchors.1 = b;
                    }
                }
            }
            let anchor_ok = (anchors.0 + 1.0).abs() < 1e-8 && (anchors.1 - 30.0).abs() < 1e-8;
            let elapsed = start.elapsed();
            Ok(outcome(
                worst < 1e-8 && anchor_ok && elapsed < Duration::from_secs(120),
                format!("worst relative gap {worst:.1e}; t4 coefficient {}, t4^2 coefficient {}", anchors.0, anchors.1),
            ))
        };
        run().unwrap_or_else(failed)
    }

    fn quartic(&self) -> Outcome {
        let mut worst = 0.0f64;
        let mut n = 0;
        for i in 0..=28 {
            let t4 = -0.02 + 0.0025 * i as f64;
            let pot = match PotentialSpec::monomial(1.0, 4, t4) {
                Ok(p) => p,
                Err(e) => return failed(e),
            };
            let ep = match solve_endpoints_default(&pot) {
                Ok(e) => e,
                Err(e) => return failed(format!("t4={t4}: {e}")),
            };
            let z = if t4 == 0.0 { 1.0 } else { (-1.0 + (1.0 + 48.0 * t4).sqrt()) / (24.0 * t4) };
            worst = worst.max((ep.z - z).abs() / z).max(ep.u.abs());
            n += 1;
        }
        outcome(worst < 1e-12, format!("{n} values of t4 in [-0.02, 0.05], worst relative error {worst:.1e}"))
    }
}

fn relative_gap(a: &HPoly, b: &HPoly) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE);
    let n = a.monomial().len().max(b.monomial().len());
    (0..n)
        .map(|i| (a.monomial().get(i).copied().unwrap_or(0.0) - b.monomial().get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0f64, f64::max)
        / scale
}
