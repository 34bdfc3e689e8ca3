//! `eqmap` subcommands.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqmap_core::coefftables::build_c_table;
use eqmap_core::correlators::{
    loop_equation_residual, w1_leading, w1_subleading, w2_diag, CorrelatorContext, DEFAULT_CONTOUR_NODES,
};
use eqmap_core::endpoints::{jets_at, solve_endpoints, JetSpec, PotentialSpec, DEFAULT_MAX_STEPS, DEFAULT_TOL};
use eqmap_core::genfun::{e1_from_solution, e1_monomial, e1_series};
use eqmap_core::hfunc::{h_classical, h_even, h_general, h_left_variant, HPoly};
use eqmap_core::measure::{density, total_mass, variational_report, EquilibriumMeasure};
use eqmap_core::oracle::e1_coeff_from_census;
use num_complex::Complex64 as C;
use serde_json::{json, Value};

use crate::census::{parallel_census, thread_limit};
use crate::io::{census_json, csv, emit, parse_t_flag, profile_from_flags, rational_string, read_potential_file};
use crate::verify::{Suite, VerifyOptions};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "eqmap", version, about = "One-cut equilibrium measures and torus map counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    /// Face weight `x`.
    #[arg(long)]
    pub x: Option<f64>,
    /// Coefficient `t_j` as `j=value`; a bare value uses `--j`.
    #[arg(long = "t", allow_hyphen_values = true)]
    pub t: Vec<String>,
    /// Valence for bare `--t` values.
    #[arg(long)]
    pub j: Option<usize>,
    /// JSON potential file `{"x": 1, "t": {"4": 0.01}}`.
    #[arg(long)]
    pub potential: Option<PathBuf>,
}

impl PotentialArgs {
    pub fn spec(&self) -> Result<PotentialSpec, CliError> {
        let base = match &self.potential {
            Some(path) => read_potential_file(path)?,
            None => PotentialSpec::gaussian(1.0)?,
        };
        let x = self.x.unwrap_or(base.x());
        let mut t: Vec<(usize, f64)> = base.coefficients().collect();
        for flag in &self.t {
            let (j, v) = parse_t_flag(flag, self.j)?;
            t.retain(|(k, _)| *k != j);
            t.push((j, v));
        }
        Ok(PotentialSpec::new(x, t)?)
    }

    /// Valences of the potential plus those set to zero by `--t`.
    pub fn valences(&self) -> Result<Vec<usize>, CliError> {
        let mut v: Vec<usize> = self.spec()?.coefficients().map(|(j, _)| j).collect();
        for flag in &self.t {
            v.push(parse_t_flag(flag, self.j)?.0);
        }
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for `(u, z)`, the support and `x`-derivatives.
    Endpoints {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Highest `x`-derivative reported.
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The density polynomial `h` by every applicable route.
    H {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Relative tolerance for the agreement report.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Density samples on the support.
    Density {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Number of sample points.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Equality on the support and inequality off it for the log potential.
    Variational {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact coefficient tables.
    Coeffs {
        /// Largest row index `k`.
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The torus generating function, or with `--order` its series in the
    /// valences named by the potential.
    E1 {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Brute-force map census by genus and face count.
    Census {
        /// `j:k`, `k` vertices of valence `j`.
        #[arg(long, required = true)]
        profile: Vec<String>,
        /// Face weight for the reported series coefficient.
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Correlators and the loop-equation residual at sample points.
    Correlators {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Evaluation point `re` or `re,im`; defaults to eight points around the cut.
        #[arg(long, allow_hyphen_values = true)]
        y: Vec<String>,
        /// Contour quadrature nodes.
        #[arg(long, default_value_t = DEFAULT_CONTOUR_NODES)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run every acceptance check; exit status 2 if any fails.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn float_list(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| json!(x)).collect())
}

fn complex_json(c: C) -> Value {
    json!({"re": c.re, "im": c.im})
}

fn potential_json(pot: &PotentialSpec) -> Value {
    let t: serde_json::Map<String, Value> = pot.coefficients().map(|(j, v)| (j.to_string(), json!(v))).collect();
    json!({"x": pot.x(), "t": t})
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn default_format(f: Option<Format>, default: Format) -> Format {
    f.unwrap_or(default)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Endpoints { pot, tol, order, out } => endpoints(&pot.spec()?, tol, order, &out),
        Command::H { pot, tol, out } => h(&pot.spec()?, tol, &out),
        Command::Density { pot, grid, out } => density_cmd(&pot.spec()?, grid, &out),
        Command::Variational { pot, grid, out } => variational(&pot.spec()?, grid, &out),
        Command::Coeffs { order, out } => coeffs(order, &out),
        Command::E1 { pot, order, out } => e1(&pot.spec()?, &pot.valences()?, order, &out),
        Command::Census { profile, x, out } => census(&profile, x, &out),
        Command::Correlators { pot, y, grid, out } => correlators(&pot.spec()?, &y, grid, &out),
        Command::Verify { seed, out } => verify(seed, &out),
    }
}

fn endpoints(pot: &PotentialSpec, tol: f64, order: usize, out: &OutputArgs) -> Result<(), CliError> {
    let base = solve_endpoints(pot, tol, DEFAULT_MAX_STEPS)?;
    let ep = jets_at(base, &JetSpec::x_only(order))?;
    let (u, z) = ep.x_jets()?;
    let du: Vec<f64> = (0..=order).map(|k| u.partial(&[k])).collect();
    let dz: Vec<f64> = (0..=order).map(|k| z.partial(&[k])).collect();
    let text = match default_format(out.format, Format::Json) {
        Format::Json => pretty(&json!({
            "potential": potential_json(pot),
            "u": ep.u,
            "z": ep.z,
            "alpha_minus": ep.alpha_minus(),
            "alpha_plus": ep.alpha_plus(),
            "x_derivatives": {"u": float_list(&du), "z": float_list(&dz)},
        })),
        Format::Csv => csv(&["k", "d_x^k u", "d_x^k z"], (0..=order).map(|k| vec![k.to_string(), du[k].to_string(), dz[k].to_string()])),
    };
    emit(out.out.as_deref(), &text)
}

fn relative_gap(a: &HPoly, b: &HPoly) -> f64 {
    let n = a.monomial().len().max(b.monomial().len());
    let scale = a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE);
    (0..n)
        .map(|i| (a.monomial().get(i).copied().unwrap_or(0.0) - b.monomial().get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
        / scale
}

fn h(pot: &PotentialSpec, tol: f64, out: &OutputArgs) -> Result<(), CliError> {
    let d = pot.degree();
    let base = solve_endpoints(pot, DEFAULT_TOL, DEFAULT_MAX_STEPS)?;
    let ep = jets_at(base, &JetSpec::x_only(d - 1))?;
    let table = build_c_table(d.saturating_sub(2))?;
    let classical = h_classical(&ep);
    let general = h_general(&ep, &table)?;
    let even = if pot.is_even() { Some(h_even(&ep)?) } else { None };
    let left = h_left_variant(&general);
    let mut gaps = vec![("general", relative_gap(&general, &classical)), ("left", relative_gap(&left, &classical))];
    if let Some(e) = &even {
        gaps.push(("even", relative_gap(e, &classical)));
    }
    let agree = gaps.iter().all(|(_, g)| *g <= tol);
    let text = match default_format(out.format, Format::Json) {
        Format::Json => {
            let report: serde_json::Map<String, Value> = gaps.iter().map(|(k, g)| (k.to_string(), json!(g))).collect();
            pretty(&json!({
                "potential": potential_json(pot),
                "u": ep.u,
                "z": ep.z,
                "classical": float_list(classical.monomial()),
                "general": float_list(general.monomial()),
                "left_variant": float_list(left.monomial()),
                "even": even.as_ref().map(|e| float_list(e.monomial())),
                "relative_gap_to_classical": report,
                "tolerance": tol,
                "agree": agree,
            }))
        }
        Format::Csv => csv(
            &["power", "classical", "general", "left_variant", "even"],
            (0..classical.monomial().len()).map(|i| {
                vec![
                    i.to_string(),
                    classical.monomial()[i].to_string(),
                    general.monomial().get(i).copied().unwrap_or(0.0).to_string(),
                    left.monomial().get(i).copied().unwrap_or(0.0).to_string(),
                    even.as_ref().map(|e| e.monomial().get(i).copied().unwrap_or(0.0).to_string()).unwrap_or_default(),
                ]
            }),
        ),
    };
    emit(out.out.as_deref(), &text)
}

fn density_cmd(pot: &PotentialSpec, grid: usize, out: &OutputArgs) -> Result<(), CliError> {
    let em = EquilibriumMeasure::from_potential(pot)?;
    let n = grid.max(2);
    let (a, b) = (em.alpha_minus(), em.alpha_plus());
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let lam = a + (b - a) * i as f64 / (n - 1) as f64;
            (lam, density(&em, lam))
        })
        .collect();
    let text = match default_format(out.format, Format::Csv) {
        Format::Csv => csv(&["lambda", "psi"], samples.iter().map(|(l, p)| vec![l.to_string(), p.to_string()])),
        Format::Json => pretty(&json!({
            "potential": potential_json(pot),
            "alpha_minus": a,
            "alpha_plus": b,
            "mass": total_mass(&em, 64),
            "samples": samples.iter().map(|(l, p)| json!({"lambda": l, "psi": p})).collect::<Vec<_>>(),
        })),
    };
    emit(out.out.as_deref(), &text)
}

fn variational(pot: &PotentialSpec, grid: usize, out: &OutputArgs) -> Result<(), CliError> {
    let em = EquilibriumMeasure::from_potential(pot)?;
    let r = variational_report(&em, grid);
    let text = match default_format(out.format, Format::Json) {
        Format::Json => pretty(&json!({
            "potential": potential_json(pot),
            "l": r.l,
            "max_deviation": r.max_deviation,
            "min_slack": r.min_slack,
            "support_points": r.support_points,
            "off_support_points": r.off_support_points,
            "mass": total_mass(&em, 64),
        })),
        Format::Csv => csv(
            &["l", "max_deviation", "min_slack", "support_points", "off_support_points"],
            [vec![
                r.l.to_string(),
                r.max_deviation.to_string(),
                r.min_slack.to_string(),
                r.support_points.to_string(),
                r.off_support_points.to_string(),
            ]],
        ),
    };
    emit(out.out.as_deref(), &text)
}

fn coeffs(kmax: usize, out: &OutputArgs) -> Result<(), CliError> {
    let table = build_c_table(kmax)?;
    let text = match default_format(out.format, Format::Json) {
        Format::Csv => csv(
            &["k", "m", "c_phi", "c_psi"],
            table.entries().map(|(k, m, p, s)| vec![k.to_string(), m.to_string(), rational_string(p), rational_string(s)]),
        ),
        Format::Json => {
            let rows = |f: &dyn Fn(usize, usize) -> String| -> Vec<Vec<String>> {
                (0..=kmax).map(|k| (1..=k + 1).map(|m| f(k, m)).collect()).collect()
            };
            pretty(&json!({
                "kmax": kmax,
                "c_phi": rows(&|k, m| rational_string(&table.phi(k, m))),
                "c_psi": rows(&|k, m| rational_string(&table.psi(k, m))),
            }))
        }
    };
    emit(out.out.as_deref(), &text)
}

fn e1(pot: &PotentialSpec, valences: &[usize], order: Option<usize>, out: &OutputArgs) -> Result<(), CliError> {
    let text = match order {
        None => {
            let base = solve_endpoints(pot, DEFAULT_TOL, DEFAULT_MAX_STEPS)?;
            let ep = jets_at(base, &JetSpec::x_only(1))?;
            let e = e1_from_solution(&ep)?;
            let coeffs: Vec<(usize, f64)> = pot.coefficients().collect();
            let monomial = match coeffs.as_slice() {
                [(j, t)] if pot.x() == 1.0 && *j >= 3 => Some(e1_monomial(*j, *t)?),
                _ => None,
            };
            match default_format(out.format, Format::Json) {
                Format::Json => pretty(&json!({
                    "potential": potential_json(pot),
                    "e1": e.value,
                    "monomial_formula": monomial,
                    "u": e.u,
                    "z": e.z,
                    "u_x": e.u_x,
                    "z_x": e.z_x,
                })),
                Format::Csv => csv(&["e1", "u", "z", "u_x", "z_x"], [vec![
                    e.value.to_string(),
                    e.u.to_string(),
                    e.z.to_string(),
                    e.u_x.to_string(),
                    e.z_x.to_string(),
                ]]),
            }
        }
        Some(order) => {
            if valences.is_empty() {
                return Err(CliError::Parse("series needs at least one valence, e.g. --t 4=0".into()));
            }
            let dirs: Vec<(usize, usize)> = valences.iter().map(|&j| (j, order)).collect();
            let s = e1_series(pot.x(), &dirs)?;
            let mut terms = Vec::new();
            let mut powers = vec![0usize; dirs.len()];
            loop {
                let total: usize = powers.iter().sum();
                if total > 0 {
                    let c = s.coeff(&powers);
                    let monomial: Vec<(usize, usize)> =
                        valences.iter().zip(&powers).filter(|(_, k)| **k > 0).map(|(j, k)| (*j, *k)).collect();
                    terms.push((monomial, c));
                }
                let mut i = 0;
                while i < powers.len() {
                    powers[i] += 1;
                    if powers[i] <= order {
                        break;
                    }
                    powers[i] = 0;
                    i += 1;
                }
                if i == powers.len() {
                    break;
                }
            }
            match default_format(out.format, Format::Json) {
                Format::Json => pretty(&json!({
                    "x": pot.x(),
                    "order": order,
                    "constant_term": s.constant_term(),
                    "terms": terms.iter().map(|(m, c)| {
                        let mono: serde_json::Map<String, Value> = m.iter().map(|(j, k)| (j.to_string(), json!(k))).collect();
                        json!({"monomial": mono, "coefficient": c})
                    }).collect::<Vec<_>>(),
                })),
                Format::Csv => csv(
                    &["monomial", "coefficient"],
                    terms.iter().map(|(m, c)| {
                        let mono: Vec<String> = m.iter().map(|(j, k)| format!("t{j}^{k}")).collect();
                        vec![mono.join(" "), c.to_string()]
                    }),
                ),
            }
        }
    };
    emit(out.out.as_deref(), &text)
}

fn census(flags: &[String], x: f64, out: &OutputArgs) -> Result<(), CliError> {
    let profile = profile_from_flags(flags)?;
    let c = parallel_census(&profile, thread_limit())?;
    let coeff = e1_coeff_from_census(&c, x);
    let text = match default_format(out.format, Format::Json) {
        Format::Json => {
            let mut v = census_json(&c);
            v["e1_coefficient"] = json!({"x": x, "value": coeff});
            pretty(&v)
        }
        Format::Csv => csv(
            &["genus", "faces", "count"],
            c.entries().iter().map(|e| vec![e.genus.to_string(), e.faces.to_string(), e.count.to_string()]),
        ),
    };
    emit(out.out.as_deref(), &text)
}

fn parse_point(s: &str) -> Result<C, CliError> {
    let bad = || CliError::Parse(format!("--y expects re or re,im, got {s:?}"));
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(C::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(C::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn correlators(pot: &PotentialSpec, ys: &[String], grid: usize, out: &OutputArgs) -> Result<(), CliError> {
    let ctx = CorrelatorContext::new(pot)?;
    let points: Vec<C> = if ys.is_empty() {
        let center = (ctx.alpha_minus() + ctx.alpha_plus()) / 2.0;
        let rad = ctx.alpha_plus() - ctx.alpha_minus() + 1.0;
        (0..8)
            .map(|k| C::new(center, 0.0) + C::from_polar(rad, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 8.0))
            .collect()
    } else {
        ys.iter().map(|s| parse_point(s)).collect::<Result<_, _>>()?
    };
    let mut rows = Vec::with_capacity(points.len());
    for y in points {
        rows.push((
            y,
            w1_leading(&ctx, y)?,
            w2_diag(&ctx, y)?,
            w1_subleading(&ctx, y)?,
            loop_equation_residual(&ctx, y, grid)?,
        ));
    }
    let text = match default_format(out.format, Format::Json) {
        Format::Json => pretty(&json!({
            "potential": potential_json(pot),
            "contour_nodes": grid,
            "points": rows.iter().map(|(y, w1, w2, w1s, r)| json!({
                "y": complex_json(*y),
                "w1_leading": complex_json(*w1),
                "w2_diagonal": complex_json(*w2),
                "w1_subleading": complex_json(*w1s),
                "loop_residual": r.norm(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => csv(
            &["y_re", "y_im", "w1_re", "w1_im", "w2_re", "w2_im", "w1s_re", "w1s_im", "loop_residual"],
            rows.iter().map(|(y, w1, w2, w1s, r)| {
                [y.re, y.im, w1.re, w1.im, w2.re, w2.im, w1s.re, w1s.im, r.norm()].iter().map(|v| v.to_string()).collect()
            }),
        ),
    };
    emit(out.out.as_deref(), &text)
}

fn verify(seed: Option<u64>, out: &OutputArgs) -> Result<(), CliError> {
    let mut opts = VerifyOptions::default();
    if let Some(s) = seed {
        opts.seed = s;
    }
    let results = Suite::new(opts).run_all();
    let failed = results.iter().filter(|r| !r.passed).count();
    let text = match default_format(out.format, Format::Csv) {
        Format::Csv => results.iter().map(|r| format!("{r}\n")).collect::<String>(),
        Format::Json => pretty(&json!({
            "passed": failed == 0,
            "criteria": results.iter().map(|r| json!({
                "id": r.id,
                "title": r.title,
                "passed": r.passed,
                "detail": r.detail,
                "seconds": r.elapsed.as_secs_f64(),
            })).collect::<Vec<_>>(),
        })),
    };
    emit(out.out.as_deref(), &text)?;
    if failed > 0 {
        return Err(CliError::VerificationFailed { failed, total: results.len() });
    }
    Ok(())
}
