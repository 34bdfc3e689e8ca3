//! Potential files, command-line value parsing and output writing.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use eqmap_core::algebra::Rational;
use eqmap_core::endpoints::PotentialSpec;
use eqmap_core::oracle::{MapCensus, VertexProfile};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

/// `{"x": 1.0, "t": {"3": 0.05, "4": 0.01}}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialFile {
    #[serde(default = "one")]
    pub x: f64,
    #[serde(default)]
    pub t: BTreeMap<String, f64>,
}

fn one() -> f64 {
    1.0
}

impl PotentialFile {
    pub fn to_spec(&self) -> Result<PotentialSpec, CliError> {
        let mut t = Vec::with_capacity(self.t.len());
        for (k, v) in &self.t {
            let j: usize = k.trim().parse().map_err(|_| CliError::Parse(format!("valence key {k:?} is not a positive integer")))?;
            t.push((j, *v));
        }
        Ok(PotentialSpec::new(self.x, t)?)
    }

    pub fn from_spec(pot: &PotentialSpec) -> Self {
        Self { x: pot.x(), t: pot.coefficients().map(|(j, v)| (j.to_string(), v)).collect() }
    }
}

pub fn read_potential_file(path: &Path) -> Result<PotentialSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_potential_json(&text)
}

pub fn parse_potential_json(text: &str) -> Result<PotentialSpec, CliError> {
    let file: PotentialFile = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("potential file: {e}")))?;
    file.to_spec()
}

/// `j=v`, or a bare `v` when `default_j` is given.
pub fn parse_t_flag(s: &str, default_j: Option<usize>) -> Result<(usize, f64), CliError> {
    let bad = || CliError::Parse(format!("--t expects j=value, got {s:?}"));
    match s.split_once('=') {
        Some((j, v)) => Ok((j.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?)),
        None => {
            let j = default_j.ok_or_else(|| CliError::Parse(format!("--t {s:?} has no valence; write j=value or pass --j")))?;
            Ok((j, s.trim().parse().map_err(|_| bad())?))
        }
    }
}

/// `j:k`, `k` vertices of valence `j`.
pub fn parse_profile_flag(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Parse(format!("--profile expects j:k, got {s:?}"));
    let (j, k) = s.split_once(':').ok_or_else(bad)?;
    Ok((j.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
}

pub fn profile_from_flags(flags: &[String]) -> Result<VertexProfile, CliError> {
    let pairs = flags.iter().map(|s| parse_profile_flag(s)).collect::<Result<Vec<_>, _>>()?;
    if pairs.is_empty() {
        return Err(CliError::Parse("census needs at least one --profile j:k".into()));
    }
    Ok(VertexProfile::new(pairs)?)
}

/// Always `p/q`, including integers (`1/1`) and zero (`0/1`).
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn census_json(c: &MapCensus) -> Value {
    let profile: BTreeMap<String, usize> = c.profile.counts().iter().map(|(j, k)| (j.to_string(), *k)).collect();
    let entries: Vec<Value> =
        c.entries().iter().map(|e| json!({"genus": e.genus, "faces": e.faces, "count": e.count})).collect();
    json!({
        "profile": profile,
        "half_edges": c.profile.half_edges(),
        "entries": entries,
        "disconnected": c.disconnected,
    })
}

/// Writes to `out`, or stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n").map_err(|e| CliError::Io(e.to_string()))?;
            }
            Ok(())
        }
    }
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_round_trip() {
        let pot = parse_potential_json(r#"{"x": 2.0, "t": {"3": 0.05, "4": 0.01}}"#).unwrap();
        assert_eq!(pot.x(), 2.0);
        assert_eq!(pot.t(3), 0.05);
        assert_eq!(pot.t(4), 0.01);
        let back = PotentialFile::from_spec(&pot).to_spec().unwrap();
        assert_eq!(back, pot);
    }

    #[test]
    fn potential_defaults_and_errors() {
        assert!(parse_potential_json("{}").unwrap().is_gaussian());
        assert!(parse_potential_json(r#"{"t": {"a": 1}}"#).is_err());
        assert!(parse_potential_json(r#"{"x": -1}"#).is_err());
        assert!(parse_potential_json("[").is_err());
    }

    #[test]
    fn flags() {
        assert_eq!(parse_t_flag("4=0.01", None).unwrap(), (4, 0.01));
        assert_eq!(parse_t_flag("0.01", Some(4)).unwrap(), (4, 0.01));
        assert!(parse_t_flag("0.01", None).is_err());
        assert_eq!(parse_profile_flag("4:2").unwrap(), (4, 2));
        assert!(parse_profile_flag("4").is_err());
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn rationals_are_fractions() {
        assert_eq!(rational_string(&r(1, 140)), "1/140");
        assert_eq!(rational_string(&r(-2, 3)), "-2/3");
        assert_eq!(rational_string(&r(1, 1)), "1/1");
        assert_eq!(rational_string(&r(0, 5)), "0/1");
    }
}
