//! The report written by every command, and its renderings.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use farkas_core::identities::{Outcome, VerificationReport};
use farkas_core::{GaussianRational, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstFailure {
    pub n: u64,
    pub lhs: GaussianRational,
    pub rhs: GaussianRational,
}

/// `{command, params, outcome, first_failure?, rows?, elapsed_ms}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub outcome: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<FirstFailure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<serde_json::Value>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: &str, params: &[(&str, String)]) -> Self {
        Report {
            command: command.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            outcome: Status::Pass,
            first_failure: None,
            rows: None,
            elapsed_ms: 0,
        }
    }

    /// Copies the outcome of a core verification report.
    pub fn with_verification(mut self, r: &VerificationReport) -> Self {
        self.outcome = if r.passed() { Status::Pass } else { Status::Fail };
        self.first_failure = match &r.outcome {
            Outcome::Pass => None,
            Outcome::FirstFailure { n, lhs, rhs } => {
                Some(FirstFailure { n: *n, lhs: lhs.clone(), rhs: rhs.clone() })
            }
        };
        self.params.insert("character".into(), r.character.clone());
        self.elapsed_ms = r.elapsed_ms;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialise");
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Decimal rendering of `q` rounded half away from zero to `digits` places.
pub fn decimal(q: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = q.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + Rational::new(BigInt::from(1), BigInt::from(2))).floor().to_integer();
    let (int, frac) = rounded.div_rem(&scale);
    let sign = if q.is_negative() && !rounded.is_zero() { "-" } else { "" };
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
}

/// Decimal rendering of a Gaussian rational: the real part, then `±…i` when
/// the imaginary part is nonzero.
pub fn gaussian_decimal(g: &GaussianRational, digits: u32) -> String {
    if g.im.is_zero() {
        return decimal(&g.re, digits);
    }
    let im = decimal(&g.im, digits);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", decimal(&g.re, digits))
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, renamed into place once complete.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&q(3, 5), 12), "0.600000000000");
        assert_eq!(decimal(&q(2, 3), 12), "0.666666666667");
        assert_eq!(decimal(&q(-1, 3), 4), "-0.3333");
        assert_eq!(decimal(&q(-1, 100000), 4), "0.0000");
        assert_eq!(decimal(&q(7, 1), 2), "7.00");
        let g = GaussianRational::from_fractions(1, 2, -1, 4);
        assert_eq!(gaussian_decimal(&g, 3), "0.500-0.250i");
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("verify", &[("p", "29".into()), ("kind", "conv".into())]);
        r.outcome = Status::Fail;
        r.first_failure = Some(FirstFailure {
            n: 2,
            lhs: GaussianRational::from_fractions(3, 10, 1, 10),
            rhs: GaussianRational::from_fractions(-7, 3, 0, 1),
        });
        r.rows = Some(serde_json::json!([{"n": 1, "ratio": "3/5"}]));
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().contains("\"lhs\": \"3/10+1/10i\""));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, "first").unwrap();
        write_atomic(&path, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(write_atomic(&dir.path().join("missing/out.json"), "x").is_err());
    }
}
