//! Identity configuration files.
//!
//! ```toml
//! p = 37
//! chi = "quartic-i"
//!
//! [[terms]]
//! A = "1,0"
//! B = 1
//! C = 34
//!
//! [rhs]
//! kind = "sigma_prime"          # or "tilde_hat"
//! coefficients = ["18,0"]       # two entries for tilde_hat
//! ```
//!
//! `A` and the right-hand coefficients are Gaussian rationals written
//! `re,im` with each part an integer or a fraction `a/b`.

use std::fmt;
use std::ops::Range;

use farkas_core::identities::{CharacterSelector, ConfiguredIdentity, ConfiguredRhs, IdentityTerm};
use farkas_core::GaussianRational;
use serde::Deserialize;
use toml::Spanned;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}, field `{}`: {}", self.field, self.message),
            None => write!(f, "field `{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p: Spanned<i64>,
    chi: Spanned<String>,
    terms: Spanned<Vec<RawTerm>>,
    rhs: Spanned<RawRhs>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    #[serde(rename = "A")]
    a: Spanned<String>,
    #[serde(rename = "B")]
    b: Spanned<i64>,
    #[serde(rename = "C")]
    c: Spanned<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRhs {
    kind: Spanned<String>,
    coefficients: Spanned<Vec<String>>,
}

/// Four files, one per admissible `(p1, p2)` pair of the level-37 identity.
pub const BUILTIN: [(&str, &str); 4] = [
    ("p37_2_17", include_str!("../configs/p37_2_17.toml")),
    ("p37_2_19", include_str!("../configs/p37_2_19.toml")),
    ("p37_5_17", include_str!("../configs/p37_5_17.toml")),
    ("p37_5_19", include_str!("../configs/p37_5_19.toml")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn line_of(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].matches('\n').count() + 1
    }

    fn error(&self, span: Range<usize>, field: impl Into<String>, message: impl Into<String>) -> ConfigError {
        ConfigError { line: Some(self.line_of(span)), field: field.into(), message: message.into() }
    }

    fn gaussian(&self, value: &Spanned<String>, field: String) -> Result<GaussianRational, ConfigError> {
        value
            .get_ref()
            .parse()
            .map_err(|_| self.error(value.span(), field, format!("expected re,im with rational parts, got {:?}", value.get_ref())))
    }

    fn positive(&self, value: &Spanned<i64>, field: String) -> Result<u64, ConfigError> {
        match u64::try_from(*value.get_ref()) {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(self.error(value.span(), field, format!("must be a positive integer, got {}", value.get_ref()))),
        }
    }
}

/// Parses and validates a configuration file.
pub fn parse_config(text: &str) -> Result<ConfiguredIdentity, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| syntax_error(text, &e))?;
    let src = Source { text };
    let p = src.positive(&raw.p, "p".into())?;
    let character: CharacterSelector = raw
        .chi
        .get_ref()
        .parse()
        .map_err(|_| src.error(raw.chi.span(), "chi", "expected quartic-i, quartic-minus-i or generator"))?;
    if raw.terms.get_ref().is_empty() {
        return Err(src.error(raw.terms.span(), "terms", "at least one term is required"));
    }
    let mut terms = Vec::new();
    for (i, t) in raw.terms.get_ref().iter().enumerate() {
        let k = i + 1;
        terms.push(IdentityTerm {
            coefficient: src.gaussian(&t.a, format!("terms[{k}].A"))?,
            divisor: src.positive(&t.b, format!("terms[{k}].B"))?,
            multiplier: src.positive(&t.c, format!("terms[{k}].C"))?,
        });
    }
    let coeffs = raw.rhs.get_ref().coefficients.get_ref();
    let coeff_span = raw.rhs.get_ref().coefficients.span();
    let kind = &raw.rhs.get_ref().kind;
    let parse_all = |expected: usize| -> Result<Vec<GaussianRational>, ConfigError> {
        if coeffs.len() != expected {
            return Err(src.error(
                coeff_span.clone(),
                "rhs.coefficients",
                format!("{} expects {expected} coefficient(s), got {}", kind.get_ref(), coeffs.len()),
            ));
        }
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.parse().map_err(|_| {
                    src.error(coeff_span.clone(), format!("rhs.coefficients[{}]", i + 1), format!("cannot parse {c:?}"))
                })
            })
            .collect()
    };
    let rhs = match kind.get_ref().as_str() {
        "sigma_prime" => {
            let mut c = parse_all(1)?;
            ConfiguredRhs::SigmaPrime { coefficient: c.remove(0) }
        }
        "tilde_hat" => {
            let mut c = parse_all(2)?;
            let hat = c.remove(1);
            ConfiguredRhs::TildeHat { tilde: c.remove(0), hat }
        }
        other => {
            return Err(src.error(kind.span(), "rhs.kind", format!("expected sigma_prime or tilde_hat, got {other:?}")))
        }
    };
    let cfg = ConfiguredIdentity { p, character, terms, rhs };
    cfg.validate().map_err(|e| ConfigError { line: None, field: "(identity)".into(), message: e.to_string() })?;
    Ok(cfg)
}

fn syntax_error(text: &str, e: &toml::de::Error) -> ConfigError {
    let line = e.span().map(|s| Source { text }.line_of(s));
    ConfigError { line, field: "(syntax)".into(), message: e.message().trim().to_string() }
}

/// Renders a configuration in the file format.
pub fn render_config(cfg: &ConfiguredIdentity) -> String {
    let pair = |g: &GaussianRational| format!("\"{},{}\"", g.re, g.im);
    let mut out = format!("p = {}\nchi = \"{}\"\n", cfg.p, cfg.character);
    for t in &cfg.terms {
        out += &format!("\n[[terms]]\nA = {}\nB = {}\nC = {}\n", pair(&t.coefficient), t.divisor, t.multiplier);
    }
    let (kind, coeffs) = match &cfg.rhs {
        ConfiguredRhs::SigmaPrime { coefficient } => ("sigma_prime", vec![pair(coefficient)]),
        ConfiguredRhs::TildeHat { tilde, hat } => ("tilde_hat", vec![pair(tilde), pair(hat)]),
    };
    out += &format!("\n[rhs]\nkind = \"{kind}\"\ncoefficients = [{}]\n", coeffs.join(", "));
    out
}
