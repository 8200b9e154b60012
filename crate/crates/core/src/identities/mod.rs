//! Farkas-type convolution identities for quartic characters.
//!
//! For a prime `p ≡ 5 (mod 8)` and a quartic character `χ` the two candidate
//! identities are
//!
//! ```text
//! F_χ(n) = Σ_{j=0}^{n} δ_χ(j)·δ_χ̄(n−j) = α·σ'_p(n)                 (conv)
//! H_χ(n) = Σ_{j=0}^{n} δ_χ(j)·δ_χ(n−j) = α'·σ̃_p(n) + β'·σ̂_p(n)     (square)
//! ```
//!
//! with the constants forced by the `n = 0` and `n = 1` coefficients. This
//! module checks them exactly over a range of `n`, reproduces the finite
//! obstructions that rule out every `p > 13`, and measures how close the
//! failing identities come for large `n`.

mod asymptotic;
mod configured;
mod search;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::foundations::{rational_text, GaussianRational, Rational};
use crate::qseries::{delta_constant, sigma_prime_constant, sigma_tilde_constant};

pub use asymptotic::{asymptotic_report, max_conv_deviation, AsymptoticReport, AsymptoticSummary, RatioRow};
pub use configured::{check_configured_identity, p37_identity, ConfiguredIdentity, ConfiguredRhs, IdentityTerm};
pub use search::{
    dichotomy_scan, discriminant_candidates, discriminant_search, obstruction_id1, obstruction_id2,
    DichotomyRow, DiscriminantCandidate, Id1Check, Id1Obstruction, Id2Branch, Id2Check, Id2Obstruction,
};
pub use verify::{residual_series, verify_conv, verify_farkas, verify_id1, verify_id2, ResidualKind};

/// Which character of the modulus an identity is evaluated for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharacterSelector {
    /// The quartic character with `χ(2) = i`.
    QuarticI,
    /// The quartic character with `χ(2) = −i`.
    QuarticMinusI,
    /// `χ(g) = ζ_{p−1}` for the smallest primitive root `g`.
    Generator,
}

impl CharacterSelector {
    pub fn resolve(self, p: u64) -> Result<DirichletCharacter> {
        match self {
            CharacterSelector::QuarticI => Ok(DirichletCharacter::quartic_pair(p)?.0),
            CharacterSelector::QuarticMinusI => Ok(DirichletCharacter::quartic_pair(p)?.1),
            CharacterSelector::Generator => DirichletCharacter::new(p, 1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CharacterSelector::QuarticI => "quartic-i",
            CharacterSelector::QuarticMinusI => "quartic-minus-i",
            CharacterSelector::Generator => "generator",
        }
    }
}

impl fmt::Display for CharacterSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CharacterSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quartic-i" => Ok(CharacterSelector::QuarticI),
            "quartic-minus-i" => Ok(CharacterSelector::QuarticMinusI),
            "generator" => Ok(CharacterSelector::Generator),
            _ => Err(Error::Parse { what: "character selector", input: s.to_string() }),
        }
    }
}

/// Human-readable label: the quartic characters get their selector name.
pub fn character_label(chi: &DirichletCharacter) -> String {
    if chi.order() == 4 && chi.modulus() % 8 == 5 {
        match chi.value_gaussian(2) {
            Some(v) if v == GaussianRational::i() => return CharacterSelector::QuarticI.to_string(),
            Some(v) if v == -GaussianRational::i() => {
                return CharacterSelector::QuarticMinusI.to_string()
            }
            _ => {}
        }
    }
    chi.to_string()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    /// `F_χ = α·σ'_p`
    Conv,
    /// `H_χ = α'·σ̃_p + β'·σ̂_p`
    Square,
    /// The classical identity for the quadratic character modulo 3.
    Farkas,
    /// A supplied linear combination of shifted convolutions.
    Configured,
}

impl FromStr for IdentityKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conv" => Ok(IdentityKind::Conv),
            "square" => Ok(IdentityKind::Square),
            "farkas" => Ok(IdentityKind::Farkas),
            "configured" => Ok(IdentityKind::Configured),
            _ => Err(Error::Parse { what: "identity kind", input: s.to_string() }),
        }
    }
}

/// Result of an exact sweep over `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    FirstFailure { n: u64, lhs: GaussianRational, rhs: GaussianRational },
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn failing_index(&self) -> Option<u64> {
        match self {
            Outcome::Pass => None,
            Outcome::FirstFailure { n, .. } => Some(*n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub p: u64,
    pub character: String,
    pub kind: IdentityKind,
    pub nmax: u64,
    pub outcome: Outcome,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcome.is_pass()
    }
}

/// The constants `α`, `α'`, `β'` determined by the low-order coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityConstants {
    #[serde(with = "rational_text")]
    pub alpha: Rational,
    pub alpha_prime: GaussianRational,
    pub beta_prime: GaussianRational,
}

pub(crate) fn require_quartic(chi: &DirichletCharacter) -> Result<()> {
    let p = chi.modulus();
    if p % 8 != 5 {
        return Err(Error::WrongResidue { p, residue: 5, modulus: 8 });
    }
    if chi.order() != 4 {
        return Err(Error::OrderNotDividingFour(chi.order()));
    }
    Ok(())
}

/// `α = |δ_χ(0)|²/σ'_p(0)`, `α' = δ_χ(0)²/σ̃_p(0)`, `β' = 2δ_χ(0) − α'`.
pub fn constants_for(chi: &DirichletCharacter) -> Result<IdentityConstants> {
    require_quartic(chi)?;
    let p = chi.modulus();
    let d0 = delta_constant(chi)?;
    let alpha = d0.norm_sq() / sigma_prime_constant(p);
    let tilde0 = GaussianRational::real(sigma_tilde_constant(p)?);
    let alpha_prime = &(&d0 * &d0) / &tilde0;
    let beta_prime = &(&d0 + &d0) - &alpha_prime;
    Ok(IdentityConstants { alpha, alpha_prime, beta_prime })
}
