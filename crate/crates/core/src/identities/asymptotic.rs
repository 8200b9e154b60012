//! Empirical view of the limits `F_χ(n)/σ'_p(n) → α` and
//! `H_χ(n)/σ̃_p(n) → α' + (p/n)·γ` over `n` prime to `p`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::verify::require_nmax;
use super::{character_label, constants_for, require_quartic, IdentityKind};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::foundations::{rational_text, GaussianRational, Rational};
use crate::qseries::{DeltaTable, SigmaTables};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: u64,
    pub kronecker: i8,
    pub lhs: GaussianRational,
    #[serde(with = "rational_text")]
    pub rhs: Rational,
    pub ratio: GaussianRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AsymptoticSummary {
    Conv {
        #[serde(with = "rational_text")]
        alpha: Rational,
        window: (u64, u64),
        #[serde(with = "rational_text::option")]
        max_deviation: Option<Rational>,
    },
    Square {
        alpha_prime: GaussianRational,
        beta_prime: GaussianRational,
        window: (u64, u64),
        /// Mean ratio over the window restricted to `(p/n) = +1`.
        l_plus: Option<GaussianRational>,
        /// Mean ratio over the window restricted to `(p/n) = −1`.
        l_minus: Option<GaussianRational>,
        /// `(L₊ − L₋)/2`.
        gamma: Option<GaussianRational>,
        /// `(L₊ + L₋)/2`, to be compared with `α'`.
        alpha_prime_estimate: Option<GaussianRational>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub p: u64,
    pub character: String,
    pub kind: IdentityKind,
    pub nmax: u64,
    pub rows: Vec<RatioRow>,
    pub summary: AsymptoticSummary,
}

/// The top decile `[nmax − ⌊nmax/10⌋, nmax]`.
fn top_decile(nmax: u64) -> (u64, u64) {
    ((nmax - nmax / 10).max(1), nmax)
}

fn mean(values: &[&GaussianRational]) -> Option<GaussianRational> {
    if values.is_empty() {
        return None;
    }
    let total: GaussianRational = values.iter().map(|v| (*v).clone()).sum();
    Some(total.scale(&Rational::new(BigInt::from(1), BigInt::from(values.len()))))
}

/// Ratio tables over `1 ≤ n ≤ nmax`, `p ∤ n`, with limit estimates taken over
/// the top decile of the range.
pub fn asymptotic_report(chi: &DirichletCharacter, kind: IdentityKind, nmax: u64) -> Result<AsymptoticReport> {
    require_quartic(chi)?;
    require_nmax(nmax)?;
    let p = chi.modulus();
    let c = constants_for(chi)?;
    let delta = DeltaTable::new(chi, nmax as usize)?;
    let partner = match kind {
        IdentityKind::Conv => delta.conj(),
        IdentityKind::Square => delta.clone(),
        other => {
            return Err(Error::Parse { what: "asymptotic kind (conv or square)", input: format!("{other:?}") })
        }
    };
    let sigma = SigmaTables::new(p, nmax as usize)?;
    let rows: Vec<RatioRow> = (1..=nmax)
        .into_par_iter()
        .filter(|n| n % p != 0)
        .map(|n| {
            let lhs = delta.convolve_at(&partner, n as usize);
            let rhs_int = match kind {
                IdentityKind::Conv => sigma.prime[n as usize],
                _ => sigma.tilde[n as usize],
            };
            let rhs = Rational::from_integer(BigInt::from(rhs_int));
            let ratio = lhs.scale(&rhs.recip());
            RatioRow { n, kronecker: sigma.kronecker[n as usize], lhs, rhs, ratio }
        })
        .collect();
    let window = top_decile(nmax);
    let in_window = |r: &&RatioRow| r.n >= window.0 && r.n <= window.1;
    let summary = match kind {
        IdentityKind::Conv => {
            let alpha = GaussianRational::real(c.alpha.clone());
            let max_deviation = rows
                .iter()
                .filter(in_window)
                .map(|r| (&r.ratio - &alpha).re.abs())
                .max();
            AsymptoticSummary::Conv { alpha: c.alpha, window, max_deviation }
        }
        _ => {
            let pick = |sign: i8| -> Vec<&GaussianRational> {
                rows.iter().filter(in_window).filter(|r| r.kronecker == sign).map(|r| &r.ratio).collect()
            };
            let l_plus = mean(&pick(1));
            let l_minus = mean(&pick(-1));
            let half = Rational::new(BigInt::from(1), BigInt::from(2));
            let (gamma, alpha_prime_estimate) = match (&l_plus, &l_minus) {
                (Some(a), Some(b)) => (Some((a - b).scale(&half)), Some((a + b).scale(&half))),
                _ => (None, None),
            };
            AsymptoticSummary::Square {
                alpha_prime: c.alpha_prime,
                beta_prime: c.beta_prime,
                window,
                l_plus,
                l_minus,
                gamma,
                alpha_prime_estimate,
            }
        }
    };
    Ok(AsymptoticReport { p, character: character_label(chi), kind, nmax, rows, summary })
}

/// `max |F_χ(n)/σ'_p(n) − α|` over `lo ≤ n ≤ hi`, `p ∤ n`.
pub fn max_conv_deviation(chi: &DirichletCharacter, lo: u64, hi: u64) -> Result<Rational> {
    require_quartic(chi)?;
    if lo == 0 || hi < lo {
        return Err(Error::OutOfRange { index: lo, max: hi });
    }
    let p = chi.modulus();
    let alpha = constants_for(chi)?.alpha;
    let delta = DeltaTable::new(chi, hi as usize)?;
    let delta_bar = delta.conj();
    let sigma = SigmaTables::new(p, hi as usize)?;
    Ok((lo..=hi)
        .into_par_iter()
        .filter(|n| n % p != 0)
        .map(|n| {
            let f = delta.convolve_at(&delta_bar, n as usize).re;
            let ratio = f / Rational::from_integer(BigInt::from(sigma.prime[n as usize]));
            (ratio - &alpha).abs()
        })
        .max()
        .unwrap_or_else(Rational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::CharacterSelector;

    #[test]
    fn p5_conv_ratios_are_constant() {
        let chi = CharacterSelector::QuarticI.resolve(5).unwrap();
        let r = asymptotic_report(&chi, IdentityKind::Conv, 400).unwrap();
        let alpha = GaussianRational::from_fractions(3, 5, 0, 1);
        assert!(r.rows.iter().all(|row| row.ratio == alpha));
        assert!(r.rows.iter().all(|row| row.n % 5 != 0));
        assert_eq!(r.rows.len(), 320);
        match r.summary {
            AsymptoticSummary::Conv { max_deviation, window, .. } => {
                assert_eq!(max_deviation, Some(Rational::zero()));
                assert_eq!(window, (360, 400));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn p13_square_limits_are_exact() {
        for sel in [CharacterSelector::QuarticI, CharacterSelector::QuarticMinusI] {
            let chi = sel.resolve(13).unwrap();
            let r = asymptotic_report(&chi, IdentityKind::Square, 600).unwrap();
            match r.summary {
                AsymptoticSummary::Square { alpha_prime, beta_prime, l_plus, l_minus, gamma, alpha_prime_estimate, .. } => {
                    assert_eq!(l_plus.unwrap(), &alpha_prime + &beta_prime);
                    assert_eq!(l_minus.unwrap(), &alpha_prime - &beta_prime);
                    assert_eq!(gamma.unwrap(), beta_prime);
                    assert_eq!(alpha_prime_estimate.unwrap(), alpha_prime);
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn p29_conv_deviation_decays() {
        let chi = CharacterSelector::QuarticI.resolve(29).unwrap();
        let early = max_conv_deviation(&chi, 10, 100).unwrap();
        let late = max_conv_deviation(&chi, 1500, 3000).unwrap();
        assert!(late < early);
        assert!(early > Rational::zero());
    }

    #[test]
    fn rejects_bad_inputs() {
        let chi = CharacterSelector::QuarticI.resolve(29).unwrap();
        assert!(asymptotic_report(&chi, IdentityKind::Farkas, 10).is_err());
        assert_eq!(asymptotic_report(&chi, IdentityKind::Conv, 0).unwrap_err(), Error::ZeroArgument);
        assert!(max_conv_deviation(&chi, 10, 5).is_err());
    }
}
