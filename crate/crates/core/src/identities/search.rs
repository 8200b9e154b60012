//! The finite arguments that leave only `p = 5` and `p = 13`.
//!
//! For the conv identity the `n = 1` and `n = 2` coefficients give two
//! equations in `L = 2δ_χ(0)`; eliminating `L` leaves the condition that
//! `(p+23)² − 720` be a square. For the square identity the `n = 2` and
//! `n = 3` coefficients pin down `δ_χ(0)` and `B_{2,ψ}` once `χ(2)` and
//! `χ(3)` are fixed, and only two values of `B_{2,ψ}` come out.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::verify::require_nmax;
use super::{character_label, require_quartic, verify_id1, verify_id2};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::foundations::{is_prime, primes_up_to, rational_text, GaussianRational, Rational};
use crate::qseries::{bernoulli_b2_psi, delta_constant};

const DISCRIMINANT: i64 = 720;

/// A factorisation `a·b = 720` with `a > b` of equal parity, and the prime
/// candidate `p = (a+b)/2 − 23` with `(p+23)² − 720 = x²`, `x = (a−b)/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantCandidate {
    pub a: i64,
    pub b: i64,
    pub p: i64,
    pub x: i64,
    /// `p` is a prime with `p ≡ 5 (mod 8)`.
    pub admissible: bool,
}

/// Every factor pair of 720 of equal parity.
pub fn discriminant_candidates() -> Vec<DiscriminantCandidate> {
    let mut out = Vec::new();
    for b in 1..=DISCRIMINANT {
        if b * b > DISCRIMINANT {
            break;
        }
        if DISCRIMINANT % b != 0 {
            continue;
        }
        let a = DISCRIMINANT / b;
        if (a - b) % 2 != 0 {
            continue;
        }
        let p = (a + b) / 2 - 23;
        let admissible = p > 2 && is_prime(p as u64) && p % 8 == 5;
        out.push(DiscriminantCandidate { a, b, p, x: (a - b) / 2, admissible });
    }
    out.sort_by_key(|c| std::cmp::Reverse(c.a));
    out
}

/// The admissible candidates; exactly `p ∈ {5, 13}`.
pub fn discriminant_search() -> Vec<DiscriminantCandidate> {
    discriminant_candidates().into_iter().filter(|c| c.admissible).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Id1Check {
    pub label: String,
    /// `L = 2δ_χ(0)`.
    pub l: GaussianRational,
    /// `((p−1)/6)·Re L = |L|²`
    pub eq1_holds: bool,
    /// `((p−1)/18)·(Re L + s·Im L + 1) = |L|²` with `χ(2) = s·i`.
    pub eq2_holds: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Id1Obstruction {
    pub p: u64,
    pub characters: Vec<Id1Check>,
    pub consistent: bool,
}

fn quartic_characters(p: u64) -> Result<[DirichletCharacter; 2]> {
    let (chi, chi_bar) = DirichletCharacter::quartic_pair(p)?;
    require_quartic(&chi)?;
    Ok([chi, chi_bar])
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Evaluates the `n = 1, 2` equations for the conv identity with the exact
/// value of `L` for each quartic character.
pub fn obstruction_id1(p: u64) -> Result<Id1Obstruction> {
    let mut characters = Vec::new();
    for chi in quartic_characters(p)? {
        let l = delta_constant(&chi)?.scale(&int(2));
        let s = chi.value_gaussian(2).expect("quartic").im;
        let norm = l.norm_sq();
        let pm1 = p as i64 - 1;
        let eq1_holds = frac(pm1, 6) * &l.re == norm;
        let eq2_holds = frac(pm1, 18) * (&l.re + &s * &l.im + int(1)) == norm;
        characters.push(Id1Check {
            label: character_label(&chi),
            l,
            eq1_holds,
            eq2_holds,
            consistent: eq1_holds && eq2_holds,
        });
    }
    let consistent = characters.iter().all(|c| c.consistent);
    Ok(Id1Obstruction { p, characters, consistent })
}

/// One value of `χ(3)` and what the `n = 2, 3` equations then force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Id2Branch {
    pub chi3: GaussianRational,
    pub implied_delta0: Option<GaussianRational>,
    pub implied_b: Option<GaussianRational>,
    /// The implied `B_{2,ψ}` is rational, positive and at most 4.
    pub admissible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Id2Check {
    pub label: String,
    pub chi2: GaussianRational,
    pub actual_chi3: GaussianRational,
    pub actual_delta0: GaussianRational,
    #[serde(with = "rational_text")]
    pub actual_b: Rational,
    pub branches: Vec<Id2Branch>,
    /// The `n = 2` and `n = 3` equations evaluated with the actual values.
    pub direct_holds: bool,
    /// The actual branch is admissible and reproduces the actual `δ_χ(0)` and `B_{2,ψ}`.
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Id2Obstruction {
    pub p: u64,
    pub characters: Vec<Id2Check>,
    pub accepted: bool,
}

/// Solves the `n = 3` equation
/// `D·[2(1+c₃) + 2c₂(ψ₃−1) − 2(3+ψ₃)] = 1 − ψ₃ − 2(1+c₂)`, `ψ₃ = c₃²`,
/// for `D = δ_χ(0)`, then reads `B = 4D²/(c₂D + 1/2)` off the `n = 2` equation.
fn solve_branch(c2: &GaussianRational, c3: GaussianRational) -> Id2Branch {
    let one = GaussianRational::one();
    let two = GaussianRational::from(2);
    let three = GaussianRational::from(3);
    let psi3 = &c3 * &c3;
    let coeff = &(&(&two * &(&one + &c3)) + &(&(&two * c2) * &(&psi3 - &one))) - &(&two * &(&three + &psi3));
    let constant = &(&one - &psi3) - &(&two * &(&one + c2));
    let implied_delta0 = coeff.inv().map(|inv| &constant * &inv);
    let implied_b = implied_delta0.as_ref().and_then(|d| {
        let den = &(c2 * d) + &GaussianRational::from_fractions(1, 2, 0, 1);
        den.inv().map(|inv| &(&GaussianRational::from(4) * &(d * d)) * &inv)
    });
    let admissible = implied_b.as_ref().is_some_and(|b| {
        let known = [frac(4, 5), int(4)];
        b.is_real() && (known.contains(&b.re) || (b.re.is_positive() && b.re <= int(4)))
    });
    Id2Branch { chi3: c3, implied_delta0, implied_b, admissible }
}

/// Runs the four `χ(3)` branches for each quartic character and compares
/// them with the actual `χ(3)`, `δ_χ(0)` and `B_{2,ψ}`.
pub fn obstruction_id2(p: u64) -> Result<Id2Obstruction> {
    let b = bernoulli_b2_psi(p)?;
    let mut characters = Vec::new();
    for chi in quartic_characters(p)? {
        let c2 = chi.value_gaussian(2).expect("quartic");
        let c3 = chi.value_gaussian(3).expect("quartic");
        let d0 = delta_constant(&chi)?;
        let branches: Vec<Id2Branch> = (0..4).map(|k| solve_branch(&c2, GaussianRational::i_pow(k))).collect();
        let actual_b = GaussianRational::real(b.clone());
        let accepted = branches.iter().any(|br| {
            br.chi3 == c3
                && br.admissible
                && br.implied_delta0.as_ref() == Some(&d0)
                && br.implied_b.as_ref() == Some(&actual_b)
        });
        let direct_holds = direct_id2(&c2, &c3, &d0, &b);
        characters.push(Id2Check {
            label: character_label(&chi),
            chi2: c2,
            actual_chi3: c3,
            actual_delta0: d0,
            actual_b: b.clone(),
            branches,
            direct_holds,
            accepted,
        });
    }
    let accepted = characters.iter().all(|c| c.accepted);
    Ok(Id2Obstruction { p, characters, accepted })
}

/// The `n = 2` and `n = 3` coefficient equations with the actual values:
/// `2D(1+c₂) + 1 = β' − α'` and `2D(1+c₃) + 2(1+c₂) = α'(1+3ψ₃) + β'(3+ψ₃)`,
/// where `α' = D²/(−B/4)` and `β' = 2D − α'`.
fn direct_id2(c2: &GaussianRational, c3: &GaussianRational, d0: &GaussianRational, b: &Rational) -> bool {
    let one = GaussianRational::one();
    let two = GaussianRational::from(2);
    let three = GaussianRational::from(3);
    let alpha_prime = (d0 * d0).scale(&(int(-4) / b));
    let beta_prime = &(&two * d0) - &alpha_prime;
    let psi3 = c3 * c3;
    let n2 = &(&(&two * d0) * &(&one + c2)) + &one == &beta_prime - &alpha_prime;
    let lhs3 = &(&(&two * d0) * &(&one + c3)) + &(&two * &(&one + c2));
    let rhs3 = &(&alpha_prime * &(&one + &(&three * &psi3))) + &(&beta_prime * &(&three + &psi3));
    n2 && lhs3 == rhs3
}

/// One prime of the dichotomy table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyRow {
    pub p: u64,
    #[serde(with = "rational_text")]
    pub b2_psi: Rational,
    pub id1_pass: bool,
    pub id1_first_failure: Option<u64>,
    pub id2_pass: bool,
    pub id2_first_failure: Option<u64>,
    pub obstruction_id1_consistent: bool,
    pub obstruction_id2_accepted: bool,
    /// The sweeps and the obstruction verdicts agree on `n ≤ 2` (conv) and `n ≤ 3` (square).
    pub agree: bool,
}

/// Sweeps both identities up to `nmax ≥ 3` for every prime `p ≡ 5 (mod 8)`,
/// `p ≤ pmax`, alongside the obstruction verdicts.
pub fn dichotomy_scan(pmax: u64, nmax: u64) -> Result<Vec<DichotomyRow>> {
    require_nmax(nmax)?;
    if nmax < 3 {
        return Err(Error::OutOfRange { index: nmax, max: 3 });
    }
    use rayon::prelude::*;
    primes_up_to(pmax)
        .into_par_iter()
        .filter(|p| p % 8 == 5)
        .map(|p| {
            let id1 = verify_id1(p, nmax)?.outcome.failing_index();
            let mut id2: Option<u64> = None;
            for chi in quartic_characters(p)? {
                if let Some(n) = verify_id2(&chi, nmax)?.outcome.failing_index() {
                    id2 = Some(id2.map_or(n, |m| m.min(n)));
                }
            }
            let ob1 = obstruction_id1(p)?.consistent;
            let ob2 = obstruction_id2(p)?.accepted;
            let agree = ob1 == id1.is_none_or(|n| n > 2) && ob2 == id2.is_none_or(|n| n > 3);
            Ok(DichotomyRow {
                p,
                b2_psi: bernoulli_b2_psi(p)?,
                id1_pass: id1.is_none(),
                id1_first_failure: id1,
                id2_pass: id2.is_none(),
                id2_first_failure: id2,
                obstruction_id1_consistent: ob1,
                obstruction_id2_accepted: ob2,
                agree,
            })
        })
        .collect()
}
