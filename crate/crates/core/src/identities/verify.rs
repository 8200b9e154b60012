use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{character_label, constants_for, require_quartic, IdentityKind, Outcome, VerificationReport};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::foundations::{GaussianRational, Rational};
use crate::qseries::{
    sigma_prime_constant, sigma_tilde_constant, DeltaTable, QSeries, SigmaTables,
};

/// Compares `lhs(n)` and `rhs(n)` for every `n` in `range`, in parallel, and
/// reports the smallest failing index.
pub(crate) fn sweep<F>(range: std::ops::RangeInclusive<u64>, sides: F) -> Outcome
where
    F: Fn(u64) -> (GaussianRational, GaussianRational) + Sync,
{
    let failure = range
        .into_par_iter()
        .map(|n| (n, sides(n)))
        .find_first(|(_, (lhs, rhs))| lhs != rhs);
    match failure {
        None => Outcome::Pass,
        Some((n, (lhs, rhs))) => Outcome::FirstFailure { n, lhs, rhs },
    }
}

fn real(q: Rational) -> GaussianRational {
    GaussianRational::real(q)
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `σ'_p(n)` including the constant term.
fn sigma_prime_at(p: u64, tables: &SigmaTables, n: u64) -> Rational {
    if n == 0 {
        sigma_prime_constant(p)
    } else {
        int(tables.prime[n as usize])
    }
}

/// Checks `F_χ(n) = α·σ'_p(n)` for `0 ≤ n ≤ nmax` with the canonical quartic
/// character modulo `p ≡ 5 (mod 8)`.
pub fn verify_id1(p: u64, nmax: u64) -> Result<VerificationReport> {
    let (chi, _) = DirichletCharacter::quartic_pair(p)?;
    verify_conv(&chi, nmax)
}

/// [`verify_id1`] for an explicit quartic character. Since `F_χ̄ = F_χ` the
/// choice between the two quartic characters only changes the label.
pub fn verify_conv(chi: &DirichletCharacter, nmax: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let p = chi.modulus();
    let alpha = constants_for(chi)?.alpha;
    let delta = DeltaTable::new(chi, nmax as usize)?;
    let delta_bar = delta.conj();
    let sigma = SigmaTables::new(p, nmax as usize)?;
    let outcome = sweep(0..=nmax, |n| {
        let lhs = delta.convolve_at(&delta_bar, n as usize);
        let rhs = real(&alpha * sigma_prime_at(p, &sigma, n));
        (lhs, rhs)
    });
    Ok(VerificationReport {
        p,
        character: character_label(chi),
        kind: IdentityKind::Conv,
        nmax,
        outcome,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Checks `H_χ(n) = α'·σ̃_p(n) + β'·σ̂_p(n)` for `0 ≤ n ≤ nmax`.
pub fn verify_id2(chi: &DirichletCharacter, nmax: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    require_quartic(chi)?;
    let p = chi.modulus();
    let c = constants_for(chi)?;
    let delta = DeltaTable::new(chi, nmax as usize)?;
    let sigma = SigmaTables::new(p, nmax as usize)?;
    let tilde0 = sigma_tilde_constant(p)?;
    let outcome = sweep(0..=nmax, |n| {
        let lhs = delta.convolve_at(&delta, n as usize);
        let rhs = if n == 0 {
            c.alpha_prime.scale(&tilde0)
        } else {
            &c.alpha_prime.scale(&int(sigma.tilde[n as usize]))
                + &c.beta_prime.scale(&int(sigma.hat[n as usize]))
        };
        (lhs, rhs)
    });
    Ok(VerificationReport {
        p,
        character: character_label(chi),
        kind: IdentityKind::Square,
        nmax,
        outcome,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// The classical identity `Σ_{j=0}^{n} δ_F(j)·δ_F(n−j) = σ'_3(n)/3` with
/// `δ_F(0) = 1/6` and `σ'_3(0) = 1/12`.
pub fn verify_farkas(nmax: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let chi = DirichletCharacter::quadratic(3)?;
    let delta = DeltaTable::new(&chi, nmax as usize)?;
    debug_assert_eq!(delta.constant(), &GaussianRational::from_fractions(1, 6, 0, 1));
    let sigma = SigmaTables::new(3, nmax as usize)?;
    let third = Rational::new(BigInt::from(1), BigInt::from(3));
    let outcome = sweep(0..=nmax, |n| {
        let lhs = delta.convolve_at(&delta, n as usize);
        let rhs = real(&third * sigma_prime_at(3, &sigma, n));
        (lhs, rhs)
    });
    Ok(VerificationReport {
        p: 3,
        character: "quadratic".to_string(),
        kind: IdentityKind::Farkas,
        nmax,
        outcome,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// What is subtracted from the convolution to form the residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidualKind {
    /// `F_χ(n) − α·σ'_p(n)`: the cusp part of `G_{1,χ}·G_{1,χ̄}`.
    Conv,
    /// `H_χ(n) − α'·σ̃_p(n)`: what remains is `γ·σ̂_p(n)` plus a cusp part.
    SquareEisenstein,
    /// `H_χ(n) − α'·σ̃_p(n) − β'·σ̂_p(n)`.
    Square,
}

/// The exact residual `a(0..=N)` of the chosen identity.
pub fn residual_series(chi: &DirichletCharacter, kind: ResidualKind, order: usize) -> Result<QSeries> {
    require_quartic(chi)?;
    let p = chi.modulus();
    let c = constants_for(chi)?;
    let delta = DeltaTable::new(chi, order)?;
    let partner = match kind {
        ResidualKind::Conv => delta.conj(),
        ResidualKind::SquareEisenstein | ResidualKind::Square => delta.clone(),
    };
    let sigma = SigmaTables::new(p, order)?;
    let tilde0 = sigma_tilde_constant(p)?;
    let coeffs = (0..=order)
        .into_par_iter()
        .map(|n| {
            let lhs = delta.convolve_at(&partner, n);
            let subtracted = match kind {
                ResidualKind::Conv => real(&c.alpha * sigma_prime_at(p, &sigma, n as u64)),
                ResidualKind::SquareEisenstein | ResidualKind::Square => {
                    let tilde = if n == 0 { tilde0.clone() } else { int(sigma.tilde[n]) };
                    let mut s = c.alpha_prime.scale(&tilde);
                    if kind == ResidualKind::Square && n > 0 {
                        s += &c.beta_prime.scale(&int(sigma.hat[n]));
                    }
                    s
                }
            };
            &lhs - &subtracted
        })
        .collect();
    Ok(QSeries::new(coeffs))
}

pub(crate) fn require_nmax(nmax: u64) -> Result<()> {
    if nmax == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(())
}
