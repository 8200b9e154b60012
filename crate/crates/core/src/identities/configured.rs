use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::verify::{require_nmax, sweep};
use super::{character_label, CharacterSelector, IdentityKind, VerificationReport};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::foundations::{is_prime, GaussianRational, Rational};
use crate::qseries::{DeltaTable, SigmaTables};

/// One summand `A·K(n·C/B)`, where `K` is `F_χ` or `H_χ` and the term is
/// dropped unless `B | n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTerm {
    pub coefficient: GaussianRational,
    pub divisor: u64,
    pub multiplier: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfiguredRhs {
    /// `c·σ'_p(n)`; the left side uses `F_χ`.
    SigmaPrime { coefficient: GaussianRational },
    /// `α''·σ̃_p(n) + β''·σ̂_p(n)`; the left side uses `H_χ`.
    TildeHat { tilde: GaussianRational, hat: GaussianRational },
}

/// `Σ_i A_i·K(n·C_i/B_i) = rhs(n)` for all `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfiguredIdentity {
    pub p: u64,
    pub character: CharacterSelector,
    pub terms: Vec<IdentityTerm>,
    pub rhs: ConfiguredRhs,
}

impl ConfiguredIdentity {
    /// Checks well-formedness and resolves the character.
    pub fn validate(&self) -> Result<DirichletCharacter> {
        let bad = |msg: String| Err(Error::MalformedIdentity(msg));
        if !(self.p > 2 && is_prime(self.p)) {
            return bad(format!("p = {} is not an odd prime", self.p));
        }
        if self.terms.is_empty() {
            return bad("at least one term is required".into());
        }
        for (i, t) in self.terms.iter().enumerate() {
            if t.divisor == 0 || t.multiplier == 0 {
                return bad(format!("term {}: B and C must be positive integers", i + 1));
            }
        }
        if matches!(self.rhs, ConfiguredRhs::TildeHat { .. }) && self.p % 4 != 1 {
            return bad(format!("tilde_hat right side needs p = 1 mod 4, got p = {}", self.p));
        }
        let chi = self
            .character
            .resolve(self.p)
            .map_err(|e| Error::MalformedIdentity(format!("character: {e}")))?;
        if !chi.order_divides_four() || chi.is_trivial() {
            return bad(format!("character {} must be non-trivial of order dividing 4", self.character));
        }
        Ok(chi)
    }

    /// Largest convolution index needed for `n ≤ nmax`.
    fn max_argument(&self, nmax: u64) -> u64 {
        self.terms.iter().map(|t| (nmax / t.divisor) * t.multiplier).max().unwrap_or(0)
    }
}

/// The identity obtained by eliminating the two cusp eigenforms of level 37:
///
/// ```text
/// F(p1·p2·n) + p1·F(p2·n/p1) + p2·F(p1·n/p2) + p1·p2·F(n/(p1·p2))
///     = (1 + p1 + p2 + p1·p2)/3 · σ'_37(n)
/// ```
///
/// valid for `p1 ∈ {2, 5}` and `p2 ∈ {17, 19}`.
pub fn p37_identity(p1: u64, p2: u64) -> ConfiguredIdentity {
    let term = |a: u64, b: u64, c: u64| IdentityTerm {
        coefficient: GaussianRational::from(a as i64),
        divisor: b,
        multiplier: c,
    };
    let constant = Rational::new(BigInt::from((1 + p1) * (1 + p2)), BigInt::from(3));
    ConfiguredIdentity {
        p: 37,
        character: CharacterSelector::QuarticI,
        terms: vec![
            term(1, 1, p1 * p2),
            term(p1, p1, p2),
            term(p2, p2, p1),
            term(p1 * p2, p1 * p2, 1),
        ],
        rhs: ConfiguredRhs::SigmaPrime { coefficient: GaussianRational::real(constant) },
    }
}

/// Exact check of a configured identity for `1 ≤ n ≤ nmax`.
pub fn check_configured_identity(cfg: &ConfiguredIdentity, nmax: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    require_nmax(nmax)?;
    let chi = cfg.validate()?;
    let delta = DeltaTable::new(&chi, cfg.max_argument(nmax) as usize)?;
    let partner = match cfg.rhs {
        ConfiguredRhs::SigmaPrime { .. } => delta.conj(),
        ConfiguredRhs::TildeHat { .. } => delta.clone(),
    };
    let sigma = SigmaTables::new(cfg.p, nmax as usize)?;
    let int = |v: i64| Rational::from_integer(BigInt::from(v));
    let outcome = sweep(1..=nmax, |n| {
        let mut lhs = GaussianRational::zero();
        for t in cfg.terms.iter().filter(|t| n % t.divisor == 0) {
            let m = (n / t.divisor * t.multiplier) as usize;
            lhs += &(&t.coefficient * &delta.convolve_at(&partner, m));
        }
        let rhs = match &cfg.rhs {
            ConfiguredRhs::SigmaPrime { coefficient } => coefficient.scale(&int(sigma.prime[n as usize])),
            ConfiguredRhs::TildeHat { tilde, hat } => {
                &tilde.scale(&int(sigma.tilde[n as usize])) + &hat.scale(&int(sigma.hat[n as usize]))
            }
        };
        (lhs, rhs)
    });
    Ok(VerificationReport {
        p: cfg.p,
        character: character_label(&chi),
        kind: IdentityKind::Configured,
        nmax,
        outcome,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{constants_for, verify_id1, verify_id2, Outcome};
    use crate::qseries::convolution_f;

    #[test]
    fn p37_spot_value() {
        let chi = CharacterSelector::QuarticI.resolve(37).unwrap();
        assert_eq!(convolution_f(&chi, 34).unwrap(), GaussianRational::from(18));
        let cfg = p37_identity(2, 17);
        assert!(check_configured_identity(&cfg, 1).unwrap().passed());
    }

    #[test]
    fn p37_identities_hold_on_a_short_range() {
        for p1 in [2, 5] {
            for p2 in [17, 19] {
                let r = check_configured_identity(&p37_identity(p1, p2), 120).unwrap();
                assert!(r.passed(), "({p1}, {p2}): {:?}", r.outcome);
            }
        }
    }

    #[test]
    fn wrong_pair_fails() {
        // 3 is not a prime where an eigenvalue vanishes.
        let r = check_configured_identity(&p37_identity(3, 17), 60).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn trivial_config_reproduces_id1() {
        for p in [5u64, 13, 29, 37] {
            let chi = CharacterSelector::QuarticI.resolve(p).unwrap();
            let alpha = constants_for(&chi).unwrap().alpha;
            let unit = ConfiguredIdentity {
                p,
                character: CharacterSelector::QuarticI,
                terms: vec![IdentityTerm { coefficient: GaussianRational::one(), divisor: 1, multiplier: 1 }],
                rhs: ConfiguredRhs::SigmaPrime { coefficient: GaussianRational::real(alpha.clone()) },
            };
            let normalised = ConfiguredIdentity {
                terms: vec![IdentityTerm {
                    coefficient: GaussianRational::real(alpha.recip()),
                    divisor: 1,
                    multiplier: 1,
                }],
                rhs: ConfiguredRhs::SigmaPrime { coefficient: GaussianRational::one() },
                ..unit.clone()
            };
            let direct = verify_id1(p, 60).unwrap();
            for cfg in [unit, normalised] {
                let r = check_configured_identity(&cfg, 60).unwrap();
                assert_eq!(r.passed(), direct.passed());
                if let (Outcome::FirstFailure { n: a, .. }, Outcome::FirstFailure { n: b, .. }) =
                    (&r.outcome, &direct.outcome)
                {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn tilde_hat_config_reproduces_id2() {
        for sel in [CharacterSelector::QuarticI, CharacterSelector::QuarticMinusI] {
            for p in [5u64, 13, 29] {
                let chi = sel.resolve(p).unwrap();
                let c = constants_for(&chi).unwrap();
                let cfg = ConfiguredIdentity {
                    p,
                    character: sel,
                    terms: vec![IdentityTerm { coefficient: GaussianRational::one(), divisor: 1, multiplier: 1 }],
                    rhs: ConfiguredRhs::TildeHat { tilde: c.alpha_prime, hat: c.beta_prime },
                };
                let r = check_configured_identity(&cfg, 40).unwrap();
                let direct = verify_id2(&chi, 40).unwrap();
                assert_eq!(r.outcome.failing_index(), direct.outcome.failing_index());
            }
        }
    }

    #[test]
    fn malformed_configs_rejected() {
        let mut cfg = p37_identity(2, 17);
        cfg.terms[1].divisor = 0;
        assert!(matches!(cfg.validate(), Err(Error::MalformedIdentity(m)) if m.contains("term 2")));
        let mut cfg = p37_identity(2, 17);
        cfg.terms.clear();
        assert!(matches!(cfg.validate(), Err(Error::MalformedIdentity(_))));
        let mut cfg = p37_identity(2, 17);
        cfg.p = 35;
        assert!(matches!(cfg.validate(), Err(Error::MalformedIdentity(_))));
        let mut cfg = p37_identity(2, 17);
        cfg.p = 17;
        assert!(matches!(cfg.validate(), Err(Error::MalformedIdentity(m)) if m.contains("character")));
        assert_eq!(check_configured_identity(&p37_identity(2, 17), 0).unwrap_err(), Error::ZeroArgument);
    }
}
