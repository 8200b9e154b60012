//! Dirichlet characters modulo an odd prime.
//!
//! A character is stored as a single exponent `e` against a fixed primitive
//! root `g`: `χ(g) = ζ^e` with `ζ = exp(2πi/(p−1))`. Values are therefore
//! exponents of `ζ`, and only characters whose order divides 4 are ever
//! materialised as elements of Q(i).

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::foundations::{is_primitive_root, primitive_root, DiscreteLogTable, GaussianRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A value `χ(a)`: zero when `p | a`, otherwise `ζ^t` with `t ∈ [0, p−2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitValue {
    Zero,
    Root { exponent: u64, period: u64 },
}

impl UnitValue {
    /// The value as an element of Q(i), available when it is a fourth root of
    /// unity (or zero).
    pub fn to_gaussian(self) -> Option<GaussianRational> {
        match self {
            UnitValue::Zero => Some(GaussianRational::zero()),
            UnitValue::Root { exponent, period } => {
                let quarter = 4 * exponent;
                (quarter % period == 0).then(|| GaussianRational::i_pow((quarter / period) as i64))
            }
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, UnitValue::Zero)
    }

    pub fn mul(self, other: UnitValue) -> UnitValue {
        match (self, other) {
            (UnitValue::Root { exponent: a, period }, UnitValue::Root { exponent: b, .. }) => {
                UnitValue::Root { exponent: (a + b) % period, period }
            }
            _ => UnitValue::Zero,
        }
    }

    pub fn pow(self, k: u64) -> UnitValue {
        match self {
            UnitValue::Zero => UnitValue::Zero,
            UnitValue::Root { exponent, period } => {
                UnitValue::Root { exponent: mul_mod(exponent, k, period), period }
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    exponent: u64,
    dlog: Arc<DiscreteLogTable>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.exponent == other.exponent
            && self.modulus() == other.modulus()
            && self.generator() == other.generator()
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    /// The character with `χ(g) = ζ^exponent` for the smallest primitive root `g`.
    pub fn new(p: u64, exponent: u64) -> Result<Self> {
        let g = primitive_root(p)?;
        DirichletCharacter::with_generator(p, g, exponent)
    }

    /// Anchors the character at an explicit primitive root.
    pub fn with_generator(p: u64, g: u64, exponent: u64) -> Result<Self> {
        let table = DiscreteLogTable::new(p, g)?;
        Ok(DirichletCharacter { exponent: exponent % (p - 1), dlog: Arc::new(table) })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        DirichletCharacter::new(p, 0)
    }

    /// The quadratic character, equal to the Legendre symbol `(·/p)`.
    pub fn quadratic(p: u64) -> Result<Self> {
        DirichletCharacter::new(p, p.saturating_sub(1) / 2)
    }

    /// Every character modulo `p`, indexed by exponent `0..p−1`.
    pub fn all(p: u64) -> Result<Vec<Self>> {
        let base = DirichletCharacter::new(p, 1)?;
        Ok((0..p - 1).map(|e| base.with_exponent(e)).collect())
    }

    /// The two characters of exact order 4 modulo a prime `p ≡ 5 (mod 8)`,
    /// labelled so that the first satisfies `χ(2) = i` and the second is its
    /// conjugate.
    pub fn quartic_pair(p: u64) -> Result<(Self, Self)> {
        if p % 8 != 5 {
            return Err(Error::WrongResidue { p, residue: 5, modulus: 8 });
        }
        let base = DirichletCharacter::new(p, 0)?;
        let quarter = (p - 1) / 4;
        // (p/2) = −1, so dlog(2) is odd and χ(2) = i^{±dlog(2)} is ±i.
        let log2 = base.dlog.log(2).expect("2 is a unit modulo an odd prime");
        let e = if log2 % 4 == 1 { quarter } else { 3 * quarter };
        let chi = base.with_exponent(e);
        let chi_bar = chi.conj();
        Ok((chi, chi_bar))
    }

    fn with_exponent(&self, exponent: u64) -> Self {
        DirichletCharacter { exponent: exponent % self.period(), dlog: Arc::clone(&self.dlog) }
    }

    pub fn modulus(&self) -> u64 {
        self.dlog.modulus()
    }

    pub fn generator(&self) -> u64 {
        self.dlog.generator()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `p − 1`, the order of the character group.
    pub fn period(&self) -> u64 {
        self.modulus() - 1
    }

    pub fn order(&self) -> u64 {
        self.period() / self.exponent.gcd(&self.period())
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// Whether every value lies in `{0, ±1, ±i}`.
    pub fn order_divides_four(&self) -> bool {
        4 % self.order() == 0
    }

    pub fn parity(&self) -> Parity {
        if self.exponent % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn conj(&self) -> Self {
        self.with_exponent(self.period() - self.exponent)
    }

    pub fn power(&self, k: u64) -> Self {
        self.with_exponent(mul_mod(self.exponent, k, self.period()))
    }

    pub fn value(&self, a: i64) -> UnitValue {
        match self.dlog.log(a) {
            None => UnitValue::Zero,
            Some(log) => UnitValue::Root {
                exponent: mul_mod(self.exponent, log, self.period()),
                period: self.period(),
            },
        }
    }

    /// `χ(a)` in Q(i); `None` when the order of `χ` does not divide 4.
    pub fn value_gaussian(&self, a: i64) -> Option<GaussianRational> {
        if !self.order_divides_four() {
            return None;
        }
        self.value(a).to_gaussian()
    }

    /// `t(χ, d) ∈ [0, p−2]` with `χ(d) = ζ^t`.
    pub fn t_exponent(&self, d: i64) -> Result<u64> {
        match self.value(d) {
            UnitValue::Root { exponent, .. } => Ok(exponent),
            UnitValue::Zero => Err(Error::NotCoprime { d, p: self.modulus() }),
        }
    }

    /// Whether `g` is a primitive root modulo `p`; used to validate generator anchors.
    pub fn is_valid_anchor(p: u64, g: u64) -> bool {
        is_primitive_root(g, p)
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi[p={}, g={}, e={}]",
            self.modulus(),
            self.generator(),
            self.exponent
        )
    }
}
