//! Truncated q-expansions of the weight-one and weight-two divisor-sum series.
//!
//! Coefficients for `n ≥ 1` are integers (Gaussian integers for the twisted
//! divisor counts); only the constant terms carry denominators. Tables used by
//! the verification sweeps keep the integer parts in machine words and attach
//! the constant term separately, so the sweeps never allocate per product.

use std::ops::AddAssign;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::foundations::{divisor_sum_table, divisors, is_prime, kronecker_symbol, sigma1, GaussianRational, Rational};

/// Gaussian integer with machine-word parts.
pub type GaussInt = Complex<i64>;

/// Finite coefficient vector `c(0..=N)` of a q-expansion truncated at order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<GaussianRational>,
}

impl QSeries {
    /// Panics if `coeffs` is empty: a series always carries at least `c(0)`.
    pub fn new(coeffs: Vec<GaussianRational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-series needs at least the constant term");
        QSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![GaussianRational::zero(); order + 1] }
    }

    /// The identity `1 + 0·q + …` truncated at `order`.
    pub fn one(order: usize) -> Self {
        let mut s = QSeries::zero(order);
        s.coeffs[0] = GaussianRational::one();
        s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c(n)`. Indexing past the truncation order is a contract violation and panics.
    pub fn coeff(&self, n: usize) -> &GaussianRational {
        assert!(n <= self.order(), "coefficient {n} beyond truncation order {}", self.order());
        &self.coeffs[n]
    }

    pub fn get(&self, n: usize) -> Option<&GaussianRational> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_zero)
    }

    pub fn conj(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(GaussianRational::conj).collect() }
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    fn check_order(&self, other: &QSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::TruncationMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.check_order(other)?;
        Ok(QSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.check_order(other)?;
        Ok(QSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    /// Cauchy product truncated at the common order:
    /// `c(n) = Σ_{j=0}^{n} A(j)·B(n−j)`.
    pub fn cauchy_product(&self, other: &QSeries) -> Result<QSeries> {
        self.check_order(other)?;
        let a = ScaledSeries::from_series(self);
        let b = ScaledSeries::from_series(other);
        let den = &a.den * &b.den;
        let nums = match (a.to_small(), b.to_small()) {
            (Some(sa), Some(sb)) => convolve_small(&sa, &sb),
            _ => convolve_big(&a.nums, &b.nums),
        };
        let coeffs = nums
            .into_iter()
            .map(|(re, im)| {
                GaussianRational::new(Rational::new(re, den.clone()), Rational::new(im, den.clone()))
            })
            .collect();
        Ok(QSeries { coeffs })
    }
}

/// A series written as `(Gaussian integer vector) / den`.
struct ScaledSeries {
    den: BigInt,
    nums: Vec<(BigInt, BigInt)>,
}

impl ScaledSeries {
    fn from_series(s: &QSeries) -> Self {
        let den = s
            .coeffs
            .iter()
            .flat_map(|c| [c.re.denom(), c.im.denom()])
            .fold(BigInt::one(), |acc, d| acc.lcm(d));
        let lift = |q: &Rational| q.numer() * (&den / q.denom());
        let nums = s.coeffs.iter().map(|c| (lift(&c.re), lift(&c.im))).collect();
        ScaledSeries { den, nums }
    }

    /// Parts bounded by 2^40 so that a length ≤ 2^40 convolution fits in `i128`.
    fn to_small(&self) -> Option<Vec<(i128, i128)>> {
        const LIMIT: i64 = 1 << 40;
        if self.nums.len() > (1 << 40) {
            return None;
        }
        self.nums
            .iter()
            .map(|(re, im)| {
                let re = re.to_i64().filter(|x| x.abs() < LIMIT)?;
                let im = im.to_i64().filter(|x| x.abs() < LIMIT)?;
                Some((re as i128, im as i128))
            })
            .collect()
    }
}

fn convolve_small(a: &[(i128, i128)], b: &[(i128, i128)]) -> Vec<(BigInt, BigInt)> {
    (0..a.len())
        .into_par_iter()
        .map(|n| {
            let (mut re, mut im) = (0i128, 0i128);
            for j in 0..=n {
                let (ar, ai) = a[j];
                let (br, bi) = b[n - j];
                re += ar * br - ai * bi;
                im += ar * bi + ai * br;
            }
            (BigInt::from(re), BigInt::from(im))
        })
        .collect()
}

fn convolve_big(a: &[(BigInt, BigInt)], b: &[(BigInt, BigInt)]) -> Vec<(BigInt, BigInt)> {
    (0..a.len())
        .into_par_iter()
        .map(|n| {
            let mut re = BigInt::zero();
            let mut im = BigInt::zero();
            for j in 0..=n {
                let (ar, ai) = &a[j];
                let (br, bi) = &b[n - j];
                re += ar * br - ai * bi;
                im += ar * bi + ai * br;
            }
            (re, im)
        })
        .collect()
}

fn require_quartic_compatible(chi: &DirichletCharacter) -> Result<()> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    if !chi.order_divides_four() {
        return Err(Error::OrderNotDividingFour(chi.order()));
    }
    Ok(())
}

fn chi_gauss_int(chi: &DirichletCharacter, a: i64) -> GaussInt {
    let v = chi.value_gaussian(a).expect("order divides 4");
    Complex::new(v.re.to_integer().to_i64().unwrap(), v.im.to_integer().to_i64().unwrap())
}

/// The constant term `δ_χ(0) = −(1/2p)·Σ_{a=1}^{p−1} χ(a)·a`.
pub fn delta_constant(chi: &DirichletCharacter) -> Result<GaussianRational> {
    require_quartic_compatible(chi)?;
    let p = chi.modulus() as i64;
    let sum = (1..p).fold(GaussInt::new(0, 0), |acc, a| acc + chi_gauss_int(chi, a) * a);
    let scale = Rational::new(BigInt::from(-1), BigInt::from(2 * p));
    Ok(GaussianRational::from_integers(sum.re, sum.im).scale(&scale))
}

/// `δ_χ(n) = Σ_{d|n} χ(d)` for a single `n ≥ 1`, straight from the divisor list.
/// Unlike the constant term this is defined for the trivial character too.
pub fn delta_value(chi: &DirichletCharacter, n: u64) -> Result<GaussianRational> {
    if !chi.order_divides_four() {
        return Err(Error::OrderNotDividingFour(chi.order()));
    }
    let sum = divisors(n)?
        .into_iter()
        .fold(GaussInt::new(0, 0), |acc, d| acc + chi_gauss_int(chi, d as i64));
    Ok(GaussianRational::from_integers(sum.re, sum.im))
}

/// `δ_χ(0..=N)` for a character with values in Q(i): the constant term exactly,
/// the rest as Gaussian integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTable {
    constant: GaussianRational,
    values: Vec<GaussInt>,
}

impl DeltaTable {
    pub fn new(chi: &DirichletCharacter, n_max: usize) -> Result<Self> {
        let constant = delta_constant(chi)?;
        let p = chi.modulus() as usize;
        let residues: Vec<GaussInt> = (0..p).map(|a| chi_gauss_int(chi, a as i64)).collect();
        let mut values: Vec<GaussInt> = divisor_sum_table(n_max, |d, _| GaussSum(residues[d as usize % p]))
            .into_iter()
            .map(|g| g.0)
            .collect();
        values[0] = GaussInt::new(0, 0);
        Ok(DeltaTable { constant, values })
    }

    /// Table for an explicit constant term and integer values, e.g. the
    /// classical `δ_F` with its own normalisation.
    pub fn from_parts(constant: GaussianRational, mut values: Vec<GaussInt>) -> Self {
        if values.is_empty() {
            values.push(GaussInt::new(0, 0));
        }
        values[0] = GaussInt::new(0, 0);
        DeltaTable { constant, values }
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn constant(&self) -> &GaussianRational {
        &self.constant
    }

    /// `δ(n)` for `1 ≤ n ≤ N` as a Gaussian integer.
    pub fn int_value(&self, n: usize) -> GaussInt {
        assert!(n >= 1 && n <= self.n_max(), "δ({n}) outside 1..={}", self.n_max());
        self.values[n]
    }

    pub fn value(&self, n: usize) -> GaussianRational {
        if n == 0 {
            return self.constant.clone();
        }
        let v = self.int_value(n);
        GaussianRational::from_integers(v.re, v.im)
    }

    /// The table of the conjugate character.
    pub fn conj(&self) -> Self {
        DeltaTable {
            constant: self.constant.conj(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn to_series(&self) -> QSeries {
        QSeries::new((0..=self.n_max()).map(|n| self.value(n)).collect())
    }

    /// The single Cauchy-product coefficient `Σ_{j=0}^{n} self(j)·other(n−j)`.
    pub fn convolve_at(&self, other: &DeltaTable, n: usize) -> GaussianRational {
        assert!(n <= self.n_max() && n <= other.n_max(), "convolution index {n} beyond table");
        if n == 0 {
            return &self.constant * &other.constant;
        }
        let (mut re, mut im) = (0i128, 0i128);
        for j in 1..n {
            let a = self.values[j];
            let b = other.values[n - j];
            re += a.re as i128 * b.re as i128 - a.im as i128 * b.im as i128;
            im += a.re as i128 * b.im as i128 + a.im as i128 * b.re as i128;
        }
        let middle = GaussianRational::new(
            Rational::from_integer(BigInt::from(re)),
            Rational::from_integer(BigInt::from(im)),
        );
        let left = &self.constant * &other.value(n);
        let right = &self.value(n) * &other.constant;
        &(&left + &right) + &middle
    }
}

#[derive(Clone, Copy, Default)]
struct GaussSum(GaussInt);

impl AddAssign for GaussSum {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

/// `δ_χ` as a truncated series with the exact constant term.
pub fn delta_series(chi: &DirichletCharacter, order: usize) -> Result<QSeries> {
    Ok(DeltaTable::new(chi, order)?.to_series())
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p > 2 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p as i64))
    }
}

fn require_one_mod_four(p: u64) -> Result<()> {
    require_odd_prime(p)?;
    if p % 4 != 1 {
        return Err(Error::WrongResidue { p, residue: 1, modulus: 4 });
    }
    Ok(())
}

/// `σ'_p(n) = Σ_{d|n, p∤d} d` for `n ≥ 1`.
pub fn sigma_prime(p: u64, n: u64) -> Result<i64> {
    Ok(divisors(n)?.into_iter().filter(|d| d % p != 0).sum::<u64>() as i64)
}

/// `σ̃_p(n) = Σ_{d|n} (p/d)·d` for `n ≥ 1`.
pub fn sigma_tilde(p: u64, n: u64) -> Result<i64> {
    Ok(divisors(n)?.into_iter().map(|d| i64::from(kronecker_symbol(p as i64, d as i64)) * d as i64).sum())
}

/// `σ̂_p(n) = Σ_{d|n} (p/d)·(n/d)` for `n ≥ 1`.
pub fn sigma_hat(p: u64, n: u64) -> Result<i64> {
    Ok(divisors(n)?
        .into_iter()
        .map(|d| i64::from(kronecker_symbol(p as i64, d as i64)) * (n / d) as i64)
        .sum())
}

/// `σ'_p(0) = (p−1)/24`.
pub fn sigma_prime_constant(p: u64) -> Rational {
    Rational::new(BigInt::from(p - 1), BigInt::from(24))
}

/// `σ̃_p(0) = −B_{2,ψ}/4`.
pub fn sigma_tilde_constant(p: u64) -> Result<Rational> {
    Ok(-bernoulli_b2_psi(p)? / Rational::from_integer(BigInt::from(4)))
}

/// The generalised Bernoulli number `B_{2,ψ}` for the quadratic character
/// `ψ = (p/·)`, `p ≡ 1 (mod 4)`, via Cohen's divisor-sum formula
/// `B_{2,ψ} = (2/5)·Σ_s σ((p−s²)/4)` over odd `s` with `s² < p` (both signs).
pub fn bernoulli_b2_psi(p: u64) -> Result<Rational> {
    require_one_mod_four(p)?;
    let mut total = 0u64;
    let mut s = 1u64;
    while s * s < p {
        // both s and −s
        total += 2 * sigma1((p - s * s) / 4)?;
        s += 2;
    }
    Ok(Rational::new(BigInt::from(2 * total), BigInt::from(5)))
}

fn real_series(constant: Rational, values: impl Iterator<Item = i64>) -> QSeries {
    let mut coeffs = vec![GaussianRational::real(constant)];
    coeffs.extend(values.map(|v| GaussianRational::from_integers(v, 0)));
    QSeries::new(coeffs)
}

/// `σ'_p(0..=N)` with `σ'_p(0) = (p−1)/24`.
pub fn sigma_prime_series(p: u64, order: usize) -> Result<QSeries> {
    require_odd_prime(p)?;
    let t = SigmaTables::new(p, order)?;
    Ok(real_series(sigma_prime_constant(p), t.prime[1..].iter().copied()))
}

/// `σ̃_p(0..=N)` with `σ̃_p(0) = −B_{2,ψ}/4`.
pub fn sigma_tilde_series(p: u64, order: usize) -> Result<QSeries> {
    let constant = sigma_tilde_constant(p)?;
    let t = SigmaTables::new(p, order)?;
    Ok(real_series(constant, t.tilde[1..].iter().copied()))
}

/// `σ̂_p(0..=N)` with `σ̂_p(0) = 0`.
pub fn sigma_hat_series(p: u64, order: usize) -> Result<QSeries> {
    require_one_mod_four(p)?;
    let t = SigmaTables::new(p, order)?;
    Ok(real_series(Rational::zero(), t.hat[1..].iter().copied()))
}

/// Sieved tables of `σ'_p`, `σ̃_p`, `σ̂_p` on `1..=N` (index 0 unused, set to 0).
#[derive(Clone, Debug)]
pub struct SigmaTables {
    pub p: u64,
    pub prime: Vec<i64>,
    pub tilde: Vec<i64>,
    pub hat: Vec<i64>,
    pub kronecker: Vec<i8>,
}

impl SigmaTables {
    pub fn new(p: u64, n_max: usize) -> Result<Self> {
        require_odd_prime(p)?;
        let kron: Vec<i8> = (0..=n_max).map(|d| kronecker_symbol(p as i64, d as i64)).collect();
        let prime = divisor_sum_table(n_max, |d, _| if d % p == 0 { 0 } else { d as i64 });
        let tilde = divisor_sum_table(n_max, |d, _| i64::from(kron[d as usize]) * d as i64);
        let hat = divisor_sum_table(n_max, |d, m| i64::from(kron[d as usize]) * m as i64);
        Ok(SigmaTables { p, prime, tilde, hat, kronecker: kron })
    }

    pub fn n_max(&self) -> usize {
        self.prime.len() - 1
    }
}

/// `F_χ(n) = Σ_{j=0}^{n} δ_χ(j)·δ_χ̄(n−j)`.
pub fn convolution_f(chi: &DirichletCharacter, n: usize) -> Result<GaussianRational> {
    let t = DeltaTable::new(chi, n)?;
    Ok(t.convolve_at(&t.conj(), n))
}

/// `H_χ(n) = Σ_{j=0}^{n} δ_χ(j)·δ_χ(n−j)`.
pub fn convolution_h(chi: &DirichletCharacter, n: usize) -> Result<GaussianRational> {
    let t = DeltaTable::new(chi, n)?;
    Ok(t.convolve_at(&t, n))
}
