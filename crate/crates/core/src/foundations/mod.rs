//! Exact scalars and elementary number theory.
//!
//! All inputs in this crate stay at desk scale (well below 10⁷), so
//! factorisation is plain trial division and primality is a deterministic
//! Miller–Rabin valid on the whole `u64` range.

mod gaussian;

use std::ops::AddAssign;

pub use gaussian::{parse_exact_rational, rational_text, GaussianRational};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Prime factorisation `n = ∏ pᵉ` in increasing order of `p`. Empty for `n = 1`.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut out = Vec::new();
    let mut push = |n: &mut u64, p: u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut n, 2);
    let mut p = 3;
    while p * p <= n {
        push(&mut n, p);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// Number of positive divisors.
pub fn divisor_count(n: u64) -> Result<u64> {
    Ok(factorize(n)?.iter().map(|&(_, e)| u64::from(e) + 1).product())
}

/// The ordinary divisor sum σ(n).
pub fn sigma1(n: u64) -> Result<u64> {
    Ok(divisors(n)?.iter().sum())
}

/// ω(n), the number of distinct prime factors; ω(1) = 0.
pub fn omega(n: u64) -> Result<u32> {
    Ok(factorize(n)?.len() as u32)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m`.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn require_odd_prime(p: i64) -> Result<u64> {
    if p > 2 && is_prime(p as u64) {
        Ok(p as u64)
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// Kronecker symbol `(a/n)` for arbitrary integers.
pub fn kronecker_symbol(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut sign: i8 = 1;
    let mut n = n as i128;
    let a = a as i128;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let v = n.trailing_zeros();
    n >>= v;
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    // Jacobi symbol (a/n) for odd positive n.
    let mut a = a.rem_euclid(n);
    let mut n = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// The Kronecker symbol `(p/n)` for an odd prime `p`.
///
/// For `p ≡ 1 (mod 4)` this is the quadratic Dirichlet character modulo `p`;
/// in particular `(p/2) = −1` when `p ≡ 5 (mod 8)`.
pub fn kronecker(p: i64, n: i64) -> Result<i8> {
    require_odd_prime(p)?;
    Ok(kronecker_symbol(p, n))
}

/// Smallest primitive root modulo the odd prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    let p = require_odd_prime(p as i64)?;
    let factors = factorize(p - 1)?;
    (2..p)
        .find(|&g| factors.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1))
        .ok_or(Error::NotOddPrime(p as i64))
}

/// Whether `g` generates the multiplicative group modulo the prime `p`.
pub fn is_primitive_root(g: u64, p: u64) -> bool {
    if g % p == 0 {
        return false;
    }
    match factorize(p - 1) {
        Ok(factors) => factors.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1),
        Err(_) => false,
    }
}

/// Discrete logarithms to a fixed primitive root, tabulated once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteLogTable {
    modulus: u64,
    generator: u64,
    logs: Vec<u32>,
}

impl DiscreteLogTable {
    pub fn new(p: u64, g: u64) -> Result<Self> {
        let p = require_odd_prime(p as i64)?;
        let mut logs = vec![u32::MAX; p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            if logs[x as usize] != u32::MAX {
                return Err(Error::NotGenerator { p, g });
            }
            logs[x as usize] = k as u32;
            x = mul_mod(x, g % p, p);
        }
        if x != 1 {
            return Err(Error::NotGenerator { p, g });
        }
        Ok(DiscreteLogTable { modulus: p, generator: g % p, logs })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// `dlog(a) ∈ [0, p−2]`, or `None` when `p | a`.
    pub fn log(&self, a: i64) -> Option<u64> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        (r != 0).then(|| u64::from(self.logs[r]))
    }
}

/// Builds `table[n] = Σ_{d·m = n} term(d, m)` for `1 ≤ n ≤ n_max`; `table[0]`
/// is left at the default value.
pub fn divisor_sum_table<T, F>(n_max: usize, term: F) -> Vec<T>
where
    T: Default + Clone + AddAssign,
    F: Fn(u64, u64) -> T,
{
    let mut table = vec![T::default(); n_max + 1];
    for d in 1..=n_max {
        let mut m = 1;
        let mut n = d;
        while n <= n_max {
            table[n] += term(d as u64, m as u64);
            m += 1;
            n += d;
        }
    }
    table
}
