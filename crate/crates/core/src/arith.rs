//! Foundation arithmetic: prime sieving, trial-division factorization,
//! modular inverses, CRT combination and balanced residues.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

/// Default memory ceiling for [`sieve_primes`].
pub const DEFAULT_SIEVE_CEILING: u64 = 1 << 31;

/// Trial-division bound used by [`factorize`]. Covers every composite
/// below 2^32 completely; larger inputs are handled as long as at most
/// one prime factor exceeds the bound.
const TRIAL_BOUND: u64 = 1 << 16;

const SEGMENT_SIZE: usize = 1 << 18;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("sieve limit {limit} is below 2; the prime range is empty")]
    EmptyRange { limit: u64 },
    #[error("sieve limit {limit} exceeds the ceiling {ceiling}")]
    LimitOverCeiling { limit: u64, ceiling: u64 },
    #[error("0 has no prime factorization")]
    FactorZero,
    #[error("{n} has a composite cofactor {cofactor} with no prime factor below {bound}")]
    FactorBeyondRange { n: u64, cofactor: u64, bound: u64 },
    #[error("{a} is not invertible modulo {modulus} (gcd {gcd})")]
    NotInvertible { a: u64, modulus: u64, gcd: u64 },
    #[error("cannot combine residues over an empty list")]
    EmptyCombine,
    #[error("moduli {first} and {second} share the factor {gcd}")]
    NonCoprimeModuli { first: u64, second: u64, gcd: u64 },
    #[error("combined modulus overflows 64 bits")]
    ModulusOverflow,
}

/// A value modulo `m`, kept in canonical form `0 <= value < m`.
///
/// The balanced signed view lives in `(-m/2, m/2]`; for even `m` the
/// tie value `m/2` maps to `+m/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_signed(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let m = modulus as i128;
        let v = (value as i128).rem_euclid(m) as u64;
        Residue { value: v, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Balanced representative in `(-m/2, m/2]`.
    pub fn signed(&self) -> i64 {
        if 2 * (self.value as u128) <= self.modulus as u128 {
            self.value as i64
        } else {
            (self.value as i128 - self.modulus as i128) as i64
        }
    }

    /// Distance to the nearest multiple of the modulus: `min(v, m - v)`.
    pub fn near_miss(&self) -> u64 {
        self.value.min(self.modulus - self.value)
    }

    /// Additive inverse within the same modulus.
    pub fn negated(&self) -> Self {
        Residue {
            value: if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// A positive integer together with its prime factorization,
/// primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// True when n = q^e for a single prime q (any e >= 1).
    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// The prime-power components q^e of n, ascending in q.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, e)| q.pow(e))
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(q, e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{q}")?;
            } else {
                write!(f, "{q}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for FactoredInteger {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "1" {
            return Ok(FactoredInteger {
                n: 1,
                factors: Vec::new(),
            });
        }
        let mut n: u64 = 1;
        let mut factors = Vec::new();
        for part in s.split('*') {
            let (q, e) = match part.split_once('^') {
                Some((q, e)) => (
                    q.parse::<u64>().map_err(|e| e.to_string())?,
                    e.parse::<u32>().map_err(|e| e.to_string())?,
                ),
                None => (part.parse::<u64>().map_err(|e| e.to_string())?, 1),
            };
            n = n
                .checked_mul(q.checked_pow(e).ok_or("factor overflow")?)
                .ok_or("factor overflow")?;
            factors.push((q, e));
        }
        if factors.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err("primes must be strictly increasing".into());
        }
        Ok(FactoredInteger { n, factors })
    }
}

impl serde::Serialize for FactoredInteger {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for FactoredInteger {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b).
fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    (r0, x0, y0)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Deterministic strong-pseudoprime test, valid for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes in `[2, limit]`, ascending. Segmented so the live memory is
/// O(sqrt(limit) + segment) beyond the output itself.
pub fn sieve_primes(limit: u64) -> Result<Vec<u64>, ArithError> {
    sieve_primes_with_ceiling(limit, DEFAULT_SIEVE_CEILING)
}

pub fn sieve_primes_with_ceiling(limit: u64, ceiling: u64) -> Result<Vec<u64>, ArithError> {
    if limit < 2 {
        return Err(ArithError::EmptyRange { limit });
    }
    if limit > ceiling {
        return Err(ArithError::LimitOverCeiling { limit, ceiling });
    }

    let root = limit.isqrt() as usize;
    // base sieve over [2, sqrt(limit)]
    let mut base_composite = vec![false; root + 1];
    let mut base_primes: Vec<usize> = Vec::new();
    for p in 2..=root {
        if !base_composite[p] {
            base_primes.push(p);
            let mut q = p * p;
            while q <= root {
                base_composite[q] = true;
                q += p;
            }
        }
    }

    let mut primes: Vec<u64> = Vec::new();
    if limit >= 2 {
        // π(x) ≈ x / (ln x − 1); slight overshoot to avoid regrowth
        let est = if limit > 20 {
            (limit as f64 / ((limit as f64).ln() - 1.1)) as usize + 16
        } else {
            12
        };
        primes.reserve(est);
    }
    primes.extend(base_primes.iter().map(|&p| p as u64));

    let mut segment = vec![false; SEGMENT_SIZE];
    let mut lo = root as u64 + 1;
    while lo <= limit {
        let hi = (lo + SEGMENT_SIZE as u64 - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        segment[..len].fill(false);
        for &p in &base_primes {
            let p = p as u64;
            let mut start = lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut q = start;
            while q <= hi {
                segment[(q - lo) as usize] = true;
                q += p;
            }
        }
        for (i, &composite) in segment[..len].iter().enumerate() {
            if !composite {
                primes.push(lo + i as u64);
            }
        }
        lo = hi + 1;
    }
    Ok(primes)
}

fn small_primes() -> &'static [u64] {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    CACHE.get_or_init(|| sieve_primes(TRIAL_BOUND).expect("trial bound below ceiling"))
}

/// Complete prime factorization by trial division over sieved primes,
/// with a strong-pseudoprime check for a single large cofactor.
pub fn factorize(n: u64) -> Result<FactoredInteger, ArithError> {
    if n == 0 {
        return Err(ArithError::FactorZero);
    }
    let mut rem = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes() {
        if p * p > rem {
            break;
        }
        if rem % p == 0 {
            let mut e = 0u32;
            while rem % p == 0 {
                rem /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rem > 1 {
        if rem <= TRIAL_BOUND * TRIAL_BOUND || is_prime(rem) {
            factors.push((rem, 1));
        } else {
            // all remaining prime factors exceed the trial bound; accept
            // perfect powers of a single prime, reject anything harder
            let r2 = rem.isqrt();
            let r3 = cbrt(rem);
            if r2 * r2 == rem && is_prime(r2) {
                factors.push((r2, 2));
            } else if r3 * r3 * r3 == rem && is_prime(r3) {
                factors.push((r3, 3));
            } else {
                return Err(ArithError::FactorBeyondRange {
                    n,
                    cofactor: rem,
                    bound: TRIAL_BOUND,
                });
            }
        }
    }
    Ok(FactoredInteger { n, factors })
}

fn cbrt(n: u64) -> u64 {
    let mut r = (n as f64).cbrt().round() as u64;
    while r > 0 && r.checked_mul(r).and_then(|s| s.checked_mul(r)).map_or(true, |c| c > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).and_then(|s| s.checked_mul(r + 1)).is_some_and(|c| c <= n) {
        r += 1;
    }
    r
}

/// x with a*x ≡ 1 (mod m); errors with the shared gcd when none exists.
pub fn mod_inverse(a: u64, m: u64) -> Result<Residue, ArithError> {
    assert!(m >= 1, "modulus must be positive");
    if m == 1 {
        return Ok(Residue::new(0, 1));
    }
    let a_red = a % m;
    let (g, x, _) = egcd(a_red as i128, m as i128);
    if g != 1 {
        return Err(ArithError::NotInvertible {
            a,
            modulus: m,
            gcd: g as u64,
        });
    }
    Ok(Residue::new(x.rem_euclid(m as i128) as u64, m))
}

/// Unique residue modulo the product of the (pairwise coprime) moduli
/// that agrees with every part.
pub fn crt_combine(parts: &[Residue]) -> Result<Residue, ArithError> {
    let mut iter = parts.iter();
    let first = iter.next().ok_or(ArithError::EmptyCombine)?;
    let mut r = first.value();
    let mut m = first.modulus();
    for part in iter {
        let (r2, m2) = (part.value(), part.modulus());
        let (g, x, _) = egcd(m as i128, m2 as i128);
        if g != 1 {
            return Err(ArithError::NonCoprimeModuli {
                first: m,
                second: m2,
                gcd: g as u64,
            });
        }
        let merged = m.checked_mul(m2).ok_or(ArithError::ModulusOverflow)?;
        // r + m * ((r2 - r) * inv(m) mod m2)
        let diff = (r2 as i128 - r as i128).rem_euclid(m2 as i128) as u128;
        let xm = x.rem_euclid(m2 as i128) as u128;
        let t = (diff * xm) % m2 as u128;
        r = ((r as u128 + m as u128 * t) % merged as u128) as u64;
        m = merged;
    }
    Ok(Residue::new(r, m))
}
