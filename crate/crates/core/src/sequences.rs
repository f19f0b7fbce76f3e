//! Left factorials, derangement (subfactorial) numbers and Bell numbers,
//! exact and modular, plus the divisor-reduction / CRT fast path for
//! derangement residues.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{self, ArithError, FactoredInteger, Residue};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("gcd(!n, n!) needs n >= 2, got {0}")]
    GcdDomain(u64),
    #[error("alternating factorial sum needs an odd prime modulus, got {0}")]
    NotOddPrime(u64),
    #[error("reduced alternating sum needs n >= 3, got {0}")]
    FractionDomain(u64),
}

/// Left factorial: sum of k! over 0 <= k < n.
pub fn left_factorial(n: u64) -> BigUint {
    let mut sum = BigUint::zero();
    let mut fact = BigUint::one();
    for k in 0..n {
        if k > 0 {
            fact *= k;
        }
        sum += &fact;
    }
    sum
}

/// gcd of the left factorial and the factorial at the same index.
pub fn left_factorial_gcd(n: u64) -> Result<BigUint, SequenceError> {
    if n < 2 {
        return Err(SequenceError::GcdDomain(n));
    }
    let mut fact = BigUint::one();
    for k in 2..=n {
        fact *= k;
    }
    Ok(left_factorial(n).gcd(&fact))
}

/// Derangement number by the recurrence S_m = m*S_{m-1} + (-1)^m, S_0 = 1.
pub fn subfactorial(n: u64) -> BigUint {
    let mut s = BigInt::one();
    for m in 1..=n {
        s = s * m + if m % 2 == 0 { 1 } else { -1 };
    }
    s.to_biguint().expect("derangement numbers are nonnegative")
}

/// S_n mod m with the recurrence carried entirely in modular arithmetic.
pub fn subfactorial_mod(n: u64, m: u64) -> Residue {
    Residue::new(subfactorial_mod_raw(n, m), m)
}

pub(crate) fn subfactorial_mod_raw(n: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut s = 1u64;
    if m < 1 << 32 {
        // products stay below 2^64
        for k in 1..=n {
            let t = (k % m) * s % m;
            s = if k & 1 == 0 {
                if t + 1 == m { 0 } else { t + 1 }
            } else if t == 0 {
                m - 1
            } else {
                t - 1
            };
        }
    } else {
        for k in 1..=n {
            let t = arith::mul_mod(k % m, s, m);
            s = if k & 1 == 0 {
                if t + 1 == m { 0 } else { t + 1 }
            } else if t == 0 {
                m - 1
            } else {
                t - 1
            };
        }
    }
    s
}

/// S_0..S_n reduced mod m, one recurrence pass.
pub(crate) fn subfactorial_sequence_mod(n: u64, m: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut s = 1 % m;
    out.push(s);
    for k in 1..=n {
        let t = arith::mul_mod(k % m, s, m);
        s = if k & 1 == 0 {
            (t + 1) % m
        } else if t == 0 {
            m - 1
        } else {
            t - 1
        };
        out.push(s);
    }
    out
}

/// S_{n-1} mod n through prime-power parts.
///
/// For n with at least two distinct prime factors, each part q^e is a
/// proper divisor of n, so the divisor-reduction identity
/// `S_{n-1} ≡ (-1)^{n+q^e} S_{q^e-1} (mod q^e)` applies and the parts
/// recombine by CRT. Primes and prime powers fall back to the direct
/// recurrence, where no decomposition is available.
pub fn subfactorial_mod_fast(nf: &FactoredInteger) -> Result<Residue, ArithError> {
    let n = nf.n();
    if nf.factors().len() <= 1 {
        return Ok(subfactorial_mod(n.saturating_sub(1), n.max(1)));
    }
    let parts: Vec<Residue> = nf
        .prime_powers()
        .map(|pe| {
            let r = subfactorial_mod(pe - 1, pe);
            if (n + pe) % 2 == 0 {
                r
            } else {
                r.negated()
            }
        })
        .collect();
    arith::crt_combine(&parts)
}

/// Alternating inverse-factorial sum modulo an odd prime,
/// sum of (-1)^k / k! for 0 <= k < p.
pub fn alternating_factorial_sum_mod(p: u64) -> Result<Residue, SequenceError> {
    if p < 3 || p % 2 == 0 || !arith::is_prime(p) {
        return Err(SequenceError::NotOddPrime(p));
    }
    // running term (-1)^k / k!, inverses by Fermat
    let mut term = 1u64;
    let mut acc = 1u64;
    for k in 1..p {
        let inv_k = arith::pow_mod(k, p - 2, p);
        term = arith::mul_mod(term, inv_k, p);
        acc = if k & 1 == 1 {
            (acc + p - term) % p
        } else {
            (acc + term) % p
        };
    }
    Ok(Residue::new(acc, p))
}

/// The alternating sum of inverse factorials up to 1/(n-1)!, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingSumFraction {
    pub numerator: BigInt,
    pub denominator: BigUint,
    /// Whether n divides the reduced numerator.
    pub numerator_divisible_by_n: bool,
}

/// Reduced form of sum of (-1)^k / k! over 0 <= k < n, accumulated over
/// the common denominator (n-1)! and normalized by a single gcd.
pub fn alternating_sum_numerator(n: u64) -> Result<AlternatingSumFraction, SequenceError> {
    if n < 3 {
        return Err(SequenceError::FractionDomain(n));
    }
    // tail products (k+1)(k+2)...(n-1) accumulated from k = n-1 downwards
    let mut tail = BigInt::one();
    let mut num = if (n - 1) % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let mut den = BigUint::one();
    for k in (0..n - 1).rev() {
        tail *= k + 1;
        den *= k + 1;
        if k % 2 == 0 {
            num += &tail;
        } else {
            num -= &tail;
        }
    }
    let g = num.magnitude().gcd(&den);
    let num = num / BigInt::from(g.clone());
    let den = den / &g;
    let divisible = (num.clone() % BigInt::from(n)).is_zero();
    Ok(AlternatingSumFraction {
        numerator: num,
        denominator: den,
        numerator_divisible_by_n: divisible,
    })
}

/// Exact Bell numbers B_0..B_limit via the Bell triangle.
pub fn bell_numbers(limit: u64) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    let mut row = vec![BigUint::one()];
    for _ in 1..=limit {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("rows are nonempty").clone());
        for value in &row {
            let s = next.last().expect("seeded") + value;
            next.push(s);
        }
        out.push(next[0].clone());
        row = next;
    }
    out
}

/// B_n mod m via the Bell triangle carried mod m; O(n^2) additions,
/// O(n) memory (two rolling rows).
pub fn bell_mod(n: u64, m: u64) -> Residue {
    Residue::new(bell_mod_raw(n, m), m)
}

pub(crate) fn bell_mod_raw(n: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    if n == 0 {
        return 1 % m;
    }
    if m <= 1 << 15 && n <= 1 << 15 {
        bell_mod_small(n, m as u32) as u64
    } else {
        bell_mod_generic(n, m)
    }
}

/// Triangle kernel for small moduli. Each row is a running prefix sum of
/// the previous row shifted by the row seed; keeping the prefix sums
/// unreduced (they stay below 2^31 for m, n < 2^15) leaves a one-cycle
/// add on the critical path, with a Barrett reduction off to the side.
fn bell_mod_small(n: u64, m: u32) -> u32 {
    let n = n as usize;
    let barrett = (1u64 << 32) / m as u64;
    let m64 = m as u64;
    // entries fit u16 for m < 2^15, halving the row footprint
    let mut prev = vec![0u16; n];
    let mut cur = vec![0u16; n];
    prev[0] = (1 % m) as u16;
    // rows 1..n-1; the answer B_n is the last entry of row n-1
    for i in 1..n {
        let seed = prev[i - 1] as u64;
        cur[0] = seed as u16;
        // running total seed + prefix stays below 2^31 for m, n < 2^15
        let mut x = seed;
        for (dst, &v) in cur[1..=i].iter_mut().zip(&prev[..i]) {
            x += v as u64;
            let q = (x * barrett) >> 32;
            let mut r = x - q * m64;
            if r >= m64 {
                r -= m64;
            }
            *dst = r as u16;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n - 1] as u32
}

fn bell_mod_generic(n: u64, m: u64) -> u64 {
    let n = n as usize;
    let mut prev: Vec<u64> = Vec::with_capacity(n);
    let mut cur: Vec<u64> = Vec::with_capacity(n);
    prev.push(1 % m);
    for i in 1..n {
        cur.clear();
        let seed = *prev.last().expect("nonempty");
        cur.push(seed);
        let mut acc = seed;
        for &v in &prev[..i] {
            let (s, overflow) = acc.overflowing_add(v);
            acc = if overflow || s >= m { s.wrapping_sub(m) } else { s };
            cur.push(acc);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    *prev.last().expect("nonempty")
}

/// B_0..B_{limit} reduced mod m, collected from the triangle pass.
pub(crate) fn bell_sequence_mod(limit: u64, m: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(limit as usize + 1);
    out.push(1 % m);
    let mut row = vec![1 % m];
    for _ in 1..=limit {
        let mut next = Vec::with_capacity(row.len() + 1);
        let seed = *row.last().expect("nonempty");
        next.push(seed);
        let mut acc = seed;
        for &v in &row {
            let (s, overflow) = acc.overflowing_add(v);
            acc = if overflow || s >= m { s.wrapping_sub(m) } else { s };
            next.push(acc);
        }
        out.push(next[0]);
        row = next;
    }
    out
}
