//! The matrix form of the counterexample criterion: power matrices over
//! F_p whose product is -I, the per-row residual that collapses to
//! B_{p-1} - 1, the Bell/derangement reciprocal-power congruence, and
//! the closed form for det(A).

use thiserror::Error;

use crate::arith::{self, ArithError, Residue};
use crate::determinants;
use crate::sequences;

/// Largest prime accepted by the O(p^2)-entry matrix builders.
pub const PRIME_CEILING: u64 = 2000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentityError {
    #[error("power matrices need an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("prime {p} exceeds the matrix ceiling {ceiling}")]
    PrimeTooLarge { p: u64, ceiling: u64 },
    #[error("prime {p} divides m = {m}")]
    PrimeDividesM { p: u64, m: u64 },
    #[error("residual vector is not constant at p = {p}: rho_1 = {first}, rho_{m} = {other}")]
    InconsistentResidual { p: u64, first: u64, m: u64, other: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Dense square matrix over the integers mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFp {
    p: u64,
    order: usize,
    data: Vec<u64>,
}

impl MatrixFp {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at (i, j), 0-based.
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.order + j]
    }
}

fn check_prime(p: u64) -> Result<(), IdentityError> {
    if p < 3 || !arith::is_prime(p) {
        return Err(IdentityError::NotOddPrime(p));
    }
    if p > PRIME_CEILING {
        return Err(IdentityError::PrimeTooLarge {
            p,
            ceiling: PRIME_CEILING,
        });
    }
    Ok(())
}

/// The (p-1)x(p-1) pair A[i][j] = (p-i)^(p-j), B[i][j] = (p-j)^(i-1)
/// over F_p (1-based index convention), filled geometrically row- and
/// column-wise rather than entry-by-entry exponentiation.
pub fn build_power_matrices(p: u64) -> Result<(MatrixFp, MatrixFp), IdentityError> {
    check_prime(p)?;
    let order = (p - 1) as usize;
    let mut a = vec![0u64; order * order];
    for i in 1..=order {
        let base = p - i as u64;
        // rightmost column holds base^1; exponents grow right-to-left
        let row = &mut a[(i - 1) * order..i * order];
        row[order - 1] = base % p;
        for j in (0..order - 1).rev() {
            row[j] = row[j + 1] * base % p;
        }
    }
    let mut b = vec![0u64; order * order];
    for j in 1..=order {
        let base = p - j as u64;
        b[j - 1] = 1;
        for i in 1..order {
            b[i * order + j - 1] = b[(i - 1) * order + j - 1] * base % p;
        }
    }
    Ok((
        MatrixFp {
            p,
            order,
            data: a,
        },
        MatrixFp {
            p,
            order,
            data: b,
        },
    ))
}

/// True iff A * B = -I over F_p.
pub fn verify_inverse_pair(p: u64) -> Result<bool, IdentityError> {
    let (a, b) = build_power_matrices(p)?;
    let order = a.order;
    let minus_one = p - 1;
    for i in 0..order {
        for j in 0..order {
            let mut acc = 0u64;
            for k in 0..order {
                acc = (acc + a.data[i * order + k] * b.data[k * order + j]) % p;
            }
            let expect = if i == j { minus_one } else { 0 };
            if acc != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// For every m in 1..p-1 evaluates
/// rho_m = (-1)^(m-1) S_{m-1} - sum_{k=0}^{p-2} (p-m)^(p-1-k) B_k  (mod p),
/// checks the vector is constant, and returns the common value.
///
/// The common value equals B_{p-1} - 1 ≡ S_{p-1} (mod p); it is zero
/// exactly when p is a counterexample.
pub fn counterexample_residual(p: u64) -> Result<Residue, IdentityError> {
    check_prime(p)?;
    let bell = sequences::bell_sequence_mod(p - 2, p);
    let derange = sequences::subfactorial_sequence_mod(p - 2, p);
    let mut common: Option<u64> = None;
    for m in 1..p {
        let c = p - m;
        // Horner over B, then one extra multiply: sum = c * (B_0 c^{p-2} + ... + B_{p-2})
        let mut h = bell[0];
        for &bk in &bell[1..] {
            h = (h * c + bk) % p;
        }
        let power_sum = h * c % p;
        let signed_s = if m % 2 == 1 {
            derange[(m - 1) as usize]
        } else {
            (p - derange[(m - 1) as usize]) % p
        };
        let rho = (signed_s + p - power_sum) % p;
        match common {
            None => common = Some(rho),
            Some(first) if first != rho => {
                return Err(IdentityError::InconsistentResidual {
                    p,
                    first,
                    m,
                    other: rho,
                })
            }
            _ => {}
        }
    }
    Ok(Residue::new(common.expect("p >= 3 gives at least one row"), p))
}

/// True iff sum_{k=1}^{p-1} B_k (-m)^(-k) ≡ (-1)^(m-1) S_{m-1} (mod p).
pub fn sun_zagier_check(p: u64, m: u64) -> Result<bool, IdentityError> {
    check_prime(p)?;
    if m % p == 0 {
        return Err(IdentityError::PrimeDividesM { p, m });
    }
    let bell = sequences::bell_sequence_mod(p - 1, p);
    let neg_m = (p - m % p) % p;
    let inv = arith::mod_inverse(neg_m, p)?.value();
    let mut acc = 0u64;
    let mut power = 1u64;
    for &bk in &bell[1..] {
        power = power * inv % p;
        acc = (acc + bk * power) % p;
    }
    let s = sequences::subfactorial_mod(m - 1, p).value();
    let rhs = if m % 2 == 1 { s } else { (p - s) % p };
    Ok(acc == rhs)
}

/// det(A) by elimination against the closed form
/// (-1)^((p^2-1)/8) * ((p-1)/2)! (mod p); for p ≡ 1 (mod 4) also
/// whether (det A)^2 ≡ -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetACongruence {
    pub direct: Residue,
    pub closed: Residue,
    pub equal: bool,
    pub square_is_minus_one: Option<bool>,
}

pub fn det_a_congruence(p: u64) -> Result<DetACongruence, IdentityError> {
    let (a, _) = build_power_matrices(p)?;
    let mut grid = a.data;
    let direct = determinants::det_mod_prime_slice(&mut grid, a.order, p);

    let mut half_fact = 1u64;
    for k in 2..=(p - 1) / 2 {
        half_fact = half_fact * k % p;
    }
    // (p^2 - 1) / 8 is even exactly when p ≡ ±1 (mod 8)
    let closed = match p % 8 {
        1 | 7 => half_fact,
        _ => (p - half_fact) % p,
    };
    let square_is_minus_one = if p % 4 == 1 {
        Some(direct * direct % p == p - 1)
    } else {
        None
    };
    Ok(DetACongruence {
        direct: Residue::new(direct, p),
        closed: Residue::new(closed, p),
        equal: direct == closed,
        square_is_minus_one,
    })
}
