//! The Kurepa determinant family: the integer determinant K_n of order
//! n-4, its binary (parity) counterpart, and the auxiliary 0/1
//! determinant D_n, with exact, prime-field and prime-power-modulus
//! evaluation paths plus the derangement-congruence shortcut.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{self, ArithError, Residue};
use crate::sequences;

/// Largest n accepted by the exact big-integer path.
pub const EXACT_CEILING: u64 = 400;
/// Largest n accepted by the dense modular elimination paths.
pub const ELIMINATION_CEILING: u64 = 13_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DetError {
    #[error("Kurepa determinants need n >= 7, got {0}")]
    OrderTooSmall(u64),
    #[error("n = {n} exceeds the exact-path ceiling {ceiling}; use a modular path")]
    ExactCeiling { n: u64, ceiling: u64 },
    #[error("n = {n} exceeds the elimination ceiling {ceiling}; use the derangement path for odd n")]
    EliminationCeiling { n: u64, ceiling: u64 },
    #[error("modulus {0} is not prime; use the composite-modulus path")]
    ModulusNotPrime(u64),
    #[error("modulus {0} is prime; use the prime-modulus path")]
    ModulusNotComposite(u64),
    #[error("composite-modulus path needs m >= 4, got {0}")]
    ModulusTooSmall(u64),
    #[error("modulus {0} does not fit the elimination word size")]
    ModulusTooLarge(u64),
    #[error("derangement path needs odd n >= 7, got {0}")]
    DerangementDomain(u64),
    #[error("auxiliary determinant needs n >= 3, got {0}")]
    AuxOrderTooSmall(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Dense integer grid of the order n-4 Kurepa determinant.
///
/// First row is all ones ending in 3; each middle row carries 1 two
/// below the diagonal, the counter value r+1 just below, ones through
/// the diagonal block, and 2 in the last column; the final row is
/// (0, ..., 0, 1, -4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KurepaMatrix {
    n: u64,
    order: usize,
    entries: Vec<i64>,
}

fn kurepa_entry(order: usize, i: usize, j: usize) -> i64 {
    let last = order - 1;
    if i == 0 {
        return if j == last { 3 } else { 1 };
    }
    if i == last {
        return match j {
            _ if j == last => -4,
            _ if j + 1 == last => 1,
            _ => 0,
        };
    }
    if j == last {
        2
    } else if j + 1 == i {
        i as i64 + 2
    } else if j >= i {
        1
    } else if j + 2 == i {
        1
    } else {
        0
    }
}

impl KurepaMatrix {
    pub fn new(n: u64) -> Result<Self, DetError> {
        if n < 7 {
            return Err(DetError::OrderTooSmall(n));
        }
        let order = (n - 4) as usize;
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(kurepa_entry(order, i, j));
            }
        }
        Ok(KurepaMatrix { n, order, entries })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.order + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }
}

/// 0/1 grid obtained from the Kurepa determinant by reducing every
/// entry to its parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryKurepaMatrix {
    n: u64,
    order: usize,
    entries: Vec<i64>,
}

fn kurepa_binary_entry(order: usize, i: usize, j: usize) -> i64 {
    let last = order - 1;
    if i == 0 {
        return 1;
    }
    if i == last {
        return if j + 1 == last { 1 } else { 0 };
    }
    if j == last {
        0
    } else if j + 1 == i {
        // counter entries 3, 4, 5, ... alternate odd/even down the band
        (i % 2) as i64
    } else if j >= i || j + 2 == i {
        1
    } else {
        0
    }
}

impl BinaryKurepaMatrix {
    pub fn new(n: u64) -> Result<Self, DetError> {
        if n < 7 {
            return Err(DetError::OrderTooSmall(n));
        }
        let order = (n - 4) as usize;
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(kurepa_binary_entry(order, i, j));
            }
        }
        Ok(BinaryKurepaMatrix { n, order, entries })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.order + j]
    }
}

/// The order-n 0/1 determinant with ones above the diagonal and on the
/// first subdiagonal, and an alternating 0/1 diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaDMatrix {
    order: usize,
    entries: Vec<i64>,
}

impl LemmaDMatrix {
    pub fn new(n: u64) -> Result<Self, DetError> {
        if n < 3 {
            return Err(DetError::AuxOrderTooSmall(n));
        }
        let order = n as usize;
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                let above = j > i;
                let subdiag = j + 1 == i;
                let odd_diag = j == i && i % 2 == 0;
                entries.push((above || subdiag || odd_diag) as i64);
            }
        }
        Ok(LemmaDMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.order + j]
    }
}

/// Fraction-free elimination: every division is exact, intermediate
/// entries are minors of the input. Row swaps flip the sign.
fn bareiss_det(mut a: Vec<BigInt>, order: usize) -> BigInt {
    if order == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..order - 1 {
        if a[k * order + k].is_zero() {
            let Some(swap) = (k + 1..order).find(|&i| !a[i * order + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in k..order {
                a.swap(k * order + j, swap * order + j);
            }
            sign = !sign;
        }
        for i in k + 1..order {
            for j in k + 1..order {
                let t = &a[i * order + j] * &a[k * order + k] - &a[i * order + k] * &a[k * order + j];
                a[i * order + j] = t / &prev;
            }
            a[i * order + k] = BigInt::zero();
        }
        prev = a[k * order + k].clone();
    }
    let det = a[order * order - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Pivoted elimination over the prime field. Zero multipliers are
/// skipped, so banded inputs cost O(order^2).
pub(crate) fn det_mod_prime_slice(a: &mut [u64], order: usize, p: u64) -> u64 {
    if p == 2 {
        // inversion degenerates; handle by plain search-and-subtract
        return det_mod_two(a, order);
    }
    if order == 0 {
        return 1 % p;
    }
    let mut det = 1u64;
    let mut neg = false;
    for k in 0..order {
        let Some(piv_row) = (k..order).find(|&i| a[i * order + k] != 0) else {
            return 0;
        };
        if piv_row != k {
            for j in k..order {
                a.swap(k * order + j, piv_row * order + j);
            }
            neg = !neg;
        }
        let piv = a[k * order + k];
        det = det * piv % p;
        if k + 1 == order {
            break;
        }
        let inv = arith::pow_mod(piv, p - 2, p);
        let (head, tail) = a.split_at_mut((k + 1) * order);
        let pivot_row = &head[k * order..];
        for i in 0..order - k - 1 {
            let row = &mut tail[i * order..(i + 1) * order];
            let f = row[k];
            if f == 0 {
                continue;
            }
            let mult = p - f * inv % p;
            for j in k..order {
                row[j] = (row[j] + mult * pivot_row[j]) % p;
            }
        }
    }
    if neg && det != 0 {
        p - det
    } else {
        det
    }
}

fn det_mod_two(a: &mut [u64], order: usize) -> u64 {
    for k in 0..order {
        let Some(piv_row) = (k..order).find(|&i| a[i * order + k] & 1 == 1) else {
            return 0;
        };
        if piv_row != k {
            for j in k..order {
                a.swap(k * order + j, piv_row * order + j);
            }
        }
        let (head, tail) = a.split_at_mut((k + 1) * order);
        let pivot_row = &head[k * order..];
        for i in 0..order - k - 1 {
            let row = &mut tail[i * order..(i + 1) * order];
            if row[k] & 1 == 1 {
                for j in k..order {
                    row[j] = (row[j] ^ pivot_row[j]) & 1;
                }
            }
        }
    }
    1
}

fn valuation(mut v: u64, q: u64) -> u32 {
    debug_assert!(v != 0);
    let mut c = 0;
    while v % q == 0 {
        v /= q;
        c += 1;
    }
    c
}

/// Determinant modulo q^e by elimination that pulls powers of q out of
/// every pivot and works with the remaining units.
///
/// Entries live modulo q^(2e) initially; extracting valuation v from a
/// pivot costs v digits of working precision, and the total extracted
/// valuation reaching e already decides det ≡ 0 (mod q^e), so the
/// 2e-digit budget always suffices.
fn det_mod_prime_power(a: &mut [u64], order: usize, q: u64, e: u32) -> u64 {
    let target = q.pow(e);
    if order == 0 {
        return 1 % target;
    }
    let mut prec = 2 * e;
    let mut modulus = q.pow(prec);
    let mut total_val = 0u32;
    let mut unit = 1 % target;
    let mut neg = false;
    for k in 0..order {
        let mut best: Option<(usize, u32)> = None;
        for i in k..order {
            let v = a[i * order + k] % modulus;
            if v == 0 {
                continue;
            }
            let val = valuation(v, q);
            if best.is_none_or(|(_, bv)| val < bv) {
                best = Some((i, val));
                if val == 0 {
                    break;
                }
            }
        }
        let Some((piv_row, val)) = best else {
            // column vanishes to working precision, which already
            // exceeds the target exponent
            return 0;
        };
        total_val += val;
        if total_val >= e {
            return 0;
        }
        if piv_row != k {
            for j in k..order {
                a.swap(k * order + j, piv_row * order + j);
            }
            neg = !neg;
        }
        prec -= val;
        let qv = q.pow(val);
        modulus = q.pow(prec);
        let piv_unit = (a[k * order + k] % (modulus * qv)) / qv % modulus;
        unit = arith::mul_mod(unit, piv_unit % target, target);
        if k + 1 == order {
            break;
        }
        let inv = arith::mod_inverse(piv_unit, modulus)
            .expect("pivot unit is coprime to q")
            .value();
        let (head, tail) = a.split_at_mut((k + 1) * order);
        let pivot_row = &head[k * order..];
        for i in 0..order - k - 1 {
            let row = &mut tail[i * order..(i + 1) * order];
            let f = row[k] % (modulus * qv);
            if f == 0 {
                row[k] = 0;
                continue;
            }
            // the pivot has minimal valuation in the column
            let mult = arith::mul_mod(f / qv % modulus, inv, modulus);
            if mult == 0 {
                continue;
            }
            for j in k..order {
                let sub = arith::mul_mod(mult, pivot_row[j] % modulus, modulus);
                let cur = row[j] % modulus;
                row[j] = if cur >= sub { cur - sub } else { cur + modulus - sub };
            }
        }
    }
    let tail_mod = q.pow(e - total_val);
    let value = q.pow(total_val) * (unit % tail_mod);
    if neg && value != 0 {
        target - value
    } else {
        value
    }
}

/// Exact K_n by fraction-free elimination.
pub fn kurepa_det_exact(n: u64) -> Result<BigInt, DetError> {
    kurepa_det_exact_with_ceiling(n, EXACT_CEILING)
}

pub fn kurepa_det_exact_with_ceiling(n: u64, ceiling: u64) -> Result<BigInt, DetError> {
    if n < 7 {
        return Err(DetError::OrderTooSmall(n));
    }
    if n > ceiling {
        return Err(DetError::ExactCeiling { n, ceiling });
    }
    let m = KurepaMatrix::new(n)?;
    let grid: Vec<BigInt> = m.entries.iter().map(|&v| BigInt::from(v)).collect();
    Ok(bareiss_det(grid, m.order))
}

/// K_n mod p over the field of p elements.
pub fn kurepa_det_mod(n: u64, p: u64) -> Result<Residue, DetError> {
    if n < 7 {
        return Err(DetError::OrderTooSmall(n));
    }
    if n > ELIMINATION_CEILING {
        return Err(DetError::EliminationCeiling {
            n,
            ceiling: ELIMINATION_CEILING,
        });
    }
    if !arith::is_prime(p) {
        return Err(DetError::ModulusNotPrime(p));
    }
    if p >= 1 << 31 {
        return Err(DetError::ModulusTooLarge(p));
    }
    let m = KurepaMatrix::new(n)?;
    let mut grid: Vec<u64> = m
        .entries
        .iter()
        .map(|&v| (v as i128).rem_euclid(p as i128) as u64)
        .collect();
    Ok(Residue::new(det_mod_prime_slice(&mut grid, m.order, p), p))
}

/// K_n mod a composite m, by CRT over the prime-power parts of m with
/// valuation-tracking elimination inside each part. A determinant that
/// vanishes modulo a part is a valid result, not an error.
pub fn kurepa_det_mod_composite(n: u64, m: u64) -> Result<Residue, DetError> {
    if n < 7 {
        return Err(DetError::OrderTooSmall(n));
    }
    if n > ELIMINATION_CEILING {
        return Err(DetError::EliminationCeiling {
            n,
            ceiling: ELIMINATION_CEILING,
        });
    }
    if m < 4 {
        return Err(DetError::ModulusTooSmall(m));
    }
    if arith::is_prime(m) {
        return Err(DetError::ModulusNotComposite(m));
    }
    if m >= 1 << 31 {
        return Err(DetError::ModulusTooLarge(m));
    }
    let matrix = KurepaMatrix::new(n)?;
    let nf = arith::factorize(m)?;
    let parts: Vec<Residue> = nf
        .factors()
        .iter()
        .map(|&(q, e)| {
            let working = q.pow(2 * e);
            let mut grid: Vec<u64> = matrix
                .entries
                .iter()
                .map(|&v| (v as i128).rem_euclid(working as i128) as u64)
                .collect();
            Residue::new(det_mod_prime_power(&mut grid, matrix.order, q, e), q.pow(e))
        })
        .collect();
    Ok(arith::crt_combine(&parts)?)
}

/// K_n mod n for odd n without building the matrix.
///
/// Odd composite n: 8 is invertible, and 8*K_n ≡ -S_{n-1} + 2 (mod n).
/// Odd prime n: K_n ≡ -3*S_{n-5} - 1 + (n-7)! * 180 (mod n).
/// Both run in O(n) word operations.
pub fn kurepa_det_mod_via_derangement(n: u64) -> Result<Residue, DetError> {
    if n < 7 || n % 2 == 0 {
        return Err(DetError::DerangementDomain(n));
    }
    if arith::is_prime(n) {
        let s = sequences::subfactorial_mod(n - 5, n).value();
        let mut fact = 1 % n;
        for k in 2..=n - 7 {
            fact = arith::mul_mod(fact, k, n);
        }
        // -3s - 1 + 180 * (n-7)!
        let mut acc = (n - arith::mul_mod(3, s, n)) % n;
        acc = (acc + n - 1 % n) % n;
        acc = (acc + arith::mul_mod(180 % n, fact, n)) % n;
        Ok(Residue::new(acc, n))
    } else {
        let s = sequences::subfactorial_mod(n - 1, n).value();
        let rhs = (2 + n - s) % n;
        let inv8 = arith::mod_inverse(8, n)?;
        Ok(Residue::new(arith::mul_mod(rhs, inv8.value(), n), n))
    }
}

/// Exact determinant of the parity grid; ±1 in every defined case.
pub fn kurepa_binary_det(n: u64) -> Result<i64, DetError> {
    let m = BinaryKurepaMatrix::new(n)?;
    let grid: Vec<BigInt> = m.entries.iter().map(|&v| BigInt::from(v)).collect();
    let det = bareiss_det(grid, m.order);
    Ok(det.to_i64().expect("binary determinant is unit-sized"))
}

/// Closed form for the binary determinant: (-1)^ceil(n/2).
pub fn kurepa_binary_closed_form(n: u64) -> Result<i64, DetError> {
    if n < 7 {
        return Err(DetError::OrderTooSmall(n));
    }
    Ok(if n.div_ceil(2) % 2 == 0 { 1 } else { -1 })
}

/// Exact determinant of the auxiliary 0/1 matrix of order n.
pub fn lemma_det_d(n: u64) -> Result<i64, DetError> {
    let m = LemmaDMatrix::new(n)?;
    let grid: Vec<BigInt> = m.entries.iter().map(|&v| BigInt::from(v)).collect();
    let det = bareiss_det(grid, m.order);
    Ok(det.to_i64().expect("auxiliary determinant is unit-sized"))
}

/// Closed form companion of [`lemma_det_d`]: (-1)^floor(n/2).
pub fn lemma_det_closed_form(n: u64) -> Result<i64, DetError> {
    if n < 3 {
        return Err(DetError::AuxOrderTooSmall(n));
    }
    Ok(if (n / 2) % 2 == 0 { 1 } else { -1 })
}

/// Both sides of the prime determinant congruence:
/// elimination-based K_p mod p against (1/8) * alternating inverse
/// factorial sum mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prop1Report {
    pub lhs: Residue,
    pub rhs: Residue,
    pub equal: bool,
}

pub fn verify_prop1(p: u64) -> Result<Prop1Report, DetError> {
    if p < 7 {
        return Err(DetError::OrderTooSmall(p));
    }
    let lhs = kurepa_det_mod(p, p)?;
    let sum = sequences::alternating_factorial_sum_mod(p)
        .map_err(|_| DetError::ModulusNotPrime(p))?;
    let inv8 = arith::mod_inverse(8, p)?;
    let rhs = Residue::new(arith::mul_mod(inv8.value(), sum.value(), p), p);
    Ok(Prop1Report {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor-expansion oracle, independent of the elimination paths.
    fn cofactor_det(a: &[i64], order: usize) -> i64 {
        fn go(a: &Vec<Vec<i128>>) -> i128 {
            let n = a.len();
            if n == 1 {
                return a[0][0];
            }
            let mut det = 0i128;
            for (c, head) in a[0].iter().enumerate() {
                if *head == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                det += sign * head * go(&minor);
            }
            det
        }
        let rows: Vec<Vec<i128>> = (0..order)
            .map(|i| (0..order).map(|j| a[i * order + j] as i128).collect())
            .collect();
        go(&rows) as i64
    }

    #[test]
    fn smallest_matrix_matches_written_instance() {
        let m = KurepaMatrix::new(7).unwrap();
        let rows: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| m.entry(i, j)).collect()).collect();
        assert_eq!(rows, vec![vec![1, 1, 3], vec![3, 1, 2], vec![0, 1, -4]]);
    }

    #[test]
    fn binary_matrix_is_parity_image() {
        for n in 7..=40 {
            let k = KurepaMatrix::new(n).unwrap();
            let b = BinaryKurepaMatrix::new(n).unwrap();
            for i in 0..k.order() {
                for j in 0..k.order() {
                    assert_eq!(
                        k.entry(i, j).rem_euclid(2),
                        b.entry(i, j),
                        "n={n} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn lemma_matrix_small_instances() {
        let d3 = LemmaDMatrix::new(3).unwrap();
        let rows: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| d3.entry(i, j)).collect()).collect();
        assert_eq!(rows, vec![vec![1, 1, 1], vec![1, 0, 1], vec![0, 1, 1]]);
        let d5 = LemmaDMatrix::new(5).unwrap();
        let rows: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| d5.entry(i, j)).collect()).collect();
        assert_eq!(
            rows,
            vec![
                vec![1, 1, 1, 1, 1],
                vec![1, 0, 1, 1, 1],
                vec![0, 1, 1, 1, 1],
                vec![0, 0, 1, 0, 1],
                vec![0, 0, 0, 1, 1],
            ]
        );
    }

    #[test]
    fn exact_values_small() {
        assert_eq!(kurepa_det_exact(7).unwrap(), BigInt::from(15));
        assert_eq!(kurepa_det_exact(8).unwrap(), BigInt::from(-47));
        assert_eq!(kurepa_det_exact(17).unwrap(), BigInt::from(5341017373i64));
        assert_eq!(kurepa_det_exact(6), Err(DetError::OrderTooSmall(6)));
        assert!(matches!(
            kurepa_det_exact(401),
            Err(DetError::ExactCeiling { .. })
        ));
    }

    #[test]
    fn exact_matches_cofactor_oracle() {
        for n in 7..=13 {
            let m = KurepaMatrix::new(n).unwrap();
            let expect = cofactor_det(m.entries(), m.order());
            assert_eq!(kurepa_det_exact(n).unwrap(), BigInt::from(expect), "n={n}");
        }
    }

    #[test]
    fn mod_prime_matches_exact_reduction() {
        assert_eq!(kurepa_det_mod(7, 7).unwrap().value(), 1);
        // 6439 mod 11
        assert_eq!(kurepa_det_mod(11, 11).unwrap().value(), 6439 % 11);
        for n in 7..=40u64 {
            let exact = kurepa_det_exact(n).unwrap();
            for &p in &[2u64, 3, 5, 7, 11, 101] {
                let expect = exact.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                assert_eq!(kurepa_det_mod(n, p).unwrap().value(), expect, "n={n} p={p}");
            }
        }
        assert_eq!(kurepa_det_mod(9, 9), Err(DetError::ModulusNotPrime(9)));
    }

    #[test]
    fn mod_composite_matches_exact_reduction() {
        assert_eq!(kurepa_det_mod_composite(9, 9).unwrap().value(), 197 % 9);
        assert_eq!(
            kurepa_det_mod_composite(15, 15).unwrap().value(),
            37792331 % 15
        );
        for n in 7..=40u64 {
            let exact = kurepa_det_exact(n).unwrap();
            for &m in &[4u64, 8, 9, 12, 15, 27, 49, 121, 1024, 3375] {
                let expect = exact.mod_floor(&BigInt::from(m)).to_u64().unwrap();
                assert_eq!(
                    kurepa_det_mod_composite(n, m).unwrap().value(),
                    expect,
                    "n={n} m={m}"
                );
            }
        }
        assert_eq!(
            kurepa_det_mod_composite(9, 7),
            Err(DetError::ModulusNotComposite(7))
        );
        assert_eq!(kurepa_det_mod_composite(9, 3), Err(DetError::ModulusTooSmall(3)));
    }

    #[test]
    fn derangement_path_matches_other_paths() {
        assert_eq!(kurepa_det_mod_via_derangement(9).unwrap().value(), 197 % 9);
        assert_eq!(
            kurepa_det_mod_via_derangement(21).unwrap(),
            kurepa_det_mod_composite(21, 21).unwrap()
        );
        for n in (7..=301u64).step_by(2) {
            let via = kurepa_det_mod_via_derangement(n).unwrap();
            let elim = if arith::is_prime(n) {
                kurepa_det_mod(n, n).unwrap()
            } else {
                kurepa_det_mod_composite(n, n).unwrap()
            };
            assert_eq!(via, elim, "n={n}");
        }
        assert_eq!(
            kurepa_det_mod_via_derangement(8),
            Err(DetError::DerangementDomain(8))
        );
    }

    #[test]
    fn counterexample_value_vanishes() {
        assert_eq!(kurepa_det_mod_via_derangement(11563).unwrap().value(), 0);
        assert_eq!(kurepa_det_mod_composite(11563, 11563).unwrap().value(), 0);
    }

    #[test]
    fn binary_det_values() {
        let expected = [
            (7, 1),
            (8, 1),
            (9, -1),
            (10, -1),
            (11, 1),
            (12, 1),
            (13, -1),
            (14, -1),
            (15, 1),
            (16, 1),
            (17, -1),
            (18, -1),
        ];
        for (n, v) in expected {
            assert_eq!(kurepa_binary_det(n).unwrap(), v, "n={n}");
        }
        for n in 7..=60 {
            assert_eq!(
                kurepa_binary_det(n).unwrap(),
                kurepa_binary_closed_form(n).unwrap(),
                "n={n}"
            );
        }
        assert_eq!(kurepa_binary_closed_form(8).unwrap(), 1);
        assert_eq!(kurepa_binary_closed_form(15).unwrap(), 1);
        assert_eq!(kurepa_binary_closed_form(17).unwrap(), -1);
    }

    #[test]
    fn lemma_det_values() {
        assert_eq!(lemma_det_d(3).unwrap(), -1);
        assert_eq!(lemma_det_d(4).unwrap(), 1);
        assert_eq!(lemma_det_d(5).unwrap(), 1);
        for n in 3..=60 {
            assert_eq!(lemma_det_d(n).unwrap(), lemma_det_closed_form(n).unwrap(), "n={n}");
        }
        assert_eq!(lemma_det_d(2), Err(DetError::AuxOrderTooSmall(2)));
    }

    #[test]
    fn exact_det_is_odd() {
        for n in 7..=60u64 {
            let d = kurepa_det_exact(n).unwrap();
            assert!(d.is_odd(), "n={n}");
        }
    }

    #[test]
    fn prop1_small_primes() {
        let r = verify_prop1(7).unwrap();
        assert_eq!(r.lhs.value(), 1);
        assert_eq!(r.rhs.value(), 1);
        assert!(r.equal);
        for p in [11u64, 13] {
            assert!(verify_prop1(p).unwrap().equal, "p={p}");
        }
    }

    use num_integer::Integer as _;
}
