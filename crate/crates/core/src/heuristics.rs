//! Probabilistic estimators for near-miss counts over prime ranges and
//! for the no-counterexample event probability, in exact prime-sum and
//! Mertens-asymptotic forms.

use thiserror::Error;

use crate::arith::{self, ArithError};

#[derive(Debug, Error, PartialEq)]
pub enum HeuristicError {
    #[error("interval needs 3 <= x < y, got [{x}, {y}]")]
    InvalidInterval { x: f64, y: f64 },
    #[error(transparent)]
    Sieve(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMode {
    /// Sum 1/p over the actual sieved odd primes in [x, y].
    ExactPrimeSum,
    /// Classical asymptotic (2d+1) * ln(ln y / ln x).
    MertensAsymptotic,
}

/// One computed estimate together with the inputs that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicEstimate {
    pub x: f64,
    pub y: f64,
    pub d: u32,
    pub value: f64,
    pub mode: EstimateMode,
}

fn check_interval(x: f64, y: f64) -> Result<(), HeuristicError> {
    if !(x >= 3.0 && x < y && y.is_finite()) {
        return Err(HeuristicError::InvalidInterval { x, y });
    }
    Ok(())
}

/// Compensated (Kahan) accumulator; keeps long prime sums at
/// round-off-level error.
#[derive(Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Expected number of primes p in [x, y] whose derangement residue lies
/// within distance d of a multiple of p: (2d+1) * sum of 1/p.
pub fn expected_near_miss_count(
    x: f64,
    y: f64,
    d: u32,
    mode: EstimateMode,
) -> Result<f64, HeuristicError> {
    check_interval(x, y)?;
    let weight = (2 * d as u64 + 1) as f64;
    match mode {
        EstimateMode::MertensAsymptotic => Ok(weight * (y.ln() / x.ln()).ln()),
        EstimateMode::ExactPrimeSum => {
            let mut acc = Compensated::default();
            for p in odd_primes_in(x, y)? {
                acc.add(1.0 / p as f64);
            }
            Ok(weight * acc.sum)
        }
    }
}

/// Probability that no odd prime in [x, y] hits residue zero, as the
/// product of (1 - 1/p). Accumulated in the log domain and
/// exponentiated once.
pub fn kurepa_event_probability(x: f64, y: f64) -> Result<f64, HeuristicError> {
    check_interval(x, y)?;
    let mut acc = Compensated::default();
    for p in odd_primes_in(x, y)? {
        acc.add((-1.0 / p as f64).ln_1p());
    }
    Ok(acc.sum.exp())
}

/// Same product computed by naive multiplication; reference route for
/// the log-domain accumulation.
pub fn kurepa_event_probability_naive(x: f64, y: f64) -> Result<f64, HeuristicError> {
    check_interval(x, y)?;
    let mut prod = 1.0f64;
    for p in odd_primes_in(x, y)? {
        prod *= 1.0 - 1.0 / p as f64;
    }
    Ok(prod)
}

impl HeuristicEstimate {
    pub fn near_miss_count(x: f64, y: f64, d: u32, mode: EstimateMode) -> Result<Self, HeuristicError> {
        Ok(HeuristicEstimate {
            x,
            y,
            d,
            value: expected_near_miss_count(x, y, d, mode)?,
            mode,
        })
    }

    pub fn event_probability(x: f64, y: f64) -> Result<Self, HeuristicError> {
        Ok(HeuristicEstimate {
            x,
            y,
            d: 0,
            value: kurepa_event_probability(x, y)?,
            mode: EstimateMode::ExactPrimeSum,
        })
    }
}

/// Odd primes in the closed interval [x, y].
fn odd_primes_in(x: f64, y: f64) -> Result<impl Iterator<Item = u64>, HeuristicError> {
    let hi = y.floor() as u64;
    let lo = x.ceil() as u64;
    let primes = arith::sieve_primes(hi)?;
    Ok(primes
        .into_iter()
        .filter(move |&p| p > 2 && p >= lo && p <= hi))
}
