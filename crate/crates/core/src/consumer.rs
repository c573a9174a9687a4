//! Solovay-Strassen compositeness testing driven by generated bits.
//!
//! The harness runs the test over every Carmichael number below a limit and
//! records how many random bits each verdict consumed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitStream;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConsumerError {
    #[error("Jacobi symbol modulus must be odd and positive, got {0}")]
    BadModulus(u64),
    #[error("n must be at least 3, got {0}")]
    TooSmall(u64),
    #[error("max_witnesses must be at least 1")]
    NoWitnesses,
    #[error(
        "bit source exhausted testing {number} after {witnesses_used} witnesses and {bits_consumed} bits"
    )]
    Exhausted { number: u64, witnesses_used: u32, bits_consumed: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("harness stopped at number #{index} ({number}): {source}")]
pub struct HarnessError {
    pub index: usize,
    pub number: u64,
    pub source: ConsumerError,
}

/// Sequential supply of random bits.
pub trait BitSource {
    fn next_bit(&mut self) -> Option<bool>;
}

/// Reads a [`BitStream`] front to back.
#[derive(Debug, Clone)]
pub struct BitCursor<'a> {
    bits: &'a BitStream,
    pos: usize,
}

impl<'a> BitCursor<'a> {
    pub fn new(bits: &'a BitStream) -> Self {
        BitCursor { bits, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }
}

impl BitSource for BitCursor<'_> {
    fn next_bit(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.pos)?;
        self.pos += 1;
        Some(bit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Composite,
    ProbablyPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsVerdict {
    pub number: u64,
    pub verdict: Verdict,
    pub witnesses_used: u32,
    pub bits_consumed: u64,
}

/// Jacobi symbol `(a/n)` for odd `n ≥ 1`.
pub fn jacobi(a: i64, n: u64) -> Result<i8, ConsumerError> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(ConsumerError::BadModulus(n));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by right-to-left square-and-multiply with 128-bit
/// intermediates.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Tests `n` with up to `max_witnesses` random witnesses.
///
/// Witnesses are uniform on `[2, n − 2]`: chunks of `bitlen(n − 3)` bits are
/// read most-significant first and rejected while they exceed `n − 4`; an
/// accepted chunk `v` gives witness `v + 2`. Every bit read counts toward
/// `bits_consumed`, rejected chunks included.
///
/// `n = 3` has no candidate witness and is reported probably prime with zero
/// witnesses.
pub fn solovay_strassen<S: BitSource + ?Sized>(
    n: u64,
    bits: &mut S,
    max_witnesses: u32,
) -> Result<SsVerdict, ConsumerError> {
    if n < 3 {
        return Err(ConsumerError::TooSmall(n));
    }
    if max_witnesses == 0 {
        return Err(ConsumerError::NoWitnesses);
    }
    let verdict = |verdict, witnesses_used, bits_consumed| SsVerdict { number: n, verdict, witnesses_used, bits_consumed };
    if n.is_multiple_of(2) {
        return Ok(verdict(Verdict::Composite, 0, 0));
    }
    if n == 3 {
        return Ok(verdict(Verdict::ProbablyPrime, 0, 0));
    }

    let span = n - 3;
    let width = u64::BITS - span.leading_zeros();
    let mut consumed = 0u64;
    for used in 1..=max_witnesses {
        let a = loop {
            let mut v = 0u64;
            for _ in 0..width {
                let bit = bits.next_bit().ok_or(ConsumerError::Exhausted {
                    number: n,
                    witnesses_used: used - 1,
                    bits_consumed: consumed,
                })?;
                consumed += 1;
                v = v << 1 | bit as u64;
            }
            if v < span {
                break v + 2;
            }
        };
        if gcd(a, n) != 1 {
            return Ok(verdict(Verdict::Composite, used, consumed));
        }
        let euler = pow_mod(a, (n - 1) / 2, n);
        let expected = match jacobi(a as i64, n).expect("n is odd") {
            1 => 1,
            -1 => n - 1,
            _ => unreachable!("gcd(a, n) = 1"),
        };
        if euler != expected {
            return Ok(verdict(Verdict::Composite, used, consumed));
        }
    }
    Ok(verdict(Verdict::ProbablyPrime, max_witnesses, consumed))
}

/// All Carmichael numbers below `limit`, ascending, by Korselt's criterion:
/// `n` composite and squarefree with `p − 1 | n − 1` for every prime `p | n`.
pub fn carmichael_numbers(limit: u64) -> Vec<u64> {
    (3..limit).step_by(2).filter(|&n| is_korselt(n)).collect()
}

fn is_korselt(n: u64) -> bool {
    let mut rest = n;
    let mut factors = 0;
    let mut p = 3;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            rest /= p;
            if rest.is_multiple_of(p) || !(n - 1).is_multiple_of(p - 1) {
                return false;
            }
            factors += 1;
        }
        p += 2;
    }
    if rest > 1 {
        if rest == n || !(n - 1).is_multiple_of(rest - 1) {
            return false;
        }
        factors += 1;
    }
    factors >= 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub limit: u64,
    pub max_witnesses: u32,
    pub numbers_tested: u64,
    pub composite: u64,
    pub probably_prime: u64,
    pub total_witnesses: u64,
    pub total_bits_consumed: u64,
    pub verdicts: Vec<SsVerdict>,
}

/// Tests every Carmichael number below `limit` in ascending order against
/// one shared bit source.
pub fn carmichael_harness<S: BitSource + ?Sized>(
    limit: u64,
    bits: &mut S,
    max_witnesses: u32,
) -> Result<HarnessReport, HarnessError> {
    let numbers = carmichael_numbers(limit);
    let mut verdicts = Vec::with_capacity(numbers.len());
    for (index, &number) in numbers.iter().enumerate() {
        let v = solovay_strassen(number, bits, max_witnesses).map_err(|source| HarnessError {
            index,
            number,
            source,
        })?;
        verdicts.push(v);
    }
    let composite = verdicts.iter().filter(|v| v.verdict == Verdict::Composite).count() as u64;
    Ok(HarnessReport {
        limit,
        max_witnesses,
        numbers_tested: verdicts.len() as u64,
        composite,
        probably_prime: verdicts.len() as u64 - composite,
        total_witnesses: verdicts.iter().map(|v| v.witnesses_used as u64).sum(),
        total_bits_consumed: verdicts.iter().map(|v| v.bits_consumed).sum(),
        verdicts,
    })
}
