//! Five tests from NIST SP 800-22: frequency (monobit), frequency within a
//! block, runs, longest run of ones in a block, and approximate entropy.
//!
//! Each test reports `NotApplicable` instead of a p-value when the input is
//! too short for its reference distribution.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma_ur;

use crate::bits::BitStream;

/// Significance level used for pass/fail.
pub const ALPHA: f64 = 0.01;

/// Smallest stream [`nist_subset`] accepts.
pub const MIN_SUBSET_BITS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TestOutcome {
    Completed { statistic: f64, p_value: f64, passed: bool },
    NotApplicable { reason: String },
}

impl TestOutcome {
    fn completed(statistic: f64, p_value: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        TestOutcome::Completed { statistic, p_value, passed: p_value >= ALPHA }
    }

    fn not_applicable(reason: impl Into<String>) -> Self {
        TestOutcome::NotApplicable { reason: reason.into() }
    }

    pub fn p_value(&self) -> Option<f64> {
        match self {
            TestOutcome::Completed { p_value, .. } => Some(*p_value),
            TestOutcome::NotApplicable { .. } => None,
        }
    }

    /// `None` when the test did not run.
    pub fn passed(&self) -> Option<bool> {
        match self {
            TestOutcome::Completed { passed, .. } => Some(*passed),
            TestOutcome::NotApplicable { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub name: String,
    #[serde(flatten)]
    pub outcome: TestOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("stream of {len} bits is shorter than the {min}-bit minimum")]
pub struct TooShort {
    pub len: usize,
    pub min: usize,
}

/// Runs all five tests with their default parameters.
pub fn nist_subset(bits: &BitStream) -> Result<Vec<TestResult>, TooShort> {
    if bits.len() < MIN_SUBSET_BITS {
        return Err(TooShort { len: bits.len(), min: MIN_SUBSET_BITS });
    }
    let named = |name: &str, outcome| TestResult { name: name.to_owned(), outcome };
    Ok(vec![
        named("frequency", monobit(bits)),
        named("block_frequency", block_frequency(bits, default_block_size(bits.len()))),
        named("runs", runs(bits)),
        named("longest_run_of_ones", longest_run_of_ones(bits)),
        named("approximate_entropy", approximate_entropy(bits, default_apen_block(bits.len()))),
    ])
}

/// Smallest `M ≥ 20` with fewer than 100 blocks, so that `M > 0.01·n`.
pub fn default_block_size(n: usize) -> usize {
    20.max(n.div_ceil(99))
}

/// `m = floor(log2 n) − 6`, capped at 10; zero means too short.
pub fn default_apen_block(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    (n.ilog2() as usize).saturating_sub(6).min(10)
}

pub fn monobit(bits: &BitStream) -> TestOutcome {
    let n = bits.len();
    if n == 0 {
        return TestOutcome::not_applicable("empty stream");
    }
    let sum = 2 * bits.count_ones() as i64 - n as i64;
    let s_obs = sum.unsigned_abs() as f64 / (n as f64).sqrt();
    TestOutcome::completed(s_obs, erfc(s_obs / std::f64::consts::SQRT_2))
}

pub fn block_frequency(bits: &BitStream, block: usize) -> TestOutcome {
    if block == 0 {
        return TestOutcome::not_applicable("block size must be positive");
    }
    let blocks = bits.len() / block;
    if blocks == 0 {
        return TestOutcome::not_applicable(format!("fewer than {block} bits"));
    }
    let chi_sq = 4.0
        * block as f64
        * (0..blocks)
            .map(|i| {
                let pi = bits.count_ones_in(i * block, (i + 1) * block) as f64 / block as f64;
                (pi - 0.5) * (pi - 0.5)
            })
            .sum::<f64>();
    TestOutcome::completed(chi_sq, gamma_ur(blocks as f64 / 2.0, chi_sq / 2.0))
}

/// Fails outright (p = 0) when the monobit prerequisite `|π − 1/2| < 2/√n`
/// does not hold, as the reference procedure prescribes.
pub fn runs(bits: &BitStream) -> TestOutcome {
    let n = bits.len();
    if n < 2 {
        return TestOutcome::not_applicable("need at least 2 bits");
    }
    let nf = n as f64;
    let pi = bits.count_ones() as f64 / nf;
    if (pi - 0.5).abs() >= 2.0 / nf.sqrt() {
        return TestOutcome::completed((pi - 0.5).abs(), 0.0);
    }
    let mut v_obs = 1u64;
    let mut prev = bits.get(0).unwrap();
    for bit in bits.iter().skip(1) {
        if bit != prev {
            v_obs += 1;
        }
        prev = bit;
    }
    let spread = 2.0 * pi * (1.0 - pi);
    let p = erfc((v_obs as f64 - nf * spread).abs() / (2.0 * (2.0 * nf).sqrt() * pi * (1.0 - pi)));
    TestOutcome::completed(v_obs as f64, p)
}

struct LongestRunTable {
    block: usize,
    /// Run length of the lowest category; lower runs are folded into it.
    lowest: usize,
    probs: &'static [f64],
}

const LONGEST_RUN_TABLES: [(usize, LongestRunTable); 3] = [
    (
        750_000,
        LongestRunTable {
            block: 10_000,
            lowest: 10,
            probs: &[0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
        },
    ),
    (
        6272,
        LongestRunTable { block: 128, lowest: 4, probs: &[0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124] },
    ),
    (128, LongestRunTable { block: 8, lowest: 1, probs: &[0.2148, 0.3672, 0.2305, 0.1875] }),
];

pub fn longest_run_of_ones(bits: &BitStream) -> TestOutcome {
    let n = bits.len();
    let Some((_, table)) = LONGEST_RUN_TABLES.iter().find(|(min, _)| n >= *min) else {
        return TestOutcome::not_applicable("need at least 128 bits");
    };
    let categories = table.probs.len();
    let blocks = n / table.block;
    let mut counts = vec![0u64; categories];
    let mut iter = bits.iter();
    for _ in 0..blocks {
        let (mut run, mut longest) = (0usize, 0usize);
        for bit in iter.by_ref().take(table.block) {
            if bit {
                run += 1;
                longest = longest.max(run);
            } else {
                run = 0;
            }
        }
        let category = longest.saturating_sub(table.lowest).min(categories - 1);
        counts[category] += 1;
    }
    let nb = blocks as f64;
    let chi_sq: f64 = counts
        .iter()
        .zip(table.probs)
        .map(|(&v, &p)| (v as f64 - nb * p).powi(2) / (nb * p))
        .sum();
    let k = (categories - 1) as f64;
    TestOutcome::completed(chi_sq, gamma_ur(k / 2.0, chi_sq / 2.0))
}

pub fn approximate_entropy(bits: &BitStream, m: usize) -> TestOutcome {
    let n = bits.len();
    if m == 0 {
        return TestOutcome::not_applicable("block length must be at least 1");
    }
    if m + 1 > 24 || n < m + 1 {
        return TestOutcome::not_applicable(format!("block length {m} unsuitable for {n} bits"));
    }
    let apen = phi(bits, m) - phi(bits, m + 1);
    let chi_sq = 2.0 * n as f64 * (std::f64::consts::LN_2 - apen);
    TestOutcome::completed(chi_sq, gamma_ur((1u64 << (m - 1)) as f64, chi_sq / 2.0))
}

/// `Σ C_i ln C_i` over overlapping `m`-bit patterns of the stream extended
/// circularly by its first `m − 1` bits.
fn phi(bits: &BitStream, m: usize) -> f64 {
    let n = bits.len();
    let mask = (1usize << m) - 1;
    let mut counts = vec![0u64; 1 << m];
    let mut window = 0usize;
    for k in 0..m - 1 {
        window = (window << 1 | bits.get(k).unwrap() as usize) & mask;
    }
    for k in m - 1..n + m - 1 {
        window = (window << 1 | bits.get(k % n).unwrap() as usize) & mask;
        counts[window] += 1;
    }
    let nf = n as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let f = c as f64 / nf;
            f * f.ln()
        })
        .sum()
}
