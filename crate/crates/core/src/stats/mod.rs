//! Statistical validation of bit streams.

pub mod nist;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitStream;
pub use nist::{nist_subset, TestOutcome, TestResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("entropy needs at least one full byte, got {len} bits")]
    NoFullByte { len: usize },
    #[error("bucket size must be at least 1")]
    ZeroBucket,
    #[error("no complete bucket of {bucket_size} bits in a {len}-bit stream")]
    NoCompleteBucket { bucket_size: usize, len: usize },
    #[error(transparent)]
    TooShort(#[from] nist::TooShort),
}

/// Shannon entropy, in bits, of the empirical distribution of
/// non-overlapping bytes. A trailing partial byte is ignored.
pub fn entropy_per_byte(bits: &BitStream) -> Result<f64, StatsError> {
    let bytes = bits.full_bytes();
    if bytes.is_empty() {
        return Err(StatsError::NoFullByte { len: bits.len() });
    }
    let mut hist = [0u64; 256];
    for &b in bytes {
        hist[b as usize] += 1;
    }
    let total = bytes.len() as f64;
    let h: f64 = hist
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let f = c as f64 / total;
            -f * f.log2()
        })
        .sum();
    Ok(h.clamp(0.0, 8.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BucketStats {
    pub bucket_size: u64,
    pub n_buckets: u64,
    /// Mean over complete buckets of the per-bucket frequency of zeros.
    pub mean: f64,
    /// Sample standard deviation (n − 1); zero for a single bucket.
    pub std_dev: f64,
}

pub fn bucket_frequency(bits: &BitStream, bucket_size: usize) -> Result<BucketStats, StatsError> {
    if bucket_size == 0 {
        return Err(StatsError::ZeroBucket);
    }
    let n_buckets = bits.len() / bucket_size;
    if n_buckets == 0 {
        return Err(StatsError::NoCompleteBucket { bucket_size, len: bits.len() });
    }
    let freqs: Vec<f64> = (0..n_buckets)
        .map(|i| {
            let ones = bits.count_ones_in(i * bucket_size, (i + 1) * bucket_size);
            (bucket_size - ones) as f64 / bucket_size as f64
        })
        .collect();
    let mean = freqs.iter().sum::<f64>() / n_buckets as f64;
    let std_dev = if n_buckets > 1 {
        (freqs.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (n_buckets - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(BucketStats { bucket_size: bucket_size as u64, n_buckets: n_buckets as u64, mean, std_dev })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub n_bits: u64,
    pub entropy_bits_per_byte: f64,
    pub buckets: BucketStats,
    pub tests: Vec<TestResult>,
}

impl StatsReport {
    pub fn tests_passed(&self) -> usize {
        self.tests.iter().filter(|t| t.outcome.passed() == Some(true)).count()
    }

    pub fn tests_failed(&self) -> usize {
        self.tests.iter().filter(|t| t.outcome.passed() == Some(false)).count()
    }
}

pub fn build_stats_report(bits: &BitStream, bucket_size: usize) -> Result<StatsReport, StatsError> {
    Ok(StatsReport {
        n_bits: bits.len() as u64,
        entropy_bits_per_byte: entropy_per_byte(bits)?,
        buckets: bucket_frequency(bits, bucket_size)?,
        tests: nist_subset(bits)?,
    })
}
