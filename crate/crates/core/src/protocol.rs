//! The generation protocol: prepare `|0⟩`, rotate with `M†`, read out in the
//! energy basis, and encode the outcome.
//!
//! Readout `L0` (`Sx = +1`) encodes `0`, `L1` (`Sx = −1`) encodes `1`, and
//! `L2` (`Sx = 0`) is discarded. The restoring rotation `M` after readout does
//! not affect outcomes and is not simulated.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitStream;
use crate::readout::{
    apply_relaxation, classify, sample_level, synth_iq, thermal_init, IqPoint, NoiseParams, ReadoutError,
    ReadoutLevel,
};
use crate::rng::TrialStreams;
use crate::spin::{measurement_unitary, rotation_pair, QutritState};

/// Trials per work unit handed to the thread pool.
const CHUNK: usize = 1 << 14;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("n_trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Noise(#[from] ReadoutError),
    #[error("cannot allocate storage for {n_trials} trials: {reason}")]
    Allocation { n_trials: u64, reason: String },
    #[error("cannot start worker pool: {0}")]
    WorkerPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Zero,
    One,
    Discard,
}

impl Symbol {
    pub fn to_byte(self) -> u8 {
        match self {
            Symbol::Zero => 0x00,
            Symbol::One => 0x01,
            Symbol::Discard => 0x02,
        }
    }

    pub fn from_byte(byte: u8) -> Option<Self> {
        match byte {
            0x00 => Some(Symbol::Zero),
            0x01 => Some(Symbol::One),
            0x02 => Some(Symbol::Discard),
            _ => None,
        }
    }

    /// The logical bit, or `None` for a discard.
    pub fn bit(self) -> Option<bool> {
        match self {
            Symbol::Zero => Some(false),
            Symbol::One => Some(true),
            Symbol::Discard => None,
        }
    }
}

pub fn encode_symbol(level: ReadoutLevel) -> Symbol {
    match level {
        ReadoutLevel::L0 => Symbol::Zero,
        ReadoutLevel::L1 => Symbol::One,
        ReadoutLevel::L2 => Symbol::Discard,
    }
}

/// Diagnostic trace of a single shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    /// Level after relaxation, before the IQ measurement.
    pub true_level: ReadoutLevel,
    pub classified_level: ReadoutLevel,
    /// In ideal mode this is the nominal center of the projected level.
    pub iq: IqPoint,
    pub symbol: Symbol,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub n_trials: u64,
    pub seed: u64,
    pub noise: NoiseParams,
    /// Exact `|0⟩`, exact `M†`, no relaxation and no IQ synthesis.
    pub ideal: bool,
}

impl ProtocolConfig {
    pub fn new(n_trials: u64, seed: u64) -> Self {
        ProtocolConfig { n_trials, seed, noise: NoiseParams::default(), ideal: false }
    }

    pub fn ideal(n_trials: u64, seed: u64) -> Self {
        ProtocolConfig { ideal: true, ..Self::new(n_trials, seed) }
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.n_trials == 0 {
            return Err(ProtocolError::NoTrials);
        }
        self.noise.validate()?;
        Ok(())
    }
}

/// Runs one shot.
///
/// Noisy sequence: thermal start level → `M†` with both angles scaled by
/// `1 + ε`, `ε ~ N(0, gate_amp_error²)` → Born sampling in the energy basis →
/// relaxation → IQ synthesis → nearest-center classification.
pub fn run_trial<R: Rng + ?Sized>(config: &ProtocolConfig, rng: &mut R) -> TrialRecord {
    let noise = &config.noise;
    if config.ideal {
        let probs = measurement_unitary().apply(&QutritState::ground()).level_probabilities();
        let level = sample_level(&probs, rng).expect("unitary evolution yields a valid distribution");
        return TrialRecord {
            true_level: level,
            classified_level: level,
            iq: noise.iq_centers[level.index()],
            symbol: encode_symbol(level),
        };
    }

    let start = thermal_init(noise, rng);
    let eps: f64 = noise.gate_amp_error * rng.sample::<f64, _>(StandardNormal);
    let angle = FRAC_PI_2 * (1.0 + eps);
    let state = rotation_pair(angle, angle).apply(&QutritState::basis(start.index()));
    let projected = sample_level(&normalized(state.level_probabilities()), rng)
        .expect("unitary evolution yields a valid distribution");
    let true_level = apply_relaxation(projected, noise, rng);
    let iq = synth_iq(true_level, noise, rng);
    let classified_level = classify(&iq, noise);
    TrialRecord { true_level, classified_level, iq, symbol: encode_symbol(classified_level) }
}

fn normalized(p: [f64; 3]) -> [f64; 3] {
    let total: f64 = p.iter().sum();
    p.map(|x| x / total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SymbolCounts {
    pub zero: u64,
    pub one: u64,
    pub discard: u64,
}

impl SymbolCounts {
    pub fn total(&self) -> u64 {
        self.zero + self.one + self.discard
    }

    pub fn binary(&self) -> u64 {
        self.zero + self.one
    }

    fn tally(symbols: &[Symbol]) -> Self {
        let mut c = SymbolCounts::default();
        for s in symbols {
            match s {
                Symbol::Zero => c.zero += 1,
                Symbol::One => c.one += 1,
                Symbol::Discard => c.discard += 1,
            }
        }
        c
    }
}

/// Ternary record of a run, discards included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawStream {
    symbols: Vec<Symbol>,
    counts: SymbolCounts,
}

impl RawStream {
    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        let counts = SymbolCounts::tally(&symbols);
        RawStream { symbols, counts }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn counts(&self) -> SymbolCounts {
        self.counts
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Binary outcomes with discards removed, in trial order.
    pub fn binary_bits(&self) -> BitStream {
        let mut bits = BitStream::with_capacity(self.counts.binary() as usize);
        bits.extend(self.symbols.iter().filter_map(|s| s.bit()));
        bits
    }
}

/// A frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn binomial(successes: u64, trials: u64) -> Self {
        if trials == 0 {
            return Estimate { value: 0.0, std_error: 0.0 };
        }
        let n = trials as f64;
        let p = successes as f64 / n;
        Estimate { value: p, std_error: (p * (1.0 - p) / n).sqrt() }
    }
}

/// Outcome frequencies over all trials, discards included in the denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub n_trials: u64,
    pub counts: SymbolCounts,
    pub p0: Estimate,
    pub p1: Estimate,
    pub p_discard: Estimate,
}

impl BatchSummary {
    pub fn from_counts(counts: SymbolCounts) -> Self {
        let n = counts.total();
        BatchSummary {
            n_trials: n,
            counts,
            p0: Estimate::binomial(counts.zero, n),
            p1: Estimate::binomial(counts.one, n),
            p_discard: Estimate::binomial(counts.discard, n),
        }
    }
}

/// Runs `n_trials` shots on the global thread pool.
///
/// Trial `i` draws only from the stream `(seed, i)`, so the output is
/// identical for any worker count.
pub fn run_batch(config: &ProtocolConfig) -> Result<(RawStream, BatchSummary), ProtocolError> {
    config.validate()?;
    let n = usize::try_from(config.n_trials).map_err(|_| ProtocolError::Allocation {
        n_trials: config.n_trials,
        reason: "trial count exceeds address space".into(),
    })?;
    let mut symbols: Vec<Symbol> = Vec::new();
    symbols
        .try_reserve_exact(n)
        .map_err(|e| ProtocolError::Allocation { n_trials: config.n_trials, reason: e.to_string() })?;
    symbols.resize(n, Symbol::Discard);

    let streams = TrialStreams::new(config.seed);
    symbols.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk, out)| {
        let base = (chunk * CHUNK) as u64;
        for (offset, slot) in out.iter_mut().enumerate() {
            let mut rng = streams.stream(base + offset as u64);
            *slot = run_trial(config, &mut rng).symbol;
        }
    });

    let stream = RawStream::from_symbols(symbols);
    let summary = BatchSummary::from_counts(stream.counts());
    Ok((stream, summary))
}

/// [`run_batch`] on a dedicated pool of `workers` threads.
pub fn run_batch_with_workers(
    config: &ProtocolConfig,
    workers: usize,
) -> Result<(RawStream, BatchSummary), ProtocolError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ProtocolError::WorkerPool(e.to_string()))?;
    pool.install(|| run_batch(config))
}

/// Runs a single trial by index with the same stream assignment as
/// [`run_batch`].
pub fn trial_at(config: &ProtocolConfig, trial_index: u64) -> TrialRecord {
    run_trial(config, &mut TrialStreams::new(config.seed).stream(trial_index))
}
