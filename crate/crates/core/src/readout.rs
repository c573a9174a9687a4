//! Phenomenological noise and dispersive-readout model.
//!
//! A trial's imperfections are sampled as discrete classical events around the
//! ideal quantum evolution: a thermally excited starting level, a coherent
//! over-rotation of both pulses, a single decay event after projection, and
//! Gaussian scatter of the integrated readout signal in the IQ plane.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReadoutError {
    #[error("invalid noise parameter `{key}`: {reason}")]
    InvalidParam { key: &'static str, reason: String },
    #[error("malformed probability distribution {probs:?}: {reason}")]
    BadDistribution { probs: [f64; 3], reason: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IqPoint {
    pub i: f64,
    pub q: f64,
}

impl IqPoint {
    pub const fn new(i: f64, q: f64) -> Self {
        IqPoint { i, q }
    }

    pub fn distance_sqr(&self, other: &IqPoint) -> f64 {
        let di = self.i - other.i;
        let dq = self.q - other.q;
        di * di + dq * dq
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReadoutLevel {
    L0,
    L1,
    L2,
}

impl ReadoutLevel {
    pub const ALL: [ReadoutLevel; 3] = [ReadoutLevel::L0, ReadoutLevel::L1, ReadoutLevel::L2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }
}

/// Noise model parameters.
///
/// Thermal populations default to 0.14% / 0.01%: combined with the 50% branching
/// of an excited start into `|2⟩` this keeps the discard rate below 0.1%.
/// `p_decay_10 = 0.072` reproduces the observed 0.536 / 0.464 outcome bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p_thermal_1: f64,
    pub p_thermal_2: f64,
    /// Width of the zero-mean Gaussian relative over-rotation applied per trial.
    pub gate_amp_error: f64,
    pub p_decay_10: f64,
    pub p_decay_21: f64,
    pub iq_centers: [IqPoint; 3],
    pub iq_sigma: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            p_thermal_1: 0.0014,
            p_thermal_2: 0.0001,
            gate_amp_error: 0.005,
            p_decay_10: 0.072,
            p_decay_21: 0.14,
            iq_centers: [IqPoint::new(1.0, 0.0), IqPoint::new(0.0, 1.0), IqPoint::new(-1.0, 0.0)],
            iq_sigma: 0.18,
        }
    }
}

impl NoiseParams {
    /// All noise switched off; IQ blobs collapse onto their centers.
    pub fn noiseless() -> Self {
        NoiseParams {
            p_thermal_1: 0.0,
            p_thermal_2: 0.0,
            gate_amp_error: 0.0,
            p_decay_10: 0.0,
            p_decay_21: 0.0,
            iq_sigma: 0.0,
            ..Default::default()
        }
    }

    /// Checks every invariant. `iq_sigma = 0` is accepted as the noiseless
    /// limit.
    pub fn validate(&self) -> Result<(), ReadoutError> {
        let probs = [
            ("p_thermal_1", self.p_thermal_1),
            ("p_thermal_2", self.p_thermal_2),
            ("p_decay_10", self.p_decay_10),
            ("p_decay_21", self.p_decay_21),
        ];
        for (key, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(key, format!("must be a probability in [0, 1], got {p}")));
            }
        }
        if self.p_thermal_1 + self.p_thermal_2 >= 1.0 {
            return Err(invalid(
                "p_thermal_2",
                format!(
                    "p_thermal_1 + p_thermal_2 must be < 1, got {}",
                    self.p_thermal_1 + self.p_thermal_2
                ),
            ));
        }
        if !(self.gate_amp_error.is_finite() && self.gate_amp_error >= 0.0) {
            return Err(invalid(
                "gate_amp_error",
                format!("must be finite and non-negative, got {}", self.gate_amp_error),
            ));
        }
        if !(self.iq_sigma.is_finite() && self.iq_sigma >= 0.0) {
            return Err(invalid("iq_sigma", format!("must be finite and non-negative, got {}", self.iq_sigma)));
        }
        for c in &self.iq_centers {
            if !c.i.is_finite() || !c.q.is_finite() {
                return Err(invalid("iq_centers", format!("non-finite center {c:?}")));
            }
        }
        for a in 0..3 {
            for b in a + 1..3 {
                if self.iq_centers[a] == self.iq_centers[b] {
                    return Err(invalid("iq_centers", format!("centers {a} and {b} coincide")));
                }
            }
        }
        Ok(())
    }
}

fn invalid(key: &'static str, reason: String) -> ReadoutError {
    ReadoutError::InvalidParam { key, reason }
}

/// Starting level after cooldown.
pub fn thermal_init<R: Rng + ?Sized>(params: &NoiseParams, rng: &mut R) -> ReadoutLevel {
    let u: f64 = rng.random();
    if u < params.p_thermal_1 {
        ReadoutLevel::L1
    } else if u < params.p_thermal_1 + params.p_thermal_2 {
        ReadoutLevel::L2
    } else {
        ReadoutLevel::L0
    }
}

/// Draws a level from `probs`, consuming exactly one uniform variate.
///
/// A level with zero probability is never returned, even when roundoff leaves
/// the cumulative sum slightly short of one.
pub fn sample_level<R: Rng + ?Sized>(probs: &[f64; 3], rng: &mut R) -> Result<ReadoutLevel, ReadoutError> {
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0 + 1e-9) {
        return Err(ReadoutError::BadDistribution { probs: *probs, reason: "entries must lie in [0, 1]" });
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(ReadoutError::BadDistribution { probs: *probs, reason: "entries must sum to 1" });
    }
    let u: f64 = rng.random();
    Ok(pick(probs, u))
}

fn pick(probs: &[f64; 3], u: f64) -> ReadoutLevel {
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = k;
        if u < acc {
            return ReadoutLevel::ALL[k];
        }
    }
    ReadoutLevel::ALL[last]
}

/// Single decay event after projection. Never raises the level.
pub fn apply_relaxation<R: Rng + ?Sized>(level: ReadoutLevel, params: &NoiseParams, rng: &mut R) -> ReadoutLevel {
    let decay_10 = |rng: &mut R| {
        if rng.random::<f64>() < params.p_decay_10 {
            ReadoutLevel::L0
        } else {
            ReadoutLevel::L1
        }
    };
    match level {
        ReadoutLevel::L0 => ReadoutLevel::L0,
        ReadoutLevel::L1 => decay_10(rng),
        ReadoutLevel::L2 => {
            if rng.random::<f64>() < params.p_decay_21 {
                decay_10(rng)
            } else {
                ReadoutLevel::L2
            }
        }
    }
}

/// Integrated readout signal: the level's center plus isotropic Gaussian noise.
pub fn synth_iq<R: Rng + ?Sized>(level: ReadoutLevel, params: &NoiseParams, rng: &mut R) -> IqPoint {
    let c = params.iq_centers[level.index()];
    let di: f64 = rng.sample(StandardNormal);
    let dq: f64 = rng.sample(StandardNormal);
    IqPoint::new(c.i + params.iq_sigma * di, c.q + params.iq_sigma * dq)
}

/// Nearest-center classification; ties go to the lower level.
pub fn classify(pt: &IqPoint, params: &NoiseParams) -> ReadoutLevel {
    let mut best = 0;
    let mut best_d = pt.distance_sqr(&params.iq_centers[0]);
    for k in 1..3 {
        let d = pt.distance_sqr(&params.iq_centers[k]);
        if d < best_d {
            best = k;
            best_d = d;
        }
    }
    ReadoutLevel::ALL[best]
}

/// Monte-Carlo estimate of `P(classify(synth_iq(L)) ≠ L)` with `L` uniform.
///
/// Useful resolution at the default parameters needs `n_samples ≥ 10⁶`.
pub fn estimate_misclassification<R: Rng + ?Sized>(params: &NoiseParams, n_samples: u64, rng: &mut R) -> f64 {
    if n_samples == 0 {
        return 0.0;
    }
    let mut errors = 0u64;
    for _ in 0..n_samples {
        let level = ReadoutLevel::ALL[rng.random_range(0..3)];
        let pt = synth_iq(level, params, rng);
        if classify(&pt, params) != level {
            errors += 1;
        }
    }
    errors as f64 / n_samples as f64
}
