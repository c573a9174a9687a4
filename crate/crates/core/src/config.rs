//! Run configuration, read from a TOML key-value file.
//!
//! ```toml
//! trials = 1000000
//! seed = 7
//! ideal = false
//! p_thermal_1 = 0.0014
//! p_thermal_2 = 0.0001
//! gate_amp_error = 0.005
//! p_decay_10 = 0.072
//! p_decay_21 = 0.14
//! iq_centers = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]
//! iq_sigma = 0.18
//! bucket_size = 999302
//! ss_limit = 100000
//! ss_witnesses = 64
//! ```
//!
//! Every key is optional; unknown keys are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::ProtocolConfig;
use crate::readout::{IqPoint, NoiseParams, ReadoutError};

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_BUCKET_SIZE: u64 = 999_302;
pub const DEFAULT_SS_LIMIT: u64 = 100_000;
pub const DEFAULT_SS_WITNESSES: u32 = 64;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

impl From<ReadoutError> for ConfigError {
    fn from(e: ReadoutError) -> Self {
        match e {
            ReadoutError::InvalidParam { key, reason } => ConfigError::Invalid { key, reason },
            other => ConfigError::Parse(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub trials: u64,
    pub seed: u64,
    pub ideal: bool,
    pub p_thermal_1: f64,
    pub p_thermal_2: f64,
    pub gate_amp_error: f64,
    pub p_decay_10: f64,
    pub p_decay_21: f64,
    pub iq_centers: [[f64; 2]; 3],
    pub iq_sigma: f64,
    pub bucket_size: u64,
    pub ss_limit: u64,
    pub ss_witnesses: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        let noise = NoiseParams::default();
        RunConfig {
            trials: DEFAULT_TRIALS,
            seed: 0,
            ideal: false,
            p_thermal_1: noise.p_thermal_1,
            p_thermal_2: noise.p_thermal_2,
            gate_amp_error: noise.gate_amp_error,
            p_decay_10: noise.p_decay_10,
            p_decay_21: noise.p_decay_21,
            iq_centers: noise.iq_centers.map(|c| [c.i, c.q]),
            iq_sigma: noise.iq_sigma,
            bucket_size: DEFAULT_BUCKET_SIZE,
            ss_limit: DEFAULT_SS_LIMIT,
            ss_witnesses: DEFAULT_SS_WITNESSES,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_owned()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn noise(&self) -> NoiseParams {
        NoiseParams {
            p_thermal_1: self.p_thermal_1,
            p_thermal_2: self.p_thermal_2,
            gate_amp_error: self.gate_amp_error,
            p_decay_10: self.p_decay_10,
            p_decay_21: self.p_decay_21,
            iq_centers: self.iq_centers.map(|[i, q]| IqPoint::new(i, q)),
            iq_sigma: self.iq_sigma,
        }
    }

    pub fn protocol(&self) -> ProtocolConfig {
        ProtocolConfig { n_trials: self.trials, seed: self.seed, noise: self.noise(), ideal: self.ideal }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("trials", self.trials),
            ("bucket_size", self.bucket_size),
            ("ss_witnesses", self.ss_witnesses as u64),
        ];
        for (key, v) in positive {
            if v == 0 {
                return Err(ConfigError::Invalid { key, reason: "must be at least 1".into() });
            }
        }
        if self.ss_limit < 3 {
            return Err(ConfigError::Invalid { key: "ss_limit", reason: format!("must be at least 3, got {}", self.ss_limit) });
        }
        self.noise().validate()?;
        Ok(())
    }
}
