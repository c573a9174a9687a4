//! Simulator and analysis toolkit for a qutrit quantum random number
//! generator whose outcomes are certified value-indefinite by the
//! Kochen-Specker theorem.
//!
//! Pipeline: [`protocol`] simulates shots (built on [`spin`] and [`readout`]),
//! [`certify`] checks the overlap bounds, [`extract`] debiases, [`stats`]
//! validates the output, and [`consumer`] spends the bits on Solovay-Strassen
//! tests of Carmichael numbers. [`formats`], [`config`], [`report`] and
//! [`cli`] handle persistence and the command line.

pub mod bits;
pub mod certify;
pub mod cli;
pub mod config;
pub mod consumer;
pub mod extract;
pub mod formats;
pub mod protocol;
pub mod readout;
pub mod report;
pub mod rng;
pub mod spin;
pub mod stats;

pub use bits::BitStream;
pub use protocol::{ProtocolConfig, RawStream, Symbol};
