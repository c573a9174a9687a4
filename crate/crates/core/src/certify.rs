//! Value-indefiniteness certification.
//!
//! An outcome of measuring `|ψ⟩⟨ψ|` on a system prepared in `|φ⟩` is certified
//! value-indefinite when `√(5/14) ≤ |⟨ψ|φ⟩| ≤ 3/√14`. Here `|φ⟩ = |Sz = 0⟩` and
//! `|ψ±⟩ = |Sx = ±1⟩`, and the overlaps are estimated as the square roots of
//! the observed outcome frequencies.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::{Estimate, RawStream, SymbolCounts};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("stream has no binary outcomes ({discard} discards only)")]
    NoBinaryOutcomes { discard: u64 },
}

/// `(√(5/14), 3/√14)`.
pub fn certification_bounds() -> (f64, f64) {
    ((5.0_f64 / 14.0).sqrt(), 3.0 / 14.0_f64.sqrt())
}

/// `(√p0, √p1)`.
pub fn estimate_overlaps(p0: f64, p1: f64) -> (f64, f64) {
    (p0.sqrt(), p1.sqrt())
}

/// Closed-interval check against [`certification_bounds`].
pub fn check_certified(overlap: f64) -> bool {
    let (lo, hi) = certification_bounds();
    (lo..=hi).contains(&overlap)
}

/// Lower bound on the certified share of raw bits.
///
/// All deviation from an even split is charged to uncertified runs that
/// always emit the majority bit: if a fraction `u` of runs is uncertified the
/// majority frequency is `(1 − u)/2 + u`, so `u = 2·|p − 1/2| = |p0 − p1|`
/// for frequencies conditioned on a binary outcome. Returns 0 when
/// `p0 + p1 = 0`.
pub fn certified_fraction_raw(p0: f64, p1: f64) -> f64 {
    let mass = p0 + p1;
    if mass <= 0.0 {
        return 0.0;
    }
    (1.0 - (p0 - p1).abs() / mass).clamp(0.0, 1.0)
}

/// A von Neumann output bit is uncertified only if both raw bits are.
pub fn certified_fraction_final(c_raw: f64) -> f64 {
    1.0 - (1.0 - c_raw) * (1.0 - c_raw)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub n_trials: u64,
    pub counts: SymbolCounts,
    /// Conditioned on a binary outcome.
    pub p0: Estimate,
    /// Conditioned on a binary outcome.
    pub p1: Estimate,
    /// Over all trials.
    pub p_discard: Estimate,
    pub overlap_plus: f64,
    pub overlap_minus: f64,
    pub bound_lo: f64,
    pub bound_hi: f64,
    pub certified_plus: bool,
    pub certified_minus: bool,
    pub certified_fraction_raw: f64,
    pub certified_fraction_final: f64,
}

impl CertificationReport {
    pub fn all_certified(&self) -> bool {
        self.certified_plus && self.certified_minus
    }
}

pub fn build_report(stream: &RawStream) -> Result<CertificationReport, CertifyError> {
    build_report_from_counts(stream.counts())
}

pub fn build_report_from_counts(counts: SymbolCounts) -> Result<CertificationReport, CertifyError> {
    let binary = counts.binary();
    if binary == 0 {
        return Err(CertifyError::NoBinaryOutcomes { discard: counts.discard });
    }
    let p0 = Estimate::binomial(counts.zero, binary);
    let p1 = Estimate::binomial(counts.one, binary);
    let (overlap_plus, overlap_minus) = estimate_overlaps(p0.value, p1.value);
    let (bound_lo, bound_hi) = certification_bounds();
    let raw = certified_fraction_raw(p0.value, p1.value);
    Ok(CertificationReport {
        n_trials: counts.total(),
        counts,
        p0,
        p1,
        p_discard: Estimate::binomial(counts.discard, counts.total()),
        overlap_plus,
        overlap_minus,
        bound_lo,
        bound_hi,
        certified_plus: check_certified(overlap_plus),
        certified_minus: check_certified(overlap_minus),
        certified_fraction_raw: raw,
        certified_fraction_final: certified_fraction_final(raw),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::Symbol;

    #[test]
    fn bounds_values() {
        let (lo, hi) = certification_bounds();
        assert!((lo - 0.597614).abs() < 1e-6);
        assert!((hi - 0.801784).abs() < 1e-6);
        assert!(lo < hi);
        assert!((lo * lo - 5.0 / 14.0).abs() < 1e-15);
        assert!((hi * hi - 9.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    #[allow(clippy::approx_constant)] // reference values, rounded
    fn overlap_estimates() {
        let (a, b) = estimate_overlaps(0.5, 0.5);
        assert!((a - 0.70711).abs() < 1e-5 && (b - 0.70711).abs() < 1e-5);
        let (a, b) = estimate_overlaps(0.536, 0.464);
        assert!((a - 0.73212).abs() < 1e-5 && (b - 0.68118).abs() < 1e-5);
        assert_eq!(estimate_overlaps(1.0, 0.0), (1.0, 0.0));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn certified_examples() {
        assert!(check_certified(0.70711));
        assert!(!check_certified(0.5));
        assert!(check_certified(certification_bounds().0));
        assert!(check_certified(certification_bounds().1));
    }

    #[test]
    fn check_matches_squared_interval() {
        for k in 0..=10_000 {
            let p = k as f64 / 10_000.0;
            let inside = (5.0 / 14.0..=9.0 / 14.0).contains(&p);
            // skip grid points within roundoff of the edges
            if (p - 5.0 / 14.0).abs() < 1e-12 || (p - 9.0 / 14.0).abs() < 1e-12 {
                continue;
            }
            assert_eq!(check_certified(p.sqrt()), inside, "p = {p}");
        }
    }

    #[test]
    fn raw_fraction_examples() {
        assert_eq!(certified_fraction_raw(0.5, 0.5), 1.0);
        assert!((certified_fraction_raw(0.536, 0.464) - 0.928).abs() < 1e-12);
        assert_eq!(certified_fraction_raw(1.0, 0.0), 0.0);
        assert_eq!(certified_fraction_raw(0.0, 0.0), 0.0);
    }

    #[test]
    fn raw_fraction_symmetric() {
        for k in 0..=100 {
            let p = k as f64 / 100.0;
            assert_eq!(certified_fraction_raw(p, 1.0 - p), certified_fraction_raw(1.0 - p, p));
        }
    }

    #[test]
    fn final_fraction_examples() {
        assert!((certified_fraction_final(0.95) - 0.9975).abs() < 1e-12);
        assert_eq!(certified_fraction_final(1.0), 1.0);
        assert_eq!(certified_fraction_final(0.0), 0.0);
    }

    #[test]
    fn final_fraction_dominates_raw() {
        for k in 1..1000 {
            let c = k as f64 / 1000.0;
            assert!(certified_fraction_final(c) > c);
        }
    }

    #[test]
    fn all_zero_stream() {
        let stream = RawStream::from_symbols(vec![Symbol::Zero; 1000]);
        let r = build_report(&stream).unwrap();
        assert_eq!(r.certified_fraction_raw, 0.0);
        assert!(!r.certified_plus && !r.certified_minus);
    }

    #[test]
    fn all_discard_stream_is_an_error() {
        let stream = RawStream::from_symbols(vec![Symbol::Discard; 10]);
        assert_eq!(build_report(&stream), Err(CertifyError::NoBinaryOutcomes { discard: 10 }));
    }

    #[test]
    fn report_depends_only_on_counts() {
        let a = RawStream::from_symbols(vec![Symbol::Zero, Symbol::One, Symbol::Discard, Symbol::Zero]);
        let b = RawStream::from_symbols(vec![Symbol::Discard, Symbol::Zero, Symbol::Zero, Symbol::One]);
        assert_eq!(build_report(&a), build_report(&b));
        let r = build_report(&a).unwrap();
        assert!((r.p0.value - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.p_discard.value - 0.25).abs() < 1e-15);
        assert!(r.certified_fraction_final >= r.certified_fraction_raw);
    }
}
