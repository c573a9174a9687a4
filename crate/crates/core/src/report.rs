//! Structured-text reports.
//!
//! Every report is a TOML document whose first key is `report` (the producing
//! subcommand) followed by `format = 1`. Field names are stable; floats use
//! the shortest round-trip representation, so identical inputs give
//! byte-identical reports.

use serde::Serialize;

use crate::certify::CertificationReport;
use crate::consumer::HarnessReport;
use crate::extract::ExtractionSummary;
use crate::protocol::{BatchSummary, SymbolCounts};
use crate::readout::NoiseParams;
use crate::stats::StatsReport;

pub const REPORT_FORMAT: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    report: &'a str,
    format: u32,
    #[serde(flatten)]
    body: &'a T,
}

pub fn render<T: Serialize>(kind: &str, body: &T) -> String {
    toml::to_string(&Envelope { report: kind, format: REPORT_FORMAT, body })
        .expect("report types serialize to TOML")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationReport {
    pub seed: u64,
    pub ideal: bool,
    pub noise: NoiseParams,
    pub summary: BatchSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionReport {
    pub trace_counts: SymbolCounts,
    pub extraction: ExtractionSummary,
}

pub fn generation(r: &GenerationReport) -> String {
    render("generate", r)
}

pub fn certification(r: &CertificationReport) -> String {
    render("certify", r)
}

pub fn extraction(r: &ExtractionReport) -> String {
    render("extract", r)
}

pub fn stats(r: &StatsReport) -> String {
    render("stats", r)
}

pub fn consumer(r: &HarnessReport) -> String {
    render("consume-ss", r)
}
