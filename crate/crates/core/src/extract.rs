//! Von Neumann debiasing.
//!
//! Disjoint consecutive pairs are mapped `01 → 0`, `10 → 1`; `00` and `11`
//! are dropped, as is a trailing unpaired bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitStream;

/// For each input byte (four LSB-first pairs): the packed output bits and
/// their count.
const PAIR_TABLE: [(u8, u8); 256] = build_pair_table();

const fn build_pair_table() -> [(u8, u8); 256] {
    let mut table = [(0u8, 0u8); 256];
    let mut byte = 0;
    while byte < 256 {
        let mut out = 0u8;
        let mut n = 0u8;
        let mut pair = 0;
        while pair < 4 {
            let first = (byte >> (2 * pair)) & 1;
            let second = (byte >> (2 * pair + 1)) & 1;
            if first != second {
                // 01 → 0, 10 → 1: the output is the first bit
                out |= (first as u8) << n;
                n += 1;
            }
            pair += 1;
        }
        table[byte] = (out, n);
        byte += 1;
    }
    table
}

pub fn von_neumann_extract(input: &BitStream) -> BitStream {
    let mut out = BitStream::with_capacity(input.len() / 4);
    extract_bytes(input.full_bytes(), &mut out);
    let tail_start = input.len() / 8 * 8;
    let mut k = tail_start;
    while k + 1 < input.len() {
        let (a, b) = (input.get(k).unwrap(), input.get(k + 1).unwrap());
        if a != b {
            out.push(a);
        }
        k += 2;
    }
    out
}

fn extract_bytes(bytes: &[u8], out: &mut BitStream) {
    for &b in bytes {
        let (bits, n) = PAIR_TABLE[b as usize];
        out.push_bits(bits, n as usize);
    }
}

/// Chunked parallel extraction. Chunks split on byte boundaries, which are
/// always pair boundaries, so the result equals [`von_neumann_extract`].
pub fn par_von_neumann_extract(input: &BitStream, chunk_bytes: usize) -> BitStream {
    let chunk_bytes = chunk_bytes.max(1);
    let full = input.full_bytes();
    let pieces: Vec<BitStream> = full
        .par_chunks(chunk_bytes)
        .map(|chunk| {
            let mut out = BitStream::with_capacity(chunk.len() * 2);
            extract_bytes(chunk, &mut out);
            out
        })
        .collect();
    let mut out = BitStream::with_capacity(input.len() / 4);
    for p in &pieces {
        out.append(p);
    }
    let tail: BitStream = input.iter().skip(full.len() * 8).collect();
    out.append(&von_neumann_extract(&tail));
    out
}

/// Output bits per input bit for independent input with `P(0) = p0`.
pub fn expected_yield(p0: f64) -> f64 {
    p0 * (1.0 - p0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionSummary {
    pub input_bits: u64,
    pub pairs: u64,
    pub trailing_bit_dropped: bool,
    pub output_bits: u64,
    pub output_zeros: u64,
    /// Output bits per input bit.
    pub realized_yield: f64,
    /// [`expected_yield`] at the input's observed zero frequency.
    pub expected_yield: f64,
}

impl ExtractionSummary {
    pub fn new(input: &BitStream, output: &BitStream) -> Self {
        let n = input.len() as u64;
        let p0 = if n == 0 { 0.0 } else { input.count_zeros() as f64 / n as f64 };
        ExtractionSummary {
            input_bits: n,
            pairs: n / 2,
            trailing_bit_dropped: n % 2 == 1,
            output_bits: output.len() as u64,
            output_zeros: output.count_zeros() as u64,
            realized_yield: if n == 0 { 0.0 } else { output.len() as f64 / n as f64 },
            expected_yield: expected_yield(p0),
        }
    }
}
