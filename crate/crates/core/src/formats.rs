//! Binary file formats.
//!
//! Trace file (ternary symbols, one byte per trial):
//!
//! ```text
//! offset 0   "KSQTRACE"            8-byte magic
//! offset 8   0x01                  format version
//! offset 9   u64 little-endian     trial count
//! offset 17  count bytes           0x00 = Zero, 0x01 = One, 0x02 = Discard
//! ```
//!
//! Bit file (packed binary stream):
//!
//! ```text
//! offset 0   "KSQBITS1"            8-byte magic
//! offset 8   u64 little-endian     bit count
//! offset 16  ceil(count / 8) bytes bits LSB-first within each byte, zero padded
//! ```

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::bits::BitStream;
use crate::protocol::{RawStream, Symbol};

pub const TRACE_MAGIC: &[u8; 8] = b"KSQTRACE";
pub const TRACE_VERSION: u8 = 1;
pub const TRACE_HEADER_LEN: usize = 17;

pub const BITS_MAGIC: &[u8; 8] = b"KSQBITS1";
pub const BITS_HEADER_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: String, found: String },
    #[error("unsupported trace format version {0}")]
    UnsupportedVersion(u8),
    #[error("header truncated: need {expected} bytes, file has {actual}")]
    TruncatedHeader { expected: usize, actual: usize },
    #[error("body length mismatch: header implies {expected} bytes, found {actual}")]
    BodyLength { expected: u64, actual: u64 },
    #[error("undefined symbol byte {byte:#04x} for trial {index} at file offset {offset}")]
    InvalidSymbol { index: u64, offset: u64, byte: u8 },
    #[error("nonzero padding bits in final byte {byte:#04x}")]
    NonzeroPadding { byte: u8 },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

fn check_magic(bytes: &[u8], magic: &[u8; 8], header_len: usize) -> Result<(), FormatError> {
    if bytes.len() < magic.len() || &bytes[..magic.len()] != magic {
        let found = &bytes[..bytes.len().min(magic.len())];
        return Err(FormatError::BadMagic {
            expected: String::from_utf8_lossy(magic).into_owned(),
            found: String::from_utf8_lossy(found).into_owned(),
        });
    }
    if bytes.len() < header_len {
        return Err(FormatError::TruncatedHeader { expected: header_len, actual: bytes.len() });
    }
    Ok(())
}

fn read_u64(bytes: &[u8]) -> u64 {
    u64::from_le_bytes(bytes[..8].try_into().expect("slice of 8 bytes"))
}

pub fn encode_trace(stream: &RawStream) -> Vec<u8> {
    let mut out = Vec::with_capacity(TRACE_HEADER_LEN + stream.len());
    out.extend_from_slice(TRACE_MAGIC);
    out.push(TRACE_VERSION);
    out.extend_from_slice(&(stream.len() as u64).to_le_bytes());
    out.extend(stream.symbols().iter().map(|s| s.to_byte()));
    out
}

pub fn decode_trace(bytes: &[u8]) -> Result<RawStream, FormatError> {
    check_magic(bytes, TRACE_MAGIC, TRACE_HEADER_LEN)?;
    let version = bytes[8];
    if version != TRACE_VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let count = read_u64(&bytes[9..]);
    let body = &bytes[TRACE_HEADER_LEN..];
    if body.len() as u64 != count {
        return Err(FormatError::BodyLength { expected: count, actual: body.len() as u64 });
    }
    let symbols = body
        .iter()
        .enumerate()
        .map(|(i, &byte)| {
            Symbol::from_byte(byte).ok_or(FormatError::InvalidSymbol {
                index: i as u64,
                offset: (TRACE_HEADER_LEN + i) as u64,
                byte,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RawStream::from_symbols(symbols))
}

/// Serializes a complete bit file, header included.
pub fn pack_bits(bits: &BitStream) -> Vec<u8> {
    let mut out = Vec::with_capacity(BITS_HEADER_LEN + bits.as_bytes().len());
    out.extend_from_slice(BITS_MAGIC);
    out.extend_from_slice(&(bits.len() as u64).to_le_bytes());
    out.extend_from_slice(bits.as_bytes());
    out
}

pub fn unpack_bits(bytes: &[u8]) -> Result<BitStream, FormatError> {
    check_magic(bytes, BITS_MAGIC, BITS_HEADER_LEN)?;
    let count = read_u64(&bytes[8..]);
    let body = &bytes[BITS_HEADER_LEN..];
    let expected = count.div_ceil(8);
    if body.len() as u64 != expected {
        return Err(FormatError::BodyLength { expected, actual: body.len() as u64 });
    }
    let len = usize::try_from(count).map_err(|_| FormatError::BodyLength { expected, actual: body.len() as u64 })?;
    BitStream::from_packed(body.to_vec(), len).ok_or(FormatError::NonzeroPadding { byte: *body.last().unwrap_or(&0) })
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> FormatError + '_ {
    move |source| FormatError::Io { path: path.display().to_string(), source }
}

/// Writes via a temporary file in the destination directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), FormatError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, FormatError> {
    fs::read(path).map_err(io_err(path))
}

pub fn write_trace(stream: &RawStream, path: &Path) -> Result<(), FormatError> {
    write_atomic(path, &encode_trace(stream))
}

pub fn read_trace(path: &Path) -> Result<RawStream, FormatError> {
    decode_trace(&read_file(path)?)
}

pub fn write_bits(bits: &BitStream, path: &Path) -> Result<(), FormatError> {
    write_atomic(path, &pack_bits(bits))
}

pub fn read_bits(path: &Path) -> Result<BitStream, FormatError> {
    unpack_bits(&read_file(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_body_is_lsb_first() {
        let bits = BitStream::from_ascii("10110000").unwrap();
        let file = pack_bits(&bits);
        assert_eq!(&file[..8], BITS_MAGIC);
        assert_eq!(&file[8..16], &8u64.to_le_bytes());
        assert_eq!(&file[16..], &[0x0D]);
    }

    #[test]
    fn truncated_bit_body_names_lengths() {
        let bits: BitStream = (0..20).map(|k| k % 3 == 0).collect();
        let mut file = pack_bits(&bits);
        file.pop();
        let err = unpack_bits(&file).unwrap_err();
        assert!(matches!(err, FormatError::BodyLength { expected: 3, actual: 2 }));
        assert!(err.to_string().contains("3") && err.to_string().contains("2"));
    }

    #[test]
    fn bit_file_error_classes() {
        let good = pack_bits(&BitStream::from_ascii("101").unwrap());

        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        assert!(matches!(unpack_bits(&bad_magic), Err(FormatError::BadMagic { .. })));

        assert!(matches!(unpack_bits(&good[..12]), Err(FormatError::TruncatedHeader { .. })));
        assert!(matches!(unpack_bits(b"KSQ"), Err(FormatError::BadMagic { .. })));

        let mut padded = good.clone();
        *padded.last_mut().unwrap() |= 0x80;
        assert!(matches!(unpack_bits(&padded), Err(FormatError::NonzeroPadding { .. })));

        let mut long = good;
        long.push(0);
        assert!(matches!(unpack_bits(&long), Err(FormatError::BodyLength { expected: 1, actual: 2 })));
    }

    #[test]
    fn trace_layout() {
        let stream = RawStream::from_symbols(vec![Symbol::One, Symbol::Discard, Symbol::Zero]);
        let file = encode_trace(&stream);
        assert_eq!(&file[..8], TRACE_MAGIC);
        assert_eq!(file[8], 1);
        assert_eq!(&file[9..17], &3u64.to_le_bytes());
        assert_eq!(&file[17..], &[1, 2, 0]);
        assert_eq!(decode_trace(&file).unwrap(), stream);
    }

    #[test]
    fn empty_trace_is_valid() {
        let file = encode_trace(&RawStream::from_symbols(vec![]));
        let s = decode_trace(&file).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.counts().total(), 0);
    }

    #[test]
    fn trace_error_classes() {
        let stream = RawStream::from_symbols(vec![Symbol::Zero; 4]);
        let good = encode_trace(&stream);

        let mut bad = good.clone();
        bad[19] = 0x03;
        match decode_trace(&bad) {
            Err(FormatError::InvalidSymbol { index, offset, byte }) => assert_eq!((index, offset, byte), (2, 19, 3)),
            other => panic!("{other:?}"),
        }

        let mut version = good.clone();
        version[8] = 2;
        assert!(matches!(decode_trace(&version), Err(FormatError::UnsupportedVersion(2))));

        let mut magic = good.clone();
        magic[..8].copy_from_slice(BITS_MAGIC);
        assert!(matches!(decode_trace(&magic), Err(FormatError::BadMagic { .. })));

        assert!(matches!(decode_trace(&good[..20]), Err(FormatError::BodyLength { expected: 4, actual: 3 })));
        assert!(matches!(decode_trace(&good[..10]), Err(FormatError::TruncatedHeader { .. })));
    }
}
