//! Packed bit sequences.

use std::fmt;

/// Bits packed least-significant-bit first within each byte.
///
/// Bit `k` lives in `bytes[k / 8]` at position `k % 8`. Bits past `len` in the
/// final byte are always zero, so [`BitStream::as_bytes`] is directly the body
/// of a bit file.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitStream {
    bytes: Vec<u8>,
    len: usize,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitStream { bytes: Vec::with_capacity(bits.div_ceil(8)), len: 0 }
    }

    /// Wraps packed bytes. Returns `None` if `bytes` has the wrong length for
    /// `len` bits or any padding bit is set.
    pub fn from_packed(bytes: Vec<u8>, len: usize) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let stream = BitStream { bytes, len };
        (stream.padding_bits() == 0).then_some(stream)
    }

    /// Parses a string of `'0'`/`'1'` characters, ignoring whitespace.
    pub fn from_ascii(s: &str) -> Option<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Complete bytes only; a trailing partial byte is excluded.
    pub fn full_bytes(&self) -> &[u8] {
        &self.bytes[..self.len / 8]
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        let offset = self.len % 8;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 1 << offset;
        }
        self.len += 1;
    }

    /// Appends the low `count` bits of `value`, lowest first.
    pub fn push_bits(&mut self, value: u8, count: usize) {
        debug_assert!(count <= 8);
        for k in 0..count {
            self.push(value >> k & 1 == 1);
        }
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<bool> {
        (index < self.len).then(|| self.bytes[index / 8] >> (index % 8) & 1 == 1)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |k| self.bytes[k / 8] >> (k % 8) & 1 == 1)
    }

    pub fn append(&mut self, other: &BitStream) {
        if self.len.is_multiple_of(8) {
            self.bytes.extend_from_slice(&other.bytes);
            self.len += other.len;
        } else {
            self.extend(other.iter());
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Ones in the half-open bit range `[start, end)`.
    ///
    /// # Panics
    /// If the range is out of bounds.
    pub fn count_ones_in(&self, start: usize, end: usize) -> usize {
        assert!(start <= end && end <= self.len, "range {start}..{end} out of bounds for {}", self.len);
        let mut count = 0;
        let mut k = start;
        while k < end && !k.is_multiple_of(8) {
            count += self.bytes[k / 8] as usize >> (k % 8) & 1;
            k += 1;
        }
        let full_end = k + (end - k) / 8 * 8;
        count += self.bytes[k / 8..full_end / 8]
            .iter()
            .map(|b| b.count_ones() as usize)
            .sum::<usize>();
        k = full_end;
        while k < end {
            count += self.bytes[k / 8] as usize >> (k % 8) & 1;
            k += 1;
        }
        count
    }

    fn padding_bits(&self) -> u8 {
        match (self.len % 8, self.bytes.last()) {
            (0, _) | (_, None) => 0,
            (used, Some(&last)) => last & !((1u8 << used) - 1),
        }
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut s = BitStream::new();
        s.extend(iter);
        s
    }
}

impl Extend<bool> for BitStream {
    fn extend<I: IntoIterator<Item = bool>>(&mut self, iter: I) {
        for bit in iter {
            self.push(bit);
        }
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 64;
        write!(f, "BitStream({} bits: ", self.len)?;
        for bit in self.iter().take(SHOWN) {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        if self.len > SHOWN {
            f.write_str("...")?;
        }
        f.write_str(")")
    }
}
