//! Fixed-length packed bit strings.
//!
//! [`BitString`] backs the player input strings in [`crate::instances`]: a
//! string of `len` bits stored in 64-bit blocks with position-order hex
//! serialization (bit 0 is the most significant bit of the first hex nibble).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitStringError {
    #[error("hex string {got:?} has {got_nibbles} nibbles, expected {want_nibbles} for {len} bits")]
    HexLength {
        got: String,
        got_nibbles: usize,
        want_nibbles: usize,
        len: usize,
    },
    #[error("invalid hex digit {0:?}")]
    BadHexDigit(char),
    #[error("padding bits beyond position {len} must be zero")]
    DirtyPadding { len: usize },
}

/// A fixed-length string of bits with 0-based positions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    blocks: Vec<u64>,
}

impl BitString {
    /// All-zero string of `len` bits.
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    /// Parses a `'0'`/`'1'` literal, first character = position 0.
    ///
    /// Panics on other characters; intended for fixtures and tests.
    pub fn from_bits01(s: &str) -> Self {
        let mut out = BitString::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.set(i, true),
                other => panic!("bit literal must be 0 or 1, got {other:?}"),
            }
        }
        out
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut out = BitString::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                out.set(i, true);
            }
        }
        out
    }

    /// The `'0'`/`'1'` literal, inverse of [`BitString::from_bits01`].
    pub fn to_string01(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "bit position {pos} out of range 0..{}", self.len);
        self.blocks[pos / 64] >> (pos % 64) & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len, "bit position {pos} out of range 0..{}", self.len);
        let mask = 1u64 << (pos % 64);
        if value {
            self.blocks[pos / 64] |= mask;
        } else {
            self.blocks[pos / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Positions holding a 1, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    /// Positions where both strings hold a 1, ascending.
    ///
    /// Panics if lengths differ.
    pub fn intersection(&self, other: &BitString) -> Vec<usize> {
        assert_eq!(self.len, other.len, "bit string length mismatch");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .enumerate()
            .flat_map(|(bi, (a, b))| {
                let mut word = a & b;
                let mut out = Vec::new();
                while word != 0 {
                    let bit = word.trailing_zeros() as usize;
                    out.push(bi * 64 + bit);
                    word &= word - 1;
                }
                out
            })
            .collect()
    }

    /// Hex in position order: bit 0 is the MSB of the first nibble, the final
    /// nibble is zero-padded. The empty string serializes as `""`.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.len.div_ceil(4));
        for nib in 0..self.len.div_ceil(4) {
            let mut v = 0u8;
            for j in 0..4 {
                let pos = nib * 4 + j;
                if pos < self.len && self.get(pos) {
                    v |= 1 << (3 - j);
                }
            }
            out.push(char::from_digit(v as u32, 16).unwrap());
        }
        out
    }

    /// Inverse of [`to_hex`](Self::to_hex); `len` is required because hex
    /// alone cannot recover it.
    pub fn from_hex(len: usize, hex: &str) -> Result<Self, BitStringError> {
        let want = len.div_ceil(4);
        if hex.len() != want {
            return Err(BitStringError::HexLength {
                got: hex.to_string(),
                got_nibbles: hex.len(),
                want_nibbles: want,
                len,
            });
        }
        let mut out = BitString::zeros(len);
        for (nib, c) in hex.chars().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or(BitStringError::BadHexDigit(c))? as u8;
            for j in 0..4 {
                if v >> (3 - j) & 1 == 1 {
                    let pos = nib * 4 + j;
                    if pos >= len {
                        return Err(BitStringError::DirtyPadding { len });
                    }
                    out.set(pos, true);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn set_get_roundtrip() {
        let mut s = BitString::zeros(130);
        assert_eq!(s.count_ones(), 0);
        s.set(0, true);
        s.set(63, true);
        s.set(64, true);
        s.set(129, true);
        assert!(s.get(0) && s.get(63) && s.get(64) && s.get(129));
        assert!(!s.get(1) && !s.get(128));
        assert_eq!(s.count_ones(), 4);
        s.set(64, false);
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![0, 63, 129]);
    }

    #[test]
    fn hex_examples() {
        assert_eq!(BitString::from_bits01("010").to_hex(), "4");
        assert_eq!(BitString::from_bits01("10000").to_hex(), "80");
        assert_eq!(BitString::from_bits01("1111").to_hex(), "f");
        assert_eq!(BitString::from_hex(3, "4").unwrap(), BitString::from_bits01("010"));
        assert_eq!(BitString::from_hex(5, "80").unwrap(), BitString::from_bits01("10000"));
    }

    #[test]
    fn hex_rejects_bad_input() {
        assert!(matches!(
            BitString::from_hex(3, "40"),
            Err(BitStringError::HexLength { .. })
        ));
        assert!(matches!(
            BitString::from_hex(3, "g"),
            Err(BitStringError::BadHexDigit('g'))
        ));
        // 3-bit string whose padding bit (position 3) is set.
        assert!(matches!(
            BitString::from_hex(3, "1"),
            Err(BitStringError::DirtyPadding { len: 3 })
        ));
    }

    #[test]
    fn intersection_positions() {
        let a = BitString::from_bits01("110010");
        let b = BitString::from_bits01("011011");
        assert_eq!(a.intersection(&b), vec![1, 4]);
        assert_eq!(b.intersection(&a), vec![1, 4]);
        assert_eq!(a.intersection(&BitString::zeros(6)), Vec::<usize>::new());
    }

    proptest! {
        #[test]
        fn hex_roundtrip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let mut s = BitString::zeros(bits.len());
            for (i, &b) in bits.iter().enumerate() {
                s.set(i, b);
            }
            let back = BitString::from_hex(s.len(), &s.to_hex()).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn intersection_matches_naive(
            bits in proptest::collection::vec((any::<bool>(), any::<bool>()), 0..150)
        ) {
            let mut a = BitString::zeros(bits.len());
            let mut b = BitString::zeros(bits.len());
            let mut naive = Vec::new();
            for (i, &(x, y)) in bits.iter().enumerate() {
                a.set(i, x);
                b.set(i, y);
                if x && y {
                    naive.push(i);
                }
            }
            prop_assert_eq!(a.intersection(&b), naive);
        }
    }
}
