use std::fmt;

use smallvec::SmallVec;

/// A fixed-length binary vector over GF(2).
///
/// Bit `i` lives in block `i / 64` at position `i % 64`. Bits past `len` are
/// always zero, so equality and hashing work on the raw blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    len: usize,
    blocks: SmallVec<[u64; 1]>,
}

fn block_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        BitWord {
            len,
            blocks: SmallVec::from_elem(0, block_count(len)),
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self::zeros(len);
        for b in w.blocks.iter_mut() {
            *b = u64::MAX;
        }
        w.mask_tail();
        w
    }

    /// Builds a word from explicit 0/1 values. Any nonzero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                w.set(i, true);
            }
        }
        w
    }

    /// Parses a string of `0`/`1` characters, index 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        let mut w = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set(i, true),
                _ => return None,
            }
        }
        Some(w)
    }

    /// Word whose first `len.min(64)` bits are taken from `value`, bit `i` of
    /// the integer landing at index `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut w = Self::zeros(len);
        if !w.blocks.is_empty() {
            w.blocks[0] = value;
        }
        w.mask_tail();
        w
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.blocks[i / 64] |= mask;
        } else {
            self.blocks[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.blocks[i / 64] ^= 1u64 << (i % 64);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// In-place XOR. Panics on length mismatch.
    #[inline]
    pub fn xor_assign(&mut self, other: &BitWord) {
        assert_eq!(self.len, other.len, "xor of words with different lengths");
        for (a, b) in self.blocks.iter_mut().zip(other.blocks.iter()) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitWord) -> BitWord {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitWord) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self
            .blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// The complement `1 - v`.
    pub fn complement(&self) -> BitWord {
        let mut out = self.clone();
        for b in out.blocks.iter_mut() {
            *b = !*b;
        }
        out.mask_tail();
        out
    }

    /// Positions of the 1 bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.ones_iter().collect()
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let t = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(bi * 64 + t)
            })
        })
    }

    /// Copy with one extra bit appended at the end.
    pub fn push(&self, bit: bool) -> BitWord {
        let mut out = BitWord::zeros(self.len + 1);
        out.blocks[..self.blocks.len()].copy_from_slice(&self.blocks);
        if bit {
            out.set(self.len, true);
        }
        out
    }

    /// Returns the word with coordinates reordered so that output position
    /// `i` holds input position `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> BitWord {
        assert_eq!(perm.len(), self.len);
        let mut out = BitWord::zeros(self.len);
        for (i, &src) in perm.iter().enumerate() {
            if self.get(src) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}
