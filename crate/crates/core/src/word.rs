//! Finite binary words and their lexicographic positions.
//!
//! A word `t` of length `n` is identified with the subset
//! `{i < n : t[i] = 1}` of `{0, .., n-1}`. Index 0 is the leftmost and most
//! significant digit, so the lexicographic position of a word is the value
//! of its binary numeral and appending a digit `b` maps position `p` to
//! `2p + b`.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

const BLOCK: usize = 64;

/// A finite binary string of arbitrary length.
///
/// Bits are packed most-significant first into 64-bit blocks; bits past
/// `len` in the last block are always zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitWord {
    blocks: Vec<u64>,
    len: usize,
}

#[inline]
fn mask_high(bits: usize) -> u64 {
    match bits {
        0 => 0,
        64.. => u64::MAX,
        b => !(u64::MAX >> b),
    }
}

impl BitWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            blocks: vec![0; len.div_ceil(BLOCK)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self {
            blocks: vec![u64::MAX; len.div_ceil(BLOCK)],
            len,
        };
        w.clear_tail();
        w
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut w = Self::new();
        for b in bits {
            w.push(b);
        }
        w
    }

    /// The word of length `len` whose numeral is `rank`. Requires `len <= 64`
    /// and `rank < 2^len`.
    pub fn from_rank_u64(rank: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        debug_assert!(len == 64 || rank >> len == 0);
        if len == 0 {
            return Self::new();
        }
        Self {
            blocks: vec![rank << (64 - len)],
            len,
        }
    }

    /// Builds a word from raw blocks (most significant bit first).
    pub(crate) fn from_blocks(mut blocks: Vec<u64>, len: usize) -> Self {
        blocks.resize(len.div_ceil(BLOCK), 0);
        let mut w = Self { blocks, len };
        w.clear_tail();
        w
    }

    fn clear_tail(&mut self) {
        let rem = self.len % BLOCK;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= mask_high(rem);
            }
        }
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
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.blocks[i / BLOCK] >> (63 - i % BLOCK)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let m = 1u64 << (63 - i % BLOCK);
        if bit {
            self.blocks[i / BLOCK] |= m;
        } else {
            self.blocks[i / BLOCK] &= !m;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(BLOCK) {
            self.blocks.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// The restriction `self ↾ n`.
    pub fn prefix(&self, n: usize) -> BitWord {
        assert!(n <= self.len, "prefix length {n} exceeds word length {}", self.len);
        Self::from_blocks(self.blocks[..n.div_ceil(BLOCK)].to_vec(), n)
    }

    /// The bits at positions `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> BitWord {
        assert!(start <= end && end <= self.len);
        BitWord::from_bits((start..end).map(|i| self.get(i)))
    }

    /// True iff `self ⊑ other`.
    pub fn is_prefix_of(&self, other: &BitWord) -> bool {
        if self.len > other.len {
            return false;
        }
        let full = self.len / BLOCK;
        if self.blocks[..full] != other.blocks[..full] {
            return false;
        }
        let rem = self.len % BLOCK;
        rem == 0 || (other.blocks[full] & mask_high(rem)) == self.blocks[full]
    }

    /// True iff neither word is a prefix of the other.
    pub fn is_incomparable_with(&self, other: &BitWord) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    /// `self` followed by zeros up to length `len` (no-op if already that long).
    pub fn padded_with_zeros(&self, len: usize) -> BitWord {
        if len <= self.len {
            return self.clone();
        }
        let mut blocks = self.blocks.clone();
        blocks.resize(len.div_ceil(BLOCK), 0);
        BitWord { blocks, len }
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// `|self ∩ n|`: number of ones among the first `n` bits.
    pub fn count_ones_prefix(&self, n: usize) -> usize {
        assert!(n <= self.len);
        let full = n / BLOCK;
        let mut c: usize = self.blocks[..full].iter().map(|b| b.count_ones() as usize).sum();
        let rem = n % BLOCK;
        if rem != 0 {
            c += (self.blocks[full] & mask_high(rem)).count_ones() as usize;
        }
        c
    }

    /// Ones at (even, odd) indices among the first `n` bits.
    pub fn count_ones_split_prefix(&self, n: usize) -> (usize, usize) {
        const EVEN: u64 = 0xAAAA_AAAA_AAAA_AAAA;
        assert!(n <= self.len);
        let mut even = 0usize;
        let mut odd = 0usize;
        for (k, &b) in self.blocks[..n.div_ceil(BLOCK)].iter().enumerate() {
            let valid = if (k + 1) * BLOCK <= n { u64::MAX } else { mask_high(n % BLOCK) };
            let b = b & valid;
            even += (b & EVEN).count_ones() as usize;
            odd += (b & !EVEN).count_ones() as usize;
        }
        (even, odd)
    }

    /// Numeral value of the first `n <= 64` bits.
    #[inline]
    pub fn prefix_rank_u64(&self, n: usize) -> u64 {
        debug_assert!(n <= 64 && n <= self.len);
        if n == 0 {
            0
        } else {
            self.blocks[0] >> (64 - n)
        }
    }

    /// Numeral value of the whole word, when it fits (`len <= 64`).
    pub fn rank_u64(&self) -> Option<u64> {
        (self.len <= 64).then(|| self.prefix_rank_u64(self.len))
    }

    /// Numeral value of the first `n` bits as a big integer.
    pub fn prefix_rank(&self, n: usize) -> BigUint {
        assert!(n <= self.len);
        if n <= 64 {
            return BigUint::from(self.prefix_rank_u64(n));
        }
        let full = n / BLOCK;
        let mut acc = BigUint::zero();
        for &b in &self.blocks[..full] {
            acc = (acc << 64) | BigUint::from(b);
        }
        let rem = n % BLOCK;
        if rem != 0 {
            acc = (acc << rem) | BigUint::from(self.blocks[full] >> (64 - rem));
        }
        acc
    }

    /// Appends all bits of `other`.
    pub fn extend_from(&mut self, other: &BitWord) {
        for b in other.iter() {
            self.push(b);
        }
    }
}

/// Length first, then lexicographic; on equal lengths this is the rank order.
impl Ord for BitWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.blocks.cmp(&other.blocks))
    }
}

impl PartialOrd for BitWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord(\"{self}\")")
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::parse(s, "binary words use only '0' and '1'")),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitWord::from_bits)
    }
}

impl Serialize for BitWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Position `0 <= value < 2^level` of a word in the lexicographic order of `2^level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexPosition {
    value: BigUint,
    level: usize,
}

impl LexPosition {
    pub fn new(value: BigUint, level: usize) -> Result<Self> {
        if value.bits() > level as u64 {
            return Err(Error::RankOutOfRange {
                value: value.to_string(),
                level,
            });
        }
        Ok(Self { value, level })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn level(&self) -> usize {
        self.level
    }
}

/// `p_n(t)`: the rank of `t` among the words of its length.
pub fn lex_rank(t: &BitWord) -> LexPosition {
    LexPosition {
        value: t.prefix_rank(t.len()),
        level: t.len(),
    }
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(p: &LexPosition) -> BitWord {
    let level = p.level;
    if level <= 64 {
        return BitWord::from_rank_u64(p.value.to_u64().unwrap_or(0), level);
    }
    // Left-align the numeral into 64-bit blocks.
    let nblocks = level.div_ceil(BLOCK);
    let shifted = &p.value << (nblocks * BLOCK - level);
    let mut digits = shifted.to_u64_digits();
    digits.resize(nblocks, 0);
    digits.reverse();
    BitWord::from_blocks(digits, level)
}

/// Convenience wrapper: unrank a raw value, rejecting `value >= 2^level`.
pub fn unrank_value(value: &BigUint, level: usize) -> Result<BitWord> {
    Ok(lex_unrank(&LexPosition::new(value.clone(), level)?))
}
