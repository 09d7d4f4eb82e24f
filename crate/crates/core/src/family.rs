//! Level families `A_n ⊆ P(n)`.

use crate::error::{Error, Result};
use crate::scalar::{binomial, pow2};
use crate::pi::split_counts;
use crate::word::BitWord;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

/// Families whose membership is a closed-form test on the word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Empty,
    Full,
    /// The last `|t|` bits spell `t`.
    Suffix(BitWord),
    /// Exactly `k` ones.
    Weight(usize),
    /// Exactly `even` ones at even indices and `odd` ones at odd indices.
    SplitWeight { even: usize, odd: usize },
}

impl Predicate {
    pub fn id(&self) -> String {
        match self {
            Predicate::Empty => "empty".into(),
            Predicate::Full => "full".into(),
            Predicate::Suffix(t) => format!("suffix:{t}"),
            Predicate::Weight(k) => format!("weight:{k}"),
            Predicate::SplitWeight { even, odd } => format!("split-weight:{even}:{odd}"),
        }
    }

    fn cardinality(&self, level: usize) -> BigUint {
        match self {
            Predicate::Empty => BigUint::zero(),
            Predicate::Full => pow2(level),
            Predicate::Suffix(t) if t.len() <= level => pow2(level - t.len()),
            Predicate::Suffix(_) => BigUint::zero(),
            Predicate::Weight(k) => binomial(level as u64, *k as u64),
            Predicate::SplitWeight { even, odd } => {
                let (e, o) = split_counts(level);
                binomial(e as u64, *even as u64) * binomial(o as u64, *odd as u64)
            }
        }
    }

    /// Tests `word ↾ level`.
    fn matches_prefix(&self, word: &BitWord, level: usize) -> bool {
        match self {
            Predicate::Empty => false,
            Predicate::Full => true,
            Predicate::Suffix(t) => {
                let k = t.len();
                k <= level && (0..k).all(|j| word.get(level - k + j) == t.get(j))
            }
            Predicate::Weight(k) => word.count_ones_prefix(level) == *k,
            Predicate::SplitWeight { even, odd } => word.count_ones_split_prefix(level) == (*even, *odd),
        }
    }

    /// Tests the word of length `level <= 64` with numeral `rank`.
    fn matches_rank(&self, rank: u64, level: usize) -> bool {
        match self {
            Predicate::Empty => false,
            Predicate::Full => true,
            Predicate::Suffix(t) => {
                let k = t.len();
                k <= level && {
                    let tail = if k == 0 { 0 } else { rank & (u64::MAX >> (64 - k)) };
                    Some(tail) == t.rank_u64()
                }
            }
            Predicate::Weight(k) => rank.count_ones() as usize == *k,
            Predicate::SplitWeight { even, odd } => {
                // Index i sits at numeral bit level-1-i.
                let even_mask = if level % 2 == 1 { 0x5555_5555_5555_5555 } else { 0xAAAA_AAAA_AAAA_AAAA };
                let e = (rank & even_mask).count_ones() as usize;
                let o = (rank & !even_mask).count_ones() as usize;
                (e, o) == (*even, *odd)
            }
        }
    }
}

/// A half-open range `[start, end)` of lexicographic positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexInterval {
    pub start: BigUint,
    pub end: BigUint,
}

impl LexInterval {
    fn len(&self) -> BigUint {
        &self.end - &self.start
    }

    fn contains(&self, rank: &BigUint) -> bool {
        &self.start <= rank && rank < &self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    /// Sorted, duplicate-free members.
    Explicit(Vec<BitWord>),
    Predicate(Predicate),
    /// At most two disjoint intervals.
    LexIntervals(Vec<LexInterval>),
}

/// One level `A_n` of a guessing sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelFamily {
    level: usize,
    repr: Representation,
    cardinality: BigUint,
    /// `u128` copies of the interval bounds when `level <= 64`.
    small_intervals: Option<Vec<(u128, u128)>>,
}

impl LevelFamily {
    pub fn empty(level: usize) -> Self {
        Self::predicate(level, Predicate::Empty)
    }

    pub fn full(level: usize) -> Self {
        Self::predicate(level, Predicate::Full)
    }

    pub fn predicate(level: usize, p: Predicate) -> Self {
        let cardinality = p.cardinality(level);
        Self {
            level,
            repr: Representation::Predicate(p),
            cardinality,
            small_intervals: None,
        }
    }

    /// Explicit family; duplicates are removed, wrong lengths are rejected.
    pub fn explicit(level: usize, mut members: Vec<BitWord>) -> Result<Self> {
        if let Some(bad) = members.iter().find(|w| w.len() != level) {
            return Err(Error::LengthMismatch {
                expected: level,
                actual: bad.len(),
            });
        }
        members.sort_unstable();
        members.dedup();
        let cardinality = BigUint::from(members.len());
        Ok(Self {
            level,
            repr: Representation::Explicit(members),
            cardinality,
            small_intervals: None,
        })
    }

    /// Union of at most two disjoint half-open rank intervals (empty ones are dropped).
    pub fn intervals(level: usize, ranges: Vec<(BigUint, BigUint)>) -> Result<Self> {
        let limit = pow2(level);
        let mut ivs: Vec<LexInterval> = Vec::with_capacity(2);
        for (start, end) in ranges {
            if start > end || end > limit {
                return Err(Error::InvalidFamily(format!(
                    "interval [{start}, {end}) is not inside 2^{level}"
                )));
            }
            if start < end {
                ivs.push(LexInterval { start, end });
            }
        }
        if ivs.len() > 2 {
            return Err(Error::InvalidFamily("at most two intervals are allowed".into()));
        }
        ivs.sort_by(|a, b| a.start.cmp(&b.start));
        if ivs.len() == 2 && ivs[0].end > ivs[1].start {
            return Err(Error::InvalidFamily("intervals overlap".into()));
        }
        let cardinality = ivs.iter().map(LexInterval::len).sum();
        let small_intervals = (level <= 64).then(|| {
            ivs.iter()
                .map(|iv| (iv.start.to_u128().unwrap_or(0), iv.end.to_u128().unwrap_or(0)))
                .collect()
        });
        Ok(Self {
            level,
            repr: Representation::LexIntervals(ivs),
            cardinality,
            small_intervals,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// Exact `|A_n|`.
    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality.is_zero()
    }

    /// `t ∈ A_n`; `t` must have length `n`.
    pub fn contains(&self, t: &BitWord) -> Result<bool> {
        if t.len() != self.level {
            return Err(Error::LengthMismatch {
                expected: self.level,
                actual: t.len(),
            });
        }
        Ok(self.contains_prefix(t))
    }

    /// `w ↾ n ∈ A_n` for a word of length at least `n`.
    pub fn contains_prefix(&self, w: &BitWord) -> bool {
        let n = self.level;
        debug_assert!(w.len() >= n);
        match &self.repr {
            Representation::Predicate(p) => p.matches_prefix(w, n),
            _ if n <= 64 => self.contains_rank(w.prefix_rank_u64(n)),
            Representation::Explicit(members) => members.binary_search(&w.prefix(n)).is_ok(),
            Representation::LexIntervals(ivs) => {
                let r = w.prefix_rank(n);
                ivs.iter().any(|iv| iv.contains(&r))
            }
        }
    }

    /// Membership of the length-`n` word with numeral `rank`; requires `n <= 64`.
    pub fn contains_rank(&self, rank: u64) -> bool {
        let n = self.level;
        assert!(n <= 64, "rank-based membership needs level <= 64");
        match &self.repr {
            Representation::Predicate(p) => p.matches_rank(rank, n),
            Representation::Explicit(members) => members
                .binary_search_by(|m| m.rank_u64().unwrap_or(0).cmp(&rank))
                .is_ok(),
            Representation::LexIntervals(_) => {
                let r = u128::from(rank);
                self.small_intervals
                    .as_deref()
                    .unwrap_or_default()
                    .iter()
                    .any(|&(s, e)| s <= r && r < e)
            }
        }
    }

    /// All members, in lexicographic order. Intended for small levels.
    pub fn members(&self) -> Vec<BitWord> {
        match &self.repr {
            Representation::Explicit(m) => m.clone(),
            Representation::LexIntervals(ivs) => {
                let mut out = Vec::new();
                for iv in ivs {
                    let mut r = iv.start.clone();
                    while r < iv.end {
                        out.push(crate::word::unrank_value(&r, self.level).expect("rank below 2^level"));
                        r += BigUint::one();
                    }
                }
                out
            }
            Representation::Predicate(_) => {
                assert!(self.level < 64, "enumerating a predicate family needs level < 64");
                (0..1u64 << self.level)
                    .filter(|&r| self.contains_rank(r))
                    .map(|r| BitWord::from_rank_u64(r, self.level))
                    .collect()
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct View<'a> {
            level: usize,
            repr: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            members: Option<&'a [BitWord]>,
            #[serde(skip_serializing_if = "Option::is_none")]
            intervals: Option<Vec<[String; 2]>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            predicate_id: Option<String>,
            cardinality: String,
        }
        let mut view = View {
            level: self.level,
            repr: self.repr_name(),
            members: None,
            intervals: None,
            predicate_id: None,
            cardinality: self.cardinality.to_string(),
        };
        match &self.repr {
            Representation::Explicit(m) => view.members = Some(m),
            Representation::Predicate(p) => view.predicate_id = Some(p.id()),
            Representation::LexIntervals(ivs) => {
                view.intervals = Some(ivs.iter().map(|iv| [iv.start.to_string(), iv.end.to_string()]).collect())
            }
        }
        serde_json::to_value(view).expect("level family view serializes")
    }

    pub fn repr_name(&self) -> &'static str {
        match self.repr {
            Representation::Explicit(_) => "explicit",
            Representation::Predicate(_) => "predicate",
            Representation::LexIntervals(_) => "intervals",
        }
    }
}

impl fmt::Display for LevelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{} ({}, |A| = {})", self.level, self.repr_name(), self.cardinality)
    }
}
