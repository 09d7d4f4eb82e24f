//! Constructions of explicit guessing sequences.

use crate::error::{Error, Result};
use crate::family::{LevelFamily, Predicate};
use crate::pi::{split_weight_target, weight_target, PartialMode, PiBound};
use crate::rng::{substream, DOMAIN_FAMILY_LEVEL};
use crate::scalar::pow2;
use crate::sequence::{FamilyId, GuessingSequence};
use crate::word::{lex_rank, unrank_value, BitWord};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore};
use std::collections::HashSet;
use std::sync::Arc;

/// Largest `π(n)` for which a random family level is materialized.
pub const SAMPLING_BOUND: u64 = 1 << 20;

/// `A_n = {X ⊆ n : n-1 ∈ X}` with `π(n) = 2^(n-1)`.
pub fn gen_tail(n_max: usize) -> GuessingSequence {
    let suffix: BitWord = BitWord::ones(1);
    GuessingSequence::from_fn(FamilyId::Tail, PiBound::pow2_minus(1), n_max, move |n| {
        suffix_level(n, &suffix)
    })
}

fn suffix_level(n: usize, t: &BitWord) -> LevelFamily {
    if n < t.len() {
        LevelFamily::empty(n)
    } else {
        LevelFamily::predicate(n, Predicate::Suffix(t.clone()))
    }
}

/// Freezes the last `k = |t|` bits to spell `t`; `|A_n| = 2^(n-k)` for `n >= k`.
pub fn gen_frozen_suffix(t: &BitWord, n_max: usize) -> Result<GuessingSequence> {
    if t.is_empty() {
        return Err(Error::InvalidFamily("frozen suffix must have length >= 1".into()));
    }
    let t = t.clone();
    let pi = PiBound::pow2_minus(t.len());
    Ok(GuessingSequence::from_fn(FamilyId::Frozen(t.clone()), pi, n_max, move |n| {
        suffix_level(n, &t)
    }))
}

/// Bookkeeping of the moving lexicographic interval at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalCyclingState {
    pub n: usize,
    /// Interval start `s_n`.
    pub s: BitWord,
    /// Interval end `t_n` (exclusive, modulo `2^n`).
    pub t: BitWord,
    pub rounds_completed: u64,
    /// `Σ_{i <= n} π(i) / 2^i`, with the level-0 term clamped to `{0, 1}`.
    pub partial_sum: BigRational,
    /// Whether the interval at this level wrapped past `1̄`, closing a round.
    pub wrapped: bool,
}

/// Runs the interval-cycling recursion for levels `0..=n_max`.
///
/// Level 0 has the single word `∅`; it contributes one round when `π(0) >= 1`.
/// From there `s_{n+1} = t_n⌢0` and `t_{n+1}` sits `π(n+1)` places past
/// `s_{n+1}`, cyclically.
pub fn interval_cycling_states(pi: &PiBound, n_max: usize) -> Result<Vec<IntervalCyclingState>> {
    let c0 = pi.eval_or_zero(0).min(BigUint::one());
    let mut states = Vec::with_capacity(n_max + 1);
    let mut partial_sum = BigRational::from_integer(c0.clone().into());
    let mut rounds = c0.to_u64().unwrap_or(0);
    states.push(IntervalCyclingState {
        n: 0,
        s: BitWord::new(),
        t: BitWord::new(),
        rounds_completed: rounds,
        partial_sum: partial_sum.clone(),
        wrapped: rounds == 1,
    });
    let mut t_rank = BigUint::zero();
    for n in 1..=n_max {
        let width = pi.checked(n)?;
        let size = pow2(n);
        let s_rank: BigUint = &t_rank << 1;
        let end = &s_rank + &width;
        let wrapped = end >= size;
        t_rank = if wrapped { end - &size } else { end };
        if wrapped {
            rounds += 1;
        }
        partial_sum += BigRational::new(width.into(), size.into());
        states.push(IntervalCyclingState {
            n,
            s: unrank_value(&s_rank, n)?,
            t: unrank_value(&t_rank, n)?,
            rounds_completed: rounds,
            partial_sum: partial_sum.clone(),
            wrapped,
        });
    }
    Ok(states)
}

/// Lexicographic-interval family with `|I_n| = π(n)` at every level.
pub fn gen_interval_cycling(pi: &PiBound, n_max: usize) -> Result<GuessingSequence> {
    let states = interval_cycling_states(pi, n_max)?;
    let layout: Arc<Vec<(BigUint, BigUint)>> = Arc::new(
        states
            .iter()
            .map(|st| (lex_rank(&st.s).value().clone(), pi.eval_or_zero(st.n)))
            .collect(),
    );
    let level0_full = states[0].rounds_completed == 1;
    Ok(GuessingSequence::with_trace(
        FamilyId::Cycling(pi.clone()),
        pi.clone(),
        n_max,
        move |n| {
            if n == 0 {
                return if level0_full { LevelFamily::full(0) } else { LevelFamily::empty(0) };
            }
            let (start, width) = &layout[n];
            let size = pow2(n);
            let end = start + width;
            let ranges = if end <= size {
                vec![(start.clone(), end)]
            } else {
                vec![(start.clone(), size.clone()), (BigUint::zero(), end - size)]
            };
            LevelFamily::intervals(n, ranges).expect("cycling intervals stay inside 2^n")
        },
        Some(states),
    ))
}

/// Levels at which a cycling sequence closes a round.
pub fn round_levels(states: &[IntervalCyclingState]) -> Vec<usize> {
    states.iter().filter(|s| s.wrapped).map(|s| s.n).collect()
}

/// `A_n = {X : |X| = n/2}`; see [`PartialMode`] for odd `n`.
pub fn gen_central_binomial_1d(mode: PartialMode, n_max: usize) -> GuessingSequence {
    GuessingSequence::from_fn(
        FamilyId::CentralBinomial1d(mode),
        PiBound::central_binomial_1d(mode),
        n_max,
        move |n| match weight_target(n, mode) {
            Some(k) => LevelFamily::predicate(n, Predicate::Weight(k)),
            None => LevelFamily::empty(n),
        },
    )
}

/// `A_n = {X : |X ∩ evens| = n/4 = |X ∩ odds|}`.
pub fn gen_central_binomial_2d(mode: PartialMode, n_max: usize) -> GuessingSequence {
    GuessingSequence::from_fn(
        FamilyId::CentralBinomial2d(mode),
        PiBound::central_binomial_2d(mode),
        n_max,
        move |n| match split_weight_target(n, mode) {
            Some((even, odd)) => LevelFamily::predicate(n, Predicate::SplitWeight { even, odd }),
            None => LevelFamily::empty(n),
        },
    )
}

/// The dense set of reals guessed by singletons.
///
/// `2^{<ω}` is enumerated in length-lex order (`t_0 = ∅, t_1 = 0, t_2 = 1,
/// t_3 = 00, ..`), `x_j` is `t_j` followed by zeros, and
/// `Y_j = {m >= 1 : ν₂(m) = j}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DenseSingletonScheme;

impl DenseSingletonScheme {
    /// `t_j`.
    pub fn enumerate(&self, j: u64) -> BitWord {
        let len = 63 - (j + 1).leading_zeros() as usize;
        BitWord::from_rank_u64(j + 1 - (1u64 << len), len)
    }

    /// `x_j ↾ len`.
    pub fn point_prefix(&self, j: u64, len: usize) -> BitWord {
        let t = self.enumerate(j);
        if t.len() >= len {
            t.prefix(len)
        } else {
            t.padded_with_zeros(len)
        }
    }

    /// The `j` with `m ∈ Y_j`; level 0 belongs to no part.
    pub fn part_of(&self, m: usize) -> Option<u64> {
        (m >= 1).then(|| u64::from(m.trailing_zeros()))
    }

    /// `Y_j ∩ [1, up_to]`.
    pub fn levels_of(&self, j: u64, up_to: usize) -> impl Iterator<Item = usize> + '_ {
        let step = 1usize.checked_shl(j as u32 + 1).unwrap_or(usize::MAX);
        let first = 1usize.checked_shl(j as u32).unwrap_or(usize::MAX);
        (0..)
            .map(move |i: usize| first.saturating_add(i.saturating_mul(step)))
            .take_while(move |&m| m <= up_to && m != usize::MAX)
    }
}

/// `A_m = {x_j ↾ m}` for `m ∈ Y_j`: one guess per level, a dense guessed set.
pub fn gen_dense_singletons(n_max: usize) -> GuessingSequence {
    let scheme = DenseSingletonScheme;
    GuessingSequence::from_fn(FamilyId::DenseSingletons, PiBound::constant(1), n_max, move |m| {
        match scheme.part_of(m) {
            Some(j) => LevelFamily::explicit(m, vec![scheme.point_prefix(j, m)]).expect("prefix has length m"),
            None => LevelFamily::empty(m),
        }
    })
}

/// Uniformly random `A_n` of size `π(n)`, independently per level.
///
/// Level `n` is drawn from its own substream of `seed`, so the result does
/// not depend on the order in which levels are evaluated.
pub fn gen_random_family(pi: &PiBound, n_max: usize, seed: u64) -> Result<GuessingSequence> {
    let mut sizes = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let k = pi.checked(n)?;
        let k = k.to_u64().filter(|&k| k <= SAMPLING_BOUND).ok_or_else(|| Error::SamplingBound {
            level: n,
            size: k.to_string(),
            bound: SAMPLING_BOUND,
        })?;
        sizes.push(k as usize);
    }
    Ok(GuessingSequence::from_fn(
        FamilyId::Random { pi: pi.clone(), seed },
        pi.clone(),
        n_max,
        move |n| {
            let mut rng = substream(seed, DOMAIN_FAMILY_LEVEL, n as u64);
            let members = sample_distinct_words(n, sizes[n], &mut rng);
            LevelFamily::explicit(n, members).expect("sampled words have length n")
        },
    ))
}

/// `k` distinct words of length `n`, uniform over all `k`-subsets (Floyd's algorithm).
fn sample_distinct_words<R: RngCore>(n: usize, k: usize, rng: &mut R) -> Vec<BitWord> {
    if n < 64 {
        let total = 1u64 << n;
        let mut chosen: HashSet<u64> = HashSet::with_capacity(k);
        for j in total - k as u64..total {
            let r = rng.random_range(0..=j);
            if !chosen.insert(r) {
                chosen.insert(j);
            }
        }
        let mut ranks: Vec<u64> = chosen.into_iter().collect();
        ranks.sort_unstable();
        ranks.into_iter().map(|r| BitWord::from_rank_u64(r, n)).collect()
    } else {
        let total = pow2(n);
        let mut chosen: HashSet<BigUint> = HashSet::with_capacity(k);
        let mut j = &total - BigUint::from(k);
        while j < total {
            let r = uniform_below(&(&j + 1u32), rng);
            if !chosen.insert(r) {
                chosen.insert(j.clone());
            }
            j += 1u32;
        }
        let mut ranks: Vec<BigUint> = chosen.into_iter().collect();
        ranks.sort_unstable();
        ranks.iter().map(|r| unrank_value(r, n).expect("rank below 2^n")).collect()
    }
}

/// Uniform integer in `[0, bound)` by rejection on `bits(bound)` random bits.
fn uniform_below<R: RngCore>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_mask = if bits.is_multiple_of(32) { u32::MAX } else { (1u32 << (bits % 32)) - 1 };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(top) = digits.last_mut() {
            *top &= top_mask;
        }
        let r = BigUint::from_slice(&digits);
        if &r < bound {
            return r;
        }
    }
}

/// Empties the levels below a cutoff `N` so that the result fits `pi_big`.
///
/// With `cutoff = None` the least `N` such that `π(n) <= pi_big(n)` for all
/// `n ∈ [N, n_max]` is used; undefined values count as zero.
pub fn apply_dominance_modification(
    seq: &GuessingSequence,
    pi_big: &PiBound,
    cutoff: Option<usize>,
) -> Result<GuessingSequence> {
    let n_max = seq.n_max();
    let dominated = |n: usize| seq.pi().eval_or_zero(n) <= pi_big.eval_or_zero(n);
    let cutoff = match cutoff {
        Some(c) if c <= n_max && (c..=n_max).all(dominated) => c,
        Some(_) => return Err(Error::NoDominanceCutoff { horizon: n_max }),
        None => {
            let mut c = n_max + 1;
            while c > 0 && dominated(c - 1) {
                c -= 1;
            }
            if c > n_max {
                return Err(Error::NoDominanceCutoff { horizon: n_max });
            }
            c
        }
    };
    let inner = seq.clone();
    Ok(GuessingSequence::from_fn(
        FamilyId::Modified {
            inner: Box::new(seq.id().clone()),
            pi: pi_big.clone(),
            cutoff,
        },
        pi_big.clone(),
        n_max,
        move |n| {
            if n < cutoff {
                LevelFamily::empty(n)
            } else {
                inner.level(n).expect("within horizon").clone()
            }
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn tail_examples() {
        let s = gen_tail(5);
        let a1 = s.level(1).unwrap();
        assert_eq!(a1.cardinality(), &big(1));
        assert!(a1.contains(&w("1")).unwrap());
        assert_eq!(s.level(3).unwrap().cardinality(), &big(4));
        assert!(s.level(3).unwrap().contains(&w("001")).unwrap());
        assert!(!s.level(3).unwrap().contains(&w("110")).unwrap());
        assert_eq!(s.level(5).unwrap().cardinality(), &big(16));
        assert!(s.level(0).unwrap().is_empty());
        s.check_bounds().unwrap();
    }

    #[test]
    fn frozen_suffix_examples() {
        let s = gen_frozen_suffix(&w("1"), 4).unwrap();
        assert_eq!(s.level(4).unwrap().cardinality(), &big(8));
        let s = gen_frozen_suffix(&w("101"), 5).unwrap();
        let members = s.level(5).unwrap().members();
        let expected: Vec<BitWord> = (0..32u64)
            .map(|r| BitWord::from_rank_u64(r, 5))
            .filter(|x| x.get(2) && !x.get(3) && x.get(4))
            .collect();
        assert_eq!(members, expected);
        assert_eq!(members.len(), 4);
        assert!(s.level(2).unwrap().is_empty());
        assert!(gen_frozen_suffix(&BitWord::new(), 3).is_err());
    }

    #[test]
    fn frozen_11_is_the_adjacent_pair_family() {
        let s = gen_frozen_suffix(&w("11"), 14).unwrap();
        for n in 0..=14usize {
            let f = s.level(n).unwrap();
            for r in 0..1u64 << n {
                let x = BitWord::from_rank_u64(r, n);
                let expected = n >= 2 && x.get(n - 1) && x.get(n - 2);
                assert_eq!(f.contains(&x).unwrap(), expected);
            }
        }
    }

    #[test]
    fn cycling_full_budget() {
        let states = interval_cycling_states(&PiBound::pow2_minus(0), 10).unwrap();
        for st in &states {
            assert_eq!(st.rounds_completed, st.n as u64 + 1);
        }
        let s = gen_interval_cycling(&PiBound::pow2_minus(0), 6).unwrap();
        for f in s.levels() {
            assert_eq!(f.cardinality(), &pow2(f.level()));
        }
    }

    #[test]
    fn cycling_constant_one_ends_at_all_ones() {
        let states = interval_cycling_states(&PiBound::constant(1), 20).unwrap();
        for st in states.iter().skip(1) {
            assert_eq!(st.t, BitWord::ones(st.n));
            // invariant (i) in exact arithmetic
            let scaled = (st.partial_sum.clone() * BigRational::from_integer(pow2(st.n).into())).floor_to_biguint();
            assert_eq!(lex_rank(&st.t).value(), &(scaled % pow2(st.n)));
            assert_eq!(st.rounds_completed, 1);
        }
    }

    #[test]
    fn cycling_rejects_oversized_pi() {
        let pi = PiBound::table("t", vec![big(1), big(2), big(5)]);
        assert!(matches!(gen_interval_cycling(&pi, 3), Err(Error::PiExceedsLevel { level: 2, .. })));
    }

    #[test]
    fn cycling_zero_budget_keeps_start_and_is_empty() {
        let pi = PiBound::table("t", vec![big(0), big(1), big(0), big(3)]);
        let states = interval_cycling_states(&pi, 3).unwrap();
        assert_eq!(states[2].s, states[2].t);
        let s = gen_interval_cycling(&pi, 3).unwrap();
        assert!(s.level(2).unwrap().is_empty());
        assert_eq!(s.level(3).unwrap().cardinality(), &big(3));
    }

    #[test]
    fn central_binomial_examples() {
        let r = gen_central_binomial_1d(PartialMode::Rounded, 10);
        let st = gen_central_binomial_1d(PartialMode::Strict, 10);
        assert_eq!(r.level(4).unwrap().cardinality(), &big(6));
        assert_eq!(r.level(3).unwrap().cardinality(), &big(3));
        assert!(st.level(3).unwrap().is_empty());
        assert!(r.level(6).unwrap().contains(&w("111000")).unwrap());
        assert_eq!(r.level(10).unwrap().cardinality(), &big(252));
        let two = gen_central_binomial_2d(PartialMode::Strict, 8);
        assert_eq!(two.level(4).unwrap().cardinality(), &big(4));
        assert_eq!(two.level(8).unwrap().cardinality(), &big(36));
        assert!(two.level(6).unwrap().is_empty());
        for s in [r, st, two, gen_central_binomial_2d(PartialMode::Rounded, 10)] {
            s.check_bounds().unwrap();
        }
    }

    #[test]
    fn dense_scheme_enumeration() {
        let scheme = DenseSingletonScheme;
        let words: Vec<String> = (0..7).map(|j| scheme.enumerate(j).to_string()).collect();
        assert_eq!(words, ["", "0", "1", "00", "01", "10", "11"]);
        assert_eq!(scheme.part_of(12), Some(2));
        assert_eq!(scheme.part_of(0), None);
        assert_eq!(scheme.levels_of(1, 20).collect::<Vec<_>>(), vec![2, 6, 10, 14, 18]);
        assert_eq!(scheme.point_prefix(5, 4), w("1000"));
    }

    #[test]
    fn dense_singletons_levels_are_singletons() {
        let s = gen_dense_singletons(64);
        assert!(s.level(0).unwrap().is_empty());
        for m in 1..=64 {
            assert_eq!(s.level(m).unwrap().cardinality(), &big(1));
        }
        // x_0 is the zero real, guessed at every odd level
        for m in DenseSingletonScheme.levels_of(0, 64) {
            assert!(s.level(m).unwrap().contains(&BitWord::zeros(m)).unwrap());
        }
    }

    #[test]
    fn random_family_basics() {
        let full = gen_random_family(&PiBound::pow2_minus(0), 8, 3).unwrap();
        for f in full.levels() {
            assert_eq!(f.cardinality(), &pow2(f.level()));
        }
        let a = gen_random_family(&PiBound::constant(5), 12, 77).unwrap();
        let b = gen_random_family(&PiBound::constant(5), 12, 77).unwrap();
        // evaluate in opposite orders
        let la: Vec<_> = (0..=12).map(|n| a.level(n).unwrap().clone()).collect();
        let lb: Vec<_> = (0..=12).rev().map(|n| b.level(n).unwrap().clone()).collect();
        assert!(la.iter().eq(lb.iter().rev()));
        a.check_bounds().unwrap();
        assert!(matches!(
            gen_random_family(&PiBound::pow2_minus(0), 21, 0),
            Err(Error::SamplingBound { level: 21, .. })
        ));
    }

    #[test]
    fn random_family_long_levels() {
        let s = gen_random_family(&PiBound::constant(3), 70, 5).unwrap();
        let f = s.level(70).unwrap();
        assert_eq!(f.cardinality(), &big(3));
        for m in f.members() {
            assert!(f.contains(&m).unwrap());
        }
    }

    #[test]
    fn dominance_examples() {
        let seq = gen_frozen_suffix(&w("11"), 12).unwrap();
        let m = apply_dominance_modification(&seq, &PiBound::pow2_minus(1), None).unwrap();
        assert!(matches!(m.id(), FamilyId::Modified { cutoff: 0, .. }));
        for n in 0..=12 {
            assert_eq!(m.level(n).unwrap(), seq.level(n).unwrap());
        }

        let small = GuessingSequence::from_fn(
            FamilyId::Empty,
            PiBound::custom("n+2", |n| Some(BigUint::from(n + 2))),
            12,
            LevelFamily::empty,
        );
        let odd_only = PiBound::custom("2^n*(n mod 2)", |n| Some(pow2(n) * BigUint::from(n % 2)));
        assert!(matches!(
            apply_dominance_modification(&small, &odd_only, None),
            Err(Error::NoDominanceCutoff { horizon: 12 })
        ));

        let k2 = gen_frozen_suffix(&w("11"), 64).unwrap();
        let cb = PiBound::central_binomial_1d(PartialMode::Rounded);
        assert!(apply_dominance_modification(&k2, &cb, None).is_err());
    }

    #[test]
    fn dominance_cutoff_empties_low_levels() {
        let tail = gen_tail(10);
        let pi = PiBound::custom("late", |n| Some(if n >= 4 { pow2(n) } else { BigUint::zero() }));
        let m = apply_dominance_modification(&tail, &pi, None).unwrap();
        assert!(matches!(m.id(), FamilyId::Modified { cutoff: 4, .. }));
        for n in 0..4 {
            assert!(m.level(n).unwrap().is_empty());
        }
        for n in 4..=10 {
            assert_eq!(m.level(n).unwrap(), tail.level(n).unwrap());
        }
        m.check_bounds().unwrap();
        assert!(apply_dominance_modification(&tail, &pi, Some(2)).is_err());
    }
}
