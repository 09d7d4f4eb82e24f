//! Guessing sequences `⟨A_n | n < ω⟩`, evaluated lazily up to a horizon.

use crate::error::{Error, Result};
use crate::family::LevelFamily;
use crate::generators::{self, IntervalCyclingState};
use crate::pi::{PartialMode, PiBound};
use crate::word::BitWord;
use num_bigint::BigUint;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

/// Identifies a built-in family together with its parameters.
///
/// Textual grammar: `tail`, `frozen:<bits>`, `cycling:<pi-id>`,
/// `cb1:<mode>`, `cb2:<mode>`, `dense1`, `random:<pi-id>:<seed>`, `empty`.
#[derive(Clone, Debug)]
pub enum FamilyId {
    Tail,
    Frozen(BitWord),
    Cycling(PiBound),
    CentralBinomial1d(PartialMode),
    CentralBinomial2d(PartialMode),
    DenseSingletons,
    Random { pi: PiBound, seed: u64 },
    Empty,
    /// Levels below `cutoff` emptied so that the sequence fits a larger bound.
    Modified {
        inner: Box<FamilyId>,
        pi: PiBound,
        cutoff: usize,
    },
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::Tail => f.write_str("tail"),
            FamilyId::Frozen(t) => write!(f, "frozen:{t}"),
            FamilyId::Cycling(pi) => write!(f, "cycling:{pi}"),
            FamilyId::CentralBinomial1d(m) => write!(f, "cb1:{m}"),
            FamilyId::CentralBinomial2d(m) => write!(f, "cb2:{m}"),
            FamilyId::DenseSingletons => f.write_str("dense1"),
            FamilyId::Random { pi, seed } => write!(f, "random:{pi}:{seed}"),
            FamilyId::Empty => f.write_str("empty"),
            FamilyId::Modified { inner, pi, cutoff } => write!(f, "modified({inner};{pi};N={cutoff})"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let mode = |r: Option<&str>| r.map_or(Ok(PartialMode::default()), str::parse);
        match (head, rest) {
            ("tail", None) => Ok(FamilyId::Tail),
            ("dense1", None) => Ok(FamilyId::DenseSingletons),
            ("empty", None) => Ok(FamilyId::Empty),
            ("frozen", Some(bits)) => {
                let t: BitWord = bits.parse()?;
                if t.is_empty() {
                    return Err(Error::parse(s, "frozen suffix must be nonempty"));
                }
                Ok(FamilyId::Frozen(t))
            }
            ("cycling", Some(pi)) => Ok(FamilyId::Cycling(pi.parse()?)),
            ("cb1", r) => Ok(FamilyId::CentralBinomial1d(mode(r)?)),
            ("cb2", r) => Ok(FamilyId::CentralBinomial2d(mode(r)?)),
            ("random", Some(r)) => {
                let (pi, seed) = r
                    .rsplit_once(':')
                    .ok_or_else(|| Error::parse(s, "expected random:<pi-id>:<seed>"))?;
                let seed = seed.parse().map_err(|_| Error::parse(s, "seed must be a 64-bit unsigned integer"))?;
                Ok(FamilyId::Random { pi: pi.parse()?, seed })
            }
            _ => Err(Error::parse(s, "unknown family identifier")),
        }
    }
}

impl FamilyId {
    /// Builds the sequence through level `n_max`.
    pub fn build(&self, n_max: usize) -> Result<GuessingSequence> {
        match self {
            FamilyId::Tail => Ok(generators::gen_tail(n_max)),
            FamilyId::Frozen(t) => generators::gen_frozen_suffix(t, n_max),
            FamilyId::Cycling(pi) => generators::gen_interval_cycling(pi, n_max),
            FamilyId::CentralBinomial1d(m) => Ok(generators::gen_central_binomial_1d(*m, n_max)),
            FamilyId::CentralBinomial2d(m) => Ok(generators::gen_central_binomial_2d(*m, n_max)),
            FamilyId::DenseSingletons => Ok(generators::gen_dense_singletons(n_max)),
            FamilyId::Random { pi, seed } => generators::gen_random_family(pi, n_max, *seed),
            FamilyId::Empty => Ok(GuessingSequence::empty(n_max)),
            FamilyId::Modified { inner, pi, cutoff } => {
                generators::apply_dominance_modification(&inner.build(n_max)?, pi, Some(*cutoff))
            }
        }
    }
}

type LevelFn = dyn Fn(usize) -> LevelFamily + Send + Sync;

struct Inner {
    id: FamilyId,
    pi: PiBound,
    n_max: usize,
    source: Box<LevelFn>,
    cache: Vec<OnceLock<LevelFamily>>,
    cycling: Option<Vec<IntervalCyclingState>>,
}

/// A guessing sequence with its bound `π`, evaluated on demand for `n <= n_max`.
///
/// Cloning is cheap and clones share the level cache. Each level is computed
/// at most once, even under concurrent access.
#[derive(Clone)]
pub struct GuessingSequence(Arc<Inner>);

impl fmt::Debug for GuessingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GuessingSequence")
            .field("id", &self.0.id.to_string())
            .field("pi", &self.0.pi.name())
            .field("n_max", &self.0.n_max)
            .finish()
    }
}

/// One row of a sequence summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSummary {
    pub n: usize,
    #[serde(serialize_with = "crate::report::biguint_as_string")]
    pub cardinality: BigUint,
    #[serde(serialize_with = "crate::report::opt_biguint_as_string")]
    pub pi: Option<BigUint>,
    pub repr: &'static str,
}

impl GuessingSequence {
    pub(crate) fn from_fn<F>(id: FamilyId, pi: PiBound, n_max: usize, f: F) -> Self
    where
        F: Fn(usize) -> LevelFamily + Send + Sync + 'static,
    {
        Self::with_trace(id, pi, n_max, f, None)
    }

    pub(crate) fn with_trace<F>(
        id: FamilyId,
        pi: PiBound,
        n_max: usize,
        f: F,
        cycling: Option<Vec<IntervalCyclingState>>,
    ) -> Self
    where
        F: Fn(usize) -> LevelFamily + Send + Sync + 'static,
    {
        Self(Arc::new(Inner {
            id,
            pi,
            n_max,
            source: Box::new(f),
            cache: (0..=n_max).map(|_| OnceLock::new()).collect(),
            cycling,
        }))
    }

    /// The sequence with every `A_n = ∅`.
    pub fn empty(n_max: usize) -> Self {
        Self::from_fn(FamilyId::Empty, PiBound::constant(0), n_max, LevelFamily::empty)
    }

    pub fn id(&self) -> &FamilyId {
        &self.0.id
    }

    pub fn pi(&self) -> &PiBound {
        &self.0.pi
    }

    pub fn n_max(&self) -> usize {
        self.0.n_max
    }

    pub fn level(&self, n: usize) -> Result<&LevelFamily> {
        let slot = self.0.cache.get(n).ok_or(Error::BeyondHorizon {
            level: n,
            horizon: self.0.n_max,
        })?;
        Ok(slot.get_or_init(|| (self.0.source)(n)))
    }

    /// Levels `0..=n_max` in order.
    pub fn levels(&self) -> impl Iterator<Item = &LevelFamily> + '_ {
        (0..=self.0.n_max).map(move |n| self.level(n).expect("within horizon"))
    }

    /// Interval-cycling bookkeeping, present only for cycling sequences.
    pub fn cycling_trace(&self) -> Option<&[IntervalCyclingState]> {
        self.0.cycling.as_deref()
    }

    /// `|A_n| <= π(n)` at every level (levels where `π` is undefined must be empty).
    pub fn check_bounds(&self) -> Result<()> {
        for n in 0..=self.0.n_max {
            let card = self.level(n)?.cardinality();
            let ok = match self.0.pi.eval(n) {
                Some(p) => *card <= p,
                None => card == &BigUint::default(),
            };
            if !ok {
                return Err(Error::InvalidFamily(format!(
                    "{}: |A_{n}| = {card} exceeds pi({n}) = {:?}",
                    self.0.id,
                    self.0.pi.eval(n)
                )));
            }
        }
        Ok(())
    }

    pub fn summary(&self) -> Vec<LevelSummary> {
        self.levels()
            .map(|f| LevelSummary {
                n: f.level(),
                cardinality: f.cardinality().clone(),
                pi: self.0.pi.eval(f.level()),
                repr: f.repr_name(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_ids_round_trip_through_display() {
        for id in ["tail", "frozen:11", "cycling:const:1", "cb1:strict", "cb2:rounded", "dense1", "random:pow2minus:1:42", "empty"] {
            let parsed: FamilyId = id.parse().unwrap();
            assert_eq!(parsed.to_string(), id);
        }
        let cb1: FamilyId = "cb1".parse().unwrap();
        assert_eq!(cb1.to_string(), "cb1:rounded");
    }

    #[test]
    fn bad_family_ids() {
        for id in ["", "tails", "frozen:", "frozen:12", "random:const:1", "random:const:1:x", "cb1:loose", "cycling:nope"] {
            assert!(id.parse::<FamilyId>().is_err(), "{id}");
        }
    }

    #[test]
    fn horizon_is_enforced() {
        let s = GuessingSequence::empty(3);
        assert!(s.level(3).is_ok());
        assert!(matches!(s.level(4), Err(Error::BeyondHorizon { level: 4, horizon: 3 })));
        assert_eq!(s.levels().count(), 4);
    }

    #[test]
    fn concurrent_level_evaluation_is_idempotent() {
        let seq: GuessingSequence = "random:pow2minus:3:9".parse::<FamilyId>().unwrap().build(12).unwrap();
        let first: Vec<LevelFamily> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..4)
                .map(|_| {
                    let s = seq.clone();
                    scope.spawn(move || s.level(12).unwrap().clone())
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(first.windows(2).all(|w| w[0] == w[1]));
    }
}
