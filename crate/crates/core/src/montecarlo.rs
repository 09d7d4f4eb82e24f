//! Seeded Monte Carlo estimation of guessing statistics.
//!
//! Sample `i` draws its word from substream `i` of the run seed, and all
//! reductions are integer sums, so results do not depend on thread count.

use crate::error::{Error, Result};
use crate::exact::{avoider_probability, count_avoiders, MAX_AVOIDER_DEPTH};
use crate::generators::gen_random_family;
use crate::pi::PiBound;
use crate::report::write_csv;
use crate::rng::{derive_seed, substream, DOMAIN_FAMILY_SEED, DOMAIN_WORDS};
use crate::sequence::GuessingSequence;
use crate::word::BitWord;
use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

/// A word of `len` independent fair bits.
pub fn random_word<R: RngCore>(len: usize, rng: &mut R) -> BitWord {
    let blocks = (0..len.div_ceil(64)).map(|_| rng.next_u64()).collect();
    BitWord::from_blocks(blocks, len)
}

/// Hit statistics of `samples` uniform words against levels `1..=depth`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HitStats {
    pub family: String,
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    /// Number of guessed levels for each sampled word.
    pub hit_counts: Vec<u32>,
    /// `level_hits[n]`: samples guessed at level `n` (index 0 is always 0).
    pub level_hits: Vec<u64>,
    /// `at_least[k-1]`: fraction of samples with at least `k` hits, for
    /// `k = 1..=max hit count`.
    pub at_least: Vec<f64>,
}

impl HitStats {
    /// Empirical `P(at least k hits)`.
    pub fn fraction_at_least(&self, k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        self.at_least.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn mean_hits(&self) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        self.hit_counts.iter().map(|&c| f64::from(c)).sum::<f64>() / self.samples as f64
    }

    /// Empirical frequency of a guess at level `n`.
    pub fn level_frequency(&self, n: usize) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        self.level_hits.get(n).copied().unwrap_or(0) as f64 / self.samples as f64
    }

    /// `(hit_count, frequency)` pairs for every observed count.
    pub fn histogram(&self) -> Vec<(u32, u64)> {
        let max = self.hit_counts.iter().copied().max().unwrap_or(0) as usize;
        let mut h = vec![0u64; max + 1];
        for &c in &self.hit_counts {
            h[c as usize] += 1;
        }
        h.into_iter().enumerate().filter(|&(_, f)| f > 0).map(|(c, f)| (c as u32, f)).collect()
    }

    pub fn histogram_csv(&self) -> String {
        write_csv(
            &["hit_count", "frequency"],
            self.histogram().into_iter().map(|(c, f)| vec![c.to_string(), f.to_string()]),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("hit stats serialize")
    }
}

/// Binomial standard error `√(p(1-p)/m)`.
pub fn binomial_sigma(p: f64, m: usize) -> f64 {
    (p * (1.0 - p) / m as f64).sqrt()
}

pub fn sample_hits(seq: &GuessingSequence, depth: usize, samples: usize, seed: u64) -> Result<HitStats> {
    if depth > seq.n_max() {
        return Err(Error::BeyondHorizon {
            level: depth,
            horizon: seq.n_max(),
        });
    }
    let levels = (1..=depth).map(|n| seq.level(n)).collect::<Result<Vec<_>>>()?;
    let per_sample: Vec<Vec<u32>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, DOMAIN_WORDS, i);
            let w = random_word(depth, &mut rng);
            levels
                .iter()
                .filter(|f| f.contains_prefix(&w))
                .map(|f| f.level() as u32)
                .collect()
        })
        .collect();

    let mut level_hits = vec![0u64; depth + 1];
    let mut hit_counts = Vec::with_capacity(samples);
    for hits in &per_sample {
        hit_counts.push(hits.len() as u32);
        for &n in hits {
            level_hits[n as usize] += 1;
        }
    }
    let max = hit_counts.iter().copied().max().unwrap_or(0) as usize;
    let mut tail = vec![0u64; max + 2];
    for &c in &hit_counts {
        tail[c as usize] += 1;
    }
    for k in (0..=max).rev() {
        tail[k] += tail[k + 1];
    }
    let at_least = (1..=max).map(|k| tail[k] as f64 / samples as f64).collect();
    Ok(HitStats {
        family: seq.id().to_string(),
        samples,
        depth,
        seed,
        hit_counts,
        level_hits,
        at_least,
    })
}

/// Monte Carlo and exact figures for one random family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyEstimate {
    pub family_seed: u64,
    pub at_least_one: f64,
    pub mean_hits: f64,
    /// `at_least[k-1]` as in [`HitStats`].
    pub at_least: Vec<f64>,
    /// `1 - a_N / 2^N` from the avoider count, when `depth` allows it.
    pub exact_at_least_one: Option<f64>,
}

impl FamilyEstimate {
    /// `|empirical - exact|` in units of the binomial standard error at the exact value.
    pub fn sigma_deviation(&self, word_samples: usize) -> Option<f64> {
        let p = self.exact_at_least_one?;
        let sigma = binomial_sigma(p, word_samples);
        let diff = (self.at_least_one - p).abs();
        Some(if sigma == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / sigma
        })
    }
}

/// Outcome of sampling random families of a given budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RandomFamilySummary {
    pub pi: String,
    pub depth: usize,
    pub word_samples: usize,
    pub seed: u64,
    pub families: Vec<FamilyEstimate>,
    pub mean_at_least_one: f64,
    /// Mean over families of the fraction of words with at least `k` hits.
    pub mean_at_least: Vec<f64>,
}

impl RandomFamilySummary {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("summary serializes")
    }
}

/// Draws `family_samples` uniformly random families with `|A_n| = π(n)` and
/// measures, for each, how many of `word_samples` uniform words get guessed.
pub fn estimate_random_families(
    pi: &PiBound,
    depth: usize,
    family_samples: usize,
    word_samples: usize,
    seed: u64,
) -> Result<RandomFamilySummary> {
    let mut families = Vec::with_capacity(family_samples);
    for f in 0..family_samples as u64 {
        let family_seed = derive_seed(seed, DOMAIN_FAMILY_SEED, f);
        let seq = gen_random_family(pi, depth, family_seed)?;
        let stats = sample_hits(&seq, depth, word_samples, family_seed)?;
        let exact_at_least_one = if depth <= MAX_AVOIDER_DEPTH {
            let table = count_avoiders(&seq, depth)?;
            Some(1.0 - avoider_probability::<f64>(&table, depth)?)
        } else {
            None
        };
        families.push(FamilyEstimate {
            family_seed,
            at_least_one: stats.fraction_at_least(1),
            mean_hits: stats.mean_hits(),
            at_least: stats.at_least.clone(),
            exact_at_least_one,
        });
    }
    let count = families.len().max(1) as f64;
    let mean_at_least_one = families.iter().map(|f| f.at_least_one).sum::<f64>() / count;
    let k_max = families.iter().map(|f| f.at_least.len()).max().unwrap_or(0);
    let mean_at_least = (0..k_max)
        .map(|k| families.iter().map(|f| f.at_least.get(k).copied().unwrap_or(0.0)).sum::<f64>() / count)
        .collect();
    Ok(RandomFamilySummary {
        pi: pi.name().to_string(),
        depth,
        word_samples,
        seed,
        families,
        mean_at_least_one,
        mean_at_least,
    })
}
