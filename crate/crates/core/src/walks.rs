//! Simple random walks on `Z^d` and their correspondence with words.
//!
//! A word drives a one-dimensional walk by reading `1` as a step `+1` and `0`
//! as `-1`, so the walk is at the origin after `n` steps exactly when the
//! prefix of length `n` has weight `n/2`. Splitting the indices into evens
//! and odds gives two such walks, i.e. a walk on `Z^2`.

use crate::error::{Error, Result};
use crate::report::write_csv;
use crate::rng::{substream, DOMAIN_WALKS};
use crate::scalar::{binomial, pow2, Scalar};
use crate::word::BitWord;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;

/// Positions `S_0 = 0, S_1, .., S_N` of a lattice path, stored flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkPath {
    dim: usize,
    coords: Vec<i64>,
}

impl WalkPath {
    fn start(dim: usize, steps: usize) -> Self {
        let mut coords = Vec::with_capacity(dim * (steps + 1));
        coords.resize(dim, 0);
        Self { dim, coords }
    }

    fn step(&mut self, axis: usize, delta: i64) {
        let last = self.coords.len() - self.dim;
        self.coords.extend_from_within(last..);
        let n = self.coords.len();
        self.coords[n - self.dim + axis] += delta;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> usize {
        self.coords.len() / self.dim - 1
    }

    /// `S_n`.
    pub fn position(&self, n: usize) -> &[i64] {
        &self.coords[n * self.dim..(n + 1) * self.dim]
    }

    pub fn at_origin(&self, n: usize) -> bool {
        self.position(n).iter().all(|&c| c == 0)
    }

    /// Steps `n >= 1` at which the path is at the origin.
    pub fn return_times(&self) -> Vec<usize> {
        (1..=self.steps()).filter(|&n| self.at_origin(n)).collect()
    }

    /// Every step moves exactly one coordinate by exactly one.
    pub fn is_nearest_neighbor(&self) -> bool {
        self.position(0).iter().all(|&c| c == 0)
            && (1..=self.steps()).all(|n| {
                let (a, b) = (self.position(n - 1), self.position(n));
                a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<i64>() == 1
            })
    }
}

/// One `±1` step per bit.
pub fn word_to_walk_1d(w: &BitWord) -> WalkPath {
    let mut path = WalkPath::start(1, w.len());
    for b in w.iter() {
        path.step(0, if b { 1 } else { -1 });
    }
    path
}

/// Even-indexed bits move the first axis, odd-indexed bits the second.
pub fn word_to_walk_2d(w: &BitWord) -> WalkPath {
    let mut path = WalkPath::start(2, w.len());
    for (i, b) in w.iter().enumerate() {
        path.step(i % 2, if b { 1 } else { -1 });
    }
    path
}

/// `P(S_n = 0) = C(n, n/2) / 2^n` for the one-dimensional walk (0 for odd `n`).
pub fn exact_return_probability_1d<S: Scalar>(n: usize) -> S {
    if n % 2 == 1 {
        return S::zero();
    }
    S::from_ratio(&binomial(n as u64, n as u64 / 2), &pow2(n))
}

/// Return statistics of independent nearest-neighbour walks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceStats {
    pub dim: usize,
    pub walks: usize,
    pub steps: usize,
    pub seed: u64,
    /// First step `n >= 1` at the origin, per walk.
    pub first_return: Vec<Option<u64>>,
    /// Number of visits to the origin in steps `1..=steps`, per walk.
    pub returns: Vec<u64>,
}

impl RecurrenceStats {
    /// Fraction of walks that revisit the origin within `steps`.
    pub fn return_fraction(&self) -> f64 {
        self.return_fraction_by(self.steps)
    }

    /// Fraction of walks that revisit the origin within `n <= steps` steps.
    pub fn return_fraction_by(&self, n: usize) -> f64 {
        if self.walks == 0 {
            return 0.0;
        }
        let hit = self.first_return.iter().filter(|t| t.is_some_and(|t| t as usize <= n)).count();
        hit as f64 / self.walks as f64
    }

    pub fn mean_returns(&self) -> f64 {
        if self.walks == 0 {
            return 0.0;
        }
        self.returns.iter().sum::<u64>() as f64 / self.walks as f64
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "walks": self.walks,
            "steps": self.steps,
            "seed": self.seed,
            "return_fraction": self.return_fraction(),
            "mean_returns": self.mean_returns(),
        })
    }

    /// Per-walk `walk,first_return,returns`; a walk that never returns has an empty field.
    pub fn return_times_csv(&self) -> String {
        let rows = self.first_return.iter().zip(&self.returns).enumerate().map(|(i, (t, r))| {
            vec![i.to_string(), t.map(|t| t.to_string()).unwrap_or_default(), r.to_string()]
        });
        write_csv(&["walk", "first_return", "returns"], rows)
    }
}

/// Simulates `walks` walks of `steps` steps on `Z^dim`, each of the `2·dim`
/// unit steps having probability `1/(2·dim)`.
pub fn simulate_recurrence(dim: usize, steps: usize, walks: usize, seed: u64) -> Result<RecurrenceStats> {
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidDimension(dim));
    }
    let results: Vec<(Option<u64>, u64)> = (0..walks as u64)
        .into_par_iter()
        .map(|i| run_walk(dim, steps, &mut substream(seed, DOMAIN_WALKS, i)))
        .collect();
    let (first_return, returns) = results.into_iter().unzip();
    Ok(RecurrenceStats {
        dim,
        walks,
        steps,
        seed,
        first_return,
        returns,
    })
}

fn run_walk<R: RngCore>(dim: usize, steps: usize, rng: &mut R) -> (Option<u64>, u64) {
    let mut pos = [0i64; 3];
    let mut first = None;
    let mut returns = 0u64;
    let mut bits = 0u64;
    let mut left = 0u32;
    for n in 1..=steps as u64 {
        let dir = if dim == 3 {
            rng.random_range(0..6u32)
        } else {
            // 1 bit per step in 1D, 2 bits in 2D
            let need = dim as u32;
            if left < need {
                bits = rng.next_u64();
                left = 64;
            }
            let d = (bits & ((1 << need) - 1)) as u32;
            bits >>= need;
            left -= need;
            d
        };
        let axis = (dir / 2) as usize;
        pos[axis] += if dir % 2 == 0 { 1 } else { -1 };
        if pos == [0, 0, 0] {
            returns += 1;
            first.get_or_insert(n);
        }
    }
    (first, returns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn one_dimensional_examples() {
        let p = word_to_walk_1d(&w("10"));
        assert_eq!((0..=2).map(|n| p.position(n)[0]).collect::<Vec<_>>(), vec![0, 1, 0]);
        assert_eq!(p.return_times(), vec![2]);
        let p = word_to_walk_1d(&w("111"));
        assert_eq!(p.position(3), &[3]);
        assert!(p.return_times().is_empty());
        let at_origin = (0..256u64).filter(|&r| word_to_walk_1d(&BitWord::from_rank_u64(r, 8)).at_origin(8)).count();
        assert_eq!(at_origin, 70);
    }

    #[test]
    fn two_dimensional_examples() {
        assert!(word_to_walk_2d(&w("1100")).at_origin(4));
        assert_eq!(word_to_walk_2d(&w("11")).position(2), &[1, 1]);
        let at_origin = (0..256u64).filter(|&r| word_to_walk_2d(&BitWord::from_rank_u64(r, 8)).at_origin(8)).count();
        assert_eq!(at_origin, 36);
        assert!(word_to_walk_2d(&w("1011001")).is_nearest_neighbor());
    }

    #[test]
    fn exact_returns() {
        let p: BigRational = exact_return_probability_1d(2);
        assert_eq!(p, BigRational::new(1.into(), 2.into()));
        let p: BigRational = exact_return_probability_1d(10);
        assert_eq!(p, BigRational::new(63.into(), 256.into()));
        let p: f64 = exact_return_probability_1d(7);
        assert_eq!(p, 0.0);
    }

    #[test]
    fn two_step_return_rates() {
        let m = 100_000;
        for (dim, p) in [(1usize, 0.5f64), (2, 0.25)] {
            let stats = simulate_recurrence(dim, 2, m, 0).unwrap();
            // at step 1 the walk cannot be at the origin
            let sigma = (p * (1.0 - p) / m as f64).sqrt();
            assert!((stats.return_fraction() - p).abs() <= 3.0 * sigma, "dim {dim}");
        }
    }

    #[test]
    fn recurrence_is_deterministic_and_monotone() {
        let a = simulate_recurrence(2, 500, 200, 4).unwrap();
        let b = simulate_recurrence(2, 500, 200, 4).unwrap();
        assert_eq!(a, b);
        let fr: Vec<f64> = (0..=500).step_by(25).map(|n| a.return_fraction_by(n)).collect();
        assert!(fr.windows(2).all(|w| w[0] <= w[1]));
        assert!(simulate_recurrence(4, 10, 10, 0).is_err());
        assert!(simulate_recurrence(0, 10, 10, 0).is_err());
    }

    #[test]
    fn csv_marks_non_returning_walks() {
        let stats = RecurrenceStats {
            dim: 1,
            walks: 2,
            steps: 4,
            seed: 0,
            first_return: vec![Some(2), None],
            returns: vec![2, 0],
        };
        assert_eq!(stats.return_times_csv(), "walk,first_return,returns\n0,2,2\n1,,0\n");
    }
}
