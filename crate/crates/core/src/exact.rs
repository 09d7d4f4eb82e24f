//! Exact analysis: hit probabilities, avoider counts, partial sums.

use crate::error::{Error, Result};
use crate::family::LevelFamily;
use crate::pi::PiBound;
use crate::report::{exact_columns, write_csv};
use crate::scalar::{binomial, pow2, sig17, Scalar};
use crate::sequence::GuessingSequence;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Largest depth accepted by [`count_avoiders`]; the level-`N` bitmap takes `2^N` bits.
pub const MAX_AVOIDER_DEPTH: usize = 30;

/// `|A_n| / 2^n`: the chance that a uniform real is guessed at level `n`.
pub fn level_hit_probability<S: Scalar>(family: &LevelFamily) -> S {
    S::from_ratio(family.cardinality(), &pow2(family.level()))
}

/// `a_N`: the number of words of length `N` with no prefix guessed at any
/// level `1..=N`, for `N = 0..=depth`.
///
/// Level 0 is not counted as a guess (its only word is the empty prefix
/// every real shares), so `a_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvoiderTable {
    pub family: String,
    pub counts: Vec<u64>,
}

impl AvoiderTable {
    pub fn depth(&self) -> usize {
        self.counts.len() - 1
    }

    /// `a_0 <= 1`, `a_{N+1} <= 2 a_N`.
    pub fn check_invariants(&self) -> bool {
        self.counts[0] <= 1 && self.counts.windows(2).all(|w| w[1] <= 2 * w[0])
    }

    pub fn to_csv(&self) -> String {
        let rows = self.counts.iter().enumerate().map(|(n, &c)| {
            let p = BigRational::new(BigInt::from(c), BigInt::from(pow2(n)));
            let (frac, float) = exact_columns(&p);
            vec![n.to_string(), c.to_string(), frac, float]
        });
        write_csv(&["N", "count", "probability", "probability_float"], rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .counts
            .iter()
            .enumerate()
            .map(|(n, &c)| {
                let p = BigRational::new(BigInt::from(c), BigInt::from(pow2(n)));
                let (frac, float) = exact_columns(&p);
                serde_json::json!({ "N": n, "count": c.to_string(), "probability": frac, "probability_float": float })
            })
            .collect();
        serde_json::json!({ "family": self.family, "rows": rows })
    }
}

/// Forward dynamic program over surviving prefixes.
///
/// The survivors of length `N` are kept as a dense bitmap (bit `r` set iff
/// the word with numeral `r` survives); each step extends every survivor by
/// one bit and clears the children that land in `A_{N+1}`. Families need not
/// be Markovian, so nothing coarser than the full bitmap is sound in general.
pub fn count_avoiders(seq: &GuessingSequence, depth: usize) -> Result<AvoiderTable> {
    if depth > MAX_AVOIDER_DEPTH {
        return Err(Error::DepthTooLarge {
            depth,
            max: MAX_AVOIDER_DEPTH,
        });
    }
    if depth > seq.n_max() {
        return Err(Error::BeyondHorizon {
            level: depth,
            horizon: seq.n_max(),
        });
    }
    let mut bitmap: Vec<u64> = vec![1];
    let mut counts = vec![1u64];
    for n in 1..=depth {
        let family = seq.level(n)?;
        bitmap = extend_survivors(&bitmap, family, n);
        counts.push(bitmap.iter().map(|w| u64::from(w.count_ones())).sum());
    }
    Ok(AvoiderTable {
        family: seq.id().to_string(),
        counts,
    })
}

fn extend_survivors(old: &[u64], family: &LevelFamily, n: usize) -> Vec<u64> {
    let total = 1u64 << n;
    let words = (total as usize).div_ceil(64);
    let child_word = |j: usize| -> u64 {
        // children 64j..64j+63 have parents 32j..32j+31
        let parents = (old[j / 2] >> ((j % 2) * 32)) & 0xFFFF_FFFF;
        if parents == 0 {
            return 0;
        }
        let mut out = 0u64;
        for b in 0..64u64 {
            let child = 64 * j as u64 + b;
            if child >= total {
                break;
            }
            if (parents >> (b / 2)) & 1 == 1 && !family.contains_rank(child) {
                out |= 1 << b;
            }
        }
        out
    };
    if words >= 1 << 12 {
        (0..words).into_par_iter().map(child_word).collect()
    } else {
        (0..words).map(child_word).collect()
    }
}

/// `a_N / 2^N`: probability that a uniform real has no guess in levels `1..=N`.
pub fn avoider_probability<S: Scalar>(table: &AvoiderTable, n: usize) -> Result<S> {
    let count = table.counts.get(n).ok_or(Error::BeyondHorizon {
        level: n,
        horizon: table.depth(),
    })?;
    Ok(S::from_ratio(&BigUint::from(*count), &pow2(n)))
}

/// Partial sums `S_N = Σ_{n <= N} π(n) / 2^n` (undefined `π(n)` read as 0).
#[derive(Clone, Debug, PartialEq)]
pub struct BcReport<S> {
    pub pi: String,
    pub sums: Vec<S>,
}

impl<S: Scalar> BcReport<S> {
    pub fn depth(&self) -> usize {
        self.sums.len() - 1
    }

    pub fn sum(&self, n: usize) -> &S {
        &self.sums[n]
    }

    /// `S_{factor·N} / S_N`, when both are available and `S_N > 0`.
    pub fn growth_ratio(&self, n: usize, factor: usize) -> Option<S> {
        let big = self.sums.get(n.checked_mul(factor)?)?;
        let small = &self.sums[n];
        (!small.is_zero()).then(|| big.clone() / small.clone())
    }

    /// `(N, S_{2N} / S_N)` for every `N >= 1` with `2N <= depth`.
    pub fn doubling_ratios(&self) -> Vec<(usize, S)> {
        (1..=self.depth() / 2)
            .filter_map(|n| self.growth_ratio(n, 2).map(|r| (n, r)))
            .collect()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.sums.windows(2).all(|w| w[0] <= w[1])
    }
}

impl BcReport<BigRational> {
    pub fn to_csv(&self) -> String {
        let rows = self.sums.iter().enumerate().map(|(n, s)| {
            let (frac, float) = exact_columns(s);
            let ratio = self.growth_ratio(n, 2).map(|r| sig17(r.to_f64())).unwrap_or_default();
            vec![n.to_string(), frac, float, ratio]
        });
        write_csv(&["N", "partial_sum", "partial_sum_float", "doubling_ratio"], rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .sums
            .iter()
            .enumerate()
            .map(|(n, s)| {
                let (frac, float) = exact_columns(s);
                let ratio = self.growth_ratio(n, 2).map(|r| sig17(r.to_f64()));
                serde_json::json!({ "N": n, "partial_sum": frac, "partial_sum_float": float, "doubling_ratio": ratio })
            })
            .collect();
        serde_json::json!({ "pi": self.pi, "rows": rows })
    }
}

pub fn bc_partial_sums<S: Scalar>(pi: &PiBound, depth: usize) -> BcReport<S> {
    let mut acc = S::zero();
    let sums = (0..=depth)
        .map(|n| {
            acc = acc.clone() + S::from_ratio(&pi.eval_or_zero(n), &pow2(n));
            acc.clone()
        })
        .collect();
    BcReport {
        pi: pi.name().to_string(),
        sums,
    }
}

/// A nonnegative decimal `digits / 10^scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    digits: BigUint,
    scale: u32,
}

impl Decimal {
    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    /// The string truncated to `sig` significant digits.
    pub fn significant(&self, sig: usize) -> String {
        let full = self.to_string();
        let mut seen = 0usize;
        let mut started = false;
        let mut out = String::new();
        for c in full.chars() {
            if c.is_ascii_digit() {
                if c != '0' {
                    started = true;
                }
                if started {
                    if seen == sig {
                        break;
                    }
                    seen += 1;
                }
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.digits.to_string();
        let scale = self.scale as usize;
        if scale == 0 {
            return f.write_str(&s);
        }
        let padded = if s.len() <= scale { format!("{}{s}", "0".repeat(scale + 1 - s.len())) } else { s };
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{int}.{frac}")
    }
}

/// Significant digits reported for the Stirling ratio.
pub const STIRLING_DIGITS: usize = 50;
/// Working precision (fractional digits) behind [`STIRLING_DIGITS`].
const WORK_DIGITS: u32 = 70;

/// `C(n, n/2)` together with `C(n, n/2)·√(πn) / (√2·2^n)`, which tends to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingRatio {
    pub n: u64,
    pub central_binomial: BigUint,
    pub ratio: Decimal,
}

impl StirlingRatio {
    pub fn ratio_f64(&self) -> f64 {
        self.ratio.to_f64()
    }

    /// `|ratio - 1|`.
    pub fn deviation(&self) -> f64 {
        (self.ratio_f64() - 1.0).abs()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "central_binomial": self.central_binomial.to_string(),
            "ratio": self.ratio.significant(STIRLING_DIGITS),
            "deviation_from_one": sig17(self.deviation()),
        })
    }
}

pub fn stirling_ratio(n: u64) -> Result<StirlingRatio> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::OddOrZero(n));
    }
    let central_binomial = binomial(n, n / 2);
    // sqrt(π n / 2) scaled by 10^WORK_DIGITS
    let pi_scaled = pi_fixed(2 * WORK_DIGITS);
    let root = (pi_scaled * n / 2u32).sqrt();
    let digits = (&central_binomial * root) >> (n as usize);
    Ok(StirlingRatio {
        n,
        central_binomial,
        ratio: Decimal {
            digits,
            scale: WORK_DIGITS,
        },
    })
}

/// `⌊π · 10^digits⌋` (up to a few units in the last place), by Machin's formula.
fn pi_fixed(digits: u32) -> BigUint {
    let guard = 10u32;
    let scale = BigInt::from(10u32).pow(digits + guard);
    let pi = BigInt::from(16) * arctan_inv(5, &scale) - BigInt::from(4) * arctan_inv(239, &scale);
    (pi / BigInt::from(10u32).pow(guard)).to_biguint().expect("pi is positive")
}

/// `arctan(1/x) · scale` by its alternating series.
fn arctan_inv(x: u32, scale: &BigInt) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = scale / x;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// Binet's closed form `(φ^k - ψ^k) / √5`.
pub fn fibonacci_closed_form(k: u32) -> f64 {
    let sqrt5 = 5f64.sqrt();
    let phi = (1.0 + sqrt5) / 2.0;
    let psi = (1.0 - sqrt5) / 2.0;
    (phi.powi(k as i32) - psi.powi(k as i32)) / sqrt5
}

/// `F_k` with `F_0 = 0, F_1 = 1`.
pub fn fibonacci(k: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}
