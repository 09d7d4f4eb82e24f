//! Scalar types used for probabilities and partial sums.
//!
//! Exact analysis runs over [`BigRational`]; the same routines can be
//! instantiated with `f64`/`f32` when an approximate answer is enough.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use std::fmt::Debug;

/// A field-like scalar that probabilities of the form `a / b` can be mapped into.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Send + Sync {
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self;

    fn from_biguint(value: &BigUint) -> Self {
        Self::from_ratio(value, &BigUint::one())
    }

    fn to_f64(&self) -> f64;

    /// Largest integer not above `self`.
    fn floor_to_biguint(&self) -> BigUint;
}

fn exact_ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

impl Scalar for BigRational {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        exact_ratio(num, den)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn floor_to_biguint(&self) -> BigUint {
        let q = self.numer().div_floor(self.denom());
        q.to_biguint().unwrap_or_default()
    }
}

impl Scalar for f64 {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        ToPrimitive::to_f64(&exact_ratio(num, den)).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn floor_to_biguint(&self) -> BigUint {
        BigUint::from(self.floor().max(0.0) as u128)
    }
}

impl Scalar for f32 {
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        <f64 as Scalar>::from_ratio(num, den) as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn floor_to_biguint(&self) -> BigUint {
        BigUint::from(self.floor().max(0.0) as u128)
    }
}

/// `2^n` as a big integer.
pub fn pow2(n: usize) -> BigUint {
    BigUint::one() << n
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Reduced `p/q` rendering of an exact rational.
pub fn fraction_string(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Seventeen significant digits, enough to round-trip an `f64`.
pub fn sig17(value: f64) -> String {
    format!("{value:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(10, 5), BigUint::from(252u32));
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn ratio_instantiations_agree() {
        let num = BigUint::from(252u32);
        let den = pow2(10);
        let exact = BigRational::from_ratio(&num, &den);
        assert_eq!(fraction_string(&exact), "63/256");
        assert_eq!(<f64 as Scalar>::from_ratio(&num, &den), 63.0 / 256.0);
        assert_eq!(<f32 as Scalar>::from_ratio(&num, &den), 63.0f32 / 256.0);
    }

    #[test]
    fn floor_of_rationals() {
        let r = BigRational::from_ratio(&BigUint::from(7u32), &BigUint::from(2u32));
        assert_eq!(r.floor_to_biguint(), BigUint::from(3u32));
        assert_eq!(3.5f64.floor_to_biguint(), BigUint::from(3u32));
    }
}
