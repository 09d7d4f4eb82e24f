//! Cardinality budgets `π(n)` for level families.

use crate::error::{Error, Result};
use crate::scalar::{binomial, pow2};
use num_bigint::BigUint;
use num_traits::Zero;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

/// How a budget that only makes sense on part of `ω` (such as `C(n, n/2)`)
/// is extended to every level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PartialMode {
    /// Undefined off-domain; the family is empty there.
    Strict,
    /// Replace each half by its ceiling so the rule is defined everywhere.
    #[default]
    Rounded,
}

impl fmt::Display for PartialMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartialMode::Strict => "strict",
            PartialMode::Rounded => "rounded",
        })
    }
}

impl FromStr for PartialMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(PartialMode::Strict),
            "rounded" => Ok(PartialMode::Rounded),
            _ => Err(Error::parse(s, "mode must be `strict` or `rounded`")),
        }
    }
}

/// Required number of ones at level `n` for the one-dimensional
/// central-binomial family.
pub fn weight_target(n: usize, mode: PartialMode) -> Option<usize> {
    match mode {
        PartialMode::Strict => n.is_multiple_of(2).then_some(n / 2),
        PartialMode::Rounded => Some(n.div_ceil(2)),
    }
}

/// Required numbers of ones at (even, odd) indices at level `n` for the
/// two-dimensional family. In rounded mode each axis independently uses the
/// ceiling of half of its own step count.
pub fn split_weight_target(n: usize, mode: PartialMode) -> Option<(usize, usize)> {
    match mode {
        PartialMode::Strict => n.is_multiple_of(4).then_some((n / 4, n / 4)),
        PartialMode::Rounded => {
            let (even, odd) = split_counts(n);
            Some((even.div_ceil(2), odd.div_ceil(2)))
        }
    }
}

/// Number of even and odd indices below `n`.
pub fn split_counts(n: usize) -> (usize, usize) {
    (n.div_ceil(2), n / 2)
}

type PiFn = Arc<dyn Fn(usize) -> Option<BigUint> + Send + Sync>;

#[derive(Clone)]
enum Rule {
    /// `min(c, 2^n)`.
    Const(BigUint),
    /// `⌊2^(n-k)⌋`.
    Pow2Minus(usize),
    CentralBinomial1d(PartialMode),
    CentralBinomial2d(PartialMode),
    /// Defined exactly on the table's index range.
    Table(Arc<Vec<BigUint>>),
    Custom(PiFn),
}

/// A named bound `n ↦ π(n)`, possibly partial.
#[derive(Clone)]
pub struct PiBound {
    name: String,
    rule: Rule,
}

impl fmt::Debug for PiBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiBound({})", self.name)
    }
}

impl fmt::Display for PiBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl PiBound {
    pub fn constant(c: u64) -> Self {
        Self {
            name: format!("const:{c}"),
            rule: Rule::Const(BigUint::from(c)),
        }
    }

    /// `π(n) = 2^(n-k)` (zero below `k`). `k = 0` is the full budget `2^n`.
    pub fn pow2_minus(k: usize) -> Self {
        Self {
            name: format!("pow2minus:{k}"),
            rule: Rule::Pow2Minus(k),
        }
    }

    pub fn central_binomial_1d(mode: PartialMode) -> Self {
        Self {
            name: format!("cb1:{mode}"),
            rule: Rule::CentralBinomial1d(mode),
        }
    }

    pub fn central_binomial_2d(mode: PartialMode) -> Self {
        Self {
            name: format!("cb2:{mode}"),
            rule: Rule::CentralBinomial2d(mode),
        }
    }

    pub fn table(name: impl Into<String>, values: Vec<BigUint>) -> Self {
        Self {
            name: name.into(),
            rule: Rule::Table(Arc::new(values)),
        }
    }

    /// Reads whitespace- or comma-separated decimal values; entry `i` is `π(i)`.
    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let values = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<BigUint>().map_err(|_| Error::parse(s, "expected a nonnegative integer")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::table(format!("table:{}", path.display()), values))
    }

    pub fn custom<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize) -> Option<BigUint> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            rule: Rule::Custom(Arc::new(f)),
        }
    }

    /// Parses `const:<c>`, `pow2minus:<k>`, `cb1[:<mode>]`, `cb2[:<mode>]` or `table:<path>`.
    pub fn parse(id: &str) -> Result<Self> {
        let (head, rest) = match id.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (id, None),
        };
        let number = |s: Option<&str>| -> Result<u64> {
            s.ok_or_else(|| Error::parse(id, "missing numeric argument"))?
                .parse()
                .map_err(|_| Error::parse(id, "expected a nonnegative integer"))
        };
        let mode = |s: Option<&str>| -> Result<PartialMode> { s.map_or(Ok(PartialMode::default()), str::parse) };
        match head {
            "const" => Ok(Self::constant(number(rest)?)),
            "pow2minus" => Ok(Self::pow2_minus(number(rest)? as usize)),
            "cb1" => Ok(Self::central_binomial_1d(mode(rest)?)),
            "cb2" => Ok(Self::central_binomial_2d(mode(rest)?)),
            "table" => {
                let path = rest.filter(|p| !p.is_empty()).ok_or_else(|| Error::parse(id, "missing table path"))?;
                Self::from_table_file(Path::new(path))
            }
            _ => Err(Error::parse(id, "unknown pi identifier")),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `π(n)`, or `None` off the domain of a partial bound.
    pub fn eval(&self, n: usize) -> Option<BigUint> {
        match &self.rule {
            Rule::Const(c) => Some(c.clone().min(pow2(n))),
            Rule::Pow2Minus(k) => Some(if n >= *k { pow2(n - k) } else { BigUint::zero() }),
            Rule::CentralBinomial1d(mode) => weight_target(n, *mode).map(|w| binomial(n as u64, w as u64)),
            Rule::CentralBinomial2d(mode) => split_weight_target(n, *mode).map(|(a, b)| {
                let (even, odd) = split_counts(n);
                binomial(even as u64, a as u64) * binomial(odd as u64, b as u64)
            }),
            Rule::Table(values) => values.get(n).cloned(),
            Rule::Custom(f) => f(n),
        }
    }

    /// `π(n)` with undefined levels read as zero.
    pub fn eval_or_zero(&self, n: usize) -> BigUint {
        self.eval(n).unwrap_or_default()
    }

    pub fn is_defined(&self, n: usize) -> bool {
        self.eval(n).is_some()
    }

    /// `π(n)` (zero off-domain), rejecting values above `2^n`.
    pub fn checked(&self, n: usize) -> Result<BigUint> {
        let v = self.eval_or_zero(n);
        if v > pow2(n) {
            return Err(Error::PiExceedsLevel {
                level: n,
                value: v.to_string(),
            });
        }
        Ok(v)
    }
}

impl FromStr for PiBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
