//! Guessing sequences on the Cantor space.
//!
//! A guessing sequence `⟨A_n⟩` picks, at each level `n`, a family
//! `A_n ⊆ P(n)` of finite sets; it guesses a real `X ⊆ ω` at `n` when
//! `X ∩ n ∈ A_n`. This crate builds the classical examples, computes exact
//! hit and avoidance probabilities, estimates guessing statistics by seeded
//! Monte Carlo, relates the central-binomial families to lattice walks, and
//! constructs the sparse tree whose branch set is meager together with an
//! explicit witness of that fact.

pub mod error;
pub mod exact;
pub mod family;
pub mod generators;
pub mod montecarlo;
pub mod pi;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod sequence;
pub mod tree;
pub mod walks;
pub mod word;

pub use error::{Error, Result};
pub use family::{LevelFamily, Predicate, Representation};
pub use pi::{PartialMode, PiBound};
pub use scalar::Scalar;
pub use sequence::{FamilyId, GuessingSequence};
pub use word::{lex_rank, lex_unrank, BitWord, LexPosition};

/// Exact rational scalar used by every exact-analysis path.
pub type ExactScalar = num_rational::BigRational;
/// Big integer used for cardinalities and budgets.
pub type BigCount = num_bigint::BigUint;
/// Exact Borel-Cantelli partial sums.
pub type ExactBcReport = exact::BcReport<ExactScalar>;
/// Floating-point Borel-Cantelli partial sums.
pub type FloatBcReport = exact::BcReport<f64>;
