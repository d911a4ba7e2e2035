//! Adjacency classes in permutations, block-move sorting distances, and
//! expected-cost estimation.
//!
//! The crate is organised around four ideas:
//!
//! - [`permutation`]: the `Permutation` value type, four adjacency
//!   conventions, reduction to irreducible form, and the brute-force class
//!   enumeration used as a verification oracle.
//! - [`counting`]: `O(n^2)` recurrences for the class cardinalities
//!   `|P_n(k)|` with arbitrary-precision integers, plus closed-form
//!   cross-checks (derangements, binomial multiplicities).
//! - [`blockmoves`]: transpositions, prefix transpositions and suffix
//!   transpositions; exact distance tables for all of `P_n` at desk scale
//!   via breadth-first search; optimal single-instance solving.
//! - [`estimator`]: the double-move probability `sigma`, the per-move
//!   adjacency yield `psi`, and the recurrence that predicts average
//!   sorting cost for sizes beyond exact-search reach.

pub mod blockmoves;
pub mod cache;
pub mod counting;
pub mod estimator;
pub mod permutation;
pub mod render;

pub use blockmoves::{
    apply_move, BlockMove, BlockMoveKind, DistanceTable, InvarianceReport,
};
pub use counting::CountTable;
pub use estimator::{EstimateModel, PsiMode};
pub use permutation::{AdjacencyType, Permutation};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// A request was refused because it would exceed a configured oracle or
    /// search budget (factorial blowup guard).
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("undefined: {0}")]
    Undefined(String),
    /// Two routes that must agree exactly did not.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Renders an exact rational rounded half-to-even to two decimals, the
/// format used by all table emitters.
pub fn format_rational_2dp(r: &BigRational) -> String {
    let scaled = r * BigRational::from_integer(100.into());
    let floor = scaled.floor().to_integer();
    let frac = &scaled - BigRational::from_integer(floor.clone());
    let half = BigRational::new(1.into(), 2.into());
    let round_down = frac < half || (frac == half && (&floor % 2u8).is_zero());
    let mut cents = if round_down { floor } else { floor + 1 };
    let neg = cents.is_negative();
    if neg {
        cents = -cents;
    }
    let whole = &cents / 100u8;
    let rem = &cents % 100u8;
    format!("{}{}.{:02}", if neg { "-" } else { "" }, whole, rem)
}

/// Lossy conversion for tolerance comparisons; exact values stay rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
