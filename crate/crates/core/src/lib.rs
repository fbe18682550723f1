//! Second-order cone representations of weighted geometric mean
//! inequalities `x₁^{s₁}⋯x_m^{s_m} ≥ x_{m+1}^{ŝ}`.
//!
//! A representation is a list of quadratic constraints `xᵢxⱼ ≥ x_t²`
//! (a [`Configuration`]). The crate computes bounds on the smallest
//! possible size, exact answers for two variables, heuristic and optimal
//! representations in general, independent validity checks, and
//! conversions from related cone families.

pub mod bench;
pub mod bounds;
pub mod config;
pub mod error;
pub mod exact;
pub mod exponent;
pub mod frontends;
pub mod heuristics;
pub mod linalg;
pub mod medseq;
pub mod verify;
pub mod weights;

pub use bounds::Bounds;
pub use num_bigint::BigUint;
pub use config::{ConfigDocument, Configuration, Triple};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use weights::{BitProfile, WeightTuple};

/// Arbitrary-precision exponent tuple, used for user input.
pub type Weights = WeightTuple<num_bigint::BigUint>;
/// Machine-word exponent tuple, used for sweeps and benchmarks.
pub type Weights64 = WeightTuple<u64>;
