//! Independent validity checks for configurations.

mod numeric;
mod reconstruct;

pub use numeric::{numeric_check, numeric_check_with, NumericReport, DEFAULT_SEED};
pub use reconstruct::{reconstruct, Reason, Reconstruction, Verdict};
