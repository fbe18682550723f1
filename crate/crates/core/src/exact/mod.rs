//! Optimal representations by exhaustive search over canonical
//! configurations, with exact rational feasibility tests.

mod brute;
mod catalog;
mod enumerate;
mod feasible;
mod space;

pub use brute::{brute_force, brute_force_with, feasibility_index, BruteForceOptions, BruteForceOutcome, FeasibilityIndex, DEFAULT_CAP};
pub use catalog::{cached, catalog_load, catalog_path, catalog_store, tabulated_count, Catalog, TABULATED_COUNTS};
pub use enumerate::{configuration_of, enumerate_configs, Pair, PairLists};
pub use feasible::{feasible, is_feasible, FeasibilitySystem, Mode};
