//! The linear system in the triple weights `γ₁ … γ_n`.
//!
//! Row `v` says that every variable is used, with weight, exactly as often
//! as it is produced: `Σ_{v∈{i_t,j_t}} γ_t − 2·Σ_{t_t=v} γ_t` equals `s_v`
//! for a base variable, `−ŝ` for the mean and `0` for other auxiliaries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::linalg::{bareiss, solve, Solution};
use crate::verify::reconstruct;
use crate::weights::WeightTuple;

/// Which validity notion a feasibility test applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Any rational solution of the system.
    Plain,
    /// A rational solution, and the reconstructed point set is valid.
    #[default]
    Strict,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Mode::Plain),
            "strict" => Ok(Mode::Strict),
            _ => Err(Error::invalid(format!("unknown feasibility mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilitySystem {
    /// `(m+n) × n` coefficients.
    pub rows: Vec<Vec<i64>>,
    pub rhs: Vec<BigInt>,
}

impl FeasibilitySystem {
    pub fn build<E: Exponent>(cfg: &Configuration, w: &WeightTuple<E>) -> Result<Self> {
        let m = cfg.m();
        if w.len() != m {
            return Err(Error::invalid(format!("configuration has m = {m} but the tuple has {} entries", w.len())));
        }
        let n = cfg.size();
        let mut rows = vec![vec![0i64; n]; m + n];
        for (t, tr) in cfg.triples().iter().enumerate() {
            rows[tr.left - 1][t] += 1;
            rows[tr.right - 1][t] += 1;
            rows[tr.target - 1][t] -= 2;
        }
        let mut rhs: Vec<BigInt> = w.entries().iter().map(Exponent::to_bigint).collect();
        rhs.push(-w.total().to_bigint());
        rhs.resize(m + n, BigInt::zero());
        Ok(FeasibilitySystem { rows, rhs })
    }

    fn augmented_i128(&self) -> Option<Vec<Vec<i128>>> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let b = i128::try_from(b).ok()?;
                Some(row.iter().map(|&x| x as i128).chain([b]).collect())
            })
            .collect()
    }

    pub fn is_consistent(&self) -> bool {
        let n = self.rows.first().map_or(0, Vec::len);
        if let Some(e) = self.augmented_i128().and_then(bareiss) {
            return e.pivots.iter().all(|&c| c < n);
        }
        self.witness().is_some()
    }

    /// A rational solution with free unknowns at zero.
    pub fn witness(&self) -> Option<Vec<BigRational>> {
        let a: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        match solve(&a, std::slice::from_ref(&self.rhs)) {
            Solution::Inconsistent => None,
            Solution::Solved { mut values, .. } => values.pop(),
        }
    }
}

/// Whether the system for `cfg` has a rational solution, with a witness.
pub fn feasible<E: Exponent>(cfg: &Configuration, w: &WeightTuple<E>) -> Result<Option<Vec<BigRational>>> {
    Ok(FeasibilitySystem::build(cfg, w)?.witness())
}

/// Feasibility under `mode`, without computing a witness.
pub fn is_feasible<E: Exponent>(cfg: &Configuration, w: &WeightTuple<E>, mode: Mode) -> Result<bool> {
    if !FeasibilitySystem::build(cfg, w)?.is_consistent() {
        return Ok(false);
    }
    Ok(match mode {
        Mode::Plain => true,
        Mode::Strict => reconstruct(cfg, w)?.is_valid(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u64]) -> WeightTuple<u64> {
        WeightTuple::from_u64s(v).unwrap()
    }

    #[test]
    fn three_eight() {
        let c = Configuration::from_arrays(2, &[[2, 6, 3], [1, 3, 4], [3, 4, 5], [4, 5, 6]]).unwrap();
        let g = feasible(&c, &w(&[3, 8])).unwrap().expect("feasible");
        let sys = FeasibilitySystem::build(&c, &w(&[3, 8])).unwrap();
        for (row, b) in sys.rows.iter().zip(&sys.rhs) {
            let lhs: BigRational = row.iter().zip(&g).map(|(&a, x)| BigRational::from_integer(a.into()) * x).sum();
            assert_eq!(lhs, BigRational::from_integer(b.clone()));
        }
    }

    #[test]
    fn single_triple() {
        let c = Configuration::from_arrays(2, &[[1, 2, 3]]).unwrap();
        let g = feasible(&c, &w(&[1, 1])).unwrap().unwrap();
        assert_eq!(g, vec![BigRational::from_integer(1.into())]);
        assert!(feasible(&c, &w(&[1, 2])).unwrap().is_none());
        assert!(!is_feasible(&c, &w(&[1, 2]), Mode::Plain).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let c = Configuration::from_arrays(2, &[[1, 2, 3]]).unwrap();
        assert!(matches!(feasible(&c, &w(&[1, 1, 1])), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("plain".parse::<Mode>().unwrap(), Mode::Plain);
        assert_eq!(Mode::default(), Mode::Strict);
        assert!("loose".parse::<Mode>().is_err());
    }
}
