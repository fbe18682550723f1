//! Randomised spot-check of the inequality chain in floating point.
//!
//! Base values are sampled, the mean variable is set at (or just below,
//! or just above) the weighted geometric mean, and every other auxiliary
//! gets the largest value its defining constraint allows. Each auxiliary
//! only ever appears on the small side of its own constraint and on the
//! large side elsewhere, so the maximal choice is the best possible one:
//! if it violates some constraint, no assignment satisfies them all.

use num_bigint::BigInt;
use num_traits::{Float, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Configuration, Triple};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::linalg::rank;
use crate::weights::WeightTuple;

pub const DEFAULT_SEED: u64 = 42;

const SHRINK: [f64; 2] = [0.0, 1e-6];
const INFEASIBLE: f64 = -1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericReport {
    pub trials: usize,
    /// Feasible samples whose maximal assignment broke a constraint.
    pub feasible_rejected: usize,
    /// Infeasible samples for which the assignment still fit.
    pub infeasible_accepted: usize,
    pub passed: bool,
}

/// How the auxiliaries other than the mean receive their maximal values.
enum Plan {
    /// One at a time, each from already known variables.
    Ordered(Vec<Triple>),
    /// Some auxiliaries feed each other; their maximal values are the fixed
    /// point of the averaging map, a nonsingular linear system in log space.
    Fixpoint { aux: Vec<usize>, triples: Vec<Triple> },
}

impl Plan {
    fn of(cfg: &Configuration) -> Result<Self> {
        let m = cfg.m();
        let mut known = vec![false; cfg.variable_count() + 1];
        known[1..=m + 1].iter_mut().for_each(|k| *k = true);
        let mut pending: Vec<Triple> = cfg.triples().iter().copied().filter(|t| t.target != m + 1).collect();
        let all = pending.clone();
        let mut order = Vec::with_capacity(pending.len());
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|t| {
                if known[t.left] && known[t.right] {
                    known[t.target] = true;
                    order.push(*t);
                    false
                } else {
                    true
                }
            });
            if pending.len() == before {
                return Self::fixpoint(all);
            }
        }
        Ok(Plan::Ordered(order))
    }

    fn fixpoint(triples: Vec<Triple>) -> Result<Self> {
        let aux: Vec<usize> = triples.iter().map(|t| t.target).collect();
        let pos = |v: usize| aux.iter().position(|&a| a == v);
        let mut a = vec![vec![BigInt::zero(); aux.len()]; aux.len()];
        for (r, t) in triples.iter().enumerate() {
            a[r][r] += 2;
            for v in [t.left, t.right] {
                if let Some(c) = pos(v) {
                    a[r][c] -= 1;
                }
            }
        }
        if rank(&a) < aux.len() {
            return Err(Error::MalformedConfiguration(format!(
                "auxiliaries {aux:?} average among themselves, so their values are unconstrained"
            )));
        }
        Ok(Plan::Fixpoint { aux, triples })
    }

    fn assign<F: Float>(&self, y: &mut [F]) {
        let two = F::one() + F::one();
        match self {
            Plan::Ordered(order) => {
                for t in order {
                    y[t.target] = (y[t.left] + y[t.right]) / two;
                }
            }
            Plan::Fixpoint { aux, triples } => {
                let k = aux.len();
                let mut a = vec![vec![F::zero(); k + 1]; k];
                for (r, t) in triples.iter().enumerate() {
                    a[r][r] = a[r][r] + two;
                    for v in [t.left, t.right] {
                        match aux.iter().position(|&x| x == v) {
                            Some(c) => a[r][c] = a[r][c] - F::one(),
                            None => a[r][k] = a[r][k] + y[v],
                        }
                    }
                }
                for (v, x) in aux.iter().zip(gauss(a)) {
                    y[*v] = x;
                }
            }
        }
    }
}

/// Gaussian elimination with partial pivoting on an augmented square
/// system already known to be nonsingular.
fn gauss<F: Float>(mut a: Vec<Vec<F>>) -> Vec<F> {
    let k = a.len();
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        a.swap(c, p);
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest {
            let f = row[c] / pivot[c];
            row.iter_mut().zip(pivot).skip(c).for_each(|(x, &v)| *x = *x - f * v);
        }
    }
    let mut x = vec![F::zero(); k];
    for r in (0..k).rev() {
        let tail = (r + 1..k).fold(a[r][k], |acc, j| acc - a[r][j] * x[j]);
        x[r] = tail / a[r][r];
    }
    x
}

/// Log-space sample check. Returns whether every constraint held.
fn trial_holds<F: Float>(cfg: &Configuration, plan: &Plan, logs: &[F], mean: F, tol: F) -> bool {
    let m = cfg.m();
    let mut y = vec![F::zero(); cfg.variable_count() + 1];
    y[1..=m].copy_from_slice(logs);
    y[m + 1] = mean;
    let two = F::one() + F::one();
    plan.assign(&mut y);
    cfg.triples().iter().all(|t| {
        let slack = y[t.left] + y[t.right] - two * y[t.target];
        let scale = F::one().max(y[t.left].abs() + y[t.right].abs());
        slack >= -tol * scale
    })
}

pub fn numeric_check<E: Exponent>(cfg: &Configuration, w: &WeightTuple<E>, trials: usize, seed: u64) -> Result<NumericReport> {
    numeric_check_with::<f64, E>(cfg, w, trials, seed, 1e-9)
}

/// Same as [`numeric_check`] in a chosen float type and relative tolerance.
pub fn numeric_check_with<F, E>(cfg: &Configuration, w: &WeightTuple<E>, trials: usize, seed: u64, tol: f64) -> Result<NumericReport>
where
    F: Float + Send + Sync,
    E: Exponent,
{
    let m = cfg.m();
    if w.len() != m {
        return Err(Error::invalid(format!("configuration has m = {m} but the tuple has {} entries", w.len())));
    }
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let plan = Plan::of(cfg)?;
    let total = w.total().to_f64();
    let fractions: Vec<f64> = w.entries().iter().map(|s| s.to_f64() / total).collect();
    let cast = |x: f64| F::from(x).expect("float conversion");
    let tol = cast(tol);

    let (rejected, accepted) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
            let xs: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..=10.0)).collect();
            let logs: Vec<F> = xs.iter().map(|x| cast(x.ln())).collect();
            let gm: f64 = xs.iter().zip(&fractions).map(|(x, f)| x.ln() * f).sum();
            let feasible_ok = SHRINK
                .iter()
                .all(|eps| trial_holds(cfg, &plan, &logs, cast(gm + (1.0 - eps).ln()), tol));
            let infeasible_ok = trial_holds(cfg, &plan, &logs, cast(gm + (1.0 - INFEASIBLE).ln()), tol);
            (usize::from(!feasible_ok), usize::from(infeasible_ok))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    Ok(NumericReport {
        trials,
        feasible_rejected: rejected,
        infeasible_accepted: accepted,
        passed: rejected == 0 && accepted == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::reconstruct;

    fn w(v: &[u64]) -> WeightTuple<u64> {
        WeightTuple::from_u64s(v).unwrap()
    }

    #[test]
    fn single_triple() {
        let c = Configuration::from_arrays(2, &[[1, 2, 3]]).unwrap();
        assert!(numeric_check(&c, &w(&[1, 1]), 100, 42).unwrap().passed);
    }

    #[test]
    fn three_eight() {
        let c = Configuration::from_arrays(2, &[[2, 6, 3], [1, 3, 4], [3, 4, 5], [4, 5, 6]]).unwrap();
        let report = numeric_check(&c, &w(&[3, 8]), 1000, 7).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn mutated_configuration_fails() {
        let good = Configuration::from_arrays(2, &[[2, 4, 3], [1, 3, 4]]).unwrap();
        let bad = Configuration::from_arrays(2, &[[2, 4, 3], [2, 3, 4]]).unwrap();
        let s = w(&[1, 2]);
        assert!(reconstruct(&good, &s).unwrap().is_valid());
        assert!(!reconstruct(&bad, &s).unwrap().is_valid());
        assert!(numeric_check(&good, &s, 200, 3).unwrap().passed);
        assert!(!numeric_check(&bad, &s, 200, 3).unwrap().passed);
    }

    #[test]
    fn mutual_dependency_uses_fixpoint() {
        // x₄, x₅ only feed each other and the mean, so the bases never matter
        let c = Configuration::from_arrays(2, &[[4, 5, 3], [3, 5, 4], [3, 4, 5]]).unwrap();
        let report = numeric_check(&c, &w(&[1, 1]), 20, 0).unwrap();
        assert_eq!(report.infeasible_accepted, 20);
    }

    #[test]
    fn closed_cycle_is_malformed() {
        let c = Configuration::from_arrays(2, &[[1, 2, 3], [5, 6, 4], [4, 6, 5], [4, 5, 6]]).unwrap();
        assert!(matches!(numeric_check(&c, &w(&[1, 1]), 1, 0), Err(Error::MalformedConfiguration(_))));
    }

    #[test]
    fn fixpoint_matches_reconstruct() {
        // x₅ and x₆ need each other
        let good = Configuration::from_arrays(3, &[[1, 5, 4], [2, 6, 5], [3, 5, 6]]).unwrap();
        let bad = Configuration::from_arrays(3, &[[1, 5, 4], [2, 6, 5], [2, 5, 6]]).unwrap();
        let s = w(&[3, 2, 1]);
        assert!(reconstruct(&good, &s).unwrap().is_valid());
        assert!(numeric_check(&good, &s, 500, 1).unwrap().passed);
        assert!(!reconstruct(&bad, &s).unwrap().is_valid());
        assert!(!numeric_check(&bad, &s, 500, 1).unwrap().passed);
    }

    #[test]
    fn single_precision_runs() {
        let c = Configuration::from_arrays(2, &[[1, 2, 3]]).unwrap();
        assert!(numeric_check_with::<f32, _>(&c, &w(&[1, 1]), 50, 1, 1e-5).unwrap().passed);
    }

    #[test]
    fn zero_trials() {
        let c = Configuration::from_arrays(2, &[[1, 2, 3]]).unwrap();
        assert!(numeric_check(&c, &w(&[1, 1]), 0, 0).is_err());
    }
}
