//! Benchmark harness over all partitions of a fixed total.
//!
//! CSV output has one row per partition and algorithm with columns
//! `tuple, algorithm, size, micros`.

use std::io::Write;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::lower_bound;
use crate::error::{Error, Result};
use crate::heuristics::{heuristic, traversal, Strategy};
use crate::verify::reconstruct;
use crate::Weights64;

/// Partitions of `total` into exactly `parts` positive parts, each listed
/// once in nonincreasing order, in descending lexicographic order.
#[derive(Clone, Debug)]
pub struct Partitions {
    current: Option<Vec<u64>>,
}

impl Partitions {
    pub fn new(total: u64, parts: usize) -> Self {
        let current = (parts >= 1 && total >= parts as u64).then(|| {
            let mut v = vec![1; parts];
            v[0] = total - parts as u64 + 1;
            v
        });
        Partitions { current }
    }

    fn advance(v: &mut [u64]) -> bool {
        let m = v.len();
        for i in (0..m.saturating_sub(1)).rev() {
            if v[i] <= 1 {
                continue;
            }
            let cap = v[i] - 1;
            let rest: u64 = v[i..].iter().sum::<u64>() - cap;
            let slots = (m - i - 1) as u64;
            if rest > cap * slots {
                continue;
            }
            v[i] = cap;
            let mut left = rest;
            for (k, slot) in v[i + 1..].iter_mut().enumerate() {
                let after = slots - k as u64 - 1;
                *slot = cap.min(left - after);
                left -= *slot;
            }
            return true;
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        if Self::advance(&mut next) {
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Partitions with coprime parts, as tuples.
pub fn partitions(s_hat: u64, m: usize) -> impl Iterator<Item = Weights64> {
    Partitions::new(s_hat, m)
        .filter(|p| p.iter().fold(0u64, |g, &x| g.gcd(&x)) == 1)
        .map(|p| Weights64::new(p).expect("parts are positive"))
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub budget: u64,
    /// Runs per partition; the fastest is reported.
    pub repeat: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { budget: crate::heuristics::DEFAULT_BUDGET, repeat: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub tuple: String,
    pub algorithm: Strategy,
    pub size: usize,
    pub micros: u128,
    /// The traversal budget ran out and the greedy answer was counted.
    pub partial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Strategy,
    pub total_size: usize,
    pub average_size: f64,
    pub micros: u128,
    pub partial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub schema: &'static str,
    pub s_hat: u64,
    pub m: usize,
    pub partition_count: usize,
    pub algorithms: Vec<AlgorithmSummary>,
    #[serde(skip)]
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn summary(&self, algorithm: Strategy) -> Option<&AlgorithmSummary> {
        self.algorithms.iter().find(|a| a.algorithm == algorithm)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["tuple", "algorithm", "size", "micros"]).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([r.tuple.clone(), r.algorithm.to_string(), r.size.to_string(), r.micros.to_string()])
                .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn run_one(w: &Weights64, algorithm: Strategy, opts: &BenchOptions) -> Result<BenchRow> {
    let mut best = u128::MAX;
    let mut result = None;
    for _ in 0..opts.repeat.max(1) {
        let start = Instant::now();
        let (cfg, partial) = if algorithm.is_traversal() {
            match traversal(w, algorithm, opts.budget) {
                Ok(o) => (o.configuration, !o.exhaustive),
                Err(Error::SearchExhausted { fallback }) => (*fallback, true),
                Err(e) => return Err(e),
            }
        } else {
            (heuristic(w, algorithm)?, false)
        };
        best = best.min(start.elapsed().as_micros());
        result = Some((cfg, partial));
    }
    let (cfg, partial) = result.expect("at least one run");
    let rec = reconstruct(&cfg, w)?;
    if !rec.is_valid() {
        return Err(Error::internal(format!("{algorithm} produced an invalid configuration for {w}: {}", rec.reason.describe())));
    }
    let size = cfg.size();
    if size < lower_bound(w)? {
        return Err(Error::internal(format!("{algorithm} beat the lower bound on {w}")));
    }
    Ok(BenchRow { tuple: w.to_string(), algorithm, size, micros: best, partial })
}

pub fn bench_run(s_hat: u64, m: usize, algorithms: &[Strategy], opts: &BenchOptions) -> Result<BenchReport> {
    if m < 1 || s_hat < m as u64 {
        return Err(Error::invalid(format!("need s_hat >= m >= 1, got s_hat = {s_hat}, m = {m}")));
    }
    let tuples: Vec<Weights64> = partitions(s_hat, m).collect();
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &algorithm in algorithms {
        let runs: Vec<BenchRow> = tuples
            .par_iter()
            .map(|w| run_one(w, algorithm, opts))
            .collect::<Result<_>>()?;
        let total_size: usize = runs.iter().map(|r| r.size).sum();
        summaries.push(AlgorithmSummary {
            algorithm,
            total_size,
            average_size: if runs.is_empty() { 0.0 } else { total_size as f64 / runs.len() as f64 },
            micros: runs.iter().map(|r| r.micros).sum(),
            partial: runs.iter().any(|r| r.partial),
        });
        rows.extend(runs);
    }
    Ok(BenchReport { schema: crate::frontends::SCHEMA, s_hat, m, partition_count: tuples.len(), algorithms: summaries, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_partitions() {
        let all: Vec<_> = Partitions::new(6, 3).collect();
        assert_eq!(all, vec![vec![4, 1, 1], vec![3, 2, 1], vec![2, 2, 2]]);
        let coprime: Vec<_> = partitions(4, 2).map(|w| w.entries().to_vec()).collect();
        assert_eq!(coprime, vec![vec![3, 1]]);
        assert_eq!(Partitions::new(2, 3).count(), 0);
        assert_eq!(Partitions::new(5, 1).collect::<Vec<_>>(), vec![vec![5]]);
    }

    /// Counts from the recurrence p(n, k) = p(n−1, k−1) + p(n−k, k).
    fn count(n: u64, k: u64) -> u64 {
        if k == 0 {
            return u64::from(n == 0);
        }
        if n < k {
            return 0;
        }
        count(n - 1, k - 1) + count(n - k, k)
    }

    #[test]
    fn counts_match_recurrence() {
        for n in 1..=30 {
            for k in 1..=6usize {
                assert_eq!(Partitions::new(n, k).count() as u64, count(n, k as u64), "({n},{k})");
            }
        }
    }

    #[test]
    fn single_bivariate() {
        let r = bench_run(6, 2, &[Strategy::GreedyPowerTwo], &BenchOptions::default()).unwrap();
        assert_eq!(r.partition_count, 1);
        assert_eq!(r.algorithms[0].total_size, 3);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "tuple,algorithm,size,micros\n\"(5,1)\",greedy-power-two,3,".to_string() + &r.rows[0].micros.to_string() + "\n");
    }
}
