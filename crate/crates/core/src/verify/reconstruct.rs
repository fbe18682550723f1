//! Exact reconstruction of the mediated set a configuration describes.
//!
//! Base variables sit on the vertices of a scaled simplex: `xᵢ` at `ŝ·eᵢ`
//! for `i < m` and `x_m` at the origin. Every triple asks its target to be
//! the midpoint of its two inputs; solving for the auxiliary points is a
//! square linear system.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::linalg::{solve, Solution};
use crate::weights::WeightTuple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    Valid,
    /// The midpoint system is singular: some auxiliaries only average
    /// among themselves.
    InvalidCyclic,
    /// The mean variable does not land on the weighted point.
    WrongMean,
    OutsideSimplex,
    /// An auxiliary coincides with a base vertex.
    OnVertex,
}

impl Reason {
    pub fn describe(self) -> &'static str {
        match self {
            Reason::Valid => "valid",
            Reason::InvalidCyclic => "invalid-cyclic: midpoint system is singular",
            Reason::WrongMean => "mean variable is not at the weighted point",
            Reason::OutsideSimplex => "a reconstructed point leaves the simplex",
            Reason::OnVertex => "a reconstructed point sits on a base vertex",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub reason: Reason,
    /// Base points, `x₁ … x_m`.
    pub trellis: Vec<Vec<BigRational>>,
    /// Points of `x_{m+1} … x_{m+n}`; empty when the system is singular.
    pub points: Vec<Vec<BigRational>>,
    pub warnings: Vec<String>,
}

impl Reconstruction {
    pub fn is_valid(&self) -> bool {
        self.reason == Reason::Valid
    }

    pub fn verdict(&self) -> Verdict {
        Verdict {
            valid: self.is_valid(),
            reason: self.reason.describe().to_string(),
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|x| x.to_string()).collect())
                .collect(),
            warnings: self.warnings.clone(),
        }
    }
}

/// Serialised verdict: `{"valid", "reason", "points"}` plus any warnings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub reason: String,
    pub points: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn vertex(v: usize, m: usize, scale: &BigInt) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); m - 1];
    if v < m {
        p[v - 1] = scale.clone();
    }
    p
}

pub fn reconstruct<E: Exponent>(cfg: &Configuration, w: &WeightTuple<E>) -> Result<Reconstruction> {
    let m = cfg.m();
    if w.len() != m {
        return Err(Error::invalid(format!("configuration has m = {m} but the tuple has {} entries", w.len())));
    }
    if m < 2 {
        return Err(Error::invalid("at least two exponents are required"));
    }
    let n = cfg.size();
    let dim = m - 1;
    let scale = w.total().to_bigint();
    let trellis_int: Vec<Vec<BigInt>> = (1..=m).map(|v| vertex(v, m, &scale)).collect();
    let trellis: Vec<Vec<BigRational>> = trellis_int
        .iter()
        .map(|p| p.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();

    let mut matrix = vec![vec![BigInt::zero(); n]; n];
    let mut rhs = vec![vec![BigInt::zero(); n]; dim];
    for (row, tr) in cfg.triples().iter().enumerate() {
        matrix[row][tr.target - m - 1] += 2;
        for v in [tr.left, tr.right] {
            if v > m {
                matrix[row][v - m - 1] -= 1;
            } else {
                for (d, col) in rhs.iter_mut().enumerate() {
                    col[row] += &trellis_int[v - 1][d];
                }
            }
        }
    }

    let mut out = Reconstruction { reason: Reason::Valid, trellis, points: Vec::new(), warnings: Vec::new() };
    let (values, rank) = match solve(&matrix, &rhs) {
        Solution::Solved { values, rank } => (values, rank),
        Solution::Inconsistent => (Vec::new(), 0),
    };
    if rank < n {
        out.reason = Reason::InvalidCyclic;
        return Ok(out);
    }
    // values[d][a] is coordinate d of auxiliary a
    out.points = (0..n).map(|a| (0..dim).map(|d| values[d][a].clone()).collect()).collect();

    let mean: Vec<BigRational> = w.entries()[..dim]
        .iter()
        .map(|s| BigRational::from_integer(s.to_bigint()))
        .collect();
    if out.points[0] != mean {
        out.reason = Reason::WrongMean;
        return Ok(out);
    }
    let total = BigRational::from_integer(scale);
    for p in &out.points {
        let sum: BigRational = p.iter().sum();
        if p.iter().any(Signed::is_negative) || sum > total {
            out.reason = Reason::OutsideSimplex;
            return Ok(out);
        }
        if out.trellis.contains(p) {
            out.reason = Reason::OnVertex;
            return Ok(out);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if out.points[a] == out.points[b] {
                out.warnings.push(format!("x{} and x{} coincide", m + 1 + a, m + 1 + b));
            }
        }
    }
    Ok(out)
}
