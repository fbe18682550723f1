//! Exact linear algebra: fraction-free elimination over integers with
//! rational back-substitution.
//!
//! Elimination first runs on `i128` with checked arithmetic and restarts on
//! [`BigInt`] if any intermediate overflows.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Integers the elimination can run on.
pub trait ExactInt: Clone + Debug + PartialEq + Zero + One {
    fn mul_sub(&self, a: &Self, b: &Self, c: &Self) -> Option<Self>;
    fn div_exact(&self, d: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl ExactInt for i128 {
    /// `self·a − b·c`
    fn mul_sub(&self, a: &Self, b: &Self, c: &Self) -> Option<Self> {
        self.checked_mul(*a)?.checked_sub(b.checked_mul(*c)?)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        debug_assert_eq!(self % d, 0);
        self.checked_div(*d)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn mul_sub(&self, a: &Self, b: &Self, c: &Self) -> Option<Self> {
        Some(self * a - b * c)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        debug_assert!((self % d).is_zero());
        Some(self / d)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Row echelon form produced by fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl<T> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss elimination on all columns of `a`. `None` on overflow.
pub fn bareiss<T: ExactInt>(a: Vec<Vec<T>>) -> Option<Echelon<T>> {
    let cols = a.first().map_or(0, Vec::len);
    bareiss_in(a, cols)
}

/// Bareiss elimination that only looks for pivots in the first
/// `pivot_cols` columns; the remaining columns are carried along.
pub fn bareiss_in<T: ExactInt>(mut a: Vec<Vec<T>>, pivot_cols: usize) -> Option<Echelon<T>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = a[r][c].mul_sub(&a[i][j], &a[i][c], &a[r][j])?;
                a[i][j] = v.div_exact(&prev)?;
            }
            a[i][c] = T::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Some(Echelon { rows: a, pivots })
}

/// Outcome of solving `A·x = b` for one or more right-hand sides.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Inconsistent,
    /// One solution per right-hand side, free unknowns set to zero.
    Solved { values: Vec<Vec<BigRational>>, rank: usize },
}

fn to_i128(v: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    v.iter()
        .map(|row| row.iter().map(|x| i128::try_from(x).ok()).collect::<Option<Vec<_>>>())
        .collect()
}

fn echelon_big(aug: Vec<Vec<BigInt>>) -> Echelon<BigInt> {
    if let Some(small) = to_i128(&aug) {
        if let Some(e) = bareiss(small) {
            return Echelon {
                rows: e.rows.iter().map(|r| r.iter().map(ExactInt::to_big).collect()).collect(),
                pivots: e.pivots,
            };
        }
    }
    bareiss(aug).expect("big integers do not overflow")
}

/// Rank of an integer matrix.
pub fn rank(a: &[Vec<BigInt>]) -> usize {
    echelon_big(a.to_vec()).rank()
}

/// Solves `A·X = B` exactly, where `B` has `rhs.len()` columns given as
/// separate vectors.
pub fn solve(a: &[Vec<BigInt>], rhs: &[Vec<BigInt>]) -> Solution {
    let n = a.first().map_or(0, Vec::len);
    let k = rhs.len();
    let aug: Vec<Vec<BigInt>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().cloned().chain(rhs.iter().map(|b| b[i].clone())).collect())
        .collect();
    let e = echelon_big(aug);
    if e.pivots.iter().any(|&c| c >= n) {
        return Solution::Inconsistent;
    }
    let rank = e.rank();
    let mut values = vec![vec![BigRational::zero(); n]; k];
    for (col, sol) in values.iter_mut().enumerate() {
        for r in (0..rank).rev() {
            let pc = e.pivots[r];
            let row = &e.rows[r];
            let mut acc = BigRational::from_integer(row[n + col].clone());
            for (j, v) in row.iter().enumerate().take(n).skip(pc + 1) {
                if !v.is_zero() {
                    acc -= BigRational::from_integer(v.clone()) * &sol[j];
                }
            }
            sol[pc] = acc / BigRational::from_integer(row[pc].clone());
        }
    }
    Solution::Solved { values, rank }
}

/// Determinant of a square integer matrix.
pub fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return BigInt::zero() };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                m[i][j] = (&m[c][c] * &m[i][j] - &m[i][c] * &m[c][j]) / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    &m[n - 1][n - 1] * sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    // Gauss-Jordan over rationals, used as an independent reference.
    fn reference(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<(usize, Vec<BigRational>)> {
        let n = a[0].len();
        let mut m: Vec<Vec<BigRational>> = a
            .iter()
            .zip(b)
            .map(|(row, rhs)| {
                row.iter()
                    .chain(std::iter::once(rhs))
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let mut piv = Vec::new();
        let mut r = 0;
        for c in 0..=n {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            if c == n {
                return None;
            }
            m.swap(r, p);
            let lead = m[r][c].clone();
            for x in m[r].iter_mut() {
                *x = &*x / &lead;
            }
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot_row) {
                        *x = &*x - &f * y;
                    }
                }
            }
            piv.push(c);
            r += 1;
            if r == m.len() {
                break;
            }
        }
        let mut x = vec![BigRational::zero(); n];
        for (row, &c) in piv.iter().enumerate() {
            x[c] = m[row][n].clone();
        }
        Some((piv.len(), x))
    }

    #[test]
    fn small_systems() {
        let a = big(&[&[2, 1], &[1, 3]]);
        let b = vec![vec![BigInt::from(5), BigInt::from(10)]];
        match solve(&a, &b) {
            Solution::Solved { values, rank } => {
                assert_eq!(rank, 2);
                assert_eq!(values[0], vec![BigRational::from_integer(1.into()), BigRational::from_integer(3.into())]);
            }
            s => panic!("{s:?}"),
        }
        let a = big(&[&[1], &[1]]);
        let b = vec![vec![BigInt::from(1), BigInt::from(2)]];
        assert_eq!(solve(&a, &b), Solution::Inconsistent);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&big(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(determinant(&big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&big(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]])), BigInt::zero());
    }

    #[test]
    fn overflow_falls_back() {
        let huge = i64::MAX;
        let a = big(&[&[huge, 1, 3], &[3, huge, 7], &[5, 11, huge]]);
        let b = vec![vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)]];
        let Solution::Solved { values, rank } = solve(&a, &b) else { panic!() };
        assert_eq!(rank, 3);
        let (r, x) = reference(&a, &b[0]).unwrap();
        assert_eq!(r, 3);
        assert_eq!(values[0], x);
    }

    proptest! {
        #[test]
        fn agrees_with_rational_reference(
            rows in 1usize..6, cols in 1usize..6,
            cells in proptest::collection::vec(-3i64..4, 36),
            rhs in proptest::collection::vec(-5i64..6, 6),
        ) {
            let a: Vec<Vec<BigInt>> = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(cells[i * 6 + j])).collect()).collect();
            let b: Vec<BigInt> = (0..rows).map(|i| BigInt::from(rhs[i])).collect();
            let got = solve(&a, std::slice::from_ref(&b));
            match (reference(&a, &b), got) {
                (None, Solution::Inconsistent) => {}
                (Some((r, _)), Solution::Solved { values, rank }) => {
                    prop_assert_eq!(r, rank);
                    // any particular solution must satisfy the system
                    for (row, rhs) in a.iter().zip(&b) {
                        let lhs: BigRational = row.iter().zip(&values[0]).map(|(c, x)| BigRational::from_integer(c.clone()) * x).sum();
                        prop_assert_eq!(lhs, BigRational::from_integer(rhs.clone()));
                    }
                }
                (x, y) => prop_assert!(false, "reference {:?} vs {:?}", x, y),
            }
            prop_assert_eq!(rank(&a), reference(&a, &vec![BigInt::zero(); rows]).unwrap().0);
        }
    }
}
