//! Per-configuration solution spaces and a fast exact validity test, both
//! on small flat integer matrices. Used to index whole catalogs.

use super::enumerate::Pair;

/// Row-major integer matrix with fraction-free elimination.
struct Flat {
    a: Vec<i128>,
    cols: usize,
}

impl Flat {
    fn zeros(rows: usize, cols: usize) -> Self {
        Flat { a: vec![0; rows * cols], cols }
    }

    fn rows(&self) -> usize {
        self.a.len() / self.cols
    }

    fn at(&mut self, r: usize, c: usize) -> &mut i128 {
        &mut self.a[r * self.cols + c]
    }

    fn get(&self, r: usize, c: usize) -> i128 {
        self.a[r * self.cols + c]
    }

    fn swap_rows(&mut self, r: usize, s: usize) {
        for c in 0..self.cols {
            self.a.swap(r * self.cols + c, s * self.cols + c);
        }
    }

    /// Bareiss elimination with pivots taken from columns `from..to`.
    /// Returns the pivot columns and the sign of the row permutation.
    fn eliminate(&mut self, from: usize, to: usize) -> (Vec<usize>, i128) {
        let rows = self.rows();
        let (mut prev, mut sign, mut r) = (1i128, 1i128, 0);
        let mut pivots = Vec::new();
        for c in from..to {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| self.get(i, c) != 0) else { continue };
            if p != r {
                self.swap_rows(p, r);
                sign = -sign;
            }
            let piv = self.get(r, c);
            for i in r + 1..rows {
                let lead = self.get(i, c);
                for j in c + 1..self.cols {
                    let v = (piv * self.get(i, j) - lead * self.get(r, j)) / prev;
                    *self.at(i, j) = v;
                }
                *self.at(i, c) = 0;
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (pivots, sign)
    }
}

/// Tuples for which a canonical pair list is plainly feasible: the `s`
/// with `C·s = 0` for an integer constraint matrix `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum SolutionSpace {
    /// Only `s = 0`.
    Trivial,
    /// A single line through the origin; its primitive direction when all
    /// entries are positive.
    Ray(Option<Vec<u64>>),
    /// Two or more dimensions, given by independent constraint rows.
    Wide(Vec<Vec<i128>>),
}

impl SolutionSpace {
    pub(super) fn of(m: usize, pairs: &[Pair]) -> Self {
        let n = pairs.len();
        // columns: γ₁…γ_n, then one column per sᵢ standing for the
        // right-hand side
        let mut f = Flat::zeros(m + n, n + m);
        for (t, &(i, j)) in pairs.iter().enumerate() {
            *f.at(i as usize - 1, t) += 1;
            *f.at(j as usize - 1, t) += 1;
            *f.at(m + t, t) -= 2;
        }
        for k in 0..m {
            *f.at(k, n + k) = 1;
            *f.at(m, n + k) = -1;
        }
        let (pivots, _) = f.eliminate(0, n);
        let first = pivots.len();
        // rows below the last pivot only constrain s; reduce them in place
        let mut c = Flat::zeros(m + n - first, m);
        for r in first..m + n {
            for k in 0..m {
                *c.at(r - first, k) = f.get(r, n + k);
            }
        }
        let (cp, _) = c.eliminate(0, m);
        let rank = cp.len();
        let rows: Vec<Vec<i128>> = (0..rank).map(|r| (0..m).map(|k| c.get(r, k)).collect()).collect();
        match m - rank {
            0 => SolutionSpace::Trivial,
            1 => SolutionSpace::Ray(positive_ray(&rows, m)),
            _ => SolutionSpace::Wide(rows),
        }
    }

    pub(super) fn contains(&self, s: &[i128]) -> bool {
        match self {
            SolutionSpace::Trivial | SolutionSpace::Ray(None) => false,
            SolutionSpace::Ray(Some(r)) => {
                // s and r are parallel iff all 2×2 minors with the first
                // coordinate vanish
                let r0 = r[0] as i128;
                s.iter().zip(r).all(|(x, &y)| x * r0 == s[0] * y as i128)
            }
            SolutionSpace::Wide(rows) => rows.iter().all(|c| c.iter().zip(s).map(|(a, b)| a * b).sum::<i128>() == 0),
        }
    }
}

/// Kernel direction of `rows` (rank `m−1`) from signed maximal minors.
fn positive_ray(rows: &[Vec<i128>], m: usize) -> Option<Vec<u64>> {
    let mut v: Vec<i128> = (0..m)
        .map(|skip| {
            let mut minor = Flat::zeros(rows.len(), m - 1);
            for (r, row) in rows.iter().enumerate() {
                for (k, &x) in row.iter().enumerate().filter(|&(k, _)| k != skip) {
                    *minor.at(r, k - usize::from(k > skip)) = x;
                }
            }
            let d = determinant(minor);
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    if v.iter().all(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    if !v.iter().all(|&x| x > 0) {
        return None;
    }
    let g = v.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
    Some(v.iter().map(|&x| (x / g) as u64).collect())
}

fn determinant(mut f: Flat) -> i128 {
    let n = f.cols;
    if n == 0 {
        return 1;
    }
    let (pivots, sign) = f.eliminate(0, n);
    if pivots.len() < n {
        0
    } else {
        sign * f.get(n - 1, n - 1)
    }
}

/// Same verdict as `verify::reconstruct(..).is_valid()` for a canonical
/// pair list and a tuple with small entries, in exact integer arithmetic.
pub(super) fn represents(m: usize, pairs: &[Pair], s: &[u64]) -> bool {
    let n = pairs.len();
    let dim = m - 1;
    let total: i128 = s.iter().map(|&x| x as i128).sum();
    // unknowns: the n auxiliary points; one right-hand column per coordinate
    let mut f = Flat::zeros(n, n + dim);
    for (t, &(i, j)) in pairs.iter().enumerate() {
        *f.at(t, t) += 2;
        for v in [i as usize, j as usize] {
            if v > m {
                *f.at(t, v - m - 1) -= 1;
            } else if v < m {
                *f.at(t, n + v - 1) += total;
            }
        }
    }
    let (pivots, sign) = f.eliminate(0, n);
    if pivots.len() < n {
        return false;
    }
    // D = det; X = D·α is integral by Cramer's rule
    let d = sign * f.get(n - 1, n - 1);
    let last = f.get(n - 1, n - 1);
    let mut x = vec![0i128; n * dim];
    for i in (0..n).rev() {
        for k in 0..dim {
            let mut acc = d * f.get(i, n + k);
            for j in i + 1..n {
                acc -= f.get(i, j) * x[j * dim + k];
            }
            x[i * dim + k] = acc / f.get(i, i);
        }
    }
    let _ = last;
    let (ad, sd) = (d.abs(), d.signum());
    if (0..dim).any(|k| x[k] != s[k] as i128 * d) {
        return false;
    }
    x.chunks(dim.max(1)).take(n).all(|p| {
        let coords: Vec<i128> = p.iter().map(|&c| c * sd).collect();
        let sum: i128 = coords.iter().sum();
        let inside = coords.iter().all(|&c| c >= 0) && sum <= total * ad;
        let zero = coords.iter().all(|&c| c == 0);
        let corner = coords.iter().filter(|&&c| c == total * ad).count() == 1 && sum == total * ad;
        inside && !zero && !corner
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::enumerate::{configuration_of, PairLists};
    use crate::exact::feasible::FeasibilitySystem;
    use crate::verify::reconstruct;
    use crate::weights::WeightTuple;

    const TUPLES3: [[u64; 3]; 6] = [[3, 2, 2], [1, 1, 1], [5, 1, 1], [4, 3, 1], [2, 1, 1], [3, 3, 2]];

    #[test]
    fn space_agrees_with_system() {
        for pairs in PairLists::new(3, 4) {
            let space = SolutionSpace::of(3, &pairs);
            let cfg = configuration_of(3, &pairs);
            for t in &TUPLES3 {
                let s: Vec<i128> = t.iter().map(|&x| x as i128).collect();
                let w = WeightTuple::<u64>::from_u64s(t).unwrap();
                let slow = FeasibilitySystem::build(&cfg, &w).unwrap().is_consistent();
                assert_eq!(space.contains(&s), slow, "{pairs:?} {t:?}");
            }
        }
    }

    #[test]
    fn represents_agrees_with_reconstruct() {
        let cases: Vec<(usize, usize, Vec<Vec<u64>>)> = vec![
            (2, 4, vec![vec![3, 8], vec![1, 1], vec![5, 3], vec![7, 9]]),
            (3, 4, TUPLES3.iter().map(|t| t.to_vec()).collect()),
            (4, 4, vec![vec![1, 1, 1, 1], vec![3, 2, 2, 1], vec![5, 1, 1, 1]]),
        ];
        for (m, n, tuples) in cases {
            for pairs in PairLists::new(m, n) {
                let cfg = configuration_of(m, &pairs);
                for t in &tuples {
                    let w = WeightTuple::<u64>::from_u64s(t).unwrap();
                    let slow = reconstruct(&cfg, &w).unwrap().is_valid();
                    assert_eq!(represents(m, &pairs, t), slow, "{pairs:?} {t:?}");
                }
            }
        }
    }

    #[test]
    fn single_triple() {
        assert_eq!(SolutionSpace::of(2, &[(1, 2)]), SolutionSpace::Ray(Some(vec![1, 1])));
        assert!(represents(2, &[(1, 2)], &[1, 1]));
        assert!(!represents(2, &[(1, 2)], &[1, 2]));
    }
}
