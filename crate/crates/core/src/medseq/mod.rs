//! One-dimensional mediated sets (bivariate inequalities).

mod tree;

pub use tree::{build_tree, enumerate_successive, Endpoint, MedTree, Node, SuccessiveEnumeration};

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::config::{Configuration, Triple};
use crate::error::{Error, Result};
use crate::exponent::{ceil_log2, is_power_of_two, two_pow, Exponent};
use crate::weights::serialize_exponent;

/// A `(p, q)`-mediated sequence. Points keep the order they were produced
/// in; equality ignores that order.
#[derive(Clone, Debug)]
pub struct MediatedSequence<E> {
    p: E,
    q: E,
    points: Vec<E>,
    sorted: Vec<E>,
}

impl<E: Exponent> MediatedSequence<E> {
    /// Wraps points after checking the mediation property.
    pub fn new(p: E, q: E, points: Vec<E>) -> Result<Self> {
        check_mediated_sequence(&points, &p, &q).map_err(Error::InvalidInput)?;
        Ok(Self::unchecked(p, q, points))
    }

    pub(crate) fn unchecked(p: E, q: E, points: Vec<E>) -> Self {
        let mut sorted = points.clone();
        sorted.sort();
        Self { p, q, points, sorted }
    }

    pub fn p(&self) -> &E {
        &self.p
    }

    pub fn q(&self) -> &E {
        &self.q
    }

    /// Points in production order.
    pub fn points(&self) -> &[E] {
        &self.points
    }

    pub fn sorted(&self) -> &[E] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl<E: Exponent> PartialEq for MediatedSequence<E> {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q && self.sorted == other.sorted
    }
}

impl<E: Exponent> Eq for MediatedSequence<E> {}

impl<E: Exponent> fmt::Display for MediatedSequence<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.points.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl<E: Exponent> Serialize for MediatedSequence<E> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Num<'a, E>(&'a E);
        impl<E: Exponent> Serialize for Num<'_, E> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_exponent(self.0, s)
            }
        }
        let mut st = s.serialize_struct("MediatedSequence", 3)?;
        st.serialize_field("p", &Num(&self.p))?;
        st.serialize_field("q", &Num(&self.q))?;
        let pts: Vec<Num<E>> = self.points.iter().map(Num).collect();
        st.serialize_field("points", &pts)?;
        st.end()
    }
}

/// `Ok(())` when `points` is a `(p, q)`-mediated sequence, otherwise a
/// message naming the first offending element.
pub fn check_mediated_sequence<E: Exponent>(points: &[E], p: &E, q: &E) -> std::result::Result<(), String> {
    if q.is_zero() || q >= p {
        return Err(format!("target {q} is not strictly between 0 and {p}"));
    }
    let mut seen = HashSet::new();
    for a in points {
        if a.is_zero() || a >= p {
            return Err(format!("{a} is not strictly between 0 and {p}"));
        }
        if !seen.insert(a) {
            return Err(format!("{a} appears twice"));
        }
    }
    if !seen.contains(q) {
        return Err(format!("target {q} is missing"));
    }
    let zero = E::zero();
    let universe: Vec<&E> = points.iter().chain([&zero, p]).collect();
    let members: HashSet<&E> = universe.iter().copied().collect();
    for a in points {
        let twice = a.clone() + a.clone();
        let ok = universe.iter().any(|&u| {
            if u > &twice {
                return false;
            }
            let v = twice.clone() - u.clone();
            v != *u && members.contains(&v)
        });
        if !ok {
            return Err(format!("{a} is not the average of two distinct members"));
        }
    }
    Ok(())
}

pub fn is_mediated_sequence<E: Exponent>(points: &[E], p: &E, q: &E) -> bool {
    check_mediated_sequence(points, p, q).is_ok()
}

fn require_coprime_pair<E: Exponent>(p: &E, q: &E) -> Result<()> {
    if q.is_zero() || q >= p {
        return Err(Error::invalid(format!("need 0 < q < p, got p = {p}, q = {q}")));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::invalid(format!("p = {p} and q = {q} are not coprime")));
    }
    if !E::has_headroom(p) {
        return Err(Error::invalid("p too large for the exponent type"));
    }
    Ok(())
}

/// Picks the odd pair `(i, j)` with `s_i ≤ s_j`, lowest indices on ties.
fn odd_pair<E: Exponent>(s: &[E; 3]) -> Option<(usize, usize)> {
    let odd: Vec<usize> = (0..3).filter(|&k| s[k].is_odd()).collect();
    match odd[..] {
        [a, b] => Some(if s[a] <= s[b] { (a, b) } else { (b, a) }),
        _ => None,
    }
}

/// One halving step of the three-weight loop: returns the merged pair and
/// updates the weights in place.
fn halve_step<E: Exponent>(s: &mut [E; 3]) -> Result<(usize, usize)> {
    let (i, j) = odd_pair(s).ok_or_else(|| Error::internal(format!("no odd pair among {s:?}")))?;
    let r = 3 - i - j;
    let two = E::one() + E::one();
    s[j] = (s[j].clone() - s[i].clone()) / two.clone();
    s[r] = s[r].clone() / two;
    Ok((i, j))
}

/// A minimum `(p, q)`-mediated sequence with exactly `⌈log₂ p⌉` points.
pub fn min_mediated_sequence<E: Exponent>(p: &E, q: &E) -> Result<MediatedSequence<E>> {
    require_coprime_pair(p, q)?;
    let l = ceil_log2(p);
    let two = E::one() + E::one();
    let mut s = [q.clone(), p.clone() - q.clone(), two_pow::<E>(l) - p.clone()];
    let mut t = [p.clone(), E::zero(), q.clone()];
    let mut points = Vec::with_capacity(l as usize);
    let mut seen = HashSet::new();
    for k in 1..=l {
        let (i, j) = halve_step(&mut s)?;
        let mid = (t[i].clone() + t[j].clone()) / two.clone();
        if !seen.insert(mid.clone()) {
            return Err(Error::internal(format!("point {mid} produced twice")));
        }
        t[i] = mid.clone();
        points.push(mid);
        if cfg!(debug_assertions) {
            let weight = two_pow::<E>(l - k);
            let sum = s.iter().fold(E::zero(), |a, x| a + x.clone());
            let moment = s
                .iter()
                .zip(&t)
                .fold(E::zero(), |a, (x, y)| a + x.clone() * y.clone());
            debug_assert_eq!(sum, weight);
            debug_assert_eq!(moment, weight * q.clone());
        }
    }
    if points.last() != Some(q) {
        return Err(Error::internal("loop did not end at the target"));
    }
    Ok(MediatedSequence::unchecked(p.clone(), q.clone(), points))
}

/// Optimal representation of `x₁^{s₁}x₂^{s₂}x₃^{s₃} ≥ x₄^{2^l}` when the
/// three exponents sum to a power of two. Auxiliaries are numbered from 5
/// in creation order; the last step defines `x₄`.
pub fn pow2_trivariate<E: Exponent>(s1: &E, s2: &E, s3: &E) -> Result<Configuration> {
    let mut s = [s1.clone(), s2.clone(), s3.clone()];
    if s.iter().any(|x| x.is_zero()) {
        return Err(Error::invalid("all three exponents must be positive"));
    }
    let total = s.iter().fold(E::zero(), |a, x| a + x.clone());
    if !is_power_of_two(&total) {
        return Err(Error::invalid(format!("exponent sum {total} is not a power of two")));
    }
    if !s1.gcd(s2).gcd(s3).is_one() {
        return Err(Error::invalid("exponents are not coprime"));
    }
    let l = ceil_log2(&total) as usize;
    let mut vars = [1usize, 2, 3];
    let mut triples = Vec::with_capacity(l);
    for k in 1..=l {
        let (i, j) = halve_step(&mut s)?;
        let fresh = if k == l { 4 } else { 4 + k };
        triples.push(Triple::new(vars[i], vars[j], fresh).ordered());
        vars[i] = fresh;
    }
    Ok(Configuration::new(3, triples)?.canonical())
}
