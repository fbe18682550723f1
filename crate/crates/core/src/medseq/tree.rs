//! Binary-tree form of successive minimum mediated sequences.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::Serialize;

use super::{require_coprime_pair, MediatedSequence};
use crate::error::{Error, Result};
use crate::exponent::{ceil_log2, two_pow, Exponent};
use crate::weights::serialize_exponent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    P,
    Q,
}

/// Tree node. `height` is the height of the subtree in its own right; a
/// subtree reused as a right child may sit higher in the enclosing tree.
#[derive(Debug)]
pub enum Node<E> {
    Leaf { label: E, end: Endpoint },
    Halve { label: E, height: u32, child: Arc<Node<E>> },
    Mean { label: E, height: u32, left: Arc<Node<E>>, right: Arc<Node<E>> },
}

impl<E: Exponent> Node<E> {
    pub fn label(&self) -> &E {
        match self {
            Node::Leaf { label, .. } | Node::Halve { label, .. } | Node::Mean { label, .. } => label,
        }
    }

    pub fn height(&self) -> u32 {
        match self {
            Node::Leaf { .. } => 0,
            Node::Halve { height, .. } | Node::Mean { height, .. } => *height,
        }
    }
}

impl<E: Exponent> Serialize for Node<E> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Num<'a, E>(&'a E);
        impl<E: Exponent> Serialize for Num<'_, E> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_exponent(self.0, s)
            }
        }
        match self {
            Node::Leaf { label, .. } => {
                let mut st = s.serialize_struct("Node", 1)?;
                st.serialize_field("label", &Num(label))?;
                st.end()
            }
            Node::Halve { label, child, .. } => {
                let mut st = s.serialize_struct("Node", 2)?;
                st.serialize_field("label", &Num(label))?;
                st.serialize_field("left", child.as_ref())?;
                st.end()
            }
            Node::Mean { label, left, right, .. } => {
                let mut st = s.serialize_struct("Node", 3)?;
                st.serialize_field("label", &Num(label))?;
                st.serialize_field("left", left.as_ref())?;
                st.serialize_field("right", right.as_ref())?;
                st.end()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct MedTree<E> {
    p: E,
    q: E,
    root: Arc<Node<E>>,
}

impl<E: Exponent> MedTree<E> {
    pub fn root(&self) -> &Node<E> {
        &self.root
    }

    pub fn height(&self) -> u32 {
        self.root.height()
    }

    pub fn p(&self) -> &E {
        &self.p
    }

    pub fn q(&self) -> &E {
        &self.q
    }

    /// Heights of the `p` leaves and of the `q` leaves, walking every path.
    /// Shared subtrees are visited once per occurrence, so this is
    /// exponential in the height.
    pub fn leaf_heights(&self) -> (Vec<u32>, Vec<u32>) {
        fn walk<E: Exponent>(n: &Node<E>, at: u32, ps: &mut Vec<u32>, qs: &mut Vec<u32>) {
            match n {
                Node::Leaf { end: Endpoint::P, .. } => ps.push(at),
                Node::Leaf { end: Endpoint::Q, .. } => qs.push(at),
                Node::Halve { child, .. } => walk(child, at - 1, ps, qs),
                Node::Mean { left, right, .. } => {
                    walk(left, at - 1, ps, qs);
                    walk(right, at - 1, ps, qs);
                }
            }
        }
        let (mut ps, mut qs) = (Vec::new(), Vec::new());
        walk(&self.root, self.height(), &mut ps, &mut qs);
        ps.sort_unstable();
        qs.sort_unstable();
        (ps, qs)
    }

    /// `(Σ_{p leaves} 2^h, Σ_{q leaves} 2^h)`, computed once per shared node.
    pub fn leaf_sums(&self) -> (E, E) {
        fn sums<E: Exponent>(n: &Arc<Node<E>>, memo: &mut HashMap<*const Node<E>, (E, E)>) -> (E, E) {
            let key = Arc::as_ptr(n);
            if let Some(v) = memo.get(&key) {
                return v.clone();
            }
            let v = match n.as_ref() {
                Node::Leaf { end: Endpoint::P, .. } => (E::one(), E::zero()),
                Node::Leaf { end: Endpoint::Q, .. } => (E::zero(), E::one()),
                Node::Halve { child, .. } => sums(child, memo),
                Node::Mean { height, left, right, .. } => {
                    let (lp, lq) = sums(left, memo);
                    let (rp, rq) = sums(right, memo);
                    let scale = two_pow::<E>(height - 1 - right.height());
                    (lp + rp * scale.clone(), lq + rq * scale)
                }
            };
            memo.insert(key, v.clone());
            v
        }
        sums(&self.root, &mut HashMap::new())
    }

    /// Checks height, leaf labels, root label, the averaging rule and both
    /// leaf-sum identities.
    pub fn check(&self) -> Result<()> {
        let l = ceil_log2(&self.p);
        if self.height() != l {
            return Err(Error::internal(format!("height {} differs from {l}", self.height())));
        }
        if self.root.label() != &self.q {
            return Err(Error::internal("root is not labelled by the target"));
        }
        let mut seen = HashSet::new();
        let mut stack = vec![&self.root];
        while let Some(n) = stack.pop() {
            if !seen.insert(Arc::as_ptr(n)) {
                continue;
            }
            match n.as_ref() {
                Node::Leaf { label, end } => {
                    let want = match end {
                        Endpoint::P => &self.p,
                        Endpoint::Q => &self.q,
                    };
                    if label != want {
                        return Err(Error::internal(format!("leaf {label} is neither p nor q")));
                    }
                }
                Node::Halve { label, child, .. } => {
                    if label.clone() + label.clone() != *child.label() {
                        return Err(Error::internal(format!("{label} is not half its child")));
                    }
                    stack.push(child);
                }
                Node::Mean { label, left, right, .. } => {
                    if label.clone() + label.clone() != left.label().clone() + right.label().clone() {
                        return Err(Error::internal(format!("{label} is not the mean of its children")));
                    }
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
        let (ps, qs) = self.leaf_sums();
        if ps != self.q || qs != two_pow::<E>(l) - self.p.clone() {
            return Err(Error::internal(format!("leaf sums ({ps}, {qs}) break the identities")));
        }
        Ok(())
    }
}

impl<E: Exponent> Serialize for MedTree<E> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.root.serialize(s)
    }
}

fn leaf<E: Exponent>(p: &E, q: &E, end: Endpoint) -> Arc<Node<E>> {
    let label = match end {
        Endpoint::P => p.clone(),
        Endpoint::Q => q.clone(),
    };
    Arc::new(Node::Leaf { label, end })
}

/// Builds the tree of a successive sequence given in its successive order.
///
/// The first point may be `(p+q)/2`, `q/2` or `p/2`; the latter two give a
/// root with a single leaf child, which covers the cases where `p` or `q` is
/// even.
pub fn build_tree<E: Exponent>(seq: &MediatedSequence<E>) -> Result<MedTree<E>> {
    let (p, q) = (seq.p(), seq.q());
    require_coprime_pair(p, q)?;
    let pts = seq.points();
    let l = ceil_log2(p) as usize;
    if pts.len() != l {
        return Err(Error::NotSuccessive(format!(
            "{} points where a minimum sequence has {l}",
            pts.len()
        )));
    }
    let twice = |x: &E| x.clone() + x.clone();
    let mut built: Vec<Arc<Node<E>>> = Vec::with_capacity(l);
    for (k, cur) in pts.iter().enumerate() {
        let height = k as u32 + 1;
        let node = if k == 0 {
            let d = twice(cur);
            if d == p.clone() + q.clone() {
                Node::Mean { label: cur.clone(), height, left: leaf(p, q, Endpoint::P), right: leaf(p, q, Endpoint::Q) }
            } else if d == *q {
                Node::Halve { label: cur.clone(), height, child: leaf(p, q, Endpoint::Q) }
            } else if d == *p {
                Node::Halve { label: cur.clone(), height, child: leaf(p, q, Endpoint::P) }
            } else {
                return Err(Error::NotSuccessive(format!("{cur} is not derivable from p and q")));
            }
        } else {
            let prev = &pts[k - 1];
            let d = twice(cur);
            let left = built[k - 1].clone();
            if d < *prev {
                return Err(Error::NotSuccessive(format!("{cur} is not derivable from {prev}")));
            }
            let other = d - prev.clone();
            if other.is_zero() {
                Node::Halve { label: cur.clone(), height, child: left }
            } else if other == *p {
                Node::Mean { label: cur.clone(), height, left, right: leaf(p, q, Endpoint::P) }
            } else if other == *q {
                Node::Mean { label: cur.clone(), height, left, right: leaf(p, q, Endpoint::Q) }
            } else if let Some(j) = pts[..k.saturating_sub(1)].iter().position(|x| *x == other) {
                Node::Mean { label: cur.clone(), height, left, right: built[j].clone() }
            } else {
                return Err(Error::NotSuccessive(format!(
                    "{cur} is not the mean of {prev} and an earlier element"
                )));
            }
        };
        built.push(Arc::new(node));
    }
    if pts.last() != Some(q) {
        return Err(Error::NotSuccessive(format!("sequence does not end at {q}")));
    }
    let tree = MedTree { p: p.clone(), q: q.clone(), root: built.pop().expect("l ≥ 1") };
    tree.check()?;
    Ok(tree)
}

#[derive(Clone, Debug)]
pub struct SuccessiveEnumeration<E> {
    pub sequences: Vec<MediatedSequence<E>>,
    /// True when the search finished, so `sequences` is every successive
    /// minimum sequence.
    pub exhaustive: bool,
}

struct Search<'a, E> {
    p: &'a E,
    q: &'a E,
    l: usize,
    pad: E,
    limit: usize,
    points: Vec<E>,
    // leaf sums of each prefix tree
    sums: Vec<(E, E)>,
    seen: HashSet<Vec<E>>,
    out: Vec<MediatedSequence<E>>,
    overflow: bool,
}

impl<E: Exponent> Search<'_, E> {
    fn record(&mut self) {
        let mut key = self.points.clone();
        key.sort();
        if self.seen.insert(key) {
            if self.out.len() == self.limit {
                self.overflow = true;
            } else {
                self.out.push(MediatedSequence::unchecked(self.p.clone(), self.q.clone(), self.points.clone()));
            }
        }
    }

    fn dfs(&mut self) {
        if self.overflow {
            return;
        }
        let i = self.points.len() + 1;
        if i > self.l {
            self.record();
            return;
        }
        let prev = self.points.last().expect("first point seeded").clone();
        let (pp, pq) = self.sums.last().expect("seeded").clone();
        let shift = two_pow::<E>(i as u32 - 1);
        let mut options: Vec<(E, E, E)> = vec![
            (E::zero(), pp.clone(), pq.clone()),
            (self.p.clone(), pp.clone() + shift.clone(), pq.clone()),
            (self.q.clone(), pp.clone(), pq.clone() + shift),
        ];
        for j in 0..i.saturating_sub(2) {
            let scale = two_pow::<E>((i - 1 - (j + 1)) as u32);
            let (jp, jq) = &self.sums[j];
            options.push((
                self.points[j].clone(),
                pp.clone() + jp.clone() * scale.clone(),
                pq.clone() + jq.clone() * scale,
            ));
        }
        for (other, np, nq) in options {
            let twice = prev.clone() + other;
            if twice.is_odd() || np > *self.q || nq > self.pad {
                continue;
            }
            let next = twice / (E::one() + E::one());
            if next.is_zero() || next >= *self.p || self.points.contains(&next) {
                continue;
            }
            let last = i == self.l;
            if last != (next == *self.q) {
                continue;
            }
            self.points.push(next);
            self.sums.push((np, nq));
            self.dfs();
            self.points.pop();
            self.sums.pop();
            if self.overflow {
                return;
            }
        }
    }
}

/// Every successive minimum `(p, q)`-mediated sequence, up to `limit`, for
/// odd coprime `p` and `q`. Output is in depth-first order with the choice
/// at each step tried as halving, `p`, `q`, then earlier points.
pub fn enumerate_successive<E: Exponent>(p: &E, q: &E, limit: usize) -> Result<SuccessiveEnumeration<E>> {
    if limit == 0 {
        return Err(Error::invalid("limit must be at least 1"));
    }
    require_coprime_pair(p, q)?;
    if p.is_even() || q.is_even() {
        return Err(Error::invalid("enumeration needs odd p and q"));
    }
    let l = ceil_log2(p) as usize;
    let first = (p.clone() + q.clone()) / (E::one() + E::one());
    let mut search = Search {
        p,
        q,
        l,
        pad: two_pow::<E>(l as u32) - p.clone(),
        limit,
        points: vec![first],
        sums: vec![(E::one(), E::one())],
        seen: HashSet::new(),
        out: Vec::new(),
        overflow: false,
    };
    if l == 1 {
        // only p = 1 would get here, which q < p rules out
        return Err(Error::internal("degenerate height"));
    }
    search.dfs();
    Ok(SuccessiveEnumeration { exhaustive: !search.overflow, sequences: search.out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medseq::{is_mediated_sequence, min_mediated_sequence};

    fn seq(p: u64, q: u64, pts: &[u64]) -> MediatedSequence<u64> {
        MediatedSequence::new(p, q, pts.to_vec()).unwrap()
    }

    #[test]
    fn figure_tree() {
        let t = build_tree(&seq(57, 11, &[34, 17, 37, 27, 22, 11])).unwrap();
        assert_eq!(t.height(), 6);
        let (ps, qs) = t.leaf_heights();
        assert_eq!(ps, vec![0, 1, 2, 2]);
        assert_eq!(qs, vec![0, 1, 2]);
        assert_eq!(t.leaf_sums(), (11, 7));
    }

    #[test]
    fn three_one() {
        let t = build_tree(&seq(3, 1, &[2, 1])).unwrap();
        assert_eq!(t.height(), 2);
        assert_eq!(t.leaf_sums(), (1, 1));
    }

    #[test]
    fn not_successive() {
        let s = MediatedSequence::unchecked(9u64, 5, vec![5]);
        assert!(matches!(build_tree(&s), Err(Error::NotSuccessive(_))));
        let s = MediatedSequence::unchecked(9u64, 5, vec![6, 7, 3, 5]);
        assert!(matches!(build_tree(&s), Err(Error::NotSuccessive(_))));
    }

    #[test]
    fn even_cases_through_single_child_root() {
        let t = build_tree(&min_mediated_sequence(&11u64, &2).unwrap()).unwrap();
        assert_eq!(t.leaf_sums(), (2, 5));
        let t = build_tree(&min_mediated_sequence(&12u64, &7).unwrap()).unwrap();
        assert_eq!(t.leaf_sums(), (7, 4));
    }

    #[test]
    fn tree_json_shape() {
        let t = build_tree(&seq(3, 1, &[2, 1])).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["label"], 1);
        assert_eq!(v["left"]["label"], 2);
        assert_eq!(v["left"]["left"]["label"], 3);
        assert_eq!(v["left"]["right"]["label"], 1);
        assert!(v.get("right").is_none());
    }

    fn brute_minimum_sets(p: u64, q: u64) -> Vec<Vec<u64>> {
        let l = ceil_log2(&p) as usize;
        let pool: Vec<u64> = (1..p).collect();
        let mut out = Vec::new();
        let mut pick = Vec::new();
        fn rec(pool: &[u64], start: usize, l: usize, pick: &mut Vec<u64>, p: u64, q: u64, out: &mut Vec<Vec<u64>>) {
            if pick.len() == l {
                if is_mediated_sequence(pick, &p, &q) {
                    out.push(pick.clone());
                }
                return;
            }
            for k in start..pool.len() {
                pick.push(pool[k]);
                rec(pool, k + 1, l, pick, p, q, out);
                pick.pop();
            }
        }
        rec(&pool, 0, l, &mut pick, p, q, &mut out);
        out
    }

    #[test]
    fn three_one_enumeration_matches_brute_force() {
        let e = enumerate_successive(&3u64, &1, 10).unwrap();
        assert!(e.exhaustive);
        let got: Vec<Vec<u64>> = e.sequences.iter().map(|s| s.sorted().to_vec()).collect();
        assert_eq!(got, brute_minimum_sets(3, 1));
        assert!(got.contains(&vec![1, 2]));
    }

    #[test]
    fn eleven_three_subset_of_brute_force() {
        let e = enumerate_successive(&11u64, &3, 100).unwrap();
        assert!(e.exhaustive);
        assert!(!e.sequences.is_empty());
        let brute = brute_minimum_sets(11, 3);
        for s in &e.sequences {
            assert_eq!(s.len(), 4);
            assert!(is_mediated_sequence(s.points(), &11, &3));
            assert!(brute.contains(&s.sorted().to_vec()));
            build_tree(s).unwrap();
        }
    }

    #[test]
    fn worked_example_is_enumerated() {
        let e = enumerate_successive(&57u64, &11, 1000).unwrap();
        let want = seq(57, 11, &[34, 17, 37, 27, 22, 11]);
        assert!(e.sequences.contains(&want));
        for s in &e.sequences {
            let t = build_tree(s).unwrap();
            assert_eq!(t.leaf_sums(), (11, 7));
        }
    }

    #[test]
    fn limit_and_parity_checks() {
        assert!(matches!(enumerate_successive(&57u64, &11, 0), Err(Error::InvalidInput(_))));
        assert!(matches!(enumerate_successive(&11u64, &2, 5), Err(Error::InvalidInput(_))));
        let (p, q, all) = (5u64..200)
            .step_by(2)
            .flat_map(|p| (1..p).step_by(2).map(move |q| (p, q)))
            .filter(|&(p, q)| num_integer::gcd(p, q) == 1)
            .map(|(p, q)| (p, q, enumerate_successive(&p, &q, 1000).unwrap()))
            .find(|(_, _, e)| e.sequences.len() >= 3)
            .unwrap();
        assert!(all.exhaustive);
        let cut = all.sequences.len() - 1;
        let e = enumerate_successive(&p, &q, cut).unwrap();
        assert_eq!(e.sequences.len(), cut);
        assert!(!e.exhaustive);
        assert_eq!(e.sequences[..], all.sequences[..cut]);
    }
}
