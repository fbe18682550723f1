//! Configurations: ordered triples `(i, j, t)` standing for `xᵢ xⱼ ≥ x_t²`.
//!
//! Variable indices are 1-based throughout. Variables `1..=m` are the base
//! variables, `m+1` is the mean and `m+2..=m+n` are auxiliaries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Weights;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub left: usize,
    pub right: usize,
    pub target: usize,
}

impl Triple {
    pub const fn new(left: usize, right: usize, target: usize) -> Self {
        Self { left, right, target }
    }

    /// Same constraint with `left ≤ right`.
    pub fn ordered(self) -> Self {
        if self.left <= self.right {
            self
        } else {
            Self::new(self.right, self.left, self.target)
        }
    }

    pub fn as_array(self) -> [usize; 3] {
        [self.left, self.right, self.target]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.left, self.right, self.target)
    }
}

impl From<(usize, usize, usize)> for Triple {
    fn from((l, r, t): (usize, usize, usize)) -> Self {
        Self::new(l, r, t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    m: usize,
    triples: Vec<Triple>,
}

impl Configuration {
    /// Checks that every index is in range, that no constraint repeats a
    /// variable on its left side and that every auxiliary (and the mean) is
    /// the target of exactly one triple.
    pub fn new(m: usize, triples: Vec<Triple>) -> Result<Self> {
        if m == 0 {
            return Err(Error::MalformedConfiguration("no base variables".into()));
        }
        let n = triples.len();
        if n == 0 {
            return Err(Error::MalformedConfiguration("no triples".into()));
        }
        let top = m + n;
        let mut defined = vec![false; n];
        for (k, tr) in triples.iter().enumerate() {
            for v in [tr.left, tr.right, tr.target] {
                if v == 0 || v > top {
                    return Err(Error::MalformedConfiguration(format!(
                        "triple {} {tr} references x{v} outside 1..={top}",
                        k + 1
                    )));
                }
            }
            if tr.left == tr.right {
                return Err(Error::MalformedConfiguration(format!(
                    "triple {} {tr} repeats a variable",
                    k + 1
                )));
            }
            if tr.target <= m {
                return Err(Error::MalformedConfiguration(format!(
                    "triple {} {tr} targets base variable x{}",
                    k + 1,
                    tr.target
                )));
            }
            let slot = tr.target - m - 1;
            if std::mem::replace(&mut defined[slot], true) {
                return Err(Error::MalformedConfiguration(format!(
                    "x{} is the target of more than one triple",
                    tr.target
                )));
            }
        }
        Ok(Self { m, triples })
    }

    pub fn from_arrays(m: usize, triples: &[[usize; 3]]) -> Result<Self> {
        Self::new(m, triples.iter().map(|&[l, r, t]| Triple::new(l, r, t)).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of quadratic constraints.
    pub fn size(&self) -> usize {
        self.triples.len()
    }

    pub fn variable_count(&self) -> usize {
        self.m + self.triples.len()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// The triple defining `x_v`, for `v > m`.
    pub fn defining(&self, v: usize) -> Option<&Triple> {
        self.triples.iter().find(|tr| tr.target == v)
    }

    /// Sorted by target with `left < right` in every triple.
    pub fn canonical(&self) -> Self {
        let mut triples: Vec<Triple> = self.triples.iter().map(|t| t.ordered()).collect();
        triples.sort_by_key(|t| t.target);
        Self { m: self.m, triples }
    }

    pub fn to_document(&self, s: Option<&Weights>) -> ConfigDocument {
        ConfigDocument {
            m: self.m,
            s: s.cloned(),
            triples: self.triples.iter().map(|t| t.as_array()).collect(),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, t) in self.triples.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// Exchange format: `{"m": 2, "s": [3, 8], "triples": [[2,6,3], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigDocument {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Weights>,
    pub triples: Vec<[usize; 3]>,
}

impl ConfigDocument {
    pub fn configuration(&self) -> Result<Configuration> {
        Configuration::from_arrays(self.m, &self.triples)
    }

    /// Reads a bare document, or any object holding one under
    /// `"configuration"` such as the output of `repr` and `optimal`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut value: serde_json::Value = serde_json::from_str(text)?;
        if let Some(inner) = value.get_mut("configuration") {
            value = inner.take();
        }
        Ok(serde_json::from_value(value)?)
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_document(None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ConfigDocument::deserialize(d)?
            .configuration()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_unwraps_search_output() {
        let bare = r#"{"m": 2, "s": [1, 1], "triples": [[1, 2, 3]]}"#;
        let wrapped = format!(r#"{{"size": 1, "configuration": {bare}}}"#);
        assert_eq!(ConfigDocument::parse(bare).unwrap(), ConfigDocument::parse(&wrapped).unwrap());
    }

    #[test]
    fn example_representation_is_well_formed() {
        let c = Configuration::from_arrays(2, &[[2, 6, 3], [1, 3, 4], [3, 4, 5], [4, 5, 6]]).unwrap();
        assert_eq!(c.size(), 4);
        assert_eq!(c.variable_count(), 6);
        assert_eq!(c.defining(5), Some(&Triple::new(3, 4, 5)));
    }

    #[test]
    fn rejects_malformed() {
        assert!(Configuration::from_arrays(2, &[[1, 1, 3]]).is_err());
        assert!(Configuration::from_arrays(2, &[[1, 2, 2]]).is_err());
        assert!(Configuration::from_arrays(2, &[[1, 2, 4]]).is_err());
        assert!(Configuration::from_arrays(2, &[[1, 2, 3], [1, 3, 3]]).is_err());
        assert!(Configuration::from_arrays(2, &[]).is_err());
    }

    #[test]
    fn canonical_sorts_by_target() {
        let c = Configuration::from_arrays(4, &[[6, 7, 5], [2, 1, 6], [3, 4, 7]]).unwrap();
        let k = c.canonical();
        assert_eq!(
            k.triples(),
            &[Triple::new(6, 7, 5), Triple::new(1, 2, 6), Triple::new(3, 4, 7)]
        );
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"m":2,"s":[3,8],"triples":[[2,6,3],[1,3,4],[3,4,5],[4,5,6]]}"#;
        let doc = ConfigDocument::parse(text).unwrap();
        assert_eq!(serde_json::to_string(&doc).unwrap(), text);
        let c = doc.configuration().unwrap();
        let back: Configuration = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
