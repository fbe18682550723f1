//! Exponent tuples of weighted geometric mean inequalities.
//!
//! A tuple `(s₁,…,s_m)` stands for `x₁^{s₁}⋯x_m^{s_m} ≥ x_{m+1}^{ŝ}` with
//! `ŝ = Σ sᵢ`. The rational weights `sᵢ/ŝ` are derived on demand.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponent::{ceil_log2, two_pow, Exponent};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightTuple<E> {
    entries: Vec<E>,
    total: E,
}

impl<E: Exponent> WeightTuple<E> {
    /// Builds a tuple from user input. Every entry must be at least one.
    pub fn new(entries: Vec<E>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("empty exponent tuple"));
        }
        if let Some(pos) = entries.iter().position(|e| e.is_zero()) {
            return Err(Error::invalid(format!("entry {} is zero", pos + 1)));
        }
        let mut total = E::zero();
        for e in &entries {
            total = total
                .checked_add(e)
                .ok_or_else(|| Error::invalid("exponent sum overflows the exponent type"))?;
        }
        if !E::has_headroom(&total) {
            return Err(Error::invalid("exponent sum too large for the exponent type"));
        }
        Ok(Self { entries, total })
    }

    /// Parses decimal strings, so entries wider than a machine word are
    /// accepted when `E` is arbitrary precision.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let entries = items
            .iter()
            .map(|s| {
                let s = s.as_ref().trim();
                E::from_str(s).map_err(|_| Error::invalid(format!("not a nonnegative integer: {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn from_u64s(items: &[u64]) -> Result<Self> {
        Self::new(items.iter().map(|&v| E::from_u64(v)).collect())
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `ŝ`
    pub fn total(&self) -> &E {
        &self.total
    }

    pub fn gcd(&self) -> E {
        self.entries
            .iter()
            .fold(E::zero(), |g, e| g.gcd(e))
    }

    pub fn is_normalized(&self) -> bool {
        self.gcd().is_one()
    }

    /// Divides out the common factor; returns the reduced tuple and the factor.
    pub fn normalize(&self) -> (Self, E) {
        let g = self.gcd();
        let entries: Vec<E> = self.entries.iter().map(|e| e.clone() / g.clone()).collect();
        let total = self.total.clone() / g.clone();
        (Self { entries, total }, g)
    }

    /// `⌈log₂ ŝ⌉`
    pub fn log_total(&self) -> u32 {
        ceil_log2(&self.total)
    }

    /// The tuple with `2^l − ŝ` appended when that is positive.
    pub fn padded(&self) -> Vec<E> {
        let mut out = self.entries.clone();
        let pad = two_pow::<E>(self.log_total()) - self.total.clone();
        if !pad.is_zero() {
            out.push(pad);
        }
        out
    }

    /// The weights `sᵢ/ŝ`.
    pub fn weights(&self) -> Vec<BigRational> {
        let total = self.total.to_bigint();
        self.entries
            .iter()
            .map(|e| BigRational::new(e.to_bigint(), total.clone()))
            .collect()
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.entries.len());
        Self {
            entries: order.iter().map(|&i| self.entries[i].clone()).collect(),
            total: self.total.clone(),
        }
    }

    /// Same tuple in another exponent type.
    pub fn convert<F: Exponent>(&self) -> Result<WeightTuple<F>> {
        let entries = self
            .entries
            .iter()
            .map(|e| F::from_str(&e.to_string()).map_err(|_| Error::invalid("entry does not fit target type")))
            .collect::<Result<Vec<_>>>()?;
        WeightTuple::new(entries)
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "tuple {self} is not normalized (gcd {})",
                self.gcd()
            )))
        }
    }

    pub(crate) fn require_multivariate(&self) -> Result<()> {
        if self.len() < 2 {
            Err(Error::invalid("at least two exponents are required"))
        } else {
            Ok(())
        }
    }
}

impl<E: Exponent> fmt::Display for WeightTuple<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Validates and reduces a raw tuple in one step.
pub fn normalize<E: Exponent>(entries: Vec<E>) -> Result<(WeightTuple<E>, E)> {
    Ok(WeightTuple::new(entries)?.normalize())
}

/// Binary-expansion exponents of an integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BitProfile {
    /// `Ω(r)`, ascending.
    pub omega: Vec<u32>,
    /// `Δ(r) = min Ω(r)`; absent for zero.
    pub delta: Option<u32>,
}

impl BitProfile {
    pub fn of<E: Exponent>(r: &E) -> Self {
        let omega = (0..r.bit_len()).filter(|&k| r.bit(k)).collect::<Vec<_>>();
        let delta = r.low_bit();
        Self { omega, delta }
    }

    pub fn reconstruct<E: Exponent>(&self) -> E {
        self.omega
            .iter()
            .fold(E::zero(), |acc, &k| acc + two_pow::<E>(k))
    }
}

pub fn omega<E: Exponent>(r: &E) -> BitProfile {
    BitProfile::of(r)
}

/// Writes an exponent as a JSON number when it fits in `u64`, otherwise as a
/// decimal string.
pub(crate) fn serialize_exponent<E: Exponent, S: Serializer>(e: &E, s: S) -> std::result::Result<S::Ok, S::Error> {
    match e.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&e.to_string()),
    }
}

pub(crate) struct ExponentRepr<E>(pub E);

impl<'de, E: Exponent> Deserialize<'de> for ExponentRepr<E> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V<E>(std::marker::PhantomData<E>);
        impl<E: Exponent> Visitor<'_> for V<E> {
            type Value = ExponentRepr<E>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or a decimal string")
            }
            fn visit_u64<Er: de::Error>(self, v: u64) -> std::result::Result<Self::Value, Er> {
                E::from_str(&v.to_string())
                    .map(ExponentRepr)
                    .map_err(|_| Er::custom("exponent out of range"))
            }
            fn visit_i64<Er: de::Error>(self, v: i64) -> std::result::Result<Self::Value, Er> {
                if v < 0 {
                    return Err(Er::custom("negative exponent"));
                }
                self.visit_u64(v as u64)
            }
            fn visit_str<Er: de::Error>(self, v: &str) -> std::result::Result<Self::Value, Er> {
                E::from_str(v.trim())
                    .map(ExponentRepr)
                    .map_err(|_| Er::custom(format!("not an integer: {v:?}")))
            }
        }
        d.deserialize_any(V(std::marker::PhantomData))
    }
}

impl<E: Exponent> Serialize for WeightTuple<E> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        struct One<'a, E>(&'a E);
        impl<E: Exponent> Serialize for One<'_, E> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_exponent(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for e in &self.entries {
            seq.serialize_element(&One(e))?;
        }
        seq.end()
    }
}

impl<'de, E: Exponent> Deserialize<'de> for WeightTuple<E> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V<E>(std::marker::PhantomData<E>);
        impl<'de, E: Exponent> Visitor<'de> for V<E> {
            type Value = WeightTuple<E>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a list of positive integers")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(ExponentRepr(e)) = seq.next_element::<ExponentRepr<E>>()? {
                    out.push(e);
                }
                WeightTuple::new(out).map_err(de::Error::custom)
            }
        }
        d.deserialize_seq(V(std::marker::PhantomData))
    }
}

impl<E: Exponent> FromStr for WeightTuple<E> {
    type Err = Error;

    /// Accepts `"3,8"`, `"3 8"` or `"(3,8)"`.
    fn from_str(s: &str) -> Result<Self> {
        let items: Vec<&str> = s
            .trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        Self::parse(&items)
    }
}
