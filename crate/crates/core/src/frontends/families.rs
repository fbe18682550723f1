//! Families of power-type constraints and their geometric mean forms.
//!
//! Each family is rewritten as one or more `∏ vᵢ^{λᵢ} ≥ u` with rational
//! weights summing to one, plus affine side constraints that the modeler
//! handles separately.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::WeightTuple;
use crate::Weights;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `∏ xᵢ^{λᵢ} ≥ x_{m+1}` with `Σλᵢ = 1`.
    Wgm,
    /// Same with `Σλᵢ < 1`.
    SubUnitWgm,
    /// `x^λ ≤ y`, `λ > 1`.
    PowerUp,
    /// `x^λ ≥ y`, `0 < λ < 1`.
    PowerDown,
    /// `x^{−λ} ≤ y`, `λ > 0`.
    NegPower,
    /// `∏ xᵢ^{−λᵢ} ≤ y`, `λᵢ > 0`.
    NegPowerMulti,
    /// `z ≥ ‖x‖_p` in dimension `n`, `p ≥ 1`.
    PNorm,
    /// `∏ xᵢ^{λᵢ} ≥ |z|` with `Σλᵢ = 1`.
    PowerCone,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Wgm,
        Family::SubUnitWgm,
        Family::PowerUp,
        Family::PowerDown,
        Family::NegPower,
        Family::NegPowerMulti,
        Family::PNorm,
        Family::PowerCone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Wgm => "wgm",
            Family::SubUnitWgm => "sub-unit-wgm",
            Family::PowerUp => "power-up",
            Family::PowerDown => "power-down",
            Family::NegPower => "neg-power",
            Family::NegPowerMulti => "neg-power-multi",
            Family::PNorm => "p-norm",
            Family::PowerCone => "power-cone",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown family {s:?}")))
    }
}

/// Parses `a/b` or `a` with integer `a`, `b`; decimals are refused.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not an integer fraction: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::invalid(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeInstance {
    pub family: Family,
    pub params: Vec<BigRational>,
    /// Vector length for the p-norm cone, ignored otherwise.
    pub dimension: usize,
    /// Renames applied to the default variable names.
    pub names: BTreeMap<String, String>,
}

impl ConeInstance {
    pub fn new(family: Family, params: Vec<BigRational>) -> Self {
        ConeInstance { family, params, dimension: 1, names: BTreeMap::new() }
    }

    pub fn with_dimension(mut self, n: usize) -> Self {
        self.dimension = n;
        self
    }
}

/// One geometric mean constraint `∏ bases[i]^{s_i/ŝ} ≥ mean`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WgmInstance {
    pub s: Weights,
    pub bases: Vec<String>,
    pub mean: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SideConstraint {
    /// `var = 1`
    FixOne { var: String },
    /// `Σ terms = total`
    Sum { terms: Vec<String>, total: String },
    /// `|inner| ≤ outer`
    AbsBound { inner: String, outer: String },
    /// `small ≤ large`
    AtMost { small: String, large: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Conversion {
    pub instances: Vec<WgmInstance>,
    pub side: Vec<SideConstraint>,
}

fn xs(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Integer tuple in lowest terms with `sᵢ/ŝ = λᵢ`. The weights must be
/// positive and sum to one.
fn tuple_of(weights: &[BigRational]) -> Result<Weights> {
    let den = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let ints: Vec<BigInt> = weights.iter().map(|w| (w * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let entries: Vec<BigUint> = ints
        .iter()
        .map(|x| (x / &g).to_biguint().ok_or_else(|| Error::internal("negative weight after checks")))
        .collect::<Result<_>>()?;
    WeightTuple::new(entries)
}

fn positive(params: &[BigRational], what: &str) -> Result<()> {
    match params.iter().position(|p| !p.is_positive()) {
        Some(k) => Err(Error::invalid(format!("{what}: parameter {} must be positive", k + 1))),
        None => Ok(()),
    }
}

fn exactly(params: &[BigRational], n: usize, family: Family) -> Result<()> {
    if params.len() != n {
        return Err(Error::invalid(format!("{family} takes {n} parameter(s), got {}", params.len())));
    }
    Ok(())
}

fn nonempty(params: &[BigRational], family: Family) -> Result<()> {
    if params.is_empty() {
        return Err(Error::invalid(format!("{family} needs at least one exponent")));
    }
    Ok(())
}

fn fix(var: &str) -> SideConstraint {
    SideConstraint::FixOne { var: var.to_string() }
}

pub fn to_wgm(inst: &ConeInstance) -> Result<Conversion> {
    let one = BigRational::one();
    let p = &inst.params;
    let family = inst.family;
    let single = |bases: Vec<&str>, weights: Vec<BigRational>, mean: &str| -> Result<WgmInstance> {
        Ok(WgmInstance {
            s: tuple_of(&weights)?,
            bases: bases.into_iter().map(String::from).collect(),
            mean: mean.to_string(),
        })
    };
    let mut out = Conversion::default();
    match family {
        Family::Wgm | Family::PowerCone | Family::SubUnitWgm => {
            nonempty(p, family)?;
            positive(p, family.name())?;
            let sum: BigRational = p.iter().sum();
            let m = p.len();
            let mut bases = xs("x", m);
            let mut weights = p.clone();
            match family {
                Family::SubUnitWgm => {
                    if sum >= one {
                        return Err(Error::invalid("sub-unit-wgm: exponents must sum to less than one"));
                    }
                    bases.push("y".into());
                    weights.push(&one - sum);
                    out.side.push(fix("y"));
                }
                _ if sum != one => return Err(Error::invalid(format!("{family}: exponents must sum to one"))),
                _ => {}
            }
            let mean = if family == Family::PowerCone { "y".to_string() } else { format!("x{}", m + 1) };
            if family == Family::PowerCone {
                out.side.push(SideConstraint::AbsBound { inner: "z".into(), outer: "y".into() });
            }
            out.instances.push(WgmInstance { s: tuple_of(&weights)?, bases, mean });
        }
        Family::PowerUp => {
            exactly(p, 1, family)?;
            if p[0] <= one {
                return Err(Error::invalid("power-up: exponent must exceed one"));
            }
            let inv = p[0].recip();
            out.instances.push(single(vec!["y", "z"], vec![inv.clone(), &one - inv], "x")?);
            out.side.push(fix("z"));
        }
        Family::PowerDown => {
            exactly(p, 1, family)?;
            if !p[0].is_positive() || p[0] >= one {
                return Err(Error::invalid("power-down: exponent must lie strictly between zero and one"));
            }
            out.instances.push(single(vec!["x", "z"], vec![p[0].clone(), &one - &p[0]], "y")?);
            out.side.push(fix("z"));
        }
        Family::NegPower | Family::NegPowerMulti => {
            if family == Family::NegPower {
                exactly(p, 1, family)?;
            }
            nonempty(p, family)?;
            positive(p, family.name())?;
            let denom = &one + p.iter().sum::<BigRational>();
            let mut weights: Vec<BigRational> = p.iter().map(|l| l / &denom).collect();
            weights.push(denom.recip());
            let mut bases = if family == Family::NegPower { vec!["x".to_string()] } else { xs("x", p.len()) };
            bases.push("y".into());
            out.instances.push(WgmInstance { s: tuple_of(&weights)?, bases, mean: "z".into() });
            out.side.push(fix("z"));
        }
        Family::PNorm => {
            exactly(p, 1, family)?;
            if p[0] < one {
                return Err(Error::invalid("p-norm: p must be at least one"));
            }
            let n = inst.dimension;
            if n == 0 {
                return Err(Error::invalid("p-norm: dimension must be positive"));
            }
            let inv = p[0].recip();
            for i in 1..=n {
                let (y, w) = (format!("y{i}"), format!("w{i}"));
                if p[0] == one {
                    // the mean degenerates to y_i ≥ w_i
                    out.side.push(SideConstraint::AtMost { small: w.clone(), large: y });
                } else {
                    out.instances.push(single(vec!["z", &y], vec![&one - &inv, inv.clone()], &w)?);
                }
            }
            out.side.push(SideConstraint::Sum { terms: xs("y", n), total: "z".into() });
            for i in 1..=n {
                out.side.push(SideConstraint::AbsBound { inner: format!("x{i}"), outer: format!("w{i}") });
            }
        }
    }
    if !inst.names.is_empty() {
        rename(&mut out, &inst.names);
    }
    Ok(out)
}

fn rename(out: &mut Conversion, names: &BTreeMap<String, String>) {
    let map = |v: &mut String| {
        if let Some(n) = names.get(v.as_str()) {
            *v = n.clone();
        }
    };
    for inst in &mut out.instances {
        inst.bases.iter_mut().for_each(map);
        map(&mut inst.mean);
    }
    for side in &mut out.side {
        match side {
            SideConstraint::FixOne { var } => map(var),
            SideConstraint::Sum { terms, total } => {
                terms.iter_mut().for_each(map);
                map(total);
            }
            SideConstraint::AbsBound { inner: a, outer: b } | SideConstraint::AtMost { small: a, large: b } => {
                map(a);
                map(b);
            }
        }
    }
}
