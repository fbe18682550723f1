//! Constraint documents for downstream modelers.
//!
//! Every triple becomes a three-dimensional rotated cone read as
//! `a1·a2 ≥ a3²` with `a1, a2 ≥ 0`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::verify::reconstruct;
use crate::weights::WeightTuple;

use super::families::SideConstraint;

pub const SCHEMA: &str = "socrep-v1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::invalid(format!("unknown format {s:?}, expected json or text"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub a1: String,
    pub a2: String,
    pub a3: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintDocument {
    pub schema: &'static str,
    pub form: &'static str,
    pub variables: Vec<String>,
    pub cones: Vec<Cone>,
    pub side: Vec<SideConstraint>,
}

impl ConstraintDocument {
    /// Refuses configurations that do not represent `w`.
    pub fn build<E: Exponent>(w: &WeightTuple<E>, cfg: &Configuration) -> Result<Self> {
        let rec = reconstruct(cfg, w).map_err(|e| Error::RefuseToEmit(e.to_string()))?;
        if !rec.is_valid() {
            return Err(Error::RefuseToEmit(format!("configuration does not represent {w}: {}", rec.reason.describe())));
        }
        let variables: Vec<String> = (1..=cfg.variable_count()).map(|v| format!("x{v}")).collect();
        let cones = cfg
            .triples()
            .iter()
            .map(|t| Cone {
                a1: variables[t.left - 1].clone(),
                a2: variables[t.right - 1].clone(),
                a3: variables[t.target - 1].clone(),
            })
            .collect();
        Ok(ConstraintDocument { schema: SCHEMA, form: "a1*a2 >= a3^2", variables, cones, side: Vec::new() })
    }

    /// Replaces positional names; `names` must cover every variable.
    pub fn with_names(mut self, names: &[String]) -> Result<Self> {
        if names.len() != self.variables.len() {
            return Err(Error::invalid(format!("{} names given for {} variables", names.len(), self.variables.len())));
        }
        let lookup = |v: &String| names[self.variables.iter().position(|x| x == v).expect("known variable")].clone();
        for c in &mut self.cones {
            *c = Cone { a1: lookup(&c.a1), a2: lookup(&c.a2), a3: lookup(&c.a3) };
        }
        self.variables = names.to_vec();
        Ok(self)
    }

    pub fn with_side(mut self, side: Vec<SideConstraint>) -> Self {
        self.side = side;
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cones {
            let _ = writeln!(out, "{} * {} >= {}^2", c.a1, c.a2, c.a3);
        }
        for s in &self.side {
            let _ = match s {
                SideConstraint::FixOne { var } => writeln!(out, "{var} = 1"),
                SideConstraint::Sum { terms, total } => writeln!(out, "{} = {total}", terms.join(" + ")),
                SideConstraint::AbsBound { inner, outer } => writeln!(out, "|{inner}| <= {outer}"),
                SideConstraint::AtMost { small, large } => writeln!(out, "{small} <= {large}"),
            };
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(self)?,
            Format::Text => self.to_text(),
        })
    }
}

pub fn emit_constraints<E: Exponent>(w: &WeightTuple<E>, cfg: &Configuration, format: Format) -> Result<String> {
    ConstraintDocument::build(w, cfg)?.render(format)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u64]) -> WeightTuple<u64> {
        WeightTuple::from_u64s(v).unwrap()
    }

    #[test]
    fn single_cone() {
        let c = Configuration::from_arrays(2, &[[1, 2, 3]]).unwrap();
        let doc = ConstraintDocument::build(&w(&[1, 1]), &c).unwrap();
        assert_eq!(doc.cones, vec![Cone { a1: "x1".into(), a2: "x2".into(), a3: "x3".into() }]);
        assert_eq!(emit_constraints(&w(&[1, 1]), &c, Format::Text).unwrap(), "x1 * x2 >= x3^2\n");
        let v: serde_json::Value = serde_json::from_str(&emit_constraints(&w(&[1, 1]), &c, Format::Json).unwrap()).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["cones"][0]["a3"], "x3");
    }

    #[test]
    fn three_eight() {
        let c = Configuration::from_arrays(2, &[[2, 6, 3], [1, 3, 4], [3, 4, 5], [4, 5, 6]]).unwrap();
        let text = emit_constraints(&w(&[3, 8]), &c, Format::Text).unwrap();
        assert_eq!(text, "x2 * x6 >= x3^2\nx1 * x3 >= x4^2\nx3 * x4 >= x5^2\nx4 * x5 >= x6^2\n");
    }

    #[test]
    fn refuses_invalid() {
        let c = Configuration::from_arrays(2, &[[1, 2, 3]]).unwrap();
        assert!(matches!(ConstraintDocument::build(&w(&[1, 2]), &c), Err(Error::RefuseToEmit(_))));
    }

    #[test]
    fn names_and_side() {
        let c = Configuration::from_arrays(2, &[[1, 2, 3]]).unwrap();
        let names: Vec<String> = ["a", "b", "g"].map(String::from).to_vec();
        let doc = ConstraintDocument::build(&w(&[1, 1]), &c)
            .unwrap()
            .with_names(&names)
            .unwrap()
            .with_side(vec![SideConstraint::FixOne { var: "g".into() }]);
        assert_eq!(doc.to_text(), "a * b >= g^2\ng = 1\n");
        assert!(doc.clone().with_names(&names[..2]).is_err());
    }
}
