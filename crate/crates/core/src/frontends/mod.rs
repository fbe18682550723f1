//! Conversions of power-type constraints into weighted geometric means,
//! and emission of the resulting rotated cone systems.

mod emit;
mod families;

pub use emit::{emit_constraints, Cone, ConstraintDocument, Format, SCHEMA};
pub use families::{parse_rational, to_wgm, ConeInstance, Conversion, Family, SideConstraint, WgmInstance};
