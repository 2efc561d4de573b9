//! Binary linear codes attached to double cosets of the parabolic subgroup
//! Q^-(2n, q) of SO^-(2n, q), q = 2^r, and the recursive formulas they give
//! for power moments of Kloosterman sums.

pub mod cli;
pub mod codes;
pub mod combinat;
pub mod error;
pub mod field;
pub mod groups;
pub mod kloosterman;
pub mod moments;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use field::{make_field, FieldCtx, FieldElement};
