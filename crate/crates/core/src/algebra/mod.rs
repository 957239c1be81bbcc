//! Group expressions built from cyclic, free abelian and finite leaf groups by
//! direct products, the four cyclic-shift wreath products and central
//! quotients, together with element arithmetic, homomorphisms and
//! exact-sequence checks on finite windows.

mod element;
mod exact;
mod expr;
mod finite;
mod hom;
mod ops;
mod smith;

pub use element::GroupElement;
pub use exact::{check_exact, ExactnessReport};
pub use expr::{Flavor, GroupExpr};
pub use finite::{FiniteGroup, LeafTriple};
pub use hom::{hom_apply, HomRule, Homomorphism};
pub use ops::{
    canonicalize, check_shape, enumerate_truncated, generators, identity, invert, is_central, multiply, pow,
    random_element, window_size, ENUMERATION_LIMIT,
};
pub use smith::{invariant_factors, smith_pair};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("element {element} does not have the shape of {expr}")]
    ShapeMismatch { expr: String, element: String },
    #[error("atom {0} has no finite assignment")]
    UnassignedAtom(String),
    #[error("invalid expression: {0}")]
    InvalidExpr(String),
    #[error("quotient generator {0} is not central")]
    NotCentral(String),
    #[error("quotient generator {0} has finite order")]
    FiniteOrderGenerator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("enumeration of {expr} would produce {size} elements")]
    EnumerationTooLarge { expr: String, size: u128 },
    #[error("homomorphism rule does not fit {source_expr} -> {target}: {detail}")]
    IllTypedRule {
        source_expr: String,
        target: String,
        detail: String,
    },
    #[error("incompatible leaves: {0}")]
    IncompatibleLeaves(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub(crate) fn shape_err(expr: &GroupExpr, element: &GroupElement) -> AlgebraError {
    AlgebraError::ShapeMismatch {
        expr: expr.to_string(),
        element: element.to_string(),
    }
}
