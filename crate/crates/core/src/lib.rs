//! Configurations of nested circles and Jordan curves: nesting trees,
//! rounding retractions and braided tree-automorphism groups.

pub mod conformal;
pub mod curves;
pub mod error;
pub mod geometry;
pub mod groups;
pub mod io;
pub mod trees;

pub use error::{Error, Result};
