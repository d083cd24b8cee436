//! Cube-preserving space-filling curves in every dimension and the Whitney-type
//! maps built on top of them, with exact verification of their combinatorics.

pub mod error;
pub mod exact;
pub mod real;

pub use error::{Error, Result};
pub use exact::{Closure, CubeAddress, Dyadic, Rational};
pub mod curve;
pub mod report;

pub use curve::{Curve, CurveOrderRank, CurveState, Method};
pub use report::{Check, Status, VerifyReport};
pub mod whitney;
pub mod analysis;

pub use whitney::{WhitneyMap, ShrunkenCube};
