//! Shrunken cube family, the map `p`, its extension off `B_0`, the arc set
//! `E` and the product lift.

pub mod arc;
pub mod bump;
pub mod eval;
pub mod lift;
pub mod locate;
pub mod map;
pub mod shrunken;

pub use arc::{ArcSegment, ArcSet};
pub use bump::{bump_g, bump_g_derivs, bump_g_real};
pub use eval::{segment_eval, PValue, PValueRecord, SegmentL};
pub use lift::{theorem2_lift, Coverage, ProductMap};
pub use locate::{Location, SegmentGeom, SegmentKind};
pub use map::{B0Point, WhitneyConfig, WhitneyMap};
pub use shrunken::{shrunken_corner_1d, shrunken_gap, shrunken_side, ShrunkenCube};
