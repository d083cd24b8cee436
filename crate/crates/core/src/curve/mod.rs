//! The transducers `S_n` and the cube-preserving curves `f_n`.

pub mod fcurve;
pub mod machine;
pub mod transducer;
pub mod verify;

pub use fcurve::{cube_count, CurveOrderRank, FnPoint};
pub use machine::Curve;
pub use transducer::{CellAddress, CurveState, Method, Tables};
pub use verify::{adjacency_report, measure_check, verify_curve, AdjacencyReport};
