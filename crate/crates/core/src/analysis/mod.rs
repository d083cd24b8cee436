//! Numerical probes of the smoothness claims and independent oracles.

pub mod lemma;
pub mod limits;
pub mod oracle;
pub mod orders;
pub mod probe;

pub use lemma::{lemma21_crossover, lemma21_series, lemma21_step_ratio, lemma21_term, segment_majorant};
pub use limits::{
    b1_edge_segments, joining_segments, lemma22_probe, lemma23_probe, surjectivity_check, LevelBound,
    ProbeSegment, SegmentProbeReport,
};
pub use oracle::{hilbert_d2xy, hilbert_oracle, Isometry};
pub use orders::DerivOrderSet;
pub use probe::{lambda_derivative, sample_e_points, vanish_probe, EPoint, ProbeConfig, ProbeReport, ProbeSample, Trend};
