use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::real::{self, Real};
use crate::whitney::bump::bump_g_real;
use crate::whitney::locate::{Location, SegmentGeom};
use crate::whitney::map::WhitneyMap;

/// A value of `p`: exact when known, otherwise a high-precision
/// approximation with an error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct PValue {
    pub approx: Vec<Real>,
    pub exact: Option<Vec<Rational>>,
    pub error_bound: f64,
}

impl PValue {
    pub fn exact(v: Vec<Rational>, precision: usize) -> Self {
        let approx = v.iter().map(|r| r.to_real(precision)).collect();
        PValue { approx, exact: Some(v), error_bound: 0.0 }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.approx.iter().map(real::to_f64).collect()
    }
}

/// Serializable summary of a [`PValue`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PValueRecord {
    pub exact: Option<Vec<Rational>>,
    pub approx: Vec<f64>,
    pub error_bound: f64,
}

impl From<&PValue> for PValueRecord {
    fn from(v: &PValue) -> Self {
        PValueRecord { exact: v.exact.clone(), approx: v.to_f64(), error_bound: v.error_bound }
    }
}

/// Segment `L(x', x'')` with the values of `p` at its ends.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentL {
    pub x_prime: Vec<Rational>,
    pub x_double_prime: Vec<Rational>,
    pub axis: usize,
    pub v_prime: PValue,
    pub v_double_prime: PValue,
}

impl SegmentL {
    /// Length `x''_j - x'_j` along the varying axis.
    pub fn length(&self) -> Rational {
        &self.x_double_prime[self.axis] - &self.x_prime[self.axis]
    }

    /// Both end values are exact and equal, so `p` is constant on the segment.
    pub fn is_constant(&self) -> bool {
        matches!((&self.v_prime.exact, &self.v_double_prime.exact), (Some(a), Some(b)) if a == b)
    }
}

/// `p` on a segment: `(v'' - v') g((x_j - x'_j) / (x''_j - x'_j)) + v'`.
pub fn segment_eval(seg: &SegmentL, x: &[Rational], precision: usize) -> Result<PValue> {
    let j = seg.axis;
    let on_line = x.len() == seg.x_prime.len()
        && x.iter().enumerate().all(|(i, c)| i == j || c == &seg.x_prime[i])
        && seg.x_prime[j] <= x[j]
        && x[j] <= seg.x_double_prime[j];
    if !on_line {
        return Err(Error::Domain("point is not on the segment".into()));
    }
    if seg.is_constant() || x[j] == seg.x_prime[j] {
        return Ok(seg.v_prime.clone());
    }
    if x[j] == seg.x_double_prime[j] {
        return Ok(seg.v_double_prime.clone());
    }
    let u = (&x[j] - &seg.x_prime[j]).checked_div(&seg.length())?;
    let g = bump_g_real(&u, precision);
    let approx = seg
        .v_prime
        .approx
        .iter()
        .zip(&seg.v_double_prime.approx)
        .map(|(a, b)| a + &((b - a) * &g))
        .collect();
    Ok(PValue {
        approx,
        exact: None,
        error_bound: seg.v_prime.error_bound.max(seg.v_double_prime.error_bound),
    })
}

impl WhitneyMap {
    /// Segment through a located point, with recursively evaluated ends.
    pub fn segment(&self, geom: &SegmentGeom) -> Result<SegmentL> {
        Ok(SegmentL {
            v_prime: self.eval_p(&geom.lower)?,
            v_double_prime: self.eval_p(&geom.upper)?,
            x_prime: geom.lower.clone(),
            x_double_prime: geom.upper.clone(),
            axis: geom.axis,
        })
    }

    /// `p(x)` truncated at the configured depth.
    pub fn eval_p(&self, x: &[Rational]) -> Result<PValue> {
        match self.locate(x)? {
            Location::Vertex { prefix, tail } => Ok(PValue::exact(self.vertex_image(&prefix, tail)?, self.precision())),
            Location::OnSegment(geom) => {
                let seg = self.segment(&geom)?;
                segment_eval(&seg, x, self.precision())
            }
            Location::DepthExhausted { cube } => {
                let image = self.cube_image(&cube)?;
                let centre = image.center();
                let err = self.truncation_error(self.depth()).to_f64();
                let approx = centre.iter().map(|r| r.to_real(self.precision())).collect();
                Ok(PValue { approx, exact: None, error_bound: err })
            }
        }
    }
}
