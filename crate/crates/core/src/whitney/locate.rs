//! Classification of a point of `[0,1]^m` against the shrunken hierarchy.
//!
//! The family is a product of 1-D families, so each axis is descended on its
//! own: at every level the coordinate is in the lower child, the upper
//! child, or the gap between them. A coordinate equal to an end of its
//! current interval stays on that end forever.
//!
//! Let `g` be the first level at which some axis falls into a gap and
//! `Q(x)` the shrunken cube at the pairing depth `n floor((g - 1) / n)`.
//! The axes whose gap level lies within the next `n` levels form the set
//! `M`. With `|M| = 1` the point lies on a segment along that axis between
//! the two gap edges, whose ends lie in children of `Q(x)`. With `|M| > 1`
//! the segment runs along the least axis of `M`, again between its gap
//! edges; its ends keep the other axes of `M` in their gaps and are
//! classified the same way, one axis fewer each time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{CubeAddress, Rational};
use crate::whitney::map::WhitneyMap;
use crate::whitney::shrunken::{shrunken_corner_1d, side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum AxisFate {
    /// Strictly inside the gap opened at `level`, between `lower` and `upper`.
    Gap { level: usize, lower: Rational, upper: Rational },
    /// On the `bit` end of every interval from the current depth on.
    Endpoint { bit: u8 },
    /// Still undecided at the depth cap.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct AxisDescent {
    pub bits: Vec<u8>,
    pub fate: AxisFate,
}

impl AxisDescent {
    /// Binary path of length `depth`, extending an endpoint with its bit.
    fn path(&self, depth: usize) -> Option<Vec<u8>> {
        if depth <= self.bits.len() {
            return Some(self.bits[..depth].to_vec());
        }
        match self.fate {
            AxisFate::Endpoint { bit } => {
                let mut out = self.bits.clone();
                out.resize(depth, bit);
                Some(out)
            }
            _ => None,
        }
    }
}

pub(crate) fn descend_axis(x: &Rational, max_levels: usize) -> AxisDescent {
    let mut lo = Rational::zero();
    let mut bits = Vec::new();
    for i in 0..=max_levels {
        let width = side(i + 1);
        let hi = &lo + &width;
        if x == &lo {
            return AxisDescent { bits, fate: AxisFate::Endpoint { bit: 0 } };
        }
        if x == &hi {
            return AxisDescent { bits, fate: AxisFate::Endpoint { bit: 1 } };
        }
        if i == max_levels {
            break;
        }
        let child = side(i + 2);
        let lower_edge = &lo + &child;
        let upper_edge = &hi - &child;
        if x <= &lower_edge {
            bits.push(0);
        } else if x >= &upper_edge {
            bits.push(1);
            lo = upper_edge;
        } else {
            return AxisDescent { bits, fate: AxisFate::Gap { level: i + 1, lower: lower_edge, upper: upper_edge } };
        }
    }
    AxisDescent { bits, fate: AxisFate::Exhausted }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    /// The only gap axis inside `Q(x)`: ends lie in two children of `Q(x)`.
    Prime,
    /// Several gap axes: the least one is chosen, ends are again off `B_0`.
    DoublePrime,
}

/// The axis-parallel segment through a point off `B_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentGeom {
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
    pub axis: usize,
    /// Number of coordinates strictly inside `Q(x)`.
    pub stratum: usize,
    /// The pairing-level cube `Q(x)`.
    pub cube: CubeAddress,
    pub kind: SegmentKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    /// A point of `B_0` whose shrunken digits (0-based) are `prefix`
    /// followed by `tail` forever.
    Vertex { prefix: Vec<u32>, tail: u32 },
    OnSegment(SegmentGeom),
    /// Neither resolved nor separated within the depth cap; `cube` is the
    /// shrunken cube at the deepest resolved level.
    DepthExhausted { cube: CubeAddress },
}

fn spatial_digits(paths: &[Vec<u8>], depth: usize) -> Vec<u32> {
    (0..depth)
        .map(|j| paths.iter().fold(0u32, |acc, p| (acc << 1) | p[j] as u32))
        .collect()
}

impl WhitneyMap {
    /// Classifies `x` within the first `depth() * n` shrunken levels.
    pub fn locate(&self, x: &[Rational]) -> Result<Location> {
        let m = self.m() as usize;
        let n = self.n() as usize;
        if x.len() != m {
            return Err(Error::Dimension(format!("expected {m} coordinates, got {}", x.len())));
        }
        if x.iter().any(|c| c.signum() < 0 || c > &Rational::one()) {
            return Err(Error::Domain("point outside the unit cube".into()));
        }
        let levels = self.levels();
        let axes: Vec<AxisDescent> = x.iter().map(|c| descend_axis(c, levels + n)).collect();
        let gap_level = |a: &AxisDescent| match a.fate {
            AxisFate::Gap { level, .. } => Some(level),
            _ => None,
        };
        let first_gap = axes.iter().filter_map(gap_level).filter(|&g| g <= levels).min();
        let Some(g) = first_gap else {
            if axes.iter().all(|a| matches!(a.fate, AxisFate::Endpoint { .. })) {
                let depth = axes.iter().map(|a| a.bits.len()).max().unwrap_or(0);
                let paths: Vec<Vec<u8>> = axes.iter().map(|a| a.path(depth).expect("endpoint")).collect();
                let tail = axes.iter().fold(0u32, |acc, a| match a.fate {
                    AxisFate::Endpoint { bit } => (acc << 1) | bit as u32,
                    _ => unreachable!(),
                });
                return Ok(Location::Vertex { prefix: spatial_digits(&paths, depth), tail });
            }
            let paths: Vec<Vec<u8>> = axes.iter().map(|a| a.path(levels).expect("resolved to the cap")).collect();
            let cube = CubeAddress::from_axis_bits(&paths)?;
            return Ok(Location::DepthExhausted { cube });
        };
        let block = (g - 1) / n;
        let base = block * n;
        let end = base + n;
        let members: Vec<usize> = (0..m).filter(|&a| gap_level(&axes[a]).is_some_and(|l| l <= end)).collect();
        let paths: Vec<Vec<u8>> = axes.iter().map(|a| a.path(base).expect("inside the pairing cube")).collect();
        let cube = CubeAddress::from_axis_bits(&paths)?;
        let width = side(base + 1);
        let stratum = (0..m)
            .filter(|&a| {
                let lo = shrunken_corner_1d(&paths[a]);
                lo < x[a] && x[a] < &lo + &width
            })
            .count();
        let axis = members[0];
        let AxisFate::Gap { lower, upper, .. } = &axes[axis].fate else { unreachable!() };
        let mut lo_pt = x.to_vec();
        let mut hi_pt = x.to_vec();
        lo_pt[axis] = lower.clone();
        hi_pt[axis] = upper.clone();
        let kind = if members.len() == 1 { SegmentKind::Prime } else { SegmentKind::DoublePrime };
        Ok(Location::OnSegment(SegmentGeom { lower: lo_pt, upper: hi_pt, axis, stratum, cube, kind }))
    }

    /// Axes along which a segment through `x` could satisfy the single-gap
    /// conditions. Used to confirm that the choice in [`WhitneyMap::locate`]
    /// is forced.
    pub fn prime_candidates(&self, x: &[Rational]) -> Result<Vec<usize>> {
        let Location::OnSegment(seg) = self.locate(x)? else {
            return Ok(Vec::new());
        };
        let n = self.n() as usize;
        let end = seg.cube.depth() + n;
        let mut out = Vec::new();
        for a in 0..x.len() {
            // Moving along `a` must leave every other axis inside a child.
            let others_inside = (0..x.len()).filter(|&b| b != a).all(|b| {
                !matches!(descend_axis(&x[b], end).fate, AxisFate::Gap { level, .. } if level <= end)
            });
            let own_gap = matches!(descend_axis(&x[a], end).fate, AxisFate::Gap { level, .. } if level <= end);
            if others_inside && own_gap {
                out.push(a);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pt(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn axis_descent() {
        let d = descend_axis(&q("1/2"), 5);
        assert_eq!(d.fate, AxisFate::Gap { level: 1, lower: q("3/8"), upper: q("5/8") });
        let d = descend_axis(&q("5/8"), 5);
        assert_eq!((d.bits, d.fate), (vec![1], AxisFate::Endpoint { bit: 0 }));
        let d = descend_axis(&q("3/8"), 5);
        assert_eq!((d.bits, d.fate), (vec![0], AxisFate::Endpoint { bit: 1 }));
    }

    #[test]
    fn vertex_of_depth_one_cube() {
        let w = WhitneyMap::new(2, 1, 3).unwrap();
        let loc = w.locate(&pt(&["3/8", "5/8"])).unwrap();
        assert_eq!(loc, Location::Vertex { prefix: vec![0b01], tail: 0b10 });
    }

    #[test]
    fn gap_edge_between_bl_and_tl() {
        let w = WhitneyMap::new(2, 1, 3).unwrap();
        let Location::OnSegment(seg) = w.locate(&pt(&["3/8", "1/2"])).unwrap() else { panic!() };
        assert_eq!(seg.axis, 1);
        assert_eq!(seg.kind, SegmentKind::Prime);
        assert_eq!(seg.lower, pt(&["3/8", "3/8"]));
        assert_eq!(seg.upper, pt(&["3/8", "5/8"]));
        assert_eq!(w.prime_candidates(&pt(&["3/8", "1/2"])).unwrap(), vec![1]);
    }

    #[test]
    fn centre_uses_least_axis() {
        let w = WhitneyMap::new(2, 1, 3).unwrap();
        let Location::OnSegment(seg) = w.locate(&pt(&["1/2", "1/2"])).unwrap() else { panic!() };
        assert_eq!(seg.axis, 0);
        assert_eq!(seg.kind, SegmentKind::DoublePrime);
        assert_eq!(seg.stratum, 2);
        assert_eq!(seg.lower, pt(&["3/8", "1/2"]));
        assert!(w.prime_candidates(&pt(&["1/2", "1/2"])).unwrap().is_empty());
    }

    #[test]
    fn origin_is_vertex() {
        let w = WhitneyMap::new(3, 2, 1).unwrap();
        assert_eq!(w.locate(&pt(&["0", "0", "0"])).unwrap(), Location::Vertex { prefix: vec![], tail: 0 });
    }

    #[test]
    fn pairing_block_for_n2() {
        // Gap at level 2 still belongs to the root block when n = 2.
        let w = WhitneyMap::new(3, 2, 2).unwrap();
        let x = pt(&["3/16", "0", "0"]);
        let Location::OnSegment(seg) = w.locate(&x).unwrap() else { panic!() };
        assert_eq!(seg.cube.depth(), 0);
        assert_eq!(seg.kind, SegmentKind::Prime);
    }
}
