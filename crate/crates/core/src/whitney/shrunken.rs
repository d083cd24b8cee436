//! The shrunken cube family: children of side `S_s` sit in the corners of
//! their parent, leaving a gap along every axis.

use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{CubeAddress, Rational};

/// `S_s = (s + 1) / (s 2^s)`, the side of a shrunken cube at depth `s - 1`.
pub fn shrunken_side(s: usize) -> Result<Rational> {
    if s == 0 {
        return Err(Error::Domain("shrunken sides start at s = 1".into()));
    }
    Rational::new(IBig::from(s + 1), IBig::from(s) << s)
}

/// `S_(s-1) - 2 S_s = 1 / ((s - 1) s 2^(s-1))`, the per-axis gap between
/// sibling cubes at depth `s - 1`.
pub fn shrunken_gap(s: usize) -> Result<Rational> {
    if s < 2 {
        return Err(Error::Domain("gaps start at s = 2".into()));
    }
    Rational::new(1, IBig::from((s - 1) * s) << (s - 1))
}

/// Offset of the upper child inside a parent of side `S_i`: `S_i - S_(i+1)`.
pub fn upper_offset(i: usize) -> Rational {
    side(i) - side(i + 1)
}

pub(crate) fn side(s: usize) -> Rational {
    shrunken_side(s).expect("s >= 1")
}

/// Coordinate of the lower end of the shrunken interval with binary path `bits`.
pub fn shrunken_corner_1d(bits: &[u8]) -> Rational {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .fold(Rational::zero(), |acc, (i, _)| acc + upper_offset(i + 1))
}

/// An element of the shrunken family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrunkenCube {
    pub addr: CubeAddress,
    pub corner: Vec<Rational>,
    pub side: Rational,
}

impl ShrunkenCube {
    pub fn new(addr: CubeAddress) -> Self {
        let corner = (0..addr.dim()).map(|a| shrunken_corner_1d(&addr.axis_bits(a))).collect();
        let side = side(addr.depth() + 1);
        ShrunkenCube { addr, corner, side }
    }

    /// The vertex selected by one bit per axis (1 = upper end).
    pub fn vertex(&self, bits: &[u8]) -> Vec<Rational> {
        self.corner
            .iter()
            .zip(bits)
            .map(|(c, &b)| if b == 1 { c + &self.side } else { c.clone() })
            .collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.corner.len()
            && self.corner.iter().zip(x).all(|(c, xi)| c <= xi && xi <= &(c + &self.side))
    }

    pub fn children(&self) -> Vec<ShrunkenCube> {
        self.addr.children().into_iter().map(ShrunkenCube::new).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn side_examples() {
        assert_eq!(shrunken_side(1).unwrap(), q("1"));
        assert_eq!(shrunken_side(2).unwrap(), q("3/8"));
        assert_eq!(shrunken_side(3).unwrap(), q("1/6"));
        assert!(shrunken_side(0).is_err());
    }

    #[test]
    fn corner_examples() {
        assert_eq!(shrunken_corner_1d(&[]), q("0"));
        assert_eq!(shrunken_corner_1d(&[0, 0, 0]), q("0"));
        assert_eq!(shrunken_corner_1d(&[1]), q("5/8"));
        assert_eq!(shrunken_corner_1d(&[1, 1]), q("5/6"));
    }

    #[test]
    fn children_in_corners() {
        let root = ShrunkenCube::new(CubeAddress::root(2));
        for child in root.children() {
            for a in 0..2 {
                let c = &child.corner[a];
                assert!(c.is_zero() || (c + &child.side) == Rational::one());
            }
        }
        let top_left = ShrunkenCube::new(CubeAddress::new(2, vec![2]).unwrap());
        assert_eq!(top_left.corner, vec![q("0"), q("5/8")]);
    }
}
