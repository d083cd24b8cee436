use std::fmt;

use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::digits::{bits_digit, digit_bits, digits_of_point, Closure};
use crate::exact::{Dyadic, Rational};

/// Largest supported dimension; digits must fit in `u32`.
pub const MAX_DIM: u32 = 16;

/// A closed dyadic cube of `[0,1]^dim`, named by its 1-based digit path.
///
/// Digit `d` at a level selects the child whose per-axis bits are those of
/// `d - 1`, with axis 0 as the most significant bit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeAddress {
    dim: u32,
    digits: Vec<u32>,
}

impl CubeAddress {
    pub fn new(dim: u32, digits: Vec<u32>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Dimension(format!("dimension {dim} not in 1..={MAX_DIM}")));
        }
        let max = 1u32 << dim;
        if let Some(bad) = digits.iter().find(|&&d| d == 0 || d > max) {
            return Err(Error::InvalidAddress(format!("digit {bad} not in 1..={max}")));
        }
        Ok(CubeAddress { dim, digits })
    }

    pub(crate) fn new_unchecked(dim: u32, digits: Vec<u32>) -> Self {
        debug_assert!(digits.iter().all(|&d| d >= 1 && d <= 1 << dim));
        CubeAddress { dim, digits }
    }

    pub fn root(dim: u32) -> Self {
        CubeAddress { dim, digits: Vec::new() }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn child(&self, digit: u32) -> Result<Self> {
        let mut digits = self.digits.clone();
        digits.push(digit);
        CubeAddress::new(self.dim, digits)
    }

    pub fn children(&self) -> Vec<Self> {
        (1..=1u32 << self.dim)
            .map(|d| {
                let mut digits = self.digits.clone();
                digits.push(d);
                CubeAddress { dim: self.dim, digits }
            })
            .collect()
    }

    pub fn parent(&self) -> Option<Self> {
        let (_, head) = self.digits.split_last()?;
        Some(CubeAddress { dim: self.dim, digits: head.to_vec() })
    }

    pub fn prefix(&self, depth: usize) -> Self {
        CubeAddress { dim: self.dim, digits: self.digits[..depth.min(self.depth())].to_vec() }
    }

    pub fn is_ancestor_of(&self, other: &CubeAddress) -> bool {
        self.dim == other.dim && other.digits.starts_with(&self.digits)
    }

    /// Side length `2^-depth`.
    pub fn side(&self) -> Dyadic {
        Dyadic::new(1, self.depth() as u32)
    }

    /// Binary digits (0/1) of one axis, coarsest first.
    pub fn axis_bits(&self, axis: u32) -> Vec<u8> {
        self.digits.iter().map(|&d| digit_bits(d, self.dim)[axis as usize]).collect()
    }

    /// Inverse of [`CubeAddress::axis_bits`] across all axes; every axis needs the same length.
    pub fn from_axis_bits(bits: &[Vec<u8>]) -> Result<Self> {
        let dim = bits.len() as u32;
        let depth = bits.first().map_or(0, Vec::len);
        if bits.iter().any(|b| b.len() != depth) {
            return Err(Error::Shape("axes have different depths".into()));
        }
        let digits = (0..depth)
            .map(|j| bits_digit(&bits.iter().map(|b| b[j]).collect::<Vec<_>>()))
            .collect();
        CubeAddress::new(dim, digits)
    }

    /// Integer coordinates of the minimal corner at scale `2^depth`.
    pub fn lattice(&self) -> Vec<IBig> {
        let mut coords = vec![IBig::ZERO; self.dim as usize];
        for &d in &self.digits {
            let bits = digit_bits(d, self.dim);
            for (c, b) in coords.iter_mut().zip(bits) {
                *c = (std::mem::take(c) << 1) + IBig::from(b);
            }
        }
        coords
    }

    /// Fast variant of [`CubeAddress::lattice`] for depth below 64.
    pub fn lattice_u64(&self) -> Vec<u64> {
        assert!(self.depth() < 64, "depth too large for u64 lattice");
        let mut coords = vec![0u64; self.dim as usize];
        for &d in &self.digits {
            let v = d - 1;
            for (a, c) in coords.iter_mut().enumerate() {
                *c = (*c << 1) | ((v >> (self.dim - 1 - a as u32)) & 1) as u64;
            }
        }
        coords
    }

    pub fn from_lattice_u64(dim: u32, coords: &[u64], depth: usize) -> Result<Self> {
        if coords.len() != dim as usize {
            return Err(Error::Shape(format!("expected {dim} coordinates, got {}", coords.len())));
        }
        if depth < 64 && coords.iter().any(|&c| c >> depth != 0) {
            return Err(Error::InvalidAddress("lattice coordinate out of range".into()));
        }
        let digits = (0..depth)
            .map(|j| {
                let shift = depth - 1 - j;
                coords.iter().fold(0u32, |acc, &c| (acc << 1) | ((c >> shift) & 1) as u32) + 1
            })
            .collect();
        CubeAddress::new(dim, digits)
    }

    /// Lexicographically minimal vertex.
    pub fn corner(&self) -> Vec<Dyadic> {
        let s = self.depth() as u32;
        self.lattice().into_iter().map(|c| Dyadic::new(c, s)).collect()
    }

    pub fn geometry(&self) -> (Vec<Dyadic>, Dyadic) {
        (self.corner(), self.side())
    }

    pub fn center(&self) -> Vec<Rational> {
        let half = Dyadic::new(1, self.depth() as u32 + 1);
        self.corner().iter().map(|c| (c + &half).to_rational()).collect()
    }

    /// Closed-cube membership.
    pub fn contains(&self, point: &[Rational]) -> bool {
        let side = self.side().to_rational();
        point.len() == self.dim as usize
            && self.corner().iter().zip(point).all(|(c, x)| {
                let c = c.to_rational();
                &c <= x && x <= &(&c + &side)
            })
    }

    /// Depth-`depth` cube containing `point`, ties resolved by `closure`.
    pub fn containing(point: &[Rational], depth: usize, closure: Closure) -> Result<Self> {
        let dim = point.len() as u32;
        let per_axis = point
            .iter()
            .map(|x| {
                digits_of_point(x, 1, depth, closure).map(|ds| ds.into_iter().map(|d| (d - 1) as u8).collect())
            })
            .collect::<Result<Vec<Vec<u8>>>>()?;
        if dim == 0 {
            return Err(Error::Dimension("empty point".into()));
        }
        CubeAddress::from_axis_bits(&per_axis)
    }

    /// Colon-joined digits, empty for the root.
    pub fn digit_string(&self) -> String {
        self.digits.iter().map(u32::to_string).collect::<Vec<_>>().join(":")
    }
}

impl fmt::Display for CubeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}[{}]", self.dim, self.digit_string())
    }
}

impl fmt::Debug for CubeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
