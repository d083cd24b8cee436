use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::exact::digits::{group_binary, ungroup_binary};
use crate::exact::{CubeAddress, Dyadic, Rational};
use crate::real::DEFAULT_PRECISION;
use crate::whitney::shrunken::ShrunkenCube;

/// The map `p: [0,1]^m -> [0,1]^n` truncated at pairing depth `depth`:
/// shrunken cubes are resolved down to level `depth * n`, image cubes to
/// level `depth * m`.
#[derive(Clone, Debug)]
pub struct WhitneyMap {
    m: u32,
    n: u32,
    depth: usize,
    precision: usize,
    fm: Curve,
    fn_: Curve,
}

/// Parameters needed to rebuild a [`WhitneyMap`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhitneyConfig {
    pub m: u32,
    pub n: u32,
    pub depth: usize,
    pub precision: usize,
}

/// A truncated point of `B_0` and its image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct B0Point {
    /// Minimal corner of the deepest shrunken cube of the chain.
    pub x: Vec<Rational>,
    /// Minimal corner of the paired image cube.
    pub y: Vec<Dyadic>,
    /// Rational upper bound on `|p(x) - y|`, the image cube diameter.
    pub err: Rational,
}

/// Smallest `r / 2^32` with `r / 2^32 >= sqrt(n)`; exact for perfect squares.
pub(crate) fn sqrt_upper(n: u32) -> Rational {
    let root = (n as f64).sqrt();
    if root.fract() == 0.0 {
        return Rational::from_int(root as i64);
    }
    let scale = 1u64 << 32;
    let mut r = (root * scale as f64).ceil() as u128;
    while r * r < n as u128 * (scale as u128) * (scale as u128) {
        r += 1;
    }
    Rational::new(IBig::from(r), IBig::from(scale)).expect("nonzero")
}

impl WhitneyMap {
    pub fn new(m: u32, n: u32, depth: usize) -> Result<Self> {
        Self::with_precision(m, n, depth, DEFAULT_PRECISION)
    }

    pub fn with_precision(m: u32, n: u32, depth: usize, precision: usize) -> Result<Self> {
        if n == 0 || m <= n {
            return Err(Error::Dimension(format!("need m > n >= 1, got m={m}, n={n}")));
        }
        if precision < 32 {
            return Err(Error::InvalidOperand("precision below 32 bits".into()));
        }
        Ok(WhitneyMap { m, n, depth, precision, fm: Curve::new(m)?, fn_: Curve::new(n)? })
    }

    pub fn from_config(c: &WhitneyConfig) -> Result<Self> {
        Self::with_precision(c.m, c.n, c.depth, c.precision)
    }

    pub fn config(&self) -> WhitneyConfig {
        WhitneyConfig { m: self.m, n: self.n, depth: self.depth, precision: self.precision }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn source_curve(&self) -> &Curve {
        &self.fm
    }

    pub fn target_curve(&self) -> &Curve {
        &self.fn_
    }

    /// Deepest shrunken level resolved.
    pub fn levels(&self) -> usize {
        self.depth * self.n as usize
    }

    /// Image of a shrunken cube at depth `n s` under the rank pairing: the
    /// cube of depth `m s` with the same curve rank.
    pub fn cube_image(&self, addr: &CubeAddress) -> Result<CubeAddress> {
        if addr.dim() != self.m {
            return Err(Error::InvalidAddress(format!("{addr} is not {}-dimensional", self.m)));
        }
        if !addr.depth().is_multiple_of(self.n as usize) {
            return Err(Error::Shape(format!("depth {} is not a multiple of n={}", addr.depth(), self.n)));
        }
        let spatial: Vec<u32> = addr.digits().iter().map(|d| d - 1).collect();
        let (param, _) = self.fm.unrun(&spatial);
        let bits = ungroup_binary(&param.iter().map(|d| d + 1).collect::<Vec<_>>(), self.m);
        let target: Vec<u32> = group_binary(&bits, self.n)?.iter().map(|d| d - 1).collect();
        let (image, _) = self.fn_.run(&target);
        CubeAddress::new(self.n, image.into_iter().map(|b| b + 1).collect())
    }

    /// Error bound `sqrt(n) 2^(-m D)` as a rational upper bound.
    pub fn truncation_error(&self, depth: usize) -> Rational {
        &sqrt_upper(self.n) * &Rational::pow2_neg((self.m as usize * depth) as u32)
    }

    /// Truncation of the `B_0` point selected by shrunken digits (1-based).
    pub fn b0_eval(&self, digits: &[u32], depth: usize) -> Result<B0Point> {
        let levels = depth * self.n as usize;
        if digits.len() < levels {
            return Err(Error::Shape(format!("need {levels} digits, got {}", digits.len())));
        }
        let addr = CubeAddress::new(self.m, digits[..levels].to_vec())?;
        let x = ShrunkenCube::new(addr.clone()).corner;
        let y = self.cube_image(&addr)?.corner();
        Ok(B0Point { x, y, err: self.truncation_error(depth) })
    }

    /// Exact `p` at the `B_0` point whose nested shrunken cubes have spatial
    /// digits (0-based) `prefix` and then `tail` forever.
    pub fn vertex_image(&self, prefix: &[u32], tail: u32) -> Result<Vec<Rational>> {
        let t = self.fm.parameter_of_spatial_stream(prefix, &[tail])?;
        self.fn_.point(&t)
    }
}
