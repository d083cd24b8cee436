//! Cube maps, preimages, the curve order and point evaluation for `f_n`.

use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use crate::curve::machine::Curve;
use crate::curve::transducer::{CellAddress, CurveState, Tables};
use crate::error::{Error, Result};
use crate::exact::digits::{group_binary, ungroup_binary};
use crate::exact::{Closure, CubeAddress, Dyadic, Rational};

/// A cube of `K^n_s` together with its position in the curve order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveOrderRank {
    pub addr: CubeAddress,
    pub rank: u128,
}

/// Result of evaluating `f_n` at a parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FnPoint {
    /// Cubes containing the image at depths `0..=s`, each inside the previous.
    pub chain: Vec<CubeAddress>,
    pub point: Vec<Rational>,
    /// Upper bound on the distance to the true image; zero when `point` is exact.
    pub error_bound: f64,
}

fn check_budget(cubes: u128, budget: u128) -> Result<()> {
    if cubes > budget {
        return Err(Error::Budget { requested: cubes, budget });
    }
    Ok(())
}

/// `2^(n s)` if it fits, for budget checks.
pub fn cube_count(n: u32, s: usize) -> u128 {
    let bits = n as usize * s;
    if bits >= 127 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

impl Tables {
    /// Cell and next state for one input digit.
    pub fn cell(&self, state: CurveState, d: u32) -> Result<(CellAddress, CurveState)> {
        if d >= 1 << self.order() {
            return Err(Error::InvalidOperand(format!("digit {d} not below 2^{}", self.order())));
        }
        Ok(self.step(state, d))
    }

    /// Rectangle `(alpha', alpha'')` that the root transducer assigns to the
    /// binary parameter interval `alpha` of depth `k s`.
    pub fn locate(&self, alpha: &CubeAddress) -> Result<(CubeAddress, CubeAddress)> {
        let k = self.order();
        if alpha.dim() != 1 {
            return Err(Error::Dimension("parameter intervals are 1-dimensional".into()));
        }
        let digits = group_binary(alpha.digits(), k)?;
        let mut state = CurveState::ROOT;
        let mut fine = Vec::new();
        let mut coarse = Vec::new();
        for d in digits {
            let (cell, next) = self.step(state, d - 1);
            fine.push(cell.fine + 1);
            coarse.push(cell.coarse + 1);
            state = next;
        }
        Ok((
            CubeAddress::new(1, ungroup_binary(&fine, k - 1))?,
            CubeAddress::new(1, coarse)?,
        ))
    }

    /// Inverse of [`Tables::locate`].
    pub fn preimage(&self, fine: &CubeAddress, coarse: &CubeAddress) -> Result<CubeAddress> {
        let k = self.order();
        let s = coarse.depth();
        if fine.dim() != 1 || coarse.dim() != 1 || fine.depth() != (k as usize - 1) * s {
            return Err(Error::Shape(format!(
                "expected depths ({}, {s}), got ({}, {s})",
                (k as usize - 1) * s,
                fine.depth()
            )));
        }
        let fine = group_binary(fine.digits(), k - 1)?;
        let mut state = CurveState::ROOT;
        let mut out = Vec::with_capacity(s);
        for (f, c) in fine.iter().zip(coarse.digits()) {
            let (d, next) = self.unstep(state, CellAddress { fine: f - 1, coarse: c - 1 });
            out.push(d + 1);
            state = next;
        }
        CubeAddress::new(1, ungroup_binary(&out, k))
    }
}

impl Curve {
    /// Cube `f_n(alpha)` for a binary parameter interval of depth `n s`.
    pub fn fn_cube(&self, alpha: &CubeAddress) -> Result<CubeAddress> {
        if alpha.dim() != 1 {
            return Err(Error::Dimension("parameter intervals are 1-dimensional".into()));
        }
        let digits: Vec<u32> = group_binary(alpha.digits(), self.dim())?.iter().map(|d| d - 1).collect();
        let (spatial, _) = self.run(&digits);
        CubeAddress::new(self.dim(), spatial.into_iter().map(|b| b + 1).collect())
    }

    /// Parameter interval whose image is `delta`.
    pub fn fn_preimage(&self, delta: &CubeAddress) -> Result<CubeAddress> {
        if delta.dim() != self.dim() {
            return Err(Error::InvalidAddress(format!("{delta} is not a cube of dimension {}", self.dim())));
        }
        let spatial: Vec<u32> = delta.digits().iter().map(|d| d - 1).collect();
        let (digits, _) = self.unrun(&spatial);
        let digits: Vec<u32> = digits.into_iter().map(|d| d + 1).collect();
        CubeAddress::new(1, ungroup_binary(&digits, self.dim()))
    }

    /// Position of `delta` in the curve order of its level.
    pub fn rank_of(&self, delta: &CubeAddress) -> Result<u128> {
        if delta.dim() != self.dim() {
            return Err(Error::InvalidAddress(format!("{delta} is not a cube of dimension {}", self.dim())));
        }
        if self.dim() as usize * delta.depth() > 128 {
            return Err(Error::Shape("rank does not fit in 128 bits".into()));
        }
        let spatial: Vec<u32> = delta.digits().iter().map(|d| d - 1).collect();
        let (digits, _) = self.unrun(&spatial);
        Ok(digits.iter().fold(0u128, |acc, &d| (acc << self.dim()) | d as u128))
    }

    /// Parameter digits (0-based, base `2^n`) of a rank at depth `s`.
    pub(crate) fn rank_digits(&self, rank: u128, s: usize) -> Result<Vec<u32>> {
        let n = self.dim();
        if n as usize * s > 128 || rank >= cube_count(n, s) {
            return Err(Error::InvalidOperand(format!("rank {rank} out of range at depth {s}")));
        }
        let mask = (1u128 << n) - 1;
        Ok((0..s).rev().map(|j| ((rank >> (n as usize * j)) & mask) as u32).collect())
    }

    /// Cube of the given rank at depth `s`.
    pub fn decode(&self, rank: u128, s: usize) -> Result<CubeAddress> {
        let digits = self.rank_digits(rank, s)?;
        let (spatial, _) = self.run(&digits);
        Ok(CubeAddress::new_unchecked(self.dim(), spatial.into_iter().map(|b| b + 1).collect()))
    }

    /// Rank of the depth-`s` cube containing `point` (ties go to the
    /// spatially minimal cube).
    pub fn encode(&self, point: &[Rational], s: usize) -> Result<u128> {
        if point.len() != self.dim() as usize {
            return Err(Error::Dimension(format!("expected {} coordinates, got {}", self.dim(), point.len())));
        }
        self.rank_of(&CubeAddress::containing(point, s, Closure::Min)?)
    }

    /// The whole order of `K^n_s`; fails if `2^(n s)` exceeds `budget`.
    pub fn order(&self, s: usize, budget: u128) -> Result<Vec<CurveOrderRank>> {
        let total = cube_count(self.dim(), s);
        check_budget(total, budget)?;
        let mut out = Vec::with_capacity(total as usize);
        self.for_each_cube(s, |rank, lattice, _| {
            let addr = CubeAddress::from_lattice_u64(self.dim(), lattice, s).expect("lattice in range");
            out.push(CurveOrderRank { addr, rank: rank as u128 });
        });
        Ok(out)
    }

    /// Lattice coordinates (scale `2^s`) of `f_n(rank / 2^(n s))`; `rank`
    /// may equal `2^(n s)`.
    pub fn vertex_at(&self, rank: u128, s: usize) -> Result<Vec<IBig>> {
        let total = cube_count(self.dim(), s);
        let (r, exit) = if rank == total { (rank - 1, true) } else { (rank, false) };
        let digits = self.rank_digits(r, s)?;
        let (spatial, st) = self.run(&digits);
        let cube = CubeAddress::new_unchecked(self.dim(), spatial.into_iter().map(|b| b + 1).collect());
        let off = self.corner_offsets(&st, exit);
        Ok(cube.lattice().into_iter().zip(off).map(|(c, o)| c + IBig::from(o)).collect())
    }

    /// Exact value of `f_n(t)` for rational `t` in `[0,1]`.
    pub fn point(&self, t: &Rational) -> Result<Vec<Rational>> {
        if t.signum() < 0 || t > &Rational::one() {
            return Err(Error::Domain(format!("{t} lies outside [0,1]")));
        }
        match Dyadic::from_rational(t) {
            Some(d) => {
                let n = self.dim() as usize;
                let s = (d.exponent() as usize).div_ceil(n);
                let rank = d.scaled((n * s) as u32);
                let rank = u128::try_from(rank).map_err(|_| Error::Shape("parameter too fine".into()))?;
                let v = self.vertex_at(rank, s)?;
                Ok(v.into_iter().map(|c| Dyadic::new(c, s as u32).to_rational()).collect())
            }
            None => self.periodic_point(t),
        }
    }

    /// Nested cubes of depth `0..=s` around `f_n(t)` together with the exact
    /// image point.
    pub fn point_chain(&self, t: &Rational, s: usize) -> Result<FnPoint> {
        let point = self.point(t)?;
        let digits = crate::exact::digits_of_point(t, self.dim(), s, Closure::LeftClosed)?;
        let digits: Vec<u32> = digits.iter().map(|d| d - 1).collect();
        let (spatial, _) = self.run(&digits);
        let chain = (0..=s)
            .map(|j| CubeAddress::new_unchecked(self.dim(), spatial[..j].iter().map(|b| b + 1).collect()))
            .collect();
        Ok(FnPoint { chain, point, error_bound: 0.0 })
    }

    /// Truncated evaluation along parameter digits (1-based, base `2^n`):
    /// the minimal corner of the last cube, within `sqrt(n) 2^-s`.
    pub fn point_of_digits(&self, digits: &[u32]) -> Result<FnPoint> {
        let max = 1u32 << self.dim();
        if digits.iter().any(|&d| d == 0 || d > max) {
            return Err(Error::InvalidAddress(format!("digits must lie in 1..={max}")));
        }
        let zero: Vec<u32> = digits.iter().map(|d| d - 1).collect();
        let (spatial, _) = self.run(&zero);
        let chain: Vec<CubeAddress> = (0..=digits.len())
            .map(|j| CubeAddress::new_unchecked(self.dim(), spatial[..j].iter().map(|b| b + 1).collect()))
            .collect();
        let last = chain.last().expect("root");
        let point = last.corner().into_iter().map(|c| c.to_rational()).collect();
        let error_bound = (self.dim() as f64).sqrt() * 0.5f64.powi(digits.len() as i32);
        Ok(FnPoint { chain, point, error_bound })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn interval(bits: &[u32]) -> CubeAddress {
        CubeAddress::new(1, bits.to_vec()).unwrap()
    }

    #[test]
    fn locate_examples() {
        let t2 = Tables::new(2).unwrap();
        let (a, b) = t2.locate(&interval(&[1, 1])).unwrap();
        assert_eq!((a.digits(), b.digits()), (&[1][..], &[1][..]));
        let t3 = Tables::new(3).unwrap();
        let (a, b) = t3.locate(&interval(&[1, 1, 1])).unwrap();
        assert_eq!((a.digits(), b.digits()), (&[1, 1][..], &[1][..]));
        let (a, b) = t3.locate(&CubeAddress::root(1)).unwrap();
        assert_eq!((a.depth(), b.depth()), (0, 0));
        assert!(matches!(t3.locate(&interval(&[1, 2])), Err(Error::Shape(_))));
    }

    #[test]
    fn preimage_examples() {
        let t2 = Tables::new(2).unwrap();
        let alpha = t2.preimage(&interval(&[2]), &interval(&[2])).unwrap();
        assert_eq!(alpha.digits(), &[2, 1]);
        assert_eq!(t2.preimage(&CubeAddress::root(1), &CubeAddress::root(1)).unwrap(), CubeAddress::root(1));
        assert!(t2.preimage(&interval(&[2, 1]), &interval(&[2])).is_err());
    }

    #[test]
    fn plane_depth_one_order() {
        let c = Curve::new(2).unwrap();
        let depth1: Vec<Vec<u64>> = c.order(1, 1 << 20).unwrap().iter().map(|r| r.addr.lattice_u64()).collect();
        assert_eq!(depth1, vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]]);
        let depth2: Vec<Vec<u64>> = c.order(2, 1 << 20).unwrap()[..4].iter().map(|r| r.addr.lattice_u64()).collect();
        assert_eq!(depth2, vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn n1_is_identity() {
        let c = Curve::new(1).unwrap();
        let alpha = interval(&[2, 1, 2]);
        assert_eq!(c.fn_cube(&alpha).unwrap(), alpha);
        assert_eq!(c.point(&q("3/7")).unwrap(), vec![q("3/7")]);
        assert_eq!(c.point(&q("5/8")).unwrap(), vec![q("5/8")]);
    }

    #[test]
    fn endpoints_n2() {
        let c = Curve::new(2).unwrap();
        assert_eq!(c.point(&q("0")).unwrap(), vec![q("0"), q("0")]);
        assert_eq!(c.point(&q("1")).unwrap(), vec![q("1"), q("0")]);
        assert_eq!(c.point(&q("1/2")).unwrap(), vec![q("1/2"), q("1/2")]);
        assert_eq!(c.point(&q("1/4")).unwrap(), vec![q("0"), q("1/2")]);
    }

    #[test]
    fn encode_decode_examples() {
        let c = Curve::new(2).unwrap();
        assert_eq!(c.encode(&[q("0.1"), q("0.9")], 1).unwrap(), 1);
        assert_eq!(c.decode(3, 1).unwrap().lattice_u64(), vec![1, 0]);
        assert!(c.decode(4, 1).is_err());
        let tl = CubeAddress::new(2, vec![2]).unwrap();
        assert_eq!(c.fn_preimage(&tl).unwrap().digits(), &[1, 2]);
    }

    #[test]
    fn n3_octants_adjacent() {
        let c = Curve::new(3).unwrap();
        let o = c.order(1, 1 << 20).unwrap();
        for w in o.windows(2) {
            let (a, b) = (w[0].addr.lattice_u64(), w[1].addr.lattice_u64());
            let diff: u64 = a.iter().zip(&b).map(|(x, y)| x.abs_diff(*y)).sum();
            assert_eq!(diff, 1);
        }
    }

    #[test]
    fn budget_enforced() {
        let c = Curve::new(3).unwrap();
        assert!(matches!(c.order(3, 100), Err(Error::Budget { .. })));
    }

    #[test]
    fn point_chain_nests() {
        let c = Curve::new(3).unwrap();
        let t = q("2/7");
        let p = c.point_chain(&t, 4).unwrap();
        for w in p.chain.windows(2) {
            assert!(w[0].is_ancestor_of(&w[1]));
        }
        assert!(p.chain[4].contains(&p.point));
    }
}
