//! Product with the identity: `p(t, x) = (t, p'(x))` on `[0,1]^r x [0,1]^(m-r)`.

use crate::curve::cube_count;
use crate::error::{Error, Result};
use crate::exact::{CubeAddress, Rational};
use crate::whitney::eval::PValue;
use crate::whitney::map::WhitneyMap;

#[derive(Clone, Debug)]
pub struct ProductMap {
    m: u32,
    n: u32,
    r: u32,
    inner: WhitneyMap,
}

/// Coverage of the product image at one depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    /// Depth of the target cubes in `[0,1]^n`.
    pub depth: usize,
    pub covered: u64,
    pub total: u64,
}

impl Coverage {
    pub fn complete(&self) -> bool {
        self.covered == self.total
    }
}

/// Wraps `inner: [0,1]^(m-r) -> [0,1]^(n-r)` as a map `[0,1]^m -> [0,1]^n`.
pub fn theorem2_lift(m: u32, n: u32, r: u32, inner: WhitneyMap) -> Result<ProductMap> {
    if !(m > n && n > r) {
        return Err(Error::Dimension(format!("need m > n > r >= 0, got ({m}, {n}, {r})")));
    }
    if inner.m() != m - r || inner.n() != n - r {
        return Err(Error::Dimension(format!(
            "inner map is ({}, {}), expected ({}, {})",
            inner.m(),
            inner.n(),
            m - r,
            n - r
        )));
    }
    Ok(ProductMap { m, n, r, inner })
}

impl ProductMap {
    pub fn inner(&self) -> &WhitneyMap {
        &self.inner
    }

    pub fn dims(&self) -> (u32, u32, u32) {
        (self.m, self.n, self.r)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<PValue> {
        if x.len() != self.m as usize {
            return Err(Error::Dimension(format!("expected {} coordinates", self.m)));
        }
        let (head, tail) = x.split_at(self.r as usize);
        let inner = self.inner.eval_p(tail)?;
        let prec = self.inner.precision();
        let mut approx: Vec<_> = head.iter().map(|c| c.to_real(prec)).collect();
        approx.extend(inner.approx);
        let exact = inner.exact.map(|v| head.iter().cloned().chain(v).collect());
        Ok(PValue { approx, exact, error_bound: inner.error_bound })
    }

    /// Images of `[0,1]^r`-cubes times inner shrunken cubes at pairing depth
    /// `s`, counted against all cubes of depth `(m - r) s` in `[0,1]^n`.
    pub fn coverage(&self, s: usize, budget: u128) -> Result<Coverage> {
        let (mi, ni) = (self.inner.m(), self.inner.n());
        let depth = mi as usize * s;
        let total = cube_count(self.n, depth);
        let work = cube_count(self.r, depth).saturating_mul(cube_count(mi, ni as usize * s));
        if total > budget || work > budget || self.n as usize * depth >= 63 {
            return Err(Error::Budget { requested: total.max(work), budget });
        }
        let mut hit = vec![false; total as usize];
        let mut images = Vec::new();
        self.inner.source_curve().for_each_cube(ni as usize * s, |_, lat, _| {
            let addr = CubeAddress::from_lattice_u64(mi, lat, ni as usize * s).expect("lattice");
            images.push(self.inner.cube_image(&addr).expect("pairing depth").lattice_u64());
        });
        let side = 1u64 << depth;
        let ident = side.pow(self.r);
        for id in 0..ident {
            let mut coords: Vec<u64> = (0..self.r).map(|a| (id / side.pow(a)) % side).collect();
            for img in &images {
                coords.truncate(self.r as usize);
                coords.extend(img);
                let idx = coords.iter().fold(0u64, |acc, &c| acc * side + c);
                hit[idx as usize] = true;
            }
        }
        Ok(Coverage { depth, covered: hit.iter().filter(|h| **h).count() as u64, total: total as u64 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn dims_checked() {
        assert!(theorem2_lift(3, 2, 2, WhitneyMap::new(2, 1, 1).unwrap()).is_err());
        assert!(theorem2_lift(3, 2, 1, WhitneyMap::new(3, 2, 1).unwrap()).is_err());
    }

    #[test]
    fn identity_block_is_exact() {
        let p = theorem2_lift(3, 2, 1, WhitneyMap::new(2, 1, 2).unwrap()).unwrap();
        let v = p.eval(&[q("2/7"), q("0"), q("0")]).unwrap();
        assert_eq!(v.exact, Some(vec![q("2/7"), q("0")]));
    }

    #[test]
    fn r_zero_matches_inner() {
        let inner = WhitneyMap::new(2, 1, 2).unwrap();
        let p = theorem2_lift(2, 1, 0, inner.clone()).unwrap();
        let x = [q("3/8"), q("1/2")];
        assert_eq!(p.eval(&x).unwrap(), inner.eval_p(&x).unwrap());
    }

    #[test]
    fn covers_small_depth() {
        let p = theorem2_lift(3, 2, 1, WhitneyMap::new(2, 1, 2).unwrap()).unwrap();
        let c = p.coverage(2, 1 << 20).unwrap();
        assert!(c.complete(), "{c:?}");
        assert_eq!(c.total, 256);
    }
}
