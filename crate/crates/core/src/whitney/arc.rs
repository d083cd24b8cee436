//! The connected set `E`: `B_0` plus segments joining the corresponding
//! vertices of consecutive shrunken cubes.

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::curve::cube_count;
use crate::error::{Error, Result};
use crate::exact::{CubeAddress, Dyadic, Rational};
use crate::report::Violations;
use crate::whitney::map::WhitneyMap;
use crate::whitney::shrunken::ShrunkenCube;

/// A joining segment of `E` at one shrunken level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcSegment {
    pub level: usize,
    /// Curve rank of the earlier of the two joined cubes.
    pub rank: u64,
    /// End with the smaller coordinate along `axis`.
    pub x_prime: Vec<Rational>,
    pub x_double_prime: Vec<Rational>,
    pub axis: usize,
    /// `p` at `x_prime` and at `x_double_prime`.
    pub v_prime: Vec<Rational>,
    pub v_double_prime: Vec<Rational>,
}

impl ArcSegment {
    pub fn is_constant(&self) -> bool {
        self.v_prime == self.v_double_prime
    }

    pub fn length(&self) -> Rational {
        &self.x_double_prime[self.axis] - &self.x_prime[self.axis]
    }
}

/// Result of [`WhitneyMap::build_e`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ArcSet {
    pub segments: Vec<ArcSegment>,
    /// Shrunken cubes at the deepest level.
    pub skeleton: Vec<ShrunkenCube>,
    /// Levels whose cube graph is connected through the segments.
    pub connected_levels: Vec<usize>,
    pub disconnected_levels: Vec<usize>,
    /// Segment invariant failures; empty when everything holds.
    pub violations: Vec<String>,
    pub violation_count: u64,
}

impl ArcSet {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.disconnected_levels.is_empty()
    }
}

impl WhitneyMap {
    /// Joining segments for every level `1..=depth * n` and the deepest
    /// skeleton. Fails if the number of cubes exceeds `budget`.
    pub fn build_e(&self, budget: u128) -> Result<ArcSet> {
        let m = self.m();
        let levels = self.levels();
        let total = cube_count(m, levels);
        if total > budget || m as usize * levels >= 63 {
            return Err(Error::Budget { requested: total, budget });
        }
        let fm = self.source_curve();
        let fnc = self.target_curve();
        let mut out = ArcSet::default();
        let mut v = Violations::default();
        for s in 1..=levels {
            let mut cubes: Vec<(Vec<u64>, Vec<u8>, Vec<u8>)> = Vec::with_capacity(1 << (m as usize * s));
            fm.for_each_cube(s, |_, lat, st| {
                cubes.push((lat.to_vec(), fm.corner_offsets(st, false), fm.corner_offsets(st, true)));
            });
            let mut uf = UnionFind::<usize>::new(cubes.len());
            for k in 0..cubes.len() - 1 {
                let (la, _, exit_a) = &cubes[k];
                let (lb, entry_b, _) = &cubes[k + 1];
                let va: Vec<u64> = la.iter().zip(exit_a).map(|(c, o)| c + *o as u64).collect();
                let vb: Vec<u64> = lb.iter().zip(entry_b).map(|(c, o)| c + *o as u64).collect();
                if va != vb {
                    v.record(|| format!("level {s}, rank {k}: consecutive cubes do not meet at a vertex"));
                    continue;
                }
                let ca = CubeAddress::from_lattice_u64(m, la, s)?;
                let cb = CubeAddress::from_lattice_u64(m, lb, s)?;
                let xa = ShrunkenCube::new(ca.clone()).vertex(exit_a);
                let xb = ShrunkenCube::new(cb.clone()).vertex(entry_b);
                let differing: Vec<usize> = (0..m as usize).filter(|&a| xa[a] != xb[a]).collect();
                if differing.len() != 1 {
                    v.record(|| format!("level {s}, rank {k}: ends differ in {} coordinates", differing.len()));
                    continue;
                }
                let axis = differing[0];
                let digits = |c: &CubeAddress| c.digits().iter().map(|d| d - 1).collect::<Vec<u32>>();
                let tail = |bits: &[u8]| bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
                let pa = self.vertex_image(&digits(&ca), tail(exit_a))?;
                let pb = self.vertex_image(&digits(&cb), tail(entry_b))?;
                let b = Dyadic::new((k + 1) as u64, m * s as u32).to_rational();
                let fb = fnc.point(&b)?;
                if pa != pb || pa != fb {
                    v.record(|| format!("level {s}, rank {k}: end values {pa:?}, {pb:?} and f_n(b) = {fb:?} disagree"));
                    continue;
                }
                let (x_prime, x_double_prime, v_prime, v_double_prime) =
                    if xa[axis] < xb[axis] { (xa, xb, pa, pb) } else { (xb, xa, pb, pa) };
                out.segments.push(ArcSegment {
                    level: s,
                    rank: k as u64,
                    x_prime,
                    x_double_prime,
                    axis,
                    v_prime,
                    v_double_prime,
                });
                uf.union(k, k + 1);
            }
            let root = uf.find(0);
            if (0..cubes.len()).all(|i| uf.find(i) == root) {
                out.connected_levels.push(s);
            } else {
                out.disconnected_levels.push(s);
            }
            if s == levels {
                out.skeleton = cubes
                    .iter()
                    .map(|(lat, _, _)| ShrunkenCube::new(CubeAddress::from_lattice_u64(m, lat, s).expect("lattice")))
                    .collect();
            }
        }
        out.violation_count = v.count;
        out.violations = v.first;
        Ok(out)
    }

    /// Checks that the images of all shrunken cubes at depth `n s` hit every
    /// cube of depth `m s` exactly once. Returns the missing image cubes.
    pub fn surjectivity_check(&self, s: usize, budget: u128) -> Result<(bool, Vec<CubeAddress>)> {
        let (m, n) = (self.m(), self.n());
        let levels = n as usize * s;
        let total = cube_count(m, levels);
        if total > budget || m as usize * levels >= 63 {
            return Err(Error::Budget { requested: total, budget });
        }
        let mut hits = vec![0u32; total as usize];
        let fm = self.source_curve();
        let mut bad = false;
        fm.for_each_cube(levels, |_, lat, _| {
            let addr = CubeAddress::from_lattice_u64(m, lat, levels).expect("lattice");
            let image = self.cube_image(&addr).expect("pairing depth");
            let r = self.target_curve().rank_of(&image).expect("rank") as usize;
            if r < hits.len() {
                hits[r] += 1;
            } else {
                bad = true;
            }
        });
        let fnc = self.target_curve();
        let missing: Vec<CubeAddress> = hits
            .iter()
            .enumerate()
            .filter(|(_, &h)| h == 0)
            .map(|(r, _)| fnc.decode(r as u128, m as usize * s).expect("rank in range"))
            .collect();
        let once = hits.iter().all(|&h| h == 1);
        Ok((once && !bad, missing))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_segments_at_depth_one() {
        let w = WhitneyMap::new(2, 1, 1).unwrap();
        let e = w.build_e(1 << 20).unwrap();
        assert!(e.passed(), "{:?}", e.violations);
        assert_eq!(e.segments.len(), 3);
        assert!(e.segments.iter().all(ArcSegment::is_constant));
        assert_eq!(e.skeleton.len(), 4);
    }

    #[test]
    fn first_segment_joins_bl_and_tl() {
        let w = WhitneyMap::new(2, 1, 1).unwrap();
        let e = w.build_e(1 << 20).unwrap();
        let s = &e.segments[0];
        let q = |v: &str| v.parse::<Rational>().unwrap();
        assert_eq!(s.axis, 1);
        assert_eq!(s.x_prime, vec![q("0"), q("3/8")]);
        assert_eq!(s.x_double_prime, vec![q("0"), q("5/8")]);
        assert_eq!(s.v_prime, vec![q("1/4")]);
    }

    #[test]
    fn surjective_small() {
        let w = WhitneyMap::new(2, 1, 1).unwrap();
        assert_eq!(w.surjectivity_check(1, 1 << 20).unwrap(), (true, vec![]));
        assert!(w.surjectivity_check(0, 1 << 20).unwrap().0);
        let w = WhitneyMap::new(3, 2, 1).unwrap();
        assert!(w.surjectivity_check(1, 1 << 20).unwrap().0);
    }
}
