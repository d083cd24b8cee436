//! The classical planar Hilbert recursion, as an independent check of `f_2`.

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};

/// Classical rank-to-cell conversion on a `2^s x 2^s` grid.
pub fn hilbert_d2xy(rank: u64, s: usize) -> [u64; 2] {
    let side = 1u64 << s;
    let (mut x, mut y) = (0u64, 0u64);
    let mut t = rank;
    let mut q = 1u64;
    while q < side {
        let rx = 1 & (t / 2);
        let ry = 1 & (t ^ rx);
        if ry == 0 {
            if rx == 1 {
                x = q - 1 - x;
                y = q - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        x += q * rx;
        y += q * ry;
        t /= 4;
        q *= 2;
    }
    [x, y]
}

/// Lattice cell of rank `rank` at depth `s`, or an error past `4^s`.
pub fn hilbert_oracle(rank: u64, s: usize) -> Result<[u64; 2]> {
    if s > 31 || rank >= 1u64 << (2 * s) {
        return Err(Error::InvalidOperand(format!("rank {rank} out of range at depth {s}")));
    }
    Ok(hilbert_d2xy(rank, s))
}

/// A symmetry of the square acting on lattice cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isometry {
    pub swap: bool,
    pub flip_x: bool,
    pub flip_y: bool,
}

impl Isometry {
    pub fn all() -> impl Iterator<Item = Isometry> {
        (0..8).map(|i| Isometry { swap: i & 4 != 0, flip_x: i & 2 != 0, flip_y: i & 1 != 0 })
    }

    pub fn apply(&self, c: [u64; 2], s: usize) -> [u64; 2] {
        let top = (1u64 << s) - 1;
        let [mut x, mut y] = c;
        if self.swap {
            std::mem::swap(&mut x, &mut y);
        }
        if self.flip_x {
            x = top - x;
        }
        if self.flip_y {
            y = top - y;
        }
        [x, y]
    }

    /// Whether `f_2` at depth `s` equals this image of the oracle, cell by cell.
    pub fn agrees(&self, curve: &Curve, s: usize) -> bool {
        let mut ok = true;
        curve.for_each_cube(s, |rank, lattice, _| {
            ok &= self.apply(hilbert_d2xy(rank, s), s) == [lattice[0], lattice[1]];
        });
        ok
    }

    /// The isometries under which `f_2` matches the oracle at depths 1 and 2.
    pub fn pinned(curve: &Curve) -> Result<Vec<Isometry>> {
        if curve.dim() != 2 {
            return Err(Error::Dimension("the planar oracle needs n = 2".into()));
        }
        Ok(Isometry::all().filter(|iso| iso.agrees(curve, 1) && iso.agrees(curve, 2)).collect())
    }
}
