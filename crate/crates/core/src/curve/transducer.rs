//! The anisotropic cell transducer `S_k`: one base-`2^k` digit at a time it
//! chooses a cell of a grid with `2^(k-1)` fine rows and 2 coarse columns.
//!
//! Canonical tables (no reflection, `R = 2^(k-1)` rows):
//!
//! * `P` walks the rows as a snake: row `r = d / 2`, column `d % 2` on even
//!   rows and `1 - d % 2` on odd rows. It enters at fine 0 / coarse 0 and
//!   leaves at fine 1 / coarse 0. On even rows the first cell is `H` and the
//!   second `P`; on odd rows the first cell is `P` and the second is `H`
//!   reflected on both axes.
//! * `H` climbs column 0 and returns down column 1: `d < R` gives `(d, 0)`,
//!   otherwise `(2R - 1 - d, 1)`. It enters at fine 0 / coarse 0 and leaves at
//!   fine 0 / coarse 1. Column 0 below the top row uses `P`, the two top cells
//!   use `H`, and column 1 below the top row uses `P` reflected on both axes.
//!
//! A reflected state mirrors the cell grid and composes its flags into those
//! of the child. These tables satisfy the continuity contract checked by
//! [`Tables::continuity_violations`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Boustrophedon over the rows.
    P,
    /// Up one column, back down the other.
    H,
}

/// Transducer state: traversal method plus reflection of each grid axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveState {
    pub method: Method,
    pub flip_fine: bool,
    pub flip_coarse: bool,
}

impl CurveState {
    pub const ROOT: CurveState = CurveState::new(Method::P, false, false);

    pub const fn new(method: Method, flip_fine: bool, flip_coarse: bool) -> Self {
        CurveState { method, flip_fine, flip_coarse }
    }

    pub(crate) fn index(self) -> usize {
        (matches!(self.method, Method::H) as usize) << 2 | (self.flip_fine as usize) << 1 | self.flip_coarse as usize
    }

    pub(crate) fn from_index(i: usize) -> Self {
        let method = if i & 4 == 0 { Method::P } else { Method::H };
        CurveState::new(method, i & 2 != 0, i & 1 != 0)
    }

    /// Corner `(fine, coarse)` of the unit cell where the traversal starts.
    pub fn entry(self) -> (u8, u8) {
        (self.flip_fine as u8, self.flip_coarse as u8)
    }

    /// Corner `(fine, coarse)` where the traversal ends.
    pub fn exit(self) -> (u8, u8) {
        let (f, c) = self.entry();
        match self.method {
            Method::P => (1 - f, c),
            Method::H => (f, 1 - c),
        }
    }

    fn compose(self, child: CurveState) -> CurveState {
        CurveState::new(child.method, child.flip_fine ^ self.flip_fine, child.flip_coarse ^ self.flip_coarse)
    }
}

/// Position of a cell in the `2^(k-1) x 2` grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellAddress {
    pub fine: u32,
    pub coarse: u32,
}

const STATES: usize = 8;

/// Transition tables of `S_k` in every state, forward and inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    k: u32,
    // forward[state * 2^k + d] = (cell, next)
    forward: Vec<(CellAddress, CurveState)>,
    // inverse[state * 2^k + (fine * 2 + coarse)] = d
    inverse: Vec<u32>,
}

fn canonical(k: u32, method: Method, d: u32) -> (u32, u32, CurveState) {
    let rows = 1u32 << (k - 1);
    let plain = |m| CurveState::new(m, false, false);
    let both = |m| CurveState::new(m, true, true);
    match method {
        Method::P => {
            let r = d / 2;
            if r.is_multiple_of(2) {
                let c = d % 2;
                (r, c, if c == 0 { plain(Method::H) } else { plain(Method::P) })
            } else {
                let c = 1 - d % 2;
                (r, c, if c == 1 { plain(Method::P) } else { both(Method::H) })
            }
        }
        Method::H => {
            if d < rows {
                let next = if d == rows - 1 { plain(Method::H) } else { plain(Method::P) };
                (d, 0, next)
            } else {
                let r = 2 * rows - 1 - d;
                let next = if r == rows - 1 { plain(Method::H) } else { both(Method::P) };
                (r, 1, next)
            }
        }
    }
}

impl Tables {
    /// Parametric tables for `S_k`, `k >= 2`.
    pub fn new(k: u32) -> Result<Self> {
        if !(2..=20).contains(&k) {
            return Err(Error::Dimension(format!("transducer order {k} not in 2..=20")));
        }
        let cells = 1usize << k;
        let rows = 1u32 << (k - 1);
        let mut forward = Vec::with_capacity(STATES * cells);
        for s in 0..STATES {
            let state = CurveState::from_index(s);
            for d in 0..cells as u32 {
                let (r, c, child) = canonical(k, state.method, d);
                let fine = if state.flip_fine { rows - 1 - r } else { r };
                let coarse = if state.flip_coarse { 1 - c } else { c };
                forward.push((CellAddress { fine, coarse }, state.compose(child)));
            }
        }
        let mut t = Tables { k, forward, inverse: Vec::new() };
        t.rebuild_inverse();
        Ok(t)
    }

    fn rebuild_inverse(&mut self) {
        let cells = 1usize << self.k;
        let mut inverse = vec![u32::MAX; STATES * cells];
        for s in 0..STATES {
            for d in 0..cells {
                let (cell, _) = self.forward[s * cells + d];
                inverse[s * cells + (cell.fine * 2 + cell.coarse) as usize] = d as u32;
            }
        }
        self.inverse = inverse;
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn rows(&self) -> u32 {
        1 << (self.k - 1)
    }

    #[inline]
    pub fn step(&self, state: CurveState, d: u32) -> (CellAddress, CurveState) {
        self.forward[(state.index() << self.k) + d as usize]
    }

    #[inline]
    pub(crate) fn step_index(&self, state: usize, d: u32) -> (u32, u32, usize) {
        let (c, n) = self.forward[(state << self.k) + d as usize];
        (c.fine, c.coarse, n.index())
    }

    #[inline]
    pub fn unstep(&self, state: CurveState, cell: CellAddress) -> (u32, CurveState) {
        let d = self.inverse[(state.index() << self.k) + (cell.fine * 2 + cell.coarse) as usize];
        (d, self.step(state, d).1)
    }

    #[inline]
    pub(crate) fn unstep_index(&self, state: usize, fine: u32, coarse: u32) -> (u32, usize) {
        let d = self.inverse[(state << self.k) + (fine * 2 + coarse) as usize];
        (d, self.forward[(state << self.k) + d as usize].1.index())
    }

    /// Replaces the child state of one transition. Used to exercise the verifiers.
    pub fn override_child(&mut self, state: CurveState, d: u32, child: CurveState) {
        let cells = 1usize << self.k;
        self.forward[state.index() * cells + d as usize].1 = child;
    }

    /// Swaps the cells of two digits in one state, breaking the traversal order.
    pub fn swap_cells(&mut self, state: CurveState, a: u32, b: u32) {
        let cells = 1usize << self.k;
        let base = state.index() * cells;
        self.forward.swap(base + a as usize, base + b as usize);
        self.rebuild_inverse();
    }

    /// Checks, for every state, that the cells form a bijection onto the
    /// grid, consecutive cells share an edge, and each child's exit corner is
    /// the next child's entry corner, with the first entry and last exit
    /// matching the parent. Returns human-readable violations.
    pub fn continuity_violations(&self) -> Vec<String> {
        let cells = 1u32 << self.k;
        let rows = self.rows() as i64;
        let mut out = Vec::new();
        // corners in units of (1/rows, 1/2)
        let corner = |cell: CellAddress, (f, c): (u8, u8)| (cell.fine as i64 + f as i64, cell.coarse as i64 + c as i64);
        for s in 0..STATES {
            let state = CurveState::from_index(s);
            let mut seen = vec![false; cells as usize];
            for d in 0..cells {
                let (cell, _) = self.step(state, d);
                let slot = (cell.fine * 2 + cell.coarse) as usize;
                if cell.fine >= self.rows() || cell.coarse > 1 || seen[slot] {
                    out.push(format!("{state:?}: digit {d} does not hit a fresh cell"));
                } else {
                    seen[slot] = true;
                }
            }
            let (f0, c0) = state.entry();
            let mut pos = (f0 as i64 * rows, c0 as i64 * 2);
            for d in 0..cells {
                let (cell, child) = self.step(state, d);
                let entry = corner(cell, child.entry());
                if entry != pos {
                    out.push(format!("{state:?}: digit {d} enters at {entry:?}, expected {pos:?}"));
                }
                if d > 0 {
                    let (prev, _) = self.step(state, d - 1);
                    let gap = (prev.fine as i64 - cell.fine as i64).abs() + (prev.coarse as i64 - cell.coarse as i64).abs();
                    if gap != 1 {
                        out.push(format!("{state:?}: digits {} and {d} are not edge-adjacent", d - 1));
                    }
                }
                pos = corner(cell, child.exit());
            }
            let (f1, c1) = state.exit();
            if pos != (f1 as i64 * rows, c1 as i64 * 2) {
                out.push(format!("{state:?}: traversal leaves at {pos:?}, expected the exit corner"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(t: &Tables, state: CurveState) -> Vec<(u32, u32)> {
        (0..1u32 << t.order()).map(|d| t.step(state, d).0).map(|c| (c.fine, c.coarse)).collect()
    }

    #[test]
    fn p_snake_n3() {
        let t = Tables::new(3).unwrap();
        let got = cells(&t, CurveState::ROOT);
        assert_eq!(&got[..4], &[(0, 0), (0, 1), (1, 1), (1, 0)]);
    }

    #[test]
    fn h_reflected_column_n3() {
        let t = Tables::new(3).unwrap();
        let got = cells(&t, CurveState::new(Method::H, true, false));
        assert_eq!(&got[..4], &[(3, 0), (2, 0), (1, 0), (0, 0)]);
    }

    #[test]
    fn p_boustrophedon_n2() {
        let t = Tables::new(2).unwrap();
        assert_eq!(cells(&t, CurveState::ROOT), vec![(0, 0), (0, 1), (1, 1), (1, 0)]);
    }

    #[test]
    fn tables_are_continuous() {
        for k in 2..=8 {
            let t = Tables::new(k).unwrap();
            assert!(t.continuity_violations().is_empty(), "k={k}: {:?}", t.continuity_violations());
        }
    }

    #[test]
    fn inverse_matches_forward() {
        let t = Tables::new(4).unwrap();
        for s in 0..STATES {
            let st = CurveState::from_index(s);
            for d in 0..16 {
                let (cell, next) = t.step(st, d);
                assert_eq!(t.unstep(st, cell), (d, next));
            }
        }
    }

    #[test]
    fn tampering_is_detected() {
        let mut t = Tables::new(3).unwrap();
        t.override_child(CurveState::ROOT, 0, CurveState::ROOT);
        assert!(!t.continuity_violations().is_empty());
    }
}
