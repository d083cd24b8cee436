//! The curve `f_n` as a synchronous cascade of transducers.
//!
//! One parameter digit in base `2^n` enters `S_n`; its coarse bit becomes the
//! last coordinate and its fine digit feeds `S_(n-1)`, and so on down to
//! `S_2`, whose fine bit is coordinate 0. This unrolls the recursion
//! `f_n = (f_(n-1) o phi, psi)` one level at a time.

use std::collections::HashMap;
use std::sync::Arc;

use dashu_int::IBig;

use crate::curve::transducer::{CurveState, Tables};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Upper bound on machine steps spent looking for a period.
pub const CYCLE_LIMIT: usize = 1 << 22;

/// Machine state: one transducer state per level, indexed by `k - 2`.
pub type MachineState = Vec<usize>;

#[derive(Clone, Debug)]
pub struct Curve {
    n: u32,
    tables: Arc<Vec<Tables>>,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.tables == other.tables
    }
}

impl Curve {
    pub const MAX_DIM: u32 = 16;

    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > Self::MAX_DIM {
            return Err(Error::Dimension(format!("curve dimension {n} not in 1..={}", Self::MAX_DIM)));
        }
        let tables = (2..=n).map(Tables::new).collect::<Result<Vec<_>>>()?;
        Ok(Curve { n, tables: Arc::new(tables) })
    }

    /// Builds a curve from explicit tables, e.g. after fault injection.
    pub fn with_tables(n: u32, tables: Vec<Tables>) -> Result<Self> {
        if n == 0 || tables.len() != n as usize - 1 || tables.iter().enumerate().any(|(i, t)| t.order() != i as u32 + 2) {
            return Err(Error::Dimension("tables do not match the curve dimension".into()));
        }
        Ok(Curve { n, tables: Arc::new(tables) })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// Table of `S_k`, `2 <= k <= n`.
    pub fn tables(&self, k: u32) -> &Tables {
        &self.tables[k as usize - 2]
    }

    pub fn all_tables(&self) -> &[Tables] {
        &self.tables
    }

    pub fn initial_state(&self) -> MachineState {
        vec![CurveState::ROOT.index(); self.n.saturating_sub(1) as usize]
    }

    /// Consumes one parameter digit (0-based) and returns the spatial digit
    /// (0-based, axis 0 most significant).
    #[inline]
    pub fn step(&self, st: &mut [usize], d: u32) -> u32 {
        let n = self.n;
        let mut digit = d;
        let mut bits = 0u32;
        for k in (2..=n).rev() {
            let i = k as usize - 2;
            let (fine, coarse, next) = self.tables[i].step_index(st[i], digit);
            st[i] = next;
            bits |= coarse << (n - k);
            digit = fine;
        }
        bits | digit << (n - 1)
    }

    /// Inverse of [`Curve::step`].
    #[inline]
    pub fn unstep(&self, st: &mut [usize], bits: u32) -> u32 {
        let n = self.n;
        let mut fine = (bits >> (n - 1)) & 1;
        for k in 2..=n {
            let i = k as usize - 2;
            let coarse = (bits >> (n - k)) & 1;
            let (d, next) = self.tables[i].unstep_index(st[i], fine, coarse);
            st[i] = next;
            fine = d;
        }
        fine
    }

    /// Per-axis offset (0 or 1 cube side) of the entry or exit corner of the
    /// cube reached in state `st`.
    pub fn corner_offsets(&self, st: &[usize], exit: bool) -> Vec<u8> {
        let n = self.n as usize;
        let mut out = vec![0u8; n];
        let mut need_exit = exit;
        for k in (2..=n).rev() {
            let state = CurveState::from_index(st[k - 2]);
            let (f, c) = if need_exit { state.exit() } else { state.entry() };
            out[k - 1] = c;
            need_exit = f == 1;
        }
        out[0] = need_exit as u8;
        out
    }

    /// Runs the machine over parameter digits (0-based), returning the
    /// spatial digits (0-based) and the final state.
    pub fn run(&self, digits: &[u32]) -> (Vec<u32>, MachineState) {
        let mut st = self.initial_state();
        let out = digits.iter().map(|&d| self.step(&mut st, d)).collect();
        (out, st)
    }

    /// Inverse of [`Curve::run`].
    pub fn unrun(&self, spatial: &[u32]) -> (Vec<u32>, MachineState) {
        let mut st = self.initial_state();
        let out = spatial.iter().map(|&b| self.unstep(&mut st, b)).collect();
        (out, st)
    }

    /// Visits every depth-`s` cube in curve order with its rank, lattice
    /// corner (scale `2^s`) and final machine state.
    pub fn for_each_cube(&self, s: usize, mut f: impl FnMut(u64, &[u64], &[usize])) {
        assert!(self.n as usize * s < 64, "enumeration depth too large");
        let n = self.n as usize;
        let mut states = vec![self.initial_state(); s + 1];
        let mut lattice = vec![vec![0u64; n]; s + 1];
        self.walk(0, s, 0, &mut states, &mut lattice, &mut f);
    }

    fn walk(
        &self,
        level: usize,
        s: usize,
        rank: u64,
        states: &mut [MachineState],
        lattice: &mut [Vec<u64>],
        f: &mut impl FnMut(u64, &[u64], &[usize]),
    ) {
        if level == s {
            f(rank, &lattice[s], &states[s]);
            return;
        }
        let n = self.n;
        for d in 0..1u32 << n {
            let (head, tail) = states.split_at_mut(level + 1);
            tail[0].copy_from_slice(&head[level]);
            let bits = self.step(&mut tail[0], d);
            let (lh, lt) = lattice.split_at_mut(level + 1);
            for (a, (dst, src)) in lt[0].iter_mut().zip(&lh[level]).enumerate() {
                *dst = (src << 1) | ((bits >> (n - 1 - a as u32)) & 1) as u64;
            }
            self.walk(level + 1, s, (rank << n) | d as u64, states, lattice, f);
        }
    }

    /// Digit stream of `t` in base `2^n` with eventual period detected
    /// jointly with the machine state. Returns per-axis exact coordinates of
    /// the limit point. `t` must not be dyadic (its expansion is unique).
    pub(crate) fn periodic_point(&self, t: &Rational) -> Result<Vec<Rational>> {
        let n = self.n;
        let base = 1i64 << n;
        let mut st = self.initial_state();
        let mut rem = t.clone();
        let mut seen: HashMap<(Rational, MachineState), usize> = HashMap::new();
        let mut spatial = Vec::new();
        loop {
            if let Some(&start) = seen.get(&(rem.clone(), st.clone())) {
                return Ok(self.periodic_coords(&spatial, start));
            }
            if spatial.len() >= CYCLE_LIMIT {
                return Err(Error::Budget { requested: spatial.len() as u128, budget: CYCLE_LIMIT as u128 });
            }
            seen.insert((rem.clone(), st.clone()), spatial.len());
            let scaled = rem.mul_int(base);
            let d = scaled.floor();
            rem = &scaled - &Rational::from_int(d.clone());
            let d = u32::try_from(d).expect("digit");
            spatial.push(self.step(&mut st, d));
        }
    }

    /// Coordinates whose binary expansion per axis is `spatial[..start]`
    /// followed by `spatial[start..]` repeated forever.
    pub(crate) fn periodic_coords(&self, spatial: &[u32], start: usize) -> Vec<Rational> {
        let n = self.n;
        (0..n)
            .map(|a| {
                let bit = |b: &u32| IBig::from((b >> (n - 1 - a)) & 1);
                let pre = spatial[..start].iter().fold(IBig::ZERO, |acc, b| (acc << 1) + bit(b));
                let per = spatial[start..].iter().fold(IBig::ZERO, |acc, b| (acc << 1) + bit(b));
                let len = spatial.len() - start;
                periodic_value(pre, start, per, len)
            })
            .collect()
    }

    /// Parameter whose nested intervals are the preimages of the cubes with
    /// spatial digits `prefix` followed by `tail` repeated forever.
    pub fn parameter_of_spatial_stream(&self, prefix: &[u32], tail: &[u32]) -> Result<Rational> {
        let n = self.n;
        if tail.is_empty() {
            return Err(Error::Shape("empty periodic tail".into()));
        }
        let mut st = self.initial_state();
        let mut digits: Vec<u32> = prefix.iter().map(|&b| self.unstep(&mut st, b)).collect();
        let mut seen: HashMap<(usize, MachineState), usize> = HashMap::new();
        let mut pos = 0usize;
        loop {
            let key = (pos % tail.len(), st.clone());
            if let Some(&start) = seen.get(&key) {
                let pre = digits[..start].iter().fold(IBig::ZERO, |acc, &d| (acc << n as usize) + IBig::from(d));
                let per = digits[start..].iter().fold(IBig::ZERO, |acc, &d| (acc << n as usize) + IBig::from(d));
                let len = digits.len() - start;
                return Ok(periodic_value_base(pre, start, per, len, n));
            }
            if pos >= CYCLE_LIMIT {
                return Err(Error::Budget { requested: pos as u128, budget: CYCLE_LIMIT as u128 });
            }
            seen.insert(key, digits.len());
            digits.push(self.unstep(&mut st, tail[pos % tail.len()]));
            pos += 1;
        }
    }
}

/// `(pre + per / (2^len - 1)) / 2^start` for binary digit blocks.
fn periodic_value(pre: IBig, start: usize, per: IBig, len: usize) -> Rational {
    periodic_value_base(pre, start, per, len, 1)
}

/// Same as [`periodic_value`] with digits in base `2^w`.
fn periodic_value_base(pre: IBig, start: usize, per: IBig, len: usize, w: u32) -> Rational {
    let w = w as usize;
    let cycle = (IBig::ONE << (len * w)) - IBig::ONE;
    let num = pre * &cycle + per;
    let den = cycle << (start * w);
    Rational::new(num, den).expect("nonzero denominator")
}
