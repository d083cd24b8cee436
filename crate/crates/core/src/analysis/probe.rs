//! Finite-difference probes of vanishing derivatives on the arc set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::orders::DerivOrderSet;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::real::{self, Real};
use crate::whitney::{ArcSet, WhitneyMap};

/// One measured ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub point: usize,
    pub axis: usize,
    pub order: f64,
    /// Index into [`Trend::hs`].
    pub step: usize,
    pub h: f64,
    pub ratio: f64,
}

/// Envelope of the ratios, one entry per step size, coarsest first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    /// Representative step per group, strictly decreasing.
    pub hs: Vec<f64>,
    pub envelope: Vec<f64>,
    pub monotone: bool,
    /// First index from which the envelope is non-increasing within tolerance.
    pub monotone_from: usize,
    /// `envelope[last] / envelope[0]`, or 0 when everything vanished.
    pub drop: f64,
    /// Least-squares slope of `log envelope` against `log h` over the
    /// positive entries; positive means the ratios shrink with `h`.
    pub fit_slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub samples: Vec<ProbeSample>,
    pub trend: Trend,
    /// Ratios decay: finest at most a tenth of coarsest, and non-increasing
    /// up to the configured tolerance.
    pub verdict: bool,
    /// Stencils lying inside a constant joining segment that produced a
    /// non-zero difference. Must be zero.
    pub nonzero_on_segments: usize,
    pub segment_stencils: usize,
    /// Evaluations that hit the depth cap and returned an approximation.
    pub truncated: usize,
    pub precision: usize,
}

/// Step sizes and noise tolerance of a probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub log2_inv_h: Vec<u32>,
    /// Allowed relative increase between consecutive envelope entries.
    pub tolerance: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { log2_inv_h: vec![8, 12, 16, 20, 24], tolerance: 0.25 }
    }
}

pub(crate) fn trend(hs: Vec<f64>, tolerance: f64, samples: &[ProbeSample]) -> (Trend, bool) {
    let envelope: Vec<f64> = (0..hs.len())
        .map(|i| samples.iter().filter(|s| s.step == i).map(|s| s.ratio).fold(0.0, f64::max))
        .collect();
    let ok = |w: &[f64]| w[1] <= w[0] * (1.0 + tolerance);
    let monotone = envelope.windows(2).all(ok);
    let monotone_from = envelope.windows(2).rposition(|w| !ok(w)).map_or(0, |i| i + 1);
    let (first, last) = (envelope[0], *envelope.last().unwrap());
    let drop = if first == 0.0 { 0.0 } else { last / first };
    let verdict = monotone && last <= first / 10.0;
    let pts: Vec<(f64, f64)> =
        hs.iter().zip(&envelope).filter(|(h, r)| **h > 0.0 && **r > 0.0).map(|(h, r)| (h.ln(), r.ln())).collect();
    let fit_slope = (pts.len() >= 2).then(|| {
        let k = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / k, b + y / k));
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        if sxx == 0.0 { 0.0 } else { sxy / sxx }
    });
    (Trend { hs, envelope, monotone, monotone_from, drop, fit_slope }, verdict)
}

impl ProbeConfig {
    pub(crate) fn check(&self) -> Result<()> {
        if self.log2_inv_h.is_empty() || self.log2_inv_h.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidOperand("step exponents must be non-empty and increasing".into()));
        }
        Ok(())
    }

    pub fn hs(&self) -> Vec<f64> {
        self.log2_inv_h.iter().map(|&e| 2f64.powi(-(e as i32))).collect()
    }
}

fn shifted(x: &[Rational], axis: usize, by: &Rational) -> Vec<Rational> {
    let mut y = x.to_vec();
    y[axis] = &y[axis] + by;
    y
}

/// Two-sided `lambda`-derivative quotients
/// `sign(t) (f(a + t e_axis) - f(a)) / |t|^lambda`, `t = +-h`, keeping the
/// larger magnitude. Sides leaving `[0,1]` are skipped.
pub fn lambda_derivative(
    f: &dyn Fn(&[Rational]) -> Result<Real>,
    a: &[Rational],
    axis: usize,
    lambda: f64,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    cfg.check()?;
    if axis >= a.len() {
        return Err(Error::Shape(format!("axis {axis} out of range for dimension {}", a.len())));
    }
    let f0 = f(a)?;
    let mut samples = Vec::new();
    let precision = f0.precision();
    for (step, &e) in cfg.log2_inv_h.iter().enumerate() {
        let h = Rational::pow2_neg(e);
        let mut best = 0.0f64;
        for t in [h.clone(), -h.clone()] {
            let y = &a[axis] + &t;
            if y < Rational::zero() || y > Rational::one() {
                continue;
            }
            let d = real::to_f64(&(f(&shifted(a, axis, &t))? - &f0)).abs();
            best = best.max(d / (2f64).powi(-(e as i32)).powf(lambda));
        }
        samples.push(ProbeSample { point: 0, axis, order: lambda, step, h: 2f64.powi(-(e as i32)), ratio: best });
    }
    let (trend, verdict) = trend(cfg.hs(), cfg.tolerance, &samples);
    Ok(ProbeReport {
        samples,
        trend,
        verdict,
        nonzero_on_segments: 0,
        segment_stencils: 0,
        truncated: 0,
        precision,
    })
}

/// A point of `E` chosen for probing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EPoint {
    pub x: Vec<Rational>,
    /// Joining segment through `x`: `(axis, lower, upper)` along that axis.
    pub segment: Option<(usize, Rational, Rational)>,
}

/// `count` points of `E`: segment endpoints (points of `B_0`) and interior
/// points of joining segments, chosen deterministically from `seed`.
pub fn sample_e_points(arcs: &ArcSet, count: usize, seed: u64) -> Result<Vec<EPoint>> {
    if arcs.segments.is_empty() {
        return Err(Error::InvalidOperand("arc set has no segments".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let seg = &arcs.segments[rng.gen_range(0..arcs.segments.len())];
        let span = (seg.axis, seg.x_prime[seg.axis].clone(), seg.x_double_prime[seg.axis].clone());
        match i % 3 {
            0 => out.push(EPoint { x: seg.x_prime.clone(), segment: Some(span) }),
            1 => out.push(EPoint { x: seg.x_double_prime.clone(), segment: Some(span) }),
            _ => {
                let u = Rational::new(rng.gen_range(1..64i64), 64)?;
                let mut x = seg.x_prime.clone();
                x[seg.axis] = &span.1 + &(&(&span.2 - &span.1) * &u);
                out.push(EPoint { x, segment: Some(span) });
            }
        }
    }
    Ok(out)
}

fn binomial(j: usize, i: usize) -> i64 {
    (0..i).fold(1i64, |acc, t| acc * (j - t) as i64 / (t + 1) as i64)
}

/// Pure finite differences `|Delta_h^{floor(o)+1} p| / h^k` for every order
/// `o` of `T(k)`, axis and point, maximised over output coordinates.
/// Stencils step away from the nearer face of the cube so they stay inside.
pub fn vanish_probe(wm: &WhitneyMap, points: &[EPoint], k: f64, cfg: &ProbeConfig) -> Result<ProbeReport> {
    cfg.check()?;
    let orders = DerivOrderSet::new(k)?;
    let entries = orders.entries();
    let jmax = entries.iter().map(|&o| DerivOrderSet::stencil(o)).max().unwrap();
    let m = wm.m() as usize;
    let mut samples = Vec::new();
    let (mut truncated, mut nonzero_on_segments, mut segment_stencils) = (0, 0, 0);
    let half = Rational::new(1, 2)?;
    for (pi, pt) in points.iter().enumerate() {
        if pt.x.len() != m {
            return Err(Error::Shape(format!("point has {} coordinates, expected {m}", pt.x.len())));
        }
        for axis in 0..m {
            for (si, &e) in cfg.log2_inv_h.iter().enumerate() {
                let h = Rational::pow2_neg(e);
                let step = if pt.x[axis] > half { -h.clone() } else { h.clone() };
                let mut vals: Vec<Vec<Real>> = Vec::with_capacity(jmax + 1);
                for i in 0..=jmax {
                    let v = wm.eval_p(&shifted(&pt.x, axis, &step.mul_int(i as i64)))?;
                    if v.exact.is_none() && v.error_bound > 0.0 {
                        truncated += 1;
                    }
                    vals.push(v.approx);
                }
                let inside_segment = pt.segment.as_ref().is_some_and(|(a, lo, hi)| {
                    *a == axis && {
                        let end = &pt.x[axis] + &step.mul_int(jmax as i64);
                        &pt.x[axis] >= lo && &pt.x[axis] <= hi && &end >= lo && &end <= hi
                    }
                });
                let hk = 2f64.powi(-(e as i32)).powf(k);
                for &o in &entries {
                    let j = DerivOrderSet::stencil(o);
                    let mut worst = 0.0f64;
                    let mut any_nonzero = false;
                    for r in 0..vals[0].len() {
                        let mut acc = real::from_int(0, wm.precision());
                        for (i, v) in vals.iter().enumerate().take(j + 1) {
                            let c = binomial(j, i) * if (j - i).is_multiple_of(2) { 1 } else { -1 };
                            acc += &v[r] * real::from_int(c, wm.precision());
                        }
                        any_nonzero |= acc != real::from_int(0, wm.precision());
                        worst = worst.max(real::to_f64(&acc).abs() / hk);
                    }
                    if inside_segment {
                        segment_stencils += 1;
                        nonzero_on_segments += any_nonzero as usize;
                    }
                    samples.push(ProbeSample { point: pi, axis, order: o, step: si, h: 2f64.powi(-(e as i32)), ratio: worst });
                }
            }
        }
    }
    let (trend, verdict) = trend(cfg.hs(), cfg.tolerance, &samples);
    Ok(ProbeReport {
        samples,
        trend,
        verdict,
        nonzero_on_segments,
        segment_stencils,
        truncated,
        precision: wm.precision(),
    })
}
