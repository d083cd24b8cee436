//! Limit probes along shrinking segments and axis-parallel approaches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::lemma::{lemma21_term, segment_majorant};
use crate::analysis::probe::{trend, ProbeConfig, ProbeReport, ProbeSample};
use crate::error::{Error, Result};
use crate::exact::{CubeAddress, Rational};
use crate::real;
use crate::whitney::{shrunken_gap, ArcSet, ShrunkenCube, WhitneyMap};

/// An axis-parallel segment with both endpoints in `B_0`, tagged with the
/// pairing level `j` of the cube of `K~^m_(jn)` it lives in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSegment {
    pub level: usize,
    pub x_prime: Vec<Rational>,
    pub x_double_prime: Vec<Rational>,
}

impl ProbeSegment {
    pub fn length(&self) -> Rational {
        self.x_prime
            .iter()
            .zip(&self.x_double_prime)
            .map(|(a, b)| (b - a).abs())
            .fold(Rational::zero(), |acc, d| acc + d)
    }
}

/// Edge segments of `B_1`: the gap along one axis between two sibling
/// children, with every other coordinate at a vertex of the parent. For
/// each depth `1 <= d < levels`, `per_level` parents are drawn from `seed`
/// (all of them when there are fewer).
pub fn b1_edge_segments(wm: &WhitneyMap, per_level: usize, seed: u64) -> Result<Vec<ProbeSegment>> {
    let (m, n) = (wm.m(), wm.n() as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for d in 1..wm.levels() {
        let total = 1u128.checked_shl(m * d as u32).unwrap_or(u128::MAX);
        let parents: Vec<CubeAddress> = if total <= per_level as u128 {
            let mut all = vec![CubeAddress::root(m)];
            for _ in 0..d {
                all = all.iter().flat_map(|c| c.children()).collect();
            }
            all
        } else {
            (0..per_level)
                .map(|_| CubeAddress::new(m, (0..d).map(|_| rng.gen_range(1..=1u32 << m)).collect()))
                .collect::<Result<_>>()?
        };
        // children of a depth-d cube are separated by the gap of level d + 1
        let gap = shrunken_gap(d + 2)?;
        for parent in parents {
            let cube = ShrunkenCube::new(parent);
            for axis in 0..m as usize {
                let mut lower = cube.corner.clone();
                lower[axis] = &lower[axis] + &(&cube.side - &gap).checked_div(&Rational::from_int(2))?;
                let mut upper = lower.clone();
                upper[axis] = &upper[axis] + &gap;
                for mask in 0..1u32 << (m - 1) {
                    let (mut a, mut b) = (lower.clone(), upper.clone());
                    for (bit, other) in (0..m as usize).filter(|&o| o != axis).enumerate() {
                        if mask >> bit & 1 == 1 {
                            a[other] = &a[other] + &cube.side;
                            b[other] = &b[other] + &cube.side;
                        }
                    }
                    out.push(ProbeSegment { level: d / n, x_prime: a, x_double_prime: b });
                }
            }
        }
    }
    Ok(out)
}

/// The joining segments of `E` as probe segments.
pub fn joining_segments(wm: &WhitneyMap, arcs: &ArcSet) -> Vec<ProbeSegment> {
    arcs.segments
        .iter()
        .map(|s| ProbeSegment {
            level: (s.level - 1) / wm.n() as usize,
            x_prime: s.x_prime.clone(),
            x_double_prime: s.x_double_prime.clone(),
        })
        .collect()
}

/// Per-level summary of a segment probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelBound {
    pub level: usize,
    pub segments: usize,
    /// Largest `max_r |p_r(x'') - p_r(x')|`, exact.
    pub max_numerator: Rational,
    pub max_ratio: f64,
    /// Series term at this level; absent for level 0.
    pub bound: Option<f64>,
    pub bounded: bool,
    /// The same majorant with the narrowest gap that actually occurs inside
    /// a cube of this level, `G_((j+1)n+1)`.
    pub bound_deepest_gap: f64,
    pub bounded_deepest_gap: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentProbeReport {
    pub probe: ProbeReport,
    pub levels: Vec<LevelBound>,
    pub all_bounded: bool,
    pub all_bounded_deepest_gap: bool,
    /// Every numerator was exactly zero.
    pub numerators_zero: bool,
}

/// `max_r |p_r(L'') - p_r(L')| / |L|^k` per segment, computed from exact
/// endpoint values, and compared level by level with the series majorant.
pub fn lemma22_probe(wm: &WhitneyMap, segments: &[ProbeSegment], k: f64) -> Result<SegmentProbeReport> {
    if segments.is_empty() {
        return Err(Error::InvalidOperand("no segments to probe".into()));
    }
    let prec = wm.precision();
    let kk = real::from_f64(k, prec);
    let mut levels: Vec<usize> = segments.iter().map(|s| s.level).collect();
    levels.sort_unstable();
    levels.dedup();
    let mut samples = Vec::with_capacity(segments.len());
    let mut stats: Vec<LevelBound> = Vec::with_capacity(levels.len());
    for &lvl in &levels {
        let bound = if lvl >= 1 { Some(real::to_f64(&lemma21_term(wm.m(), wm.n(), k, lvl, prec)?)) } else { None };
        stats.push(LevelBound {
            level: lvl,
            segments: 0,
            max_numerator: Rational::zero(),
            max_ratio: 0.0,
            bound,
            bounded: true,
            bound_deepest_gap: real::to_f64(&segment_majorant(wm.m(), wm.n(), k, lvl, prec)?),
            bounded_deepest_gap: true,
        });
    }
    let mut hs = vec![0.0f64; levels.len()];
    for (i, seg) in segments.iter().enumerate() {
        let step = levels.binary_search(&seg.level).expect("level listed");
        let a = wm.eval_p(&seg.x_prime)?.exact;
        let b = wm.eval_p(&seg.x_double_prime)?.exact;
        let (Some(a), Some(b)) = (a, b) else {
            return Err(Error::Domain("segment endpoint is not a vertex of B_0".into()));
        };
        let num = a.iter().zip(&b).map(|(u, v)| (v - u).abs()).max().unwrap_or_else(Rational::zero);
        let len = seg.length();
        if len.is_zero() {
            return Err(Error::InvalidOperand("degenerate segment".into()));
        }
        let denom = if k == 0.0 { real::from_int(1, prec) } else { len.to_real(prec).powf(&kk) };
        let ratio = real::to_f64(&(num.to_real(prec) / denom));
        let st = &mut stats[step];
        st.segments += 1;
        if num > st.max_numerator {
            st.max_numerator = num;
        }
        st.max_ratio = st.max_ratio.max(ratio);
        hs[step] = hs[step].max(len.to_f64());
        samples.push(ProbeSample { point: i, axis: 0, order: k, step, h: len.to_f64(), ratio });
    }
    for st in &mut stats {
        st.bounded = st.bound.is_none_or(|b| st.max_ratio <= b);
        st.bounded_deepest_gap = st.max_ratio <= st.bound_deepest_gap;
    }
    let (tr, verdict) = trend(hs, 0.0, &samples);
    let numerators_zero = stats.iter().all(|s| s.max_numerator.is_zero());
    let all_bounded = stats.iter().all(|s| s.bounded);
    let all_bounded_deepest_gap = stats.iter().all(|s| s.bounded_deepest_gap);
    Ok(SegmentProbeReport {
        probe: ProbeReport {
            samples,
            trend: tr,
            verdict,
            nonzero_on_segments: 0,
            segment_stencils: 0,
            truncated: 0,
            precision: prec,
        },
        levels: stats,
        all_bounded,
        all_bounded_deepest_gap,
        numerators_zero,
    })
}

/// `max_r |p_r(x) - p_r(x0)| / |x_i - x0_i|^k` for `x = x0 + h e_axis`,
/// stepping into the cube. The approach is the plain axis-parallel
/// sequence from the statement; no sequence is borrowed from elsewhere.
pub fn lemma23_probe(wm: &WhitneyMap, x0: &[Rational], axis: usize, k: f64, cfg: &ProbeConfig) -> Result<ProbeReport> {
    cfg.check()?;
    if x0.len() != wm.m() as usize || axis >= x0.len() {
        return Err(Error::Shape(format!("point of dimension {} / axis {axis} for m = {}", x0.len(), wm.m())));
    }
    let prec = wm.precision();
    let base = wm.eval_p(x0)?;
    let half = Rational::new(1, 2)?;
    let mut samples = Vec::new();
    let mut truncated = 0;
    for (step, &e) in cfg.log2_inv_h.iter().enumerate() {
        let mut h = Rational::pow2_neg(e);
        if x0[axis] > half {
            h = -h;
        }
        let mut x = x0.to_vec();
        x[axis] = &x[axis] + &h;
        let v = wm.eval_p(&x)?;
        truncated += v.exact.is_none() as usize;
        let hf = 2f64.powi(-(e as i32));
        let ratio = v
            .approx
            .iter()
            .zip(&base.approx)
            .map(|(a, b)| real::to_f64(&(a - b)).abs() / hf.powf(k))
            .fold(0.0, f64::max);
        samples.push(ProbeSample { point: 0, axis, order: k, step, h: hf, ratio });
    }
    let (tr, verdict) = trend(cfg.hs(), cfg.tolerance, &samples);
    Ok(ProbeReport {
        samples,
        trend: tr,
        verdict,
        nonzero_on_segments: 0,
        segment_stencils: 0,
        truncated,
        precision: prec,
    })
}

/// Whether `cube_image` at depth `n s` hits every cube of `K^n_(m s)` once.
pub fn surjectivity_check(wm: &WhitneyMap, s: usize, budget: u128) -> Result<(bool, Vec<CubeAddress>)> {
    wm.surjectivity_check(s, budget)
}
