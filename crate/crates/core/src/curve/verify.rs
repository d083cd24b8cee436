//! Exhaustive and sampled checks of the curve properties at a finite depth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::fcurve::cube_count;
use crate::curve::machine::Curve;
use crate::error::{Error, Result};
use crate::exact::{CubeAddress, Dyadic, Rational};
use crate::report::{Check, VerifyReport, Violations};

/// Consecutive-pair adjacency at one depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyReport {
    pub n: u32,
    pub depth: usize,
    pub pairs: u64,
    pub violations: u64,
    /// First few violations, described by the rank of the earlier cube.
    pub examples: Vec<String>,
}

impl AdjacencyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn budget_ok(n: u32, s: usize, budget: u128) -> Result<()> {
    let total = cube_count(n, s);
    if total > budget || n as usize * s >= 63 {
        return Err(Error::Budget { requested: total, budget });
    }
    Ok(())
}

/// Every consecutive pair must share an `(n-1)`-face, the exit corner of the
/// first must be the entry corner of the second, and that point must be a
/// vertex of the shared face.
pub fn adjacency_report(curve: &Curve, s: usize, budget: u128) -> Result<AdjacencyReport> {
    let n = curve.dim();
    budget_ok(n, s, budget)?;
    let mut prev: Option<(u64, Vec<u64>, Vec<u64>)> = None; // (rank, lattice, exit vertex)
    let mut v = Violations::default();
    let mut pairs = 0u64;
    curve.for_each_cube(s, |rank, lat, st| {
        let entry: Vec<u64> = lat.iter().zip(curve.corner_offsets(st, false)).map(|(c, o)| c + o as u64).collect();
        let exit: Vec<u64> = lat.iter().zip(curve.corner_offsets(st, true)).map(|(c, o)| c + o as u64).collect();
        if let Some((pr, plat, pexit)) = prev.take() {
            pairs += 1;
            let diffs: Vec<usize> = (0..n as usize).filter(|&a| plat[a] != lat[a]).collect();
            let face = diffs.len() == 1 && plat[diffs[0]].abs_diff(lat[diffs[0]]) == 1;
            if !face {
                v.record(|| format!("ranks {pr},{rank} do not share a face"));
            } else if pexit != entry {
                v.record(|| format!("ranks {pr},{rank}: exit {pexit:?} differs from entry {entry:?}"));
            } else {
                let i = diffs[0];
                let on_face = (0..n as usize).all(|a| {
                    if a == i {
                        entry[a] == plat[a].max(lat[a])
                    } else {
                        entry[a] == lat[a] || entry[a] == lat[a] + 1
                    }
                });
                if !on_face {
                    v.record(|| format!("ranks {pr},{rank}: f(b)={entry:?} is not a vertex of the shared face"));
                }
            }
        }
        prev = Some((rank, lat.to_vec(), exit));
    });
    Ok(AdjacencyReport { n, depth: s, pairs, violations: v.count, examples: v.first })
}

/// Every depth-`s` cube pulls back to exactly one parameter interval, whose
/// length equals the cube's volume.
pub fn measure_check(curve: &Curve, s: usize, budget: u128) -> Result<bool> {
    Ok(measure_detail(curve, s, budget)?.passed())
}

fn measure_detail(curve: &Curve, s: usize, budget: u128) -> Result<Check> {
    let n = curve.dim();
    budget_ok(n, s, budget)?;
    let total = 1u64 << (n as usize * s);
    let mut hit = vec![false; total as usize];
    let mut v = Violations::default();
    let volume = (0..n).fold(Dyadic::one(), |acc, _| &acc * &Dyadic::new(1, s as u32));
    let mut checked = 0u64;
    curve.for_each_cube(s, |_, lat, _| {
        checked += 1;
        let delta = CubeAddress::from_lattice_u64(n, lat, s).expect("lattice");
        let alpha = curve.fn_preimage(&delta).expect("valid cube");
        let (lo, hi) = crate::exact::interval_of_digits(alpha.digits(), 1);
        let len = &hi - &lo;
        if len != volume {
            v.record(|| format!("{delta}: preimage length {len} but volume {volume}"));
        }
        let r = curve.rank_of(&delta).expect("rank") as usize;
        if std::mem::replace(&mut hit[r], true) {
            v.record(|| format!("{delta}: rank {r} already taken"));
        }
    });
    let missing = hit.iter().filter(|h| !**h).count();
    if missing > 0 {
        v.record(|| format!("{missing} parameter intervals have no cube"));
    }
    Ok(Check::new(
        "measure",
        "meas(f^-1(Q)) = meas(Q) for every dyadic cube",
        v.is_empty(),
        v.summary(checked, "cubes"),
    ))
}

/// Children of every depth-`(s-1)` cube occupy one block of `2^n` ranks in
/// parent order, and each child interval maps inside its parent's cube.
fn refinement_detail(curve: &Curve, s: usize, budget: u128) -> Result<Check> {
    let n = curve.dim() as usize;
    budget_ok(curve.dim(), s, budget)?;
    let reference = "f(alpha) lies in one cube; child intervals map into the parent cube";
    if s == 0 {
        return Ok(Check::new("refinement", reference, true, "depth 0 has no parent level"));
    }
    let mut parents = vec![0u64; n << (n * (s - 1))];
    curve.for_each_cube(s - 1, |rank, lat, _| {
        parents[rank as usize * n..(rank as usize + 1) * n].copy_from_slice(lat);
    });
    let mut v = Violations::default();
    let mut checked = 0u64;
    curve.for_each_cube(s, |rank, lat, _| {
        checked += 1;
        let p = (rank >> n) as usize;
        let parent = &parents[p * n..(p + 1) * n];
        if lat.iter().zip(parent).any(|(c, q)| c >> 1 != *q) {
            v.record(|| format!("rank {rank} at depth {s} is not inside parent rank {p}"));
        }
    });
    Ok(Check::new("refinement", reference, v.is_empty(), v.summary(checked, "cubes")))
}

/// Inverse machine agrees with the forward order: `fn_preimage` of the
/// cube of rank `k` is the `k`-th interval and maps back to the cube.
fn preimage_detail(curve: &Curve, s: usize, budget: u128) -> Result<Check> {
    let n = curve.dim();
    budget_ok(n, s, budget)?;
    let mut v = Violations::default();
    let mut checked = 0u64;
    curve.for_each_cube(s, |rank, lat, _| {
        checked += 1;
        let delta = CubeAddress::from_lattice_u64(n, lat, s).expect("lattice");
        match curve.rank_of(&delta) {
            Ok(r) if r == rank as u128 => {}
            other => v.record(|| format!("{delta}: preimage rank {other:?}, expected {rank}")),
        }
    });
    Ok(Check::new(
        "preimage",
        "f^-1(int Q) lies in the interval of the same rank",
        v.is_empty(),
        v.summary(checked, "cubes"),
    ))
}

/// Samples `f_n` at every dyadic parameter of a finer grid: whenever the
/// image is interior to a depth-`s` cube, the parameter must lie in that
/// cube's preimage interval.
pub fn boundary_oracle(curve: &Curve, s: usize, budget: u128) -> Result<Check> {
    let n = curve.dim() as usize;
    budget_ok(curve.dim(), s, budget)?;
    let reference = "f^-1(int Q) lies in the interval of the same rank";
    let g = (22 / n).saturating_sub(s).max(1);
    let fine = s + g;
    if n * fine > 24 {
        return Ok(Check::skip("boundary_oracle", reference, "grid too large"));
    }
    let mut rank_of = vec![0u64; 1 << (n * s)];
    let linear = |lat: &[u64], bits: usize| lat.iter().fold(0u64, |acc, &c| (acc << bits) | c);
    curve.for_each_cube(s, |rank, lat, _| rank_of[linear(lat, s) as usize] = rank);
    let mut v = Violations::default();
    let mut checked = 0u64;
    let mask = (1u64 << g) - 1;
    let mut test = |k: u64, vert: &[u64]| {
        checked += 1;
        if vert.iter().all(|&c| c & mask != 0) {
            let cell: Vec<u64> = vert.iter().map(|&c| c >> g).collect();
            let r = rank_of[linear(&cell, s) as usize];
            let lo = r << (n * g);
            let hi = (r + 1) << (n * g);
            if k < lo || k > hi {
                v.record(|| format!("parameter {k}/2^{} maps inside cube of rank {r}", n * fine));
            }
        }
    };
    let mut last = Vec::new();
    curve.for_each_cube(fine, |k, lat, st| {
        let entry: Vec<u64> = lat.iter().zip(curve.corner_offsets(st, false)).map(|(c, o)| c + o as u64).collect();
        test(k, &entry);
        last = lat.iter().zip(curve.corner_offsets(st, true)).map(|(c, o)| c + o as u64).collect();
    });
    test(1 << (n * fine), &last);
    Ok(Check::new("boundary_oracle", reference, v.is_empty(), v.summary(checked, "grid parameters")))
}

/// Random rational parameters: `f_n(t)` lies in the cube of the interval
/// containing `t`, and if interior to a cube, `t` lies in its interval.
pub fn sampled_containment(curve: &Curve, s: usize, samples: usize, seed: u64) -> Result<Check> {
    let n = curve.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Violations::default();
    for _ in 0..samples {
        let den: i64 = rng.gen_range(3..200);
        let num: i64 = rng.gen_range(0..=den);
        let t = Rational::new(num, den)?;
        let chain = curve.point_chain(&t, s)?;
        let cube = &chain.chain[s];
        if !cube.contains(&chain.point) {
            v.record(|| format!("f({t}) = {:?} escapes {cube}", chain.point));
        }
        let side = cube.side().to_rational();
        let interior = |c: &CubeAddress| {
            c.corner().iter().zip(&chain.point).all(|(lo, x)| {
                let lo = lo.to_rational();
                &lo < x && x < &(&lo + &side)
            })
        };
        let own = CubeAddress::containing(&chain.point, s, crate::exact::Closure::Min)?;
        if interior(&own) {
            let alpha = curve.fn_preimage(&own)?;
            let (lo, hi) = crate::exact::interval_of_digits(alpha.digits(), 1);
            if t < lo.to_rational() || t > hi.to_rational() {
                v.record(|| format!("f({t}) is interior to {own} but {t} is outside its interval"));
            }
        }
    }
    Ok(Check::new(
        "sampled_containment",
        "f(alpha) lies in one cube; f^-1(int Q) lies in one interval",
        v.is_empty(),
        v.summary(samples as u64, &format!("rational parameters (n={n})")),
    ))
}

/// Transition tables obey the entry/exit continuity contract.
pub fn tables_check(curve: &Curve) -> Check {
    let problems: Vec<String> = curve
        .all_tables()
        .iter()
        .flat_map(|t| t.continuity_violations().into_iter().map(move |m| format!("S_{}: {m}", t.order())))
        .collect();
    let detail = if problems.is_empty() {
        format!("{} transducer tables continuous", curve.all_tables().len())
    } else {
        problems.iter().take(Violations::CAP).cloned().collect::<Vec<_>>().join("; ")
    };
    Check::new("transition_tables", "exit corner of each cell is the entry corner of the next", problems.is_empty(), detail)
}

/// Runs every curve check at depth `s`.
pub fn verify_curve(curve: &Curve, s: usize, budget: u128, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    report.push(tables_check(curve));
    let adj = adjacency_report(curve, s, budget)?;
    let detail = if adj.passed() {
        format!("{} consecutive pairs share a face with f(b) at a face vertex", adj.pairs)
    } else {
        format!("{} of {} pairs violate: {}", adj.violations, adj.pairs, adj.examples.join("; "))
    };
    report.push(Check::new(
        "adjacency",
        "consecutive cubes share an (n-1)-face and f(b) is a vertex of it",
        adj.passed(),
        detail,
    ));
    report.push(refinement_detail(curve, s, budget)?);
    report.push(preimage_detail(curve, s, budget)?);
    report.push(measure_detail(curve, s, budget)?);
    report.push(boundary_oracle(curve, s.min(3), budget)?);
    report.push(sampled_containment(curve, s.min(6), 64, seed)?);
    Ok(report)
}
