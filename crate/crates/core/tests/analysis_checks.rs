use cubefill::analysis::*;
use cubefill::real::{self, Real};
use cubefill::whitney::bump_g_real;
use cubefill::{Error, Rational, WhitneyMap};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn f(x: &Real) -> f64 {
    real::to_f64(x)
}

#[test]
fn crossover_golden_values() {
    assert_eq!(lemma21_crossover(2, 1, 1.5, 128).unwrap(), 8);
    assert_eq!(lemma21_crossover(3, 2, 1.3, 128).unwrap(), 9);
    assert_eq!(lemma21_crossover(3, 1, 2.5, 128).unwrap(), 14);
    assert_eq!(lemma21_crossover(2, 1, 1.9, 128).unwrap(), 54);
    assert_eq!(lemma21_crossover(2, 1, 0.0, 128).unwrap(), 1);
}

/// Independent f64 evaluation of the majorant.
fn oracle_term(m: u32, n: u32, k: f64, j: usize) -> f64 {
    let s = ((j + 1) * n as usize) as f64;
    let gap_log2 = -((s - 1.0) * s).log2() - (s - 1.0);
    ((n as f64).sqrt().log2() + 1.0 - (j as f64) * m as f64 - k * gap_log2).exp2()
}

#[test]
fn series_matches_oracle_and_decreases_past_crossover() {
    for (m, n, k) in [(2, 1, 1.5), (3, 2, 1.3), (3, 1, 2.5), (2, 1, 1.9)] {
        let j0 = lemma21_crossover(m, n, k, 128).unwrap();
        let terms = lemma21_series(m, n, k, 1..j0 + 200, 128).unwrap();
        for (i, t) in terms.iter().enumerate() {
            let o = oracle_term(m, n, k, i + 1);
            assert!((f(t) - o).abs() <= 1e-9 * o, "({m},{n},{k}) j={}", i + 1);
        }
        let tail = &terms[j0 - 1..];
        assert!(tail.windows(2).all(|w| w[1] < w[0]), "({m},{n},{k})");
        if j0 > 1 {
            assert!(terms[j0 - 1] >= terms[j0 - 2]);
        }
    }
}

#[test]
fn series_edge_cases() {
    let t = lemma21_series(3, 2, 0.0, 1..4, 96).unwrap();
    let expect = [2f64.sqrt() * 0.25, 2f64.sqrt() / 32.0, 2f64.sqrt() / 256.0];
    for (a, b) in t.iter().zip(expect) {
        assert!((f(a) - b).abs() < 1e-15);
    }
    assert!(matches!(lemma21_series(3, 2, 1.5, 1..3, 64), Err(Error::Domain(_))));
    assert!(lemma21_series(2, 2, 0.5, 1..3, 64).is_err());
}

#[test]
fn joining_segments_have_zero_numerators() {
    for (m, n, d) in [(2, 1, 4), (3, 2, 1)] {
        let w = WhitneyMap::new(m, n, d).unwrap();
        let e = w.build_e(1 << 20).unwrap();
        let r = lemma22_probe(&w, &joining_segments(&w, &e), 1.5_f64.min(m as f64 / n as f64 - 0.1)).unwrap();
        assert!(r.numerators_zero);
        assert!(r.probe.samples.iter().all(|s| s.ratio == 0.0));
    }
}

#[test]
fn edge_segments_against_the_majorant() {
    let w = WhitneyMap::new(3, 2, 4).unwrap();
    let r = lemma22_probe(&w, &b1_edge_segments(&w, 48, 3).unwrap(), 1.3).unwrap();
    assert!(r.all_bounded && r.all_bounded_deepest_gap, "{:?}", r.levels);

    // m=2, n=1: the term computed with G_((j+1)n) is exceeded already at
    // level 1, because the narrowest gap inside the cube is G_((j+1)n+1).
    let w = WhitneyMap::new(2, 1, 8).unwrap();
    let r = lemma22_probe(&w, &b1_edge_segments(&w, 48, 3).unwrap(), 1.5).unwrap();
    let l1 = &r.levels[0];
    assert_eq!(l1.level, 1);
    assert!(!l1.bounded && l1.max_ratio > 6.0 * l1.bound.unwrap());
    assert!(r.all_bounded_deepest_gap, "{:?}", r.levels);

    // k = 0: the numerator is at most the image cube diameter bound
    let r = lemma22_probe(&w, &b1_edge_segments(&w, 48, 3).unwrap(), 0.0).unwrap();
    assert!(r.all_bounded);
}

#[test]
fn approach_from_the_origin() {
    let w = WhitneyMap::new(2, 1, 40).unwrap();
    let o = vec![Rational::zero(); 2];
    let cfg = ProbeConfig { log2_inv_h: (8..=24).collect(), tolerance: 0.25 };
    for axis in 0..2 {
        let r = lemma23_probe(&w, &o, axis, 1.5, &cfg).unwrap();
        assert!(r.trend.drop <= 0.1, "{:?}", r.trend);
        // |p(x) - p(x0)| scales like h^(m/n), so the ratio like h^0.5
        assert!(r.trend.fit_slope.unwrap() > 0.25, "{:?}", r.trend);
        // values alternate with the parity of log2(1/h), so the decay is
        // judged on the fitted slope rather than step by step
        let r0 = lemma23_probe(&w, &o, axis, 0.0, &cfg).unwrap();
        assert!(r0.trend.drop <= 0.1 && r0.trend.fit_slope.unwrap() > 1.0, "{:?}", r0.trend);
    }
}

#[test]
fn approach_inside_a_constant_segment_is_zero() {
    let w = WhitneyMap::new(2, 1, 20).unwrap();
    // (0, 3/8)..(0, 5/8) joins the first two depth-1 cubes
    let x0 = vec![q("0"), q("3/8")];
    let cfg = ProbeConfig { log2_inv_h: vec![4, 8, 12, 16], tolerance: 0.0 };
    let r = lemma23_probe(&w, &x0, 1, 1.5, &cfg).unwrap();
    assert!(r.samples.iter().all(|s| s.ratio == 0.0));
}

#[test]
fn lambda_derivative_examples() {
    let cfg = ProbeConfig::default();
    let a = vec![q("1/3")];
    let constant = |_: &[Rational]| -> cubefill::Result<Real> { Ok(real::from_int(7, 128)) };
    let r = lambda_derivative(&constant, &a, 0, 0.5, &cfg).unwrap();
    assert!(r.samples.iter().all(|s| s.ratio == 0.0));
    let ident = |x: &[Rational]| -> cubefill::Result<Real> { Ok(x[0].to_real(128)) };
    let r = lambda_derivative(&ident, &a, 0, 1.0, &cfg).unwrap();
    assert!(r.samples.iter().all(|s| (s.ratio - 1.0).abs() < 1e-12));
    assert!(!r.verdict);
    let bump = |x: &[Rational]| -> cubefill::Result<Real> { Ok(bump_g_real(&x[0], 256)) };
    let cfg = ProbeConfig { log2_inv_h: vec![2, 3, 4, 5, 6], tolerance: 0.0 };
    let r = lambda_derivative(&bump, &[Rational::zero()], 0, 0.5, &cfg).unwrap();
    assert!(r.verdict, "{:?}", r.trend);
    assert!(r.trend.envelope.last().unwrap() < &1e-20);
}

#[test]
fn vanish_probe_small() {
    let shallow = WhitneyMap::new(2, 1, 3).unwrap();
    let e = shallow.build_e(1 << 20).unwrap();
    let pts = sample_e_points(&e, 12, 5).unwrap();
    let w = WhitneyMap::new(2, 1, 40).unwrap();
    let cfg = ProbeConfig { log2_inv_h: vec![12, 16, 20, 24], tolerance: 0.25 };
    let r = vanish_probe(&w, &pts, 1.5, &cfg).unwrap();
    assert!(r.segment_stencils > 0);
    assert_eq!(r.nonzero_on_segments, 0);
    assert!(r.samples.iter().all(|s| s.ratio >= 0.0));
    // the same probe at twice the precision gives the same verdict
    let w2 = WhitneyMap::with_precision(2, 1, 40, 256).unwrap();
    let r2 = vanish_probe(&w2, &pts, 1.5, &cfg).unwrap();
    assert_eq!(r.verdict, r2.verdict);
    for (a, b) in r.trend.envelope.iter().zip(&r2.trend.envelope) {
        assert!((a - b).abs() <= 1e-9 * a.max(1e-300));
    }
    // k = 0 is plain continuity
    let c = vanish_probe(&w, &pts, 0.0, &cfg).unwrap();
    assert!(c.trend.envelope.windows(2).all(|p| p[1] <= p[0]));
}

#[test]
fn surjectivity_examples() {
    let w = WhitneyMap::new(2, 1, 1).unwrap();
    assert_eq!(surjectivity_check(&w, 1, 1 << 10).unwrap(), (true, vec![]));
    let w = WhitneyMap::new(3, 2, 1).unwrap();
    assert!(surjectivity_check(&w, 1, 1 << 10).unwrap().0);
    assert!(surjectivity_check(&w, 0, 1 << 10).unwrap().0);
}

#[test]
fn order_sets() {
    assert_eq!(DerivOrderSet::new(2.5).unwrap().entries(), vec![0.0, 1.0, 2.0, 2.5, 1.5, 0.5]);
}
