use cubefill::analysis::{hilbert_d2xy, Isometry};
use cubefill::curve::{adjacency_report, cube_count, measure_check, verify_curve};
use cubefill::{Curve, CubeAddress, CurveState, Method, Rational};
use proptest::prelude::*;

fn lattices(c: &Curve, s: usize) -> Vec<Vec<u64>> {
    c.order(s, 1 << 22).unwrap().iter().map(|r| r.addr.lattice_u64()).collect()
}

#[test]
fn plane_order_depth_one_and_two() {
    let c = Curve::new(2).unwrap();
    assert_eq!(lattices(&c, 1), vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]]);
    let d2 = lattices(&c, 2);
    assert_eq!(&d2[..4], &[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]);
}

#[test]
fn n1_is_left_to_right() {
    let c = Curve::new(1).unwrap();
    assert_eq!(lattices(&c, 3), (0..8).map(|i| vec![i]).collect::<Vec<_>>());
}

#[test]
fn hilbert_oracle_agrees_up_to_one_isometry() {
    let c = Curve::new(2).unwrap();
    let pinned = Isometry::pinned(&c).unwrap();
    assert_eq!(pinned.len(), 1, "exactly one symmetry matches depths 1 and 2");
    for s in 1..=6 {
        assert!(pinned[0].agrees(&c, s), "depth {s}");
    }
    // the oracle itself is continuous
    for s in 1..=5 {
        let cells: Vec<[u64; 2]> = (0..1u64 << (2 * s)).map(|d| hilbert_d2xy(d, s)).collect();
        assert!(cells.windows(2).all(|w| w[0][0].abs_diff(w[1][0]) + w[0][1].abs_diff(w[1][1]) == 1));
    }
}

#[test]
fn adjacency_examples() {
    for (n, s) in [(2, 6), (1, 8), (4, 2), (3, 3)] {
        let r = adjacency_report(&Curve::new(n).unwrap(), s, 1 << 20).unwrap();
        assert!(r.passed(), "n={n} s={s}: {:?}", r.examples);
        assert_eq!(r.pairs as u128, cube_count(n, s) - 1);
    }
}

#[test]
fn measure_examples() {
    assert!(measure_check(&Curve::new(2).unwrap(), 3, 1 << 20).unwrap());
    assert!(measure_check(&Curve::new(3).unwrap(), 2, 1 << 20).unwrap());
    assert!(measure_check(&Curve::new(1).unwrap(), 6, 1 << 20).unwrap());
}

#[test]
fn budget_is_enforced() {
    let c = Curve::new(3).unwrap();
    assert!(c.order(4, 1000).is_err());
    assert!(adjacency_report(&c, 4, 1000).is_err());
}

#[test]
fn tampered_table_fails_verification() {
    let mut tables: Vec<_> = Curve::new(3).unwrap().all_tables().to_vec();
    let root = CurveState::new(Method::P, false, false);
    tables[1].swap_cells(root, 1, 2);
    let bad = Curve::with_tables(3, tables).unwrap();
    let r = verify_curve(&bad, 2, 1 << 20, 1).unwrap();
    assert!(!r.passed());
    let first = r.failures().next().unwrap();
    assert!(!first.detail.is_empty());
}

#[test]
fn encode_decode_sweep_n3() {
    let c = Curve::new(3).unwrap();
    for r in 0..cube_count(3, 2) {
        let q = c.decode(r, 2).unwrap();
        assert_eq!(c.encode(&q.center(), 2).unwrap(), r);
    }
}

#[test]
fn exact_points() {
    let c = Curve::new(2).unwrap();
    let q = |s: &str| s.parse::<Rational>().unwrap();
    assert_eq!(c.point(&q("0")).unwrap(), vec![q("0"), q("0")]);
    assert_eq!(c.point(&q("1")).unwrap(), vec![q("1"), q("0")]);
    let one = Curve::new(1).unwrap();
    assert_eq!(one.point(&q("3/7")).unwrap(), vec![q("3/7")]);
    // a non-dyadic parameter lands in the cube of every truncation
    let t = q("1/3");
    let p = c.point(&t).unwrap();
    for s in 1..8 {
        let rank = (t.mul_int(1i64 << (2 * s))).floor();
        let cube = c.decode(u128::try_from(rank).unwrap(), s).unwrap();
        assert!(cube.contains(&p), "depth {s}");
    }
}

fn curve_and_depth() -> impl Strategy<Value = (u32, usize)> {
    (1u32..=5).prop_flat_map(|n| (Just(n), 1usize..=(12 / n as usize).min(6)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decode_encode_round_trip((n, s) in curve_and_depth(), seed in any::<u64>()) {
        let c = Curve::new(n).unwrap();
        let rank = seed as u128 % cube_count(n, s);
        let q = c.decode(rank, s).unwrap();
        prop_assert_eq!(c.rank_of(&q).unwrap(), rank);
        prop_assert_eq!(c.encode(&q.center(), s).unwrap(), rank);
        prop_assert_eq!(c.fn_cube(&c.fn_preimage(&q).unwrap()).unwrap(), q);
    }

    #[test]
    fn refinement_blocks((n, s) in curve_and_depth(), seed in any::<u64>()) {
        let c = Curve::new(n).unwrap();
        let rank = seed as u128 % cube_count(n, s);
        let child = c.decode(rank, s).unwrap();
        let parent = c.decode(rank >> n, s - 1).unwrap();
        prop_assert!(parent.is_ancestor_of(&child));
    }

    #[test]
    fn points_stay_in_their_cubes(n in 1u32..=4, num in 0u64..=4096) {
        let c = Curve::new(n).unwrap();
        let t = Rational::new(num, 4096).unwrap();
        let p = c.point(&t).unwrap();
        for s in 1..=(12 / n as usize) {
            let scaled = t.mul_int(1i64 << (n as usize * s));
            let hi = scaled.floor();
            let ranks: Vec<u128> = if Rational::from_int(hi.clone()) == scaled && num > 0 {
                // on a boundary: both neighbouring cubes contain the point
                let r = u128::try_from(hi).unwrap();
                vec![r - 1, r.min(cube_count(n, s) - 1)]
            } else {
                vec![u128::try_from(hi).unwrap().min(cube_count(n, s) - 1)]
            };
            for r in ranks {
                prop_assert!(c.decode(r, s).unwrap().contains(&p));
            }
        }
    }

    #[test]
    fn hilbert_round_trip(x in 0u64..64, y in 0u64..64) {
        let c = Curve::new(2).unwrap();
        let p = vec![Rational::new(2 * x + 1, 128).unwrap(), Rational::new(2 * y + 1, 128).unwrap()];
        let r = c.encode(&p, 6).unwrap();
        prop_assert_eq!(hilbert_d2xy(r as u64, 6), [x, y]);
        prop_assert_eq!(c.decode(r, 6).unwrap(), CubeAddress::containing(&p, 6, Default::default()).unwrap());
    }
}
