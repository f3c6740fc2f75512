mod common;

use common::*;
use cubvis::arith::rational::{int, Rational};
use cubvis::container::{cubic_container, fit_cubic, turan_identities, ContainerError, DEFAULT_CLIQUE_BUDGET};
use cubvis::generators::{gen_cubic_power, gen_elliptic_coset, gen_one_blocker, gen_random_general, CurvePoint, EllipticCurve};
use cubvis::geometry::{enumerate_lines, orient, Point, PointSet};
use cubvis::orchard::{orchard_core, orchard_delta, triple_stats, verify_orchard_guarantees, GuaranteeStatus};
use cubvis::visibility::{max_clique_within, visibility_graph};
use num_integer::Integer;
use proptest::prelude::*;

fn small_set(max: usize, span: i64) -> impl Strategy<Value = PointSet> {
    prop::collection::btree_set((-span..=span, -span..=span), 3..=max)
        .prop_map(|s| PointSet::new(s.into_iter().map(|(x, y)| Point::int(x, y)).collect(), None).unwrap())
}

fn triple_degrees(a: &PointSet) -> (Vec<u64>, u64) {
    let n = a.len();
    let mut deg = vec![0u64; n];
    let mut total = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(a.get(i), a.get(j), a.get(k)) == 0 {
                    total += 1;
                    for v in [i, j, k] {
                        deg[v] += 1;
                    }
                }
            }
        }
    }
    (deg, total)
}

fn ceil(r: &Rational) -> usize {
    r.numer().div_ceil(r.denom()).try_into().unwrap()
}

#[test]
fn one_blocker_structure() {
    for m in (2..=12).step_by(2) {
        let a = gen_one_blocker(m).unwrap();
        let g = visibility_graph(&a);
        let circle: Vec<usize> = (0..m as usize).collect();
        for &i in &circle {
            let blocked: Vec<usize> = circle.iter().copied().filter(|&j| j != i && !g.adjacent(i, j)).collect();
            assert_eq!(blocked, vec![i ^ 1], "m = {m}");
            assert_eq!(g.witness(i.min(i ^ 1), i.max(i ^ 1)), Some(m as usize));
        }
        assert_eq!(max_clique_within(&g, &circle, DEFAULT_CLIQUE_BUDGET).unwrap().len(), m as usize / 2);
        assert!(enumerate_lines(&a).unwrap().max_collinear() <= 3);
    }
}

#[test]
fn power_points_collinear_iff_parameters_cancel() {
    let a = gen_cubic_power(6);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            for k in j + 1..a.len() {
                let sum = &a.get(i).x + &a.get(j).x + &a.get(k).x;
                assert_eq!(orient(a.get(i), a.get(j), a.get(k)) == 0, sum == int(0));
            }
        }
    }
}

#[test]
fn elliptic_coset_chords() {
    let e = EllipticCurve::new(int(-2), int(0)).unwrap();
    let p = Point::int(-1, 1);
    let a = gen_elliptic_coset(int(-2), int(0), p.clone(), 8, 60).unwrap();
    assert_eq!(a.len(), 8);
    assert!(enumerate_lines(&a).unwrap().max_collinear() <= 2);
    let base = CurvePoint::Affine(p);
    for i in 1..=3u64 {
        for j in i + 1..=4 {
            let (CurvePoint::Affine(pi), CurvePoint::Affine(pj)) = (e.multiple(&base, i), e.multiple(&base, j)) else {
                panic!("finite multiples expected");
            };
            let CurvePoint::Affine(third) = e.neg(&e.multiple(&base, i + j)) else { panic!("finite multiple expected") };
            assert_eq!(orient(&pi, &pj, &third), 0);
            assert!(e.contains(&third));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn turan_identities_hold(a in small_set(30, 5)) {
        let stats = enumerate_lines(&a).unwrap();
        match turan_identities(&a, DEFAULT_CLIQUE_BUDGET) {
            Ok(r) => {
                prop_assert!(stats.max_collinear() <= 3);
                prop_assert!(r.passed());
                let (_, triples) = triple_degrees(&a);
                prop_assert_eq!(r.t3 as u64, triples);
            }
            Err(ContainerError::NoFourCollinearRequired(c)) => prop_assert!(c >= 4),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn triple_counts_match_brute_force(a in small_set(18, 3)) {
        let h = triple_stats(&a).unwrap();
        let (deg, total) = triple_degrees(&a);
        prop_assert_eq!(h.degrees, deg);
        prop_assert_eq!(h.triples, total);
    }

    #[test]
    fn orchard_survivors_clear_threshold(a in small_set(24, 3), l in 3usize..6) {
        let core = orchard_core(&a, 5, l).unwrap();
        prop_assert_eq!(core.survivors.len() + core.deletion_order.len(), a.len());
        let sub = a.subset(&core.survivors);
        if sub.len() >= 3 {
            let (deg, _) = triple_degrees(&sub);
            prop_assert_eq!(&deg, &core.degrees);
        }
        let half = &orchard_delta(l) * int(a.len() as i64) / int(2);
        prop_assert!(core.degrees.iter().all(|&d| int(d as i64) >= half));
    }
}

#[test]
fn orchard_delta_at_four() {
    assert_eq!(orchard_delta(4), Rational::new(1.into(), 36.into()));
}

#[test]
fn orchard_on_grid_is_applicable() {
    let a = cubvis::generators::gen_grid(4, 4).unwrap();
    let mut core = orchard_core(&a, 5, 5).unwrap();
    let v = verify_orchard_guarantees(&mut core, &a, DEFAULT_CLIQUE_BUDGET).unwrap();
    assert_eq!(v.status, GuaranteeStatus::Applicable);
    assert!(v.certificates.iter().all(|c| c.passed));
}

#[test]
fn container_with_planted_outliers() {
    let f = power_cubic();
    let base = gen_cubic_power(10);
    for s in 1..=3 {
        let a = plant_off_curve(&base, &f, s, 4, 100 + s as u64);
        let r = cubic_container(&a, &f, 4).unwrap();
        assert_eq!(r.s, s);
        assert!(r.passed(), "s = {s}");
        assert!(r.cover.len() <= 15 * (s + 1) + 13);
        assert!(r.realized_clique.len() >= ceil(&r.omega_lower_bound));
    }
}

#[test]
fn fit_is_deterministic() {
    let a = gen_random_general(16, 30, 9).unwrap();
    let x = fit_cubic(&a, 40, 3).unwrap();
    let y = fit_cubic(&a, 40, 3).unwrap();
    assert_eq!(x.off_curve, y.off_curve);
    assert_eq!(x.cubic, y.cubic);
    assert!(x.s <= a.len() - 9);
}
