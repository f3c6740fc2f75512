#![allow(dead_code)]

use cubvis::arith::rational::{int, rat, Rational};
use cubvis::cubic::HomogeneousCubic;
use cubvis::generators::{CurvePoint, EllipticCurve};
use cubvis::geometry::{enumerate_lines, Point, PointSet};
use cubvis::visibility::VisibilityGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn cubic(terms: &[([u32; 3], i64)]) -> HomogeneousCubic {
    HomogeneousCubic::from_int_terms(terms).unwrap()
}

/// `y = x^3`.
pub fn power_cubic() -> HomogeneousCubic {
    cubic(&[([0, 1, 2], 1), ([3, 0, 0], -1)])
}

/// `y^2 = x^3 - x`.
pub fn weierstrass() -> HomogeneousCubic {
    cubic(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([1, 0, 2], 1)])
}

/// `6 y^2 = x^3 - x`, real-affinely equivalent to `y^2 = x^3 - x` via `y -> sqrt(6) y`.
pub fn twisted_weierstrass() -> HomogeneousCubic {
    cubic(&[([0, 2, 1], 6), ([3, 0, 0], -1), ([1, 0, 2], 1)])
}

/// `y^2 = x^3 - x^2`.
pub fn crunodal() -> HomogeneousCubic {
    cubic(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([2, 0, 1], 1)])
}

/// Rational points of `6 y^2 = x^3 - x` from `kP + T` on `Y^2 = X^3 - 36 X`,
/// with `P = (-3, 9)` and `T` running over the 2-torsion.
pub fn twisted_points(max_k: u64) -> Vec<Point> {
    let e = EllipticCurve::new(int(-36), int(0)).unwrap();
    let p = CurvePoint::Affine(Point::int(-3, 9));
    let torsion = [
        CurvePoint::Infinity,
        CurvePoint::Affine(Point::int(0, 0)),
        CurvePoint::Affine(Point::int(6, 0)),
        CurvePoint::Affine(Point::int(-6, 0)),
    ];
    let mut out = Vec::new();
    for k in 1..=max_k {
        let kp = e.multiple(&p, k);
        for base in [kp.clone(), e.neg(&kp)] {
            for t in &torsion {
                if let CurvePoint::Affine(q) = e.add(&base, t) {
                    let pt = Point::new(&q.x / int(6), &q.y / int(36));
                    if !out.contains(&pt) {
                        out.push(pt);
                    }
                }
            }
        }
    }
    out
}

/// `(t^2 + 1, t (t^2 + 1))` on `y^2 = x^3 - x^2`.
pub fn crunodal_point(t: &Rational) -> Point {
    let x = t * t + int(1);
    Point::new(x.clone(), t * x)
}

pub fn power_point(t: &Rational) -> Point {
    Point::new(t.clone(), t * t * t)
}

pub fn random_rational(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    rat(rng.gen_range(-span * 8..=span * 8), rng.gen_range(1..=8))
}

/// Adds `s` integer points off the cubic keeping fewer than `k` points on every line.
pub fn plant_off_curve(a: &PointSet, f: &HomogeneousCubic, s: usize, k: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = a.clone();
    let mut added = 0;
    while added < s {
        let p = Point::int(rng.gen_range(-40..=40), rng.gen_range(-400..=400));
        if f.contains(&p) || current.points().contains(&p) {
            continue;
        }
        let next = current.extended(&[p]).unwrap();
        if enumerate_lines(&next).unwrap().max_collinear() < k {
            current = next;
            added += 1;
        }
    }
    current
}

pub fn brute_clique(g: &VisibilityGraph) -> usize {
    let n = g.n();
    let adj: Vec<u32> = (0..n).map(|i| (0..n).filter(|&j| g.adjacent(i, j)).fold(0, |m, j| m | (1 << j))).collect();
    let mut best = 0;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size > best && (0..n).filter(|&i| mask & (1 << i) != 0).all(|i| (mask & !(1 << i)) & !adj[i] == 0) {
            best = size;
        }
    }
    best
}
