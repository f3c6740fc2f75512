use std::cmp::Ordering;

use cubvis::arith::rational::{int, rat};
use cubvis::arith::{resultant_y, sturm_isolate, BiPoly, Rational, RealAlgebraic, UniPoly};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-9i64..=9, 1..7).prop_map(|c| UniPoly::from_ints(&c))
}

fn product_of_roots(roots: &[(Rational, usize)]) -> UniPoly {
    roots.iter().fold(UniPoly::one(), |acc, (r, m)| &acc * &UniPoly::linear_root(r).pow(*m))
}

/// Determinant by Gaussian elimination over the rationals.
fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Rational::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for j in c..n {
                let t = &f * &m[c][j];
                m[r][j] -= t;
            }
        }
    }
    d
}

fn sylvester(f: &UniPoly, g: &UniPoly) -> Rational {
    let (m, n) = (f.deg(), g.deg());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rational::zero(); size];
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rational::zero(); size];
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    det(rows)
}

proptest! {
    #[test]
    fn division_identity(a in poly(), d in poly()) {
        prop_assume!(!d.is_zero());
        let (q, r) = a.div_rem(&d);
        prop_assert_eq!(&(&q * &d) + &r, a);
        prop_assert!(r.is_zero() || r.deg() < d.deg());
    }

    #[test]
    fn gcd_divides_both(a in poly(), b in poly(), c in poly()) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (x, y) = (&a * &c, &b * &c);
        let g = UniPoly::gcd(&x, &y);
        prop_assert!(x.rem(&g).is_zero() && y.rem(&g).is_zero());
        prop_assert!(UniPoly::gcd(&g, &c).deg() == c.deg());
    }

    #[test]
    fn isolation_finds_planted_roots(raw in prop::collection::vec((small_rational(), 1usize..=3), 1..5)) {
        let mut roots: Vec<(Rational, usize)> = Vec::new();
        for (r, m) in raw {
            if !roots.iter().any(|(s, _)| *s == r) {
                roots.push((r, m));
            }
        }
        roots.sort();
        let p = product_of_roots(&roots);
        let iso = sturm_isolate(&p).unwrap();
        prop_assert_eq!(iso.len(), roots.len());
        for (root, (r, m)) in iso.iter().zip(&roots) {
            prop_assert_eq!(root.compare_rational(r), Ordering::Equal);
            prop_assert_eq!(root.multiplicity(), *m);
            prop_assert!(root.lo() <= root.hi());
        }
        for w in iso.windows(2) {
            prop_assert!(w[0].hi() <= w[1].lo());
        }
    }

    #[test]
    fn refinement_keeps_the_root(c in 2i64..200, k in 1i64..40) {
        // x^2 - c has the root sqrt(c) when c is not a square
        let s = (c as f64).sqrt().round() as i64;
        prop_assume!(s * s != c);
        let p = UniPoly::from_ints(&[-c, 0, 1]);
        let root = sturm_isolate(&p).unwrap().pop().unwrap();
        let width = rat(1, k * 10);
        let r = root.refine(&width).unwrap();
        prop_assert!(r.width() <= width);
        prop_assert!(r.lo() * r.lo() < int(c) && int(c) < r.hi() * r.hi());
    }

    #[test]
    fn algebraic_order_matches_floats(a in 2i64..50, b in 2i64..50) {
        let ra = RealAlgebraic::from_root(sturm_isolate(&UniPoly::from_ints(&[-a, 0, 0, 1])).unwrap().pop().unwrap());
        let rb = RealAlgebraic::from_root(sturm_isolate(&UniPoly::from_ints(&[-b, 0, 1])).unwrap().pop().unwrap());
        let fa = (a as f64).cbrt();
        let fb = (b as f64).sqrt();
        prop_assume!((fa - fb).abs() > 1e-9);
        prop_assert_eq!(ra.cmp(&rb), fa.partial_cmp(&fb).unwrap());
    }

    #[test]
    fn resultant_specializes(
        f in prop::collection::vec((0usize..3, 0usize..3, -5i64..=5), 1..6),
        g in prop::collection::vec((0usize..3, 0usize..3, -5i64..=5), 1..6),
        x0 in small_rational(),
    ) {
        let f = BiPoly::from_int_terms(&f);
        let g = BiPoly::from_int_terms(&g);
        prop_assume!(f.deg_y() + g.deg_y() > 0 && f.deg_y() > 0 && g.deg_y() > 0);
        let (fl, gl) = (f.row(f.deg_y()), g.row(g.deg_y()));
        prop_assume!(!fl.eval(&x0).is_zero() && !gl.eval(&x0).is_zero());
        let r = resultant_y(&f, &g).unwrap();
        prop_assert_eq!(r.eval(&x0), sylvester(&f.eval_x(&x0), &g.eval_x(&x0)));
    }
}

#[test]
fn curve_and_derivative_resultant() {
    let f = BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, -1), (1, 0, 1)]);
    assert_eq!(resultant_y(&f, &f.dy()).unwrap(), UniPoly::from_ints(&[0, 4, 0, -4]));
}

#[test]
fn sqrt_two_at_one_hundredth() {
    let root = sturm_isolate(&UniPoly::from_ints(&[-2, 0, 1])).unwrap().pop().unwrap();
    let r = root.refine(&rat(1, 100)).unwrap();
    assert!(r.lo() >= &rat(141, 100) && r.hi() <= &rat(142, 100));
}
