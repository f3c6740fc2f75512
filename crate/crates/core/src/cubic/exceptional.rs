//! Singular points, points at infinity, vertical tangencies and flexes.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use super::classify::{classify, CubicClassification};
use super::form::hessian_determinant;
use super::{shear_to_generic, Chart, CubicError, HomogeneousCubic};
use crate::arith::algebraic::RealAlgebraic;
use crate::arith::bipoly::BiPoly;
use crate::arith::field::{FieldPoly, NumberField};
use crate::arith::poly::UniPoly;
use crate::arith::rational::{self, Rational};
use crate::arith::resultant::{resultant_x, resultant_y};
use crate::arith::roots::{sturm_isolate, IsolatedRoot};

/// A real point given by algebraic coordinates. At infinity, `(x, y)` are the
/// first two homogeneous coordinates of the direction, scaled to `(1, t)` or `(0, 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraicPoint {
    pub x: RealAlgebraic,
    pub y: RealAlgebraic,
    pub at_infinity: bool,
    pub system: String,
    pub approx: [f64; 2],
}

impl AlgebraicPoint {
    pub fn new(x: RealAlgebraic, y: RealAlgebraic, at_infinity: bool, system: &str) -> Self {
        let approx = [x.approx(), y.approx()];
        AlgebraicPoint { x, y, at_infinity, system: system.to_string(), approx }
    }

    pub fn is_rational(&self) -> bool {
        self.x.as_rational().is_some() && self.y.as_rational().is_some()
    }

    /// Interval evaluation of each polynomial over an isolating box of the
    /// given width contains zero.
    pub fn certify(&self, polys: &[&BiPoly], width: &Rational) -> bool {
        if self.at_infinity {
            return true;
        }
        let bx = self.x.enclosure(width);
        let by = self.y.enclosure(width);
        polys.iter().all(|f| {
            let (lo, hi) = interval_eval(f, &bx, &by);
            lo <= Rational::zero() && Rational::zero() <= hi
        })
    }
}

impl PartialEq for AlgebraicPoint {
    fn eq(&self, other: &Self) -> bool {
        self.at_infinity == other.at_infinity && self.x == other.x && self.y == other.y
    }
}

type Interval = (Rational, Rational);

fn imul(a: &Interval, b: &Interval) -> Interval {
    let p = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    (p.iter().min().unwrap().clone(), p.iter().max().unwrap().clone())
}

fn iadd(a: &Interval, b: &Interval) -> Interval {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn horner(p: &UniPoly, x: &Interval) -> Interval {
    let mut acc = (Rational::zero(), Rational::zero());
    for c in p.coeffs().iter().rev() {
        acc = iadd(&imul(&acc, x), &(c.clone(), c.clone()));
    }
    acc
}

fn interval_eval(f: &BiPoly, x: &Interval, y: &Interval) -> Interval {
    let mut acc = (Rational::zero(), Rational::zero());
    for row in f.rows().iter().rev() {
        acc = iadd(&imul(&acc, y), &horner(row, x));
    }
    acc
}

/// The real roots of `f(alpha, y)` for a fixed real algebraic `alpha`,
/// isolated by exact arithmetic in `Q(alpha)`.
#[derive(Clone, Debug)]
pub struct Fibre {
    x: RealAlgebraic,
    field: NumberField,
    poly: FieldPoly,
    roots: Vec<(Rational, Rational)>,
}

impl Fibre {
    pub fn new(f: &BiPoly, x: &RealAlgebraic) -> Fibre {
        let mut field = NumberField::new(x);
        let poly = field.trim(f.rows());
        let roots = if poly.len() > 1 { field.isolate(&poly) } else { Vec::new() };
        Fibre { x: x.clone(), field, poly, roots }
    }

    pub fn x(&self) -> &RealAlgebraic {
        &self.x
    }

    /// Degree of `f(alpha, y)`; `None` if it vanishes identically.
    pub fn degree(&self) -> Option<usize> {
        self.poly.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn interval(&self, j: usize) -> (&Rational, &Rational) {
        (&self.roots[j].0, &self.roots[j].1)
    }

    fn shared_with_field(&mut self, q: &[UniPoly]) -> Vec<bool> {
        let h = self.field.poly_gcd(&self.poly, q);
        if h.len() <= 1 {
            return vec![false; self.roots.len()];
        }
        let chain = self.field.sturm_chain(&h);
        let roots = self.roots.clone();
        roots.iter().map(|(lo, hi)| self.field.count(&chain, lo, hi) > 0).collect()
    }

    /// Which roots are also roots of `g(alpha, y)`.
    pub fn shared_with(&mut self, g: &BiPoly) -> Vec<bool> {
        self.shared_with_field(g.rows())
    }

    pub fn multiplicities(&mut self) -> Vec<usize> {
        let d1 = self.field.poly_derivative(&self.poly);
        let d2 = self.field.poly_derivative(&d1);
        let s1 = self.shared_with_field(&d1);
        let s2 = self.shared_with_field(&d2);
        s1.iter().zip(&s2).map(|(&a, &b)| 1 + a as usize + (a && b) as usize).collect()
    }

    /// Whether the root `j` equals `y`, which must itself be a root of the fibre.
    pub fn matches(&self, j: usize, y: &RealAlgebraic) -> bool {
        let (lo, hi) = &self.roots[j];
        y.cmp_rational(lo) == Ordering::Greater && y.cmp_rational(hi) == Ordering::Less
    }

    /// Index of the root equal to the rational `y`, if `y` is a root.
    pub fn locate(&mut self, y: &Rational) -> Option<usize> {
        if self.field.sign_at(&self.poly.clone(), y) != 0 {
            return None;
        }
        self.roots.iter().position(|(lo, hi)| lo < y && y < hi)
    }

    fn bisect(&mut self, j: usize) -> Option<Rational> {
        let (lo, hi) = self.roots[j].clone();
        let mid = (&lo + &hi) / rational::int(2);
        let p = self.poly.clone();
        let s = self.field.sign_at(&p, &mid);
        if s == 0 {
            let q = (&hi - &lo) / rational::int(4);
            self.roots[j] = (&mid - &q, &mid + &q);
            return Some(mid);
        }
        if s == self.field.sign_at(&p, &lo) {
            self.roots[j].0 = mid;
        } else {
            self.roots[j].1 = mid;
        }
        None
    }

    /// The root `j` as a real algebraic number, identified among the real
    /// roots of a rational polynomial known to vanish there.
    pub fn y_value(&mut self, j: usize, candidates: &mut [IsolatedRoot]) -> RealAlgebraic {
        loop {
            let (lo, hi) = self.roots[j].clone();
            let hits: Vec<usize> = (0..candidates.len())
                .filter(|&c| candidates[c].lo() < &hi && &lo < candidates[c].hi())
                .collect();
            assert!(!hits.is_empty(), "fibre root lost by the eliminating polynomial");
            if hits.len() == 1 {
                return RealAlgebraic::from_root(candidates[hits[0]].clone());
            }
            if let Some(q) = self.bisect(j) {
                return RealAlgebraic::Rational(q);
            }
            for c in hits {
                candidates[c] = candidates[c].bisect();
            }
        }
    }
}

/// Real affine solutions of `f = g = 0`, each with flags telling whether the
/// extra polynomials vanish there too.
pub(crate) fn solve_on_curve(
    f: &BiPoly,
    g: &BiPoly,
    extra: &[&BiPoly],
    system: &str,
) -> Result<Vec<(AlgebraicPoint, Vec<bool>)>, CubicError> {
    let r = resultant_y(f, g)?;
    if r.is_zero() {
        return Err(CubicError::CertificationFailure(format!("{system}: the curves share a component")));
    }
    if r.deg() == 0 {
        return Ok(Vec::new());
    }
    let s = resultant_x(f, g)?;
    if s.is_zero() {
        return Err(CubicError::CertificationFailure(format!("{system}: the curves share a component")));
    }
    let mut s_roots = if s.deg() == 0 { Vec::new() } else { sturm_isolate(&s)? };
    let mut out = Vec::new();
    for root in sturm_isolate(&r)? {
        let alpha = RealAlgebraic::from_root(root);
        let mut fibre = Fibre::new(f, &alpha);
        match fibre.degree() {
            None => return Err(CubicError::CertificationFailure(format!("{system}: vertical line component"))),
            Some(0) => continue,
            Some(_) => {}
        }
        let shared = fibre.shared_with(g);
        let flags: Vec<Vec<bool>> = extra.iter().map(|e| fibre.shared_with(e)).collect();
        for j in 0..fibre.len() {
            if !shared[j] {
                continue;
            }
            let y = fibre.y_value(j, &mut s_roots);
            let point = AlgebraicPoint::new(alpha.clone(), y, false, system);
            out.push((point, flags.iter().map(|fl| fl[j]).collect()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalSet {
    pub chart: Chart,
    #[serde(with = "rational::serde_str")]
    pub lambda: Rational,
    pub e_sing: Vec<AlgebraicPoint>,
    pub e_inf: Vec<AlgebraicPoint>,
    pub e_vt: Vec<AlgebraicPoint>,
    pub e_fl: Vec<AlgebraicPoint>,
}

impl ExceptionalSet {
    /// Every exceptional point once, in the order singular, infinite,
    /// vertical tangency, flex; positions in this list are the point ids.
    pub fn all(&self) -> Vec<&AlgebraicPoint> {
        let mut out: Vec<&AlgebraicPoint> = self.e_sing.iter().collect();
        for p in &self.e_inf {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out.extend(self.e_vt.iter());
        out.extend(self.e_fl.iter());
        out
    }

    pub fn total(&self) -> usize {
        self.all().len()
    }

    pub fn affine(&self) -> Vec<(usize, &AlgebraicPoint)> {
        self.all().into_iter().enumerate().filter(|(_, p)| !p.at_infinity).collect()
    }

    /// Distinct x-coordinates of the affine exceptional points, ascending.
    pub fn cut_xs(&self) -> Vec<RealAlgebraic> {
        let mut xs: Vec<RealAlgebraic> = self.affine().into_iter().map(|(_, p)| p.x.clone()).collect();
        xs.sort();
        xs.dedup();
        xs
    }

    pub fn find_affine(&self, x: &Rational, y: &Rational) -> Option<usize> {
        self.affine()
            .into_iter()
            .find(|(_, p)| p.x.cmp_rational(x) == Ordering::Equal && p.y.cmp_rational(y) == Ordering::Equal)
            .map(|(id, _)| id)
    }

    pub fn counts(&self) -> [usize; 4] {
        [self.e_sing.len(), self.e_inf.len(), self.e_vt.len(), self.e_fl.len()]
    }
}

fn points_at_infinity(f: &HomogeneousCubic) -> Result<(Vec<AlgebraicPoint>, Vec<AlgebraicPoint>), CubicError> {
    let form = f.form();
    let t_poly = UniPoly::new((0..4).map(|j| form.coeff([3 - j, j, 0])).collect());
    if t_poly.is_zero() {
        return Err(CubicError::NotIrreducible("the line at infinity is a component".into()));
    }
    let partials = [form.partial(0), form.partial(1), form.partial(2)];
    let mut points = Vec::new();
    let mut singular = Vec::new();
    let (zero, one) = (Rational::zero(), Rational::one());
    if t_poly.deg() > 0 {
        for root in sturm_isolate(&t_poly)? {
            let t = RealAlgebraic::from_root(root);
            let mut k = NumberField::new(&t);
            let is_singular = partials.iter().all(|p| {
                // P(1, t, 0) as a polynomial in t
                let u = UniPoly::new((0..3).map(|j| p.coeff([2 - j, j, 0])).collect());
                k.is_zero(&u)
            });
            let pt = AlgebraicPoint::new(RealAlgebraic::Rational(one.clone()), t, true, "F(X, Y, 0) = 0");
            if is_singular {
                singular.push(AlgebraicPoint { system: "F_X = F_Y = F_Z = 0".into(), ..pt.clone() });
            }
            points.push(pt);
        }
    }
    if form.coeff([0, 3, 0]).is_zero() {
        let pt = AlgebraicPoint::new(RealAlgebraic::Rational(zero.clone()), RealAlgebraic::Rational(one.clone()), true, "F(X, Y, 0) = 0");
        if partials.iter().all(|p| p.eval([&zero, &one, &zero]).is_zero()) {
            singular.push(AlgebraicPoint { system: "F_X = F_Y = F_Z = 0".into(), ..pt.clone() });
        }
        points.push(pt);
    }
    Ok((points, singular))
}

fn sort_points(v: &mut [AlgebraicPoint]) {
    v.sort_by(|a, b| a.x.cmp(&b.x).then_with(|| a.y.cmp(&b.y)));
}

/// The exceptional points of an irreducible cubic in the chosen chart.
///
/// Points are reported in chart coordinates. Singular points at infinity
/// appear both in `e_sing` and in `e_inf`; vertical tangencies exclude
/// singular points and flexes are smooth by definition.
pub fn exceptional_set(f: &HomogeneousCubic, chart: Chart) -> Result<ExceptionalSet, CubicError> {
    match classify(f) {
        CubicClassification::Irreducible => {}
        other => return Err(CubicError::NotIrreducible(other.tag().to_string())),
    }
    let (lambda, g) = match chart {
        Chart::Standard => (Rational::zero(), f.clone()),
        Chart::Sheared => shear_to_generic(f)?,
    };
    let fa = g.affine();
    let fx = fa.dx();
    let fy = fa.dy();
    let h = hessian_determinant(g.form()).dehomogenize();

    let (e_inf, sing_inf) = points_at_infinity(&g)?;
    let mut e_sing = Vec::new();
    let mut e_vt = Vec::new();
    for (p, flags) in solve_on_curve(&fa, &fy, &[&fx], "f = f_y = 0")? {
        if flags[0] {
            e_sing.push(AlgebraicPoint { system: "f = f_x = f_y = 0".into(), ..p });
        } else {
            e_vt.push(p);
        }
    }
    let mut e_fl = Vec::new();
    for (p, flags) in solve_on_curve(&fa, &h, &[&fx, &fy], "f = H = 0")? {
        if !(flags[0] && flags[1]) {
            e_fl.push(p);
        }
    }
    e_sing.extend(sing_inf);
    for v in [&mut e_sing, &mut e_vt, &mut e_fl] {
        sort_points(v);
    }
    let set = ExceptionalSet { chart, lambda, e_sing, e_inf, e_vt, e_fl };
    let [s, i, v, l] = set.counts();
    if s > 1 || i > 3 || v > 6 || l > 3 || set.total() > 13 {
        return Err(CubicError::CertificationFailure(format!(
            "exceptional counts sing={s} inf={i} vt={v} fl={l} total={} exceed the cubic bounds",
            set.total()
        )));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn weierstrass() -> HomogeneousCubic {
        HomogeneousCubic::from_int_terms(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([1, 0, 2], 1)]).unwrap()
    }

    #[test]
    fn figure_curve_standard_chart() {
        let e = exceptional_set(&weierstrass(), Chart::Standard).unwrap();
        assert!(e.e_sing.is_empty());
        assert_eq!(e.e_inf.len(), 1);
        let vt: Vec<(Rational, Rational)> = e
            .e_vt
            .iter()
            .map(|p| (p.x.as_rational().unwrap().clone(), p.y.as_rational().unwrap().clone()))
            .collect();
        assert_eq!(vt, vec![(int(-1), int(0)), (int(0), int(0)), (int(1), int(0))]);
        assert_eq!(e.e_fl.len(), 2);
        for p in &e.e_fl {
            assert_eq!(p.x.cmp_rational(&rat(146, 100)), Ordering::Greater);
            assert_eq!(p.x.cmp_rational(&rat(147, 100)), Ordering::Less);
            assert!((p.y.approx().abs() - 1.3019).abs() < 1e-3);
        }
        assert_eq!(e.e_fl[0].x, e.e_fl[1].x);
        assert_eq!(e.total(), 6);
        let f = weierstrass().affine();
        for p in e.affine() {
            assert!(p.1.certify(&[&f], &rat(1, 1 << 20)));
        }
    }

    #[test]
    fn acnodal_and_crunodal() {
        let acnode = HomogeneousCubic::from_int_terms(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([2, 0, 1], -1)]).unwrap();
        let e = exceptional_set(&acnode, Chart::Standard).unwrap();
        assert_eq!(e.e_sing.len(), 1);
        assert_eq!(e.e_sing[0].x, RealAlgebraic::Rational(int(0)));
        assert!(e.e_fl.is_empty());
        let crunode = HomogeneousCubic::from_int_terms(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([2, 0, 1], 1)]).unwrap();
        let e = exceptional_set(&crunode, Chart::Standard).unwrap();
        assert_eq!(e.e_fl.len(), 2);
        for p in &e.e_fl {
            assert_eq!(p.x, RealAlgebraic::Rational(rat(4, 3)));
            let y2 = rat(16, 27);
            assert!((p.y.approx().powi(2) - 16.0 / 27.0).abs() < 1e-9);
            assert!(p.y.as_rational().is_none() && y2 > int(0));
        }
    }

    #[test]
    fn cubic_power_curve() {
        let f = HomogeneousCubic::from_int_terms(&[([0, 1, 2], 1), ([3, 0, 0], -1)]).unwrap();
        let e = exceptional_set(&f, Chart::Standard).unwrap();
        assert_eq!(e.e_fl.len(), 1);
        assert_eq!(e.e_sing.len(), 1);
        assert!(e.e_sing[0].at_infinity);
        assert_eq!(e.total(), 2);
        let s = exceptional_set(&f, Chart::Sheared).unwrap();
        assert_eq!(s.lambda, int(1));
        assert!(s.total() <= 13);
    }
}
