//! Visibility patches of an irreducible cubic: graph branches over the
//! open x-intervals between exceptional x-coordinates, glued across cuts
//! where the curve passes through an ordinary point.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::algebraic::RealAlgebraic;
use crate::arith::bipoly::BiPoly;
use crate::arith::field::NumberField;
use crate::arith::rational::{self, Rational};
use crate::arith::roots::{sturm_isolate, SturmChain};
use crate::cubic::{exceptional_set, to_chart, Chart, CubicError, ExceptionalSet, Fibre, HomogeneousCubic};
use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatchError {
    #[error(transparent)]
    Cubic(#[from] CubicError),
    #[error("vertical asymptote at x = {0}; use the sheared chart")]
    VerticalAsymptote(String),
    #[error("inconsistent exceptional set: {0}")]
    InconsistentExceptionalSet(String),
    #[error("{0} patches exceed the bound of 15")]
    TooManyPatches(usize),
    #[error("patch {0} does not exist")]
    UnknownPatch(usize),
    #[error("points are not both on patch {patch}: {p:?}, {q:?}")]
    PointsNotOnPatch { patch: usize, p: Assignment, q: Assignment },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    NegInf,
    PosInf,
    At(RealAlgebraic),
}

impl Serialize for Endpoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Endpoint::NegInf => s.serialize_str("-inf"),
            Endpoint::PosInf => s.serialize_str("+inf"),
            Endpoint::At(a) => a.serialize(s),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Patch {
    pub id: usize,
    pub lo: Endpoint,
    pub hi: Endpoint,
    /// `(interval, rank)` cells in ascending interval order.
    pub cells: Vec<(usize, usize)>,
    /// Sign of `y''` along the arc.
    pub convexity: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "id")]
pub enum Assignment {
    Patch(usize),
    Exceptional(usize),
    NotOnCurve,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "id")]
pub enum FibreLabel {
    Patch(usize),
    Exceptional(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
    #[serde(with = "rational::serde_str")]
    pub probe: Rational,
    pub branches: usize,
}

#[derive(Clone, Debug)]
pub struct PatchDecomposition {
    chart_form: HomogeneousCubic,
    f: BiPoly,
    pub exceptional: ExceptionalSet,
    pub cuts: Vec<RealAlgebraic>,
    pub intervals: Vec<Interval>,
    pub patches: Vec<Patch>,
    /// `cell_patch[i][r]` is the patch of branch `r` over interval `i`.
    cell_patch: Vec<Vec<usize>>,
    cut_fibres: Vec<Fibre>,
    pub cut_labels: Vec<Vec<FibreLabel>>,
    pub cells_before_merge: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn real_root_count(f: &BiPoly, x: &Rational) -> usize {
    let p = f.eval_x(x);
    if p.is_zero() || p.deg() == 0 {
        return 0;
    }
    SturmChain::new(&p).count_all()
}

/// Sign of `y''` along the branch of rank `rank` over the rational `x`,
/// from implicit differentiation: `y'' = -(f_xx f_y^2 - 2 f_xy f_x f_y + f_yy f_x^2) / f_y^3`.
pub fn convexity_at(f: &BiPoly, x: &Rational, rank: usize) -> Option<i8> {
    let p = f.eval_x(x);
    let roots = sturm_isolate(&p).ok()?;
    let y0 = RealAlgebraic::from_root(roots.get(rank)?.clone());
    let mut k = NumberField::new(&y0);
    let (fx, fy) = (f.dx(), f.dy());
    let (fxx, fxy, fyy) = (fx.dx(), fx.dy(), fy.dy());
    let at = |g: &BiPoly| g.eval_x(x);
    let (gx, gy) = (at(&fx), at(&fy));
    let n = &(&(&at(&fxx) * &(&gy * &gy)) - &(&(&at(&fxy) * &gx) * &gy).scale(&rational::int(2))) + &(&at(&fyy) * &(&gx * &gx));
    let sn = k.sign(&n);
    let sy = k.sign(&gy);
    if sy == 0 {
        return None;
    }
    Some(-sn * sy)
}

impl PatchDecomposition {
    pub fn chart(&self) -> Chart {
        self.exceptional.chart
    }

    pub fn lambda(&self) -> &Rational {
        &self.exceptional.lambda
    }

    pub fn chart_form(&self) -> &HomogeneousCubic {
        &self.chart_form
    }

    /// The affine equation in chart coordinates.
    pub fn chart_equation(&self) -> &BiPoly {
        &self.f
    }

    pub fn patch_count(&self) -> usize {
        self.patches.len()
    }

    pub fn patch(&self, id: usize) -> Result<&Patch, PatchError> {
        self.patches.get(id).ok_or(PatchError::UnknownPatch(id))
    }

    /// Exact location of a user-coordinate point.
    pub fn assign_point(&self, p: &Point) -> Assignment {
        let c = to_chart(p, self.lambda());
        if !self.f.eval(&c.x, &c.y).is_zero() {
            return Assignment::NotOnCurve;
        }
        if let Some(id) = self.exceptional.find_affine(&c.x, &c.y) {
            return Assignment::Exceptional(id);
        }
        let mut interval = self.cuts.len();
        for (i, cut) in self.cuts.iter().enumerate() {
            match cut.cmp_rational(&c.x) {
                Ordering::Less => {}
                Ordering::Greater => {
                    interval = i;
                    break;
                }
                Ordering::Equal => {
                    let mut fibre = self.cut_fibres[i].clone();
                    let j = fibre.locate(&c.y).expect("curve point lies on its fibre");
                    return match self.cut_labels[i][j] {
                        FibreLabel::Patch(id) => Assignment::Patch(id),
                        FibreLabel::Exceptional(id) => Assignment::Exceptional(id),
                    };
                }
            }
        }
        let poly = self.f.eval_x(&c.x);
        let b = poly.root_bound();
        let rank = SturmChain::new(&poly).count(&-b, &c.y) - 1;
        Assignment::Patch(self.cell_patch[interval][rank])
    }

    /// Checks that the open chord between two points of one patch misses the curve.
    pub fn certify_patch_chord(&self, patch: usize, p: &Point, q: &Point) -> Result<ChordCertificate, PatchError> {
        self.patch(patch)?;
        let (ap, aq) = (self.assign_point(p), self.assign_point(q));
        if ap != Assignment::Patch(patch) || aq != Assignment::Patch(patch) || p == q {
            return Err(PatchError::PointsNotOnPatch { patch, p: ap, q: aq });
        }
        Ok(chord_certificate(&self.f, &to_chart(p, self.lambda()), &to_chart(q, self.lambda()), patch))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChordCertificate {
    pub patch: usize,
    /// Curve parameters `t` in `(0, 1)` on the segment `p + t (q - p)`.
    pub interior_roots: Vec<RealAlgebraic>,
    pub empty: bool,
}

/// Real roots in `(0, 1)` of `f(p + t (q - p))`, isolated by Sturm sequences.
pub fn chord_certificate(f: &BiPoly, p: &Point, q: &Point, patch: usize) -> ChordCertificate {
    let d = (&q.x - &p.x, &q.y - &p.y);
    let phi = f.along_line((&p.x, &p.y), (&d.0, &d.1));
    let interior_roots: Vec<RealAlgebraic> = if phi.is_zero() {
        vec![RealAlgebraic::Rational(rational::rat(1, 2))]
    } else {
        sturm_isolate(&phi)
            .unwrap_or_default()
            .into_iter()
            .map(RealAlgebraic::from_root)
            .filter(|t| t.cmp_rational(&Rational::zero()) == Ordering::Greater && t.cmp_rational(&Rational::one()) == Ordering::Less)
            .collect()
    };
    ChordCertificate { patch, empty: interior_roots.is_empty(), interior_roots }
}

/// Splits the affine curve into patches, cutting at every exceptional x
/// and gluing cells across a cut through an ordinary curve point.
pub fn decompose(f: &HomogeneousCubic, e: &ExceptionalSet) -> Result<PatchDecomposition, PatchError> {
    let chart_form = if e.lambda.is_zero() { f.clone() } else { f.sheared(&e.lambda) };
    let fa = chart_form.affine();
    let lead = fa.row(fa.deg_y());
    if lead.deg() > 0 {
        if let Some(r) = sturm_isolate(&lead).map_err(CubicError::from)?.first() {
            return Err(PatchError::VerticalAsymptote(format!("{:.6}", r.approx())));
        }
    }
    let cuts = e.cut_xs();
    let c = cuts.len();
    let mut intervals = Vec::with_capacity(c + 1);
    for i in 0..=c {
        let lo = if i == 0 { Endpoint::NegInf } else { Endpoint::At(cuts[i - 1].clone()) };
        let hi = if i == c { Endpoint::PosInf } else { Endpoint::At(cuts[i].clone()) };
        let probe = match (i, c) {
            (_, 0) => Rational::zero(),
            (0, _) => cuts[0].rational_below(),
            (i, c) if i == c => cuts[c - 1].rational_above(),
            (i, _) => cuts[i - 1].rational_between(&cuts[i]),
        };
        let branches = real_root_count(&fa, &probe);
        intervals.push(Interval { lo, hi, probe, branches });
    }
    let offsets: Vec<usize> = intervals
        .iter()
        .scan(0, |acc, iv| {
            let o = *acc;
            *acc += iv.branches;
            Some(o)
        })
        .collect();
    let cells = intervals.iter().map(|iv| iv.branches).sum::<usize>();
    let mut uf = UnionFind((0..cells).collect());
    let mut cut_fibres = Vec::with_capacity(c);
    let mut raw_labels: Vec<Vec<Result<usize, (usize, usize)>>> = Vec::with_capacity(c);
    let affine = e.affine();
    for (ci, cut) in cuts.iter().enumerate() {
        let mut fibre = Fibre::new(&fa, cut);
        if fibre.degree() != Some(fa.deg_y()) {
            return Err(PatchError::VerticalAsymptote(cut.to_string()));
        }
        let mult = fibre.multiplicities();
        let r = fibre.len();
        let multiple = mult.iter().position(|&m| m > 1);
        let spread = |count: usize| -> Result<Vec<usize>, PatchError> {
            match multiple {
                None if count == r => Ok(vec![1; r]),
                Some(m) if count + 1 >= r => {
                    let mut nu = vec![1; r];
                    nu[m] = count + 1 - r;
                    Ok(nu)
                }
                _ => Err(PatchError::InconsistentExceptionalSet(format!(
                    "{count} branches cannot end on {r} fibre roots at x = {cut}"
                ))),
            }
        };
        let nu_left = spread(intervals[ci].branches)?;
        let nu_right = spread(intervals[ci + 1].branches)?;
        let mut labels = Vec::with_capacity(r);
        let (mut left_rank, mut right_rank) = (0, 0);
        for j in 0..r {
            let exceptional = affine.iter().find(|(_, p)| &p.x == cut && fibre.matches(j, &p.y)).map(|(id, _)| *id);
            match exceptional {
                Some(id) => labels.push(Ok(id)),
                None => {
                    if mult[j] > 1 {
                        return Err(PatchError::InconsistentExceptionalSet(format!(
                            "multiple fibre root at x = {cut} is not exceptional"
                        )));
                    }
                    let a = offsets[ci] + left_rank;
                    let b = offsets[ci + 1] + right_rank;
                    uf.union(a, b);
                    labels.push(Err((a, b)));
                }
            }
            left_rank += nu_left[j];
            right_rank += nu_right[j];
        }
        raw_labels.push(labels);
        cut_fibres.push(fibre);
    }
    // number patches by first cell
    let mut patch_of_root = vec![usize::MAX; cells];
    let mut patches: Vec<Patch> = Vec::new();
    let mut cell_patch: Vec<Vec<usize>> = Vec::with_capacity(c + 1);
    for (i, iv) in intervals.iter().enumerate() {
        let mut row = Vec::with_capacity(iv.branches);
        for rank in 0..iv.branches {
            let root = uf.find(offsets[i] + rank);
            if patch_of_root[root] == usize::MAX {
                patch_of_root[root] = patches.len();
                patches.push(Patch { id: patches.len(), lo: iv.lo.clone(), hi: iv.hi.clone(), cells: Vec::new(), convexity: 0 });
            }
            let id = patch_of_root[root];
            let patch = &mut patches[id];
            if let Some(&(last, _)) = patch.cells.last() {
                if last + 1 != i {
                    return Err(PatchError::InconsistentExceptionalSet(format!("patch {id} is not contiguous")));
                }
            }
            patch.cells.push((i, rank));
            patch.hi = iv.hi.clone();
            row.push(id);
        }
        cell_patch.push(row);
    }
    for patch in patches.iter_mut() {
        let mut sign = 0;
        for &(i, rank) in &patch.cells {
            let s = convexity_at(&fa, &intervals[i].probe, rank)
                .ok_or_else(|| PatchError::InconsistentExceptionalSet("vertical tangent at a probe".into()))?;
            if s == 0 || (sign != 0 && s != sign) {
                return Err(PatchError::InconsistentExceptionalSet(format!("convexity changes on patch {}", patch.id)));
            }
            sign = s;
        }
        patch.convexity = sign;
    }
    let cut_labels = raw_labels
        .into_iter()
        .map(|ls| {
            ls.into_iter()
                .map(|l| match l {
                    Ok(id) => FibreLabel::Exceptional(id),
                    Err((a, _)) => FibreLabel::Patch(patch_of_root[uf.find(a)]),
                })
                .collect()
        })
        .collect();
    if e.chart == Chart::Sheared && patches.len() > 15 {
        return Err(PatchError::TooManyPatches(patches.len()));
    }
    Ok(PatchDecomposition {
        chart_form,
        f: fa,
        exceptional: e.clone(),
        cuts,
        intervals,
        patches,
        cell_patch,
        cut_fibres,
        cut_labels,
        cells_before_merge: cells,
    })
}

/// Computes the exceptional set and decomposes. A standard chart that
/// cannot be decomposed falls back to the sheared chart.
pub fn decompose_cubic(f: &HomogeneousCubic, chart: Chart) -> Result<PatchDecomposition, PatchError> {
    let e = exceptional_set(f, chart)?;
    match decompose(f, &e) {
        Err(PatchError::VerticalAsymptote(_)) | Err(PatchError::TooManyPatches(_)) if chart == Chart::Standard => {
            decompose(f, &exceptional_set(f, Chart::Sheared)?)
        }
        other => other,
    }
}

impl Serialize for PatchDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let [sing, inf, vt, fl] = self.exceptional.counts();
        let mut st = s.serialize_struct("PatchDecomposition", 9)?;
        st.serialize_field("chart", &self.chart())?;
        st.serialize_field("lambda", &self.lambda().to_string())?;
        st.serialize_field("chart_cubic", &self.chart_form)?;
        st.serialize_field("cuts", &self.cuts)?;
        st.serialize_field("intervals", &self.intervals)?;
        st.serialize_field("patch_count", &self.patches.len())?;
        st.serialize_field("patches", &self.patches)?;
        st.serialize_field("cut_labels", &self.cut_labels)?;
        st.serialize_field(
            "exceptional_counts",
            &serde_json::json!({"sing": sing, "inf": inf, "vt": vt, "fl": fl, "total": self.exceptional.total()}),
        )?;
        st.serialize_field("exceptional", &self.exceptional)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weierstrass() -> HomogeneousCubic {
        HomogeneousCubic::from_int_terms(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([1, 0, 2], 1)]).unwrap()
    }

    fn cubic_power() -> HomogeneousCubic {
        HomogeneousCubic::from_int_terms(&[([0, 1, 2], 1), ([3, 0, 0], -1)]).unwrap()
    }

    #[test]
    fn six_patches_on_the_figure_curve() {
        let d = decompose_cubic(&weierstrass(), Chart::Standard).unwrap();
        assert_eq!(d.chart(), Chart::Standard);
        assert_eq!(d.patch_count(), 6);
        assert_eq!(d.assign_point(&Point::int(1, 1)), Assignment::NotOnCurve);
        assert!(matches!(d.assign_point(&Point::int(0, 0)), Assignment::Exceptional(_)));
    }

    #[test]
    fn two_patches_on_the_cubic_power_curve() {
        let d = decompose_cubic(&cubic_power(), Chart::Standard).unwrap();
        assert_eq!(d.patch_count(), 2);
        let right = d.assign_point(&Point::int(2, 8));
        assert_eq!(right, d.assign_point(&Point::int(1, 1)));
        assert_ne!(right, d.assign_point(&Point::int(-1, -1)));
        assert!(matches!(d.assign_point(&Point::int(0, 0)), Assignment::Exceptional(_)));
        let Assignment::Patch(id) = right else { panic!() };
        let cert = d.certify_patch_chord(id, &Point::int(1, 1), &Point::int(2, 8)).unwrap();
        assert!(cert.empty);
        let across = chord_certificate(d.chart_equation(), &Point::int(-2, -8), &Point::int(3, 27), 0);
        assert_eq!(across.interior_roots.len(), 1);
    }

    #[test]
    fn sheared_cubic_power() {
        let d = decompose_cubic(&cubic_power(), Chart::Sheared).unwrap();
        assert!(d.patch_count() <= 15);
        let a = d.assign_point(&Point::int(1, 1));
        assert_eq!(a, d.assign_point(&Point::int(10, 1000)));
        assert_ne!(a, d.assign_point(&Point::int(-3, -27)));
    }
}
