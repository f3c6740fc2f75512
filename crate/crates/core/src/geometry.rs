//! Rational points, exact orientation tests and line enumeration.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("at least {needed} points are required, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "rational::serde_str")]
    pub x: Rational,
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(rational::int(x), rational::int(y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Pairwise distinct points; the order fixes the indexing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet")]
pub struct PointSet {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    points: Vec<Point>,
}

#[derive(Deserialize)]
struct RawPointSet {
    label: Option<String>,
    points: Vec<Point>,
}

impl TryFrom<RawPointSet> for PointSet {
    type Error = GeometryError;

    fn try_from(raw: RawPointSet) -> Result<Self, Self::Error> {
        PointSet::new(raw.points, raw.label)
    }
}

impl PointSet {
    pub fn new(points: Vec<Point>, label: Option<String>) -> Result<Self, GeometryError> {
        let mut seen: HashMap<&Point, usize> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if let Some(&first) = seen.get(p) {
                return Err(GeometryError::DuplicatePoint { first, second: i });
            }
            seen.insert(p, i);
        }
        Ok(PointSet { label, points })
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }

    /// Appends points, rejecting duplicates.
    pub fn extended(&self, extra: &[Point]) -> Result<PointSet, GeometryError> {
        let mut pts = self.points.clone();
        pts.extend_from_slice(extra);
        PointSet::new(pts, self.label.clone())
    }

    pub fn subset(&self, idx: &[usize]) -> PointSet {
        PointSet { label: self.label.clone(), points: idx.iter().map(|&i| self.points[i].clone()).collect() }
    }
}

/// Sign of the cross product `(q - p) x (r - p)`: +1 for a left turn.
pub fn orient(p: &Point, q: &Point, r: &Point) -> i8 {
    let d = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    rational::sign(&d)
}

/// Whether `r` lies on the open segment from `p` to `q`.
pub fn strictly_between(p: &Point, q: &Point, r: &Point) -> bool {
    if p == q || orient(p, q, r) != 0 {
        return false;
    }
    let (a, b, c) = if p.x != q.x { (&p.x, &q.x, &r.x) } else { (&p.y, &q.y, &r.y) };
    (a < c && c < b) || (b < c && c < a)
}

/// Primitive integer triple `(a, b, c)` of the line `ax + by + c = 0`,
/// with the first nonzero entry positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineKey {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl LineKey {
    /// The line through two distinct points.
    pub fn through(p: &Point, q: &Point) -> LineKey {
        assert!(p != q, "a line needs two distinct points");
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = -(&a * &p.x + &b * &p.y);
        Self::from_rationals(&a, &b, &c)
    }

    pub fn from_rationals(a: &Rational, b: &Rational, c: &Rational) -> LineKey {
        let den = rational::common_denominator([a, b, c]);
        let scale = Rational::from_integer(den);
        let mut v: Vec<BigInt> = [a, b, c].iter().map(|q| (*q * &scale).to_integer()).collect();
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        assert!(!v[0].is_zero() || !v[1].is_zero(), "degenerate line");
        let first_negative = v.iter().find(|x| !x.is_zero()).unwrap().is_negative();
        for x in v.iter_mut() {
            *x = &*x / &g;
            if first_negative {
                *x = -&*x;
            }
        }
        let [a, b, c]: [BigInt; 3] = v.try_into().unwrap();
        LineKey { a, b, c }
    }

    pub fn contains(&self, p: &Point) -> bool {
        let v = Rational::from_integer(self.a.clone()) * &p.x
            + Rational::from_integer(self.b.clone()) * &p.y
            + Rational::from_integer(self.c.clone());
        v.is_zero()
    }

    pub fn as_triple(&self) -> [BigInt; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }
}

impl fmt::Debug for LineKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

impl Serialize for LineKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.a.to_string(), self.b.to_string(), self.c.to_string()].serialize(s)
    }
}

#[derive(Clone, Debug)]
pub struct LineStats {
    pub n: usize,
    pub t2: usize,
    /// Line size to number of lines of that size, sizes >= 2.
    pub histogram: BTreeMap<usize, usize>,
    /// Lines with at least three points, members in ascending index order.
    pub rich_lines: BTreeMap<LineKey, Vec<usize>>,
}

impl LineStats {
    pub fn t3(&self) -> usize {
        self.histogram.get(&3).copied().unwrap_or(0)
    }

    pub fn max_collinear(&self) -> usize {
        match self.n {
            0 | 1 => self.n,
            _ => self.histogram.keys().next_back().copied().unwrap_or(2),
        }
    }

    /// Number of 3-rich lines.
    pub fn rich_count(&self) -> usize {
        self.rich_lines.len()
    }

    /// Members of each rich line ordered along the line.
    pub fn ordered_rich_lines<'a>(&'a self, a: &'a PointSet) -> impl Iterator<Item = (&'a LineKey, Vec<usize>)> + 'a {
        self.rich_lines.iter().map(move |(k, m)| {
            let mut m = m.clone();
            m.sort_by(|&i, &j| a.get(i).cmp(a.get(j)));
            (k, m)
        })
    }
}

impl Serialize for LineStats {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LineStats", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("t2", &self.t2)?;
        st.serialize_field("t3", &self.t3())?;
        st.serialize_field("histogram", &self.histogram)?;
        let lines: Vec<_> = self.rich_lines.iter().map(|(k, m)| (k, m)).collect();
        st.serialize_field("rich_lines", &lines)?;
        st.end()
    }
}

/// Groups every pair of points by the line it spans.
pub fn enumerate_lines(a: &PointSet) -> Result<LineStats, GeometryError> {
    let n = a.len();
    if n < 2 {
        return Err(GeometryError::TooFewPoints { needed: 2, got: n });
    }
    let mut lines: HashMap<LineKey, Vec<usize>> = HashMap::new();
    for i in 0..n {
        // lines through i whose smallest member is i
        let mut local: HashMap<LineKey, Vec<usize>> = HashMap::new();
        for j in i + 1..n {
            local.entry(LineKey::through(a.get(i), a.get(j))).or_default().push(j);
        }
        for (key, rest) in local {
            if lines.contains_key(&key) {
                continue;
            }
            let mut members = vec![i];
            members.extend(rest);
            lines.insert(key, members);
        }
    }
    let mut histogram = BTreeMap::new();
    let mut rich_lines = BTreeMap::new();
    for (key, members) in lines {
        *histogram.entry(members.len()).or_insert(0) += 1;
        if members.len() >= 3 {
            rich_lines.insert(key, members);
        }
    }
    let t2 = histogram.get(&2).copied().unwrap_or(0);
    Ok(LineStats { n, t2, histogram, rich_lines })
}

pub fn max_collinear(a: &PointSet) -> usize {
    match a.len() {
        0 | 1 => a.len(),
        _ => enumerate_lines(a).map(|s| s.max_collinear()).unwrap_or(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn orientation_convention() {
        let o = Point::int(0, 0);
        assert_eq!(orient(&o, &Point::int(1, 0), &Point::int(2, 0)), 0);
        assert_eq!(orient(&o, &Point::int(1, 0), &Point::int(0, 1)), 1);
        assert_eq!(orient(&o, &Point::int(1, 1), &Point::int(2, 1)), -1);
    }

    #[test]
    fn open_segment_membership() {
        let p = Point::int(0, 0);
        assert!(strictly_between(&p, &Point::int(2, 0), &Point::int(1, 0)));
        assert!(!strictly_between(&p, &Point::int(2, 0), &Point::int(2, 0)));
        assert!(!strictly_between(&p, &Point::int(2, 2), &Point::int(1, 0)));
        assert!(strictly_between(&p, &Point::int(0, 3), &Point::int(0, 1)));
    }

    #[test]
    fn line_keys_are_canonical() {
        let p = Point::new(rat(1, 2), rat(1, 3));
        let q = Point::new(rat(3, 2), rat(4, 3));
        let r = Point::new(rat(5, 2), rat(7, 3));
        let k = LineKey::through(&p, &q);
        assert_eq!(k, LineKey::through(&r, &p));
        assert_eq!(k, LineKey::through(&q, &r));
        assert!(k.a.is_positive());
        assert!(k.contains(&r));
    }

    #[test]
    fn duplicates_rejected() {
        let e = PointSet::new(vec![Point::int(0, 0), Point::int(1, 1), Point::int(0, 0)], None);
        assert_eq!(e, Err(GeometryError::DuplicatePoint { first: 0, second: 2 }));
    }

    #[test]
    fn json_round_trip() {
        let a = PointSet::new(vec![Point::new(rat(1, 2), rat(-3, 1)), Point::int(4, 5)], Some("t".into())).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"label":"t","points":[{"x":"1/2","y":"-3"},{"x":"4","y":"5"}]}"#);
        let b: PointSet = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let dup = r#"{"points":[{"x":"1","y":"2"},{"x":"1","y":"2"}]}"#;
        assert!(serde_json::from_str::<PointSet>(dup).is_err());
    }

    #[test]
    fn two_points_one_ordinary_line() {
        let a = PointSet::new(vec![Point::int(0, 0), Point::int(1, 1)], None).unwrap();
        let s = enumerate_lines(&a).unwrap();
        assert_eq!(s.t2, 1);
        assert!(s.rich_lines.is_empty());
        assert_eq!(max_collinear(&a), 2);
    }
}
