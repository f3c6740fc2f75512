//! Structured and random point sets.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, Rational};
use crate::geometry::{orient, Point, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("m must be even and at least 2, got {0}")]
    InvalidM(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("the curve y^2 = x^3 + ax + b is singular")]
    SingularCurve,
    #[error("the base point is not on the curve")]
    NotOnCurve,
    #[error("{0}P is the point at infinity")]
    TorsionCollision(u64),
    #[error("{requested} multiples exceed the height cap {cap}")]
    HeightCapExceeded { requested: u64, cap: u64 },
    #[error("no admissible point found after {0} attempts")]
    RetriesExhausted(u64),
}

pub const DEFAULT_HEIGHT_CAP: u64 = 50;

fn build(points: Vec<Point>, label: String) -> PointSet {
    PointSet::new(points, Some(label)).expect("generated points are distinct")
}

/// Point of the unit circle with parameter `t`.
pub fn circle_point(t: i64) -> Point {
    let t2 = rational::int(t * t);
    let den = Rational::one() + &t2;
    Point::new((Rational::one() - &t2) / &den, rational::int(2 * t) / den)
}

/// `m / 2` antipodal pairs on the unit circle followed by the centre.
/// Pair `t` occupies indices `2(t - 1)` and `2t - 1`; the centre is last.
pub fn gen_one_blocker(m: u64) -> Result<PointSet, GeneratorError> {
    if m < 2 || m % 2 == 1 {
        return Err(GeneratorError::InvalidM(m));
    }
    let mut pts = Vec::with_capacity(m as usize + 1);
    for t in 1..=(m / 2) as i64 {
        let p = circle_point(t);
        let q = Point::new(-&p.x, -&p.y);
        pts.push(p);
        pts.push(q);
    }
    pts.push(Point::int(0, 0));
    Ok(build(pts, format!("one-blocker m={m}")))
}

/// `(t, t^3)` for integers `-m <= t <= m`.
pub fn gen_cubic_power(m: u64) -> PointSet {
    let m = m as i64;
    let pts = (-m..=m).map(|t| Point::int(t, t * t * t)).collect();
    build(pts, format!("cubic-power m={m}"))
}

pub fn gen_grid(w: u64, h: u64) -> Result<PointSet, GeneratorError> {
    if w == 0 || h == 0 {
        return Err(GeneratorError::InvalidParameter("grid sides must be positive".into()));
    }
    let pts = (0..w as i64).flat_map(|x| (0..h as i64).map(move |y| Point::int(x, y))).collect();
    Ok(build(pts, format!("grid {w}x{h}")))
}

/// Rejection sampling of rational points `a / d` with `|a| <= range` and
/// `1 <= d <= 3`, keeping only points that create no collinear triple.
pub fn gen_random_general(n: u64, range: u64, seed: u64) -> Result<PointSet, GeneratorError> {
    if n == 0 || range == 0 {
        return Err(GeneratorError::InvalidParameter("n and range must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = range as i64;
    let budget = 1000 * n;
    let mut pts: Vec<Point> = Vec::with_capacity(n as usize);
    let mut attempts = 0;
    while (pts.len() as u64) < n {
        attempts += 1;
        if attempts > budget {
            return Err(GeneratorError::RetriesExhausted(budget));
        }
        let mut coord = || rational::rat(rng.gen_range(-r..=r), rng.gen_range(1..=3));
        let p = Point::new(coord(), coord());
        if pts.contains(&p) {
            continue;
        }
        let collinear = (0..pts.len()).any(|i| (i + 1..pts.len()).any(|j| orient(&pts[i], &pts[j], &p) == 0));
        if !collinear {
            pts.push(p);
        }
    }
    Ok(build(pts, format!("random-general n={n} range={range} seed={seed}")))
}

/// A point of `y^2 = x^3 + ax + b` or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine(Point),
}

#[derive(Clone, Debug)]
pub struct EllipticCurve {
    pub a: Rational,
    pub b: Rational,
}

impl EllipticCurve {
    pub fn new(a: Rational, b: Rational) -> Result<Self, GeneratorError> {
        let disc = rational::int(4) * &a * &a * &a + rational::int(27) * &b * &b;
        if disc.is_zero() {
            return Err(GeneratorError::SingularCurve);
        }
        Ok(EllipticCurve { a, b })
    }

    pub fn contains(&self, p: &Point) -> bool {
        &p.y * &p.y == &p.x * &p.x * &p.x + &self.a * &p.x + &self.b
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(q) => CurvePoint::Affine(Point::new(q.x.clone(), -&q.y)),
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (p, q) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine(p), CurvePoint::Affine(q)) => (p, q),
        };
        let slope = if p.x != q.x {
            (&q.y - &p.y) / (&q.x - &p.x)
        } else if p.y == q.y && !p.y.is_zero() {
            (rational::int(3) * &p.x * &p.x + &self.a) / (rational::int(2) * &p.y)
        } else {
            return CurvePoint::Infinity;
        };
        let x3 = &slope * &slope - &p.x - &q.x;
        let y3 = &slope * (&p.x - &x3) - &p.y;
        CurvePoint::Affine(Point::new(x3, y3))
    }

    pub fn multiple(&self, p: &CurvePoint, k: u64) -> CurvePoint {
        let mut acc = CurvePoint::Infinity;
        let mut base = p.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }
}

/// `P, 2P, ..., nP` on `y^2 = x^3 + ax + b`.
pub fn gen_elliptic_coset(a: Rational, b: Rational, p: Point, n: u64, cap: u64) -> Result<PointSet, GeneratorError> {
    if n > cap {
        return Err(GeneratorError::HeightCapExceeded { requested: n, cap });
    }
    if n == 0 {
        return Err(GeneratorError::InvalidParameter("n must be positive".into()));
    }
    let curve = EllipticCurve::new(a.clone(), b.clone())?;
    if !curve.contains(&p) {
        return Err(GeneratorError::NotOnCurve);
    }
    let base = CurvePoint::Affine(p.clone());
    let mut acc = base.clone();
    let mut pts = vec![p];
    for k in 2..=n {
        acc = curve.add(&acc, &base);
        match &acc {
            CurvePoint::Infinity => return Err(GeneratorError::TorsionCollision(k)),
            CurvePoint::Affine(q) => {
                if pts.contains(q) {
                    return Err(GeneratorError::TorsionCollision(k));
                }
                pts.push(q.clone());
            }
        }
    }
    Ok(build(pts, format!("elliptic a={a} b={b} n={n}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    OneBlocker {
        m: u64,
    },
    CubicPower {
        m: u64,
    },
    EllipticCoset {
        #[serde(with = "rational::serde_str")]
        a: Rational,
        #[serde(with = "rational::serde_str")]
        b: Rational,
        p: Point,
        n: u64,
    },
    RandomGeneral {
        n: u64,
        range: u64,
        seed: u64,
    },
    Grid {
        w: u64,
        h: u64,
    },
}

pub fn generate(spec: &GeneratorSpec) -> Result<PointSet, GeneratorError> {
    match spec {
        GeneratorSpec::OneBlocker { m } => gen_one_blocker(*m),
        GeneratorSpec::CubicPower { m } => {
            if *m == 0 {
                return Err(GeneratorError::InvalidParameter("m must be positive".into()));
            }
            Ok(gen_cubic_power(*m))
        }
        GeneratorSpec::EllipticCoset { a, b, p, n } => gen_elliptic_coset(a.clone(), b.clone(), p.clone(), *n, DEFAULT_HEIGHT_CAP),
        GeneratorSpec::RandomGeneral { n, range, seed } => gen_random_general(*n, *range, *seed),
        GeneratorSpec::Grid { w, h } => gen_grid(*w, *h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn one_blocker_small() {
        let a = gen_one_blocker(4).unwrap();
        let expected = vec![
            Point::int(0, 1),
            Point::int(0, -1),
            Point::new(rat(-3, 5), rat(4, 5)),
            Point::new(rat(3, 5), rat(-4, 5)),
            Point::int(0, 0),
        ];
        assert_eq!(a.points(), expected.as_slice());
        assert_eq!(gen_one_blocker(3), Err(GeneratorError::InvalidM(3)));
        assert_eq!(gen_one_blocker(0), Err(GeneratorError::InvalidM(0)));
    }

    #[test]
    fn elliptic_doubling() {
        let c = gen_elliptic_coset(int(0), int(-2), Point::int(3, 5), 2, 50).unwrap();
        assert_eq!(c.get(1), &Point::new(rat(129, 100), rat(-383, 1000)));
        assert_eq!(
            gen_elliptic_coset(int(-1), int(0), Point::int(0, 0), 2, 50),
            Err(GeneratorError::TorsionCollision(2))
        );
        assert_eq!(gen_elliptic_coset(int(0), int(-2), Point::int(3, 5), 1, 50).unwrap().len(), 1);
        assert_eq!(
            gen_elliptic_coset(int(0), int(-2), Point::int(3, 5), 51, 50),
            Err(GeneratorError::HeightCapExceeded { requested: 51, cap: 50 })
        );
        assert_eq!(gen_elliptic_coset(int(0), int(0), Point::int(0, 0), 2, 50), Err(GeneratorError::SingularCurve));
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(gen_random_general(10, 100, 7).unwrap(), gen_random_general(10, 100, 7).unwrap());
        assert_ne!(gen_random_general(10, 100, 7).unwrap(), gen_random_general(10, 100, 8).unwrap());
    }

    #[test]
    fn spec_json() {
        let s: GeneratorSpec = serde_json::from_str(r#"{"kind":"elliptic_coset","a":"0","b":"-2","p":{"x":"3","y":"5"},"n":3}"#).unwrap();
        assert_eq!(generate(&s).unwrap().len(), 3);
        let g: GeneratorSpec = serde_json::from_str(r#"{"kind":"grid","w":3,"h":3}"#).unwrap();
        assert_eq!(generate(&g).unwrap().len(), 9);
    }
}
