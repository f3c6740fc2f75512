//! Sturm sequences and real-root isolation over the rationals.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::UniPoly;
use super::rational::{self, Rational};
use super::ArithError;

/// Sturm chain `p, p', -rem(p, p'), ...`.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(p: &UniPoly) -> Self {
        let mut chain = vec![p.clone()];
        if p.deg() == 0 {
            return SturmChain { chain };
        }
        chain.push(p.derivative());
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-r);
        }
        SturmChain { chain }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_pos_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_pos_inf()))
    }

    pub fn variations_neg_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_neg_inf()))
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    pub fn count_all(&self) -> usize {
        self.variations_neg_inf().saturating_sub(self.variations_pos_inf())
    }
}

/// A real root of `poly`, the unique root of `poly` in the open interval `(lo, hi)`.
///
/// `poly` is square-free and does not vanish at either endpoint, so the root
/// is also the unique root in `(lo, hi]`. `multiplicity` is the multiplicity
/// of the root in the polynomial the root was isolated from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsolatedRoot {
    poly: UniPoly,
    lo: Rational,
    hi: Rational,
    multiplicity: usize,
}

impl IsolatedRoot {
    /// Wraps an interval the caller has already certified.
    ///
    /// Checks the endpoint signs and the Sturm count.
    pub fn new(poly: UniPoly, lo: Rational, hi: Rational, multiplicity: usize) -> Option<Self> {
        if lo >= hi || poly.deg() == 0 {
            return None;
        }
        let poly = poly.square_free();
        if poly.sign_at(&lo) == 0 || poly.sign_at(&hi) == 0 {
            return None;
        }
        if SturmChain::new(&poly).count(&lo, &hi) != 1 {
            return None;
        }
        Some(IsolatedRoot { poly, lo, hi, multiplicity })
    }

    /// The root of `x - q`.
    pub fn from_rational(q: &Rational) -> Self {
        IsolatedRoot {
            poly: UniPoly::linear_root(q),
            lo: q - Rational::one(),
            hi: q + Rational::one(),
            multiplicity: 1,
        }
    }

    pub(crate) fn from_parts_unchecked(poly: UniPoly, lo: Rational, hi: Rational, multiplicity: usize) -> Self {
        debug_assert!(lo < hi);
        IsolatedRoot { poly, lo, hi, multiplicity }
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn approx(&self) -> f64 {
        rational::to_f64(&self.midpoint())
    }

    fn sign_lo(&self) -> i8 {
        self.poly.sign_at(&self.lo)
    }

    /// One bisection step.
    pub fn bisect(&self) -> IsolatedRoot {
        let mid = self.midpoint();
        let s = self.poly.sign_at(&mid);
        let mut out = self.clone();
        if s == 0 {
            let quarter = self.width() / rational::int(4);
            out.lo = &mid - &quarter;
            out.hi = &mid + &quarter;
        } else if s == self.sign_lo() {
            out.lo = mid;
        } else {
            out.hi = mid;
        }
        out
    }

    /// Shrinks the interval to width at most `width`. The designated root never changes.
    pub fn refine(&self, width: &Rational) -> Result<IsolatedRoot, ArithError> {
        if *width <= Rational::zero() {
            return Err(ArithError::NonPositiveWidth);
        }
        let mut r = self.clone();
        while &r.width() > width {
            r = r.bisect();
        }
        // snap to the grid of multiples of `width` when an interior grid point exists
        let mut m = (&r.lo / width).ceil() * width;
        if m == r.lo {
            m += width;
        }
        if m < r.hi {
            let s = r.poly.sign_at(&m);
            if s == r.sign_lo() {
                r.lo = m;
            } else if s != 0 {
                r.hi = m;
            }
        }
        Ok(r)
    }

    /// Exact comparison of the root with `q`.
    pub fn compare_rational(&self, q: &Rational) -> Ordering {
        if q <= &self.lo {
            return Ordering::Greater;
        }
        if q >= &self.hi {
            return Ordering::Less;
        }
        let s = self.poly.sign_at(q);
        if s == 0 {
            Ordering::Equal
        } else if s == self.sign_lo() {
            // the sign change lies to the right of q
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// The root's value when it is rational.
    ///
    /// A rational root `p/q` of a primitive integer polynomial has `q` dividing
    /// the leading coefficient `D`, and two distinct such fractions are at least
    /// `1/D^2` apart. Once the interval is narrower than that, the simplest
    /// fraction inside it is the only candidate.
    pub fn rational_value(&self) -> Option<Rational> {
        if self.poly.deg() == 1 {
            return Some(-self.poly.coeff(0) / self.poly.coeff(1));
        }
        let ints = self.poly.primitive_integer();
        let d = Rational::from_integer(ints.last().unwrap().clone());
        let target = Rational::one() / (&d * &d * rational::int(2));
        let mut r = self.clone();
        while r.width() > target {
            r = r.bisect();
            let mid = r.midpoint();
            if r.poly.sign_at(&mid) == 0 {
                return Some(mid);
            }
        }
        let cand = rational::simplest_between(&r.lo, &r.hi);
        if r.poly.sign_at(&cand) == 0 { Some(cand) } else { None }
    }

    /// Compares two algebraic reals given as isolated roots.
    pub fn compare(&self, other: &IsolatedRoot) -> Ordering {
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut checked_equal = false;
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if !checked_equal {
                checked_equal = true;
                let g = UniPoly::gcd(&a.poly, &b.poly);
                if g.deg() > 0 {
                    let lo = rational::max(&a.lo, &b.lo);
                    let hi = rational::min(&a.hi, &b.hi);
                    // endpoints are non-roots of one of the two polynomials, hence of g
                    if SturmChain::new(&g).count(&lo, &hi) > 0 {
                        return Ordering::Equal;
                    }
                }
            }
            if a.width() >= b.width() {
                a = a.bisect();
            } else {
                b = b.bisect();
            }
        }
    }
}

impl Serialize for IsolatedRoot {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("IsolatedRoot", 5)?;
        let coeffs: Vec<String> = self.poly.coeffs().iter().map(|c| c.to_string()).collect();
        st.serialize_field("poly", &coeffs)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("approx", &self.approx())?;
        st.end()
    }
}

/// A point strictly inside `(lo, hi)` where `p` does not vanish.
pub(crate) fn split_point(p: &UniPoly, lo: &Rational, hi: &Rational) -> Rational {
    let w = hi - lo;
    for den in 2i64.. {
        for num in 1..den {
            if num64_gcd(num, den) != 1 {
                continue;
            }
            let x = lo + &w * rational::rat(num, den);
            if p.sign_at(&x) != 0 {
                return x;
            }
        }
    }
    unreachable!()
}

fn num64_gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Isolates the real roots of a square-free polynomial, sorted ascending.
fn isolate_square_free(p: &UniPoly, multiplicity: usize) -> Vec<IsolatedRoot> {
    let chain = SturmChain::new(p);
    let b = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match chain.count(&lo, &hi) {
            0 => {}
            1 => out.push(IsolatedRoot::from_parts_unchecked(p.clone(), lo, hi, multiplicity)),
            _ => {
                let mid = split_point(p, &lo, &hi);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Isolates every distinct real root of `p` with its multiplicity.
///
/// Intervals are pairwise disjoint and sorted; each one isolates its root
/// with respect to the square-free factor it came from.
pub fn sturm_isolate(p: &UniPoly) -> Result<Vec<IsolatedRoot>, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let mut roots: Vec<IsolatedRoot> = p
        .square_free_decomposition()
        .into_iter()
        .flat_map(|(f, m)| isolate_square_free(&f, m))
        .collect();
    // roots from different factors are distinct; shrink until intervals separate
    loop {
        roots.sort_by(|a, b| a.lo.cmp(&b.lo));
        let clash = (1..roots.len()).find(|&i| roots[i].lo < roots[i - 1].hi);
        match clash {
            None => break,
            Some(i) => {
                roots[i] = roots[i].bisect();
                roots[i - 1] = roots[i - 1].bisect();
            }
        }
    }
    Ok(roots)
}

/// Distinct real roots of `p` that are rational.
pub fn rational_roots(p: &UniPoly) -> Vec<Rational> {
    if p.is_zero() || p.deg() == 0 {
        return Vec::new();
    }
    sturm_isolate(p)
        .unwrap_or_default()
        .iter()
        .filter_map(|r| r.rational_value())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn isolates_x3_minus_x() {
        let roots = sturm_isolate(&p(&[0, -1, 0, 1])).unwrap();
        assert_eq!(roots.len(), 3);
        let values: Vec<_> = roots.iter().map(|r| r.rational_value().unwrap()).collect();
        assert_eq!(values, vec![int(-1), int(0), int(1)]);
        assert!(roots.iter().all(|r| r.multiplicity() == 1));
    }

    #[test]
    fn no_real_roots() {
        assert!(sturm_isolate(&p(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(sturm_isolate(&UniPoly::zero()), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn multiplicities() {
        let f = &p(&[-1, 1]).pow(2) * &p(&[2, 1]).pow(3);
        let roots = sturm_isolate(&f).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].multiplicity(), 3);
        assert_eq!(roots[1].multiplicity(), 2);
        assert_eq!(roots[0].compare_rational(&int(-2)), Ordering::Equal);
    }

    #[test]
    fn refine_sqrt2() {
        let r = IsolatedRoot::new(p(&[-2, 0, 1]), int(1), int(2), 1).unwrap();
        let fine = r.refine(&rat(1, 100)).unwrap();
        assert!(fine.lo() >= &rat(141, 100) && fine.hi() <= &rat(142, 100));
        assert!(fine.width() <= rat(1, 100));
        let same = r.refine(&int(5)).unwrap();
        assert_eq!(same, r);
        assert_eq!(r.refine(&int(0)), Err(ArithError::NonPositiveWidth));
    }

    #[test]
    fn refine_rational_root_at_zero() {
        let roots = sturm_isolate(&p(&[0, -1, 0, 1])).unwrap();
        let zero = roots[1].refine(&rat(1, 8)).unwrap();
        assert!(zero.width() <= rat(1, 8));
        assert_eq!(zero.compare_rational(&int(0)), Ordering::Equal);
    }

    #[test]
    fn compare_with_rationals() {
        let sqrt2 = IsolatedRoot::new(p(&[-2, 0, 1]), int(1), int(2), 1).unwrap();
        assert_eq!(sqrt2.compare_rational(&rat(3, 2)), Ordering::Less);
        let five = IsolatedRoot::from_rational(&int(5));
        assert_eq!(five.compare_rational(&int(5)), Ordering::Equal);
        let one = IsolatedRoot::new(p(&[0, -1, 0, 1]), rat(1, 2), int(2), 1).unwrap();
        assert_eq!(one.compare_rational(&int(0)), Ordering::Greater);
    }

    #[test]
    fn compare_roots() {
        let sqrt2 = IsolatedRoot::new(p(&[-2, 0, 1]), int(1), int(2), 1).unwrap();
        // sqrt 2 as a root of x^4 - 4
        let other = IsolatedRoot::new(p(&[-4, 0, 0, 0, 1]), int(0), int(3), 1).unwrap();
        assert_eq!(sqrt2.compare(&other), Ordering::Equal);
        let cbrt3 = IsolatedRoot::new(p(&[-3, 0, 0, 1]), int(1), int(2), 1).unwrap();
        assert_eq!(sqrt2.compare(&cbrt3), Ordering::Less);
        assert_eq!(cbrt3.compare(&sqrt2), Ordering::Greater);
    }

    #[test]
    fn rational_detection() {
        let f = &p(&[-3, 2]) * &p(&[-2, 0, 1]);
        let roots = sturm_isolate(&f).unwrap();
        let rats: Vec<_> = roots.iter().filter_map(|r| r.rational_value()).collect();
        assert_eq!(rats, vec![rat(3, 2)]);
        assert_eq!(rational_roots(&p(&[6, -5, 1])), vec![int(2), int(3)]);
    }
}
