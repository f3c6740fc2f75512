//! Exact arithmetic in `Q(alpha)` for a real algebraic `alpha`, and Sturm
//! sequences for polynomials with coefficients there.
//!
//! Elements are polynomials in `alpha` reduced modulo a square-free defining
//! polynomial `q`. `q` need not be irreducible: whenever a zero divisor shows
//! up, `q` is replaced by the factor that still vanishes at `alpha`, so every
//! nonzero element stays invertible. Signs are decided exactly by a gcd test
//! for zero followed by interval refinement of `alpha`.

use num_traits::{One, Zero};

use super::algebraic::RealAlgebraic;
use super::poly::UniPoly;
use super::rational::{self, Rational};
use super::roots::{IsolatedRoot, SturmChain};

/// Polynomial in `y` with coefficients in `Q(alpha)`, ascending degree.
pub type FieldPoly = Vec<UniPoly>;

#[derive(Clone, Debug)]
pub struct NumberField {
    q: UniPoly,
    lo: Rational,
    hi: Rational,
}

impl NumberField {
    pub fn new(alpha: &RealAlgebraic) -> Self {
        Self::from_root(&alpha.to_isolated())
    }

    pub fn from_root(r: &IsolatedRoot) -> Self {
        NumberField { q: r.poly().clone(), lo: r.lo().clone(), hi: r.hi().clone() }
    }

    pub fn rational(q: &Rational) -> Self {
        Self::from_root(&IsolatedRoot::from_rational(q))
    }

    /// The current representation of `alpha`.
    pub fn alpha(&self) -> RealAlgebraic {
        match self.exact() {
            Some(v) => RealAlgebraic::Rational(v),
            None => RealAlgebraic::from_root(self.isolated()),
        }
    }

    pub fn isolated(&self) -> IsolatedRoot {
        IsolatedRoot::from_parts_unchecked(self.q.clone(), self.lo.clone(), self.hi.clone(), 1)
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.q
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    fn exact(&self) -> Option<Rational> {
        if self.q.deg() == 1 {
            Some(-self.q.coeff(0) / self.q.coeff(1))
        } else {
            None
        }
    }

    pub fn reduce(&self, e: &UniPoly) -> UniPoly {
        if e.deg() < self.q.deg() {
            e.clone()
        } else {
            e.rem(&self.q)
        }
    }

    pub fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        self.reduce(&(a * b))
    }

    fn bisect(&mut self) {
        let mid = (&self.lo + &self.hi) / rational::int(2);
        let s = self.q.sign_at(&mid);
        if s == 0 {
            let quarter = (&self.hi - &self.lo) / rational::int(4);
            self.lo = &mid - &quarter;
            self.hi = &mid + &quarter;
            self.q = UniPoly::linear_root(&mid);
        } else if s == self.q.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Refines until the isolating interval is narrower than `width`.
    pub fn refine(&mut self, width: &Rational) {
        while &(&self.hi - &self.lo) > width {
            self.bisect();
        }
    }

    pub fn is_zero(&mut self, e: &UniPoly) -> bool {
        let e = self.reduce(e);
        if e.is_zero() {
            return true;
        }
        if e.deg() == 0 {
            return false;
        }
        let g = UniPoly::gcd(&e, &self.q);
        if g.deg() == 0 {
            return false;
        }
        // g divides q, so it has at most one root in (lo, hi) and none at the ends
        if g.sign_at(&self.lo) != g.sign_at(&self.hi) {
            self.q = g;
            true
        } else {
            self.q = self.q.exact_div(&g);
            false
        }
    }

    /// Interval enclosure of `e(alpha)` by Horner evaluation over `[lo, hi]`.
    fn enclose(&self, e: &UniPoly) -> (Rational, Rational) {
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for c in e.coeffs().iter().rev() {
            let prods = [&a * &self.lo, &a * &self.hi, &b * &self.lo, &b * &self.hi];
            let mn = prods.iter().min().unwrap().clone();
            let mx = prods.iter().max().unwrap().clone();
            a = mn + c;
            b = mx + c;
        }
        (a, b)
    }

    /// Exact sign of `e(alpha)`.
    pub fn sign(&mut self, e: &UniPoly) -> i8 {
        if self.is_zero(e) {
            return 0;
        }
        let e = self.reduce(e);
        loop {
            if let Some(v) = self.exact() {
                return rational::sign(&e.eval(&v));
            }
            let (a, b) = self.enclose(&e);
            if a > Rational::zero() {
                return 1;
            }
            if b < Rational::zero() {
                return -1;
            }
            self.bisect();
        }
    }

    /// Lower bound on `|e(alpha)|` for a nonzero element.
    fn abs_lower(&mut self, e: &UniPoly) -> Rational {
        let e = self.reduce(e);
        loop {
            if let Some(v) = self.exact() {
                return rational::abs(&e.eval(&v));
            }
            let (a, b) = self.enclose(&e);
            if a > Rational::zero() {
                return a;
            }
            if b < Rational::zero() {
                return -b;
            }
            self.bisect();
        }
    }

    fn abs_upper(&self, e: &UniPoly) -> Rational {
        let e = self.reduce(e);
        if let Some(v) = self.exact() {
            return rational::abs(&e.eval(&v));
        }
        let (a, b) = self.enclose(&e);
        rational::max(&rational::abs(&a), &rational::abs(&b))
    }

    pub fn inv(&mut self, e: &UniPoly) -> Option<UniPoly> {
        if self.is_zero(e) {
            return None;
        }
        let e = self.reduce(e);
        let (g, s) = UniPoly::gcd_cofactor(&e, &self.q);
        debug_assert_eq!(g, UniPoly::one());
        Some(self.reduce(&s))
    }

    // ---- polynomials over the field -------------------------------------

    /// Reduces coefficients and drops leading coefficients that vanish at `alpha`.
    pub fn trim(&mut self, p: &[UniPoly]) -> FieldPoly {
        let mut out: FieldPoly = p.iter().map(|c| self.reduce(c)).collect();
        while let Some(last) = out.last() {
            let last = last.clone();
            if self.is_zero(&last) {
                out.pop();
            } else {
                break;
            }
        }
        out.iter().map(|c| self.reduce(c)).collect()
    }

    pub fn poly_derivative(&self, p: &[UniPoly]) -> FieldPoly {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&rational::int(i as i64)))
            .collect()
    }

    pub fn poly_rem(&mut self, a: &[UniPoly], b: &[UniPoly]) -> FieldPoly {
        let b = self.trim(b);
        assert!(!b.is_empty(), "division by zero polynomial over Q(alpha)");
        let lead_inv = self.inv(b.last().unwrap()).expect("trimmed leading coefficient");
        let mut r = self.trim(a);
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(r.last().unwrap(), &lead_inv);
            for (j, bc) in b.iter().enumerate() {
                let t = self.mul(&c, bc);
                r[shift + j] = self.reduce(&(&r[shift + j] - &t));
            }
            r.pop();
            r = self.trim(&r);
        }
        r
    }

    pub fn poly_gcd(&mut self, a: &[UniPoly], b: &[UniPoly]) -> FieldPoly {
        let mut a = self.trim(a);
        let mut b = self.trim(b);
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    /// `p(alpha, y)` as an element of `Q(alpha)`.
    pub fn eval_at(&self, p: &[UniPoly], y: &Rational) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in p.iter().rev() {
            acc = &acc.scale(y) + c;
        }
        self.reduce(&acc)
    }

    pub fn sign_at(&mut self, p: &[UniPoly], y: &Rational) -> i8 {
        let v = self.eval_at(p, y);
        self.sign(&v)
    }

    pub fn sturm_chain(&mut self, p: &[UniPoly]) -> Vec<FieldPoly> {
        let p = self.trim(p);
        let mut chain = vec![p.clone()];
        if p.len() <= 1 {
            return chain;
        }
        chain.push(self.trim(&self.poly_derivative(&p)));
        loop {
            let n = chain.len();
            let r = self.poly_rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.iter().map(|c| -c).collect());
        }
        chain
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

    pub fn variations_at(&mut self, chain: &[FieldPoly], y: &Rational) -> usize {
        let signs: Vec<i8> = chain.iter().map(|p| self.sign_at(p, y)).collect();
        Self::variations(signs.into_iter())
    }

    fn variations_inf(&mut self, chain: &[FieldPoly], positive: bool) -> usize {
        let mut signs = Vec::with_capacity(chain.len());
        for p in chain {
            let p = self.trim(p);
            let Some(lc) = p.last() else {
                signs.push(0);
                continue;
            };
            let s = self.sign(lc);
            let odd = (p.len() - 1) % 2 == 1;
            signs.push(if !positive && odd { -s } else { s });
        }
        Self::variations(signs.into_iter())
    }

    /// Distinct real roots of the chain's polynomial in `(lo, hi]`.
    pub fn count(&mut self, chain: &[FieldPoly], lo: &Rational, hi: &Rational) -> usize {
        let a = self.variations_at(chain, lo);
        let b = self.variations_at(chain, hi);
        a.saturating_sub(b)
    }

    pub fn count_all(&mut self, chain: &[FieldPoly]) -> usize {
        let a = self.variations_inf(chain, false);
        let b = self.variations_inf(chain, true);
        a.saturating_sub(b)
    }

    /// Strict bound on the absolute value of the real roots of `p(alpha, y)`.
    pub fn root_bound(&mut self, p: &[UniPoly]) -> Rational {
        let p = self.trim(p);
        if p.len() <= 1 {
            return Rational::one();
        }
        let lead = self.abs_lower(p.last().unwrap());
        let m = p[..p.len() - 1]
            .iter()
            .map(|c| self.abs_upper(c))
            .max()
            .unwrap_or_else(Rational::zero);
        m / lead + rational::int(2)
    }

    /// Isolating intervals `(lo, hi)` for the distinct real roots of `p(alpha, y)`.
    ///
    /// Endpoints are never roots; intervals are sorted and disjoint.
    pub fn isolate(&mut self, p: &[UniPoly]) -> Vec<(Rational, Rational)> {
        let p = self.trim(p);
        if p.len() <= 1 {
            return Vec::new();
        }
        let chain = self.sturm_chain(&p);
        let b = self.root_bound(&p);
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            match self.count(&chain, &lo, &hi) {
                0 => {}
                1 => out.push((lo, hi)),
                _ => {
                    let mid = self.split_point(&p, &lo, &hi);
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn split_point(&mut self, p: &[UniPoly], lo: &Rational, hi: &Rational) -> Rational {
        let w = hi - lo;
        let mut den = 2i64;
        loop {
            for num in 1..den {
                let x = lo + &w * rational::rat(num, den);
                if self.sign_at(p, &x) != 0 {
                    return x;
                }
            }
            den += 1;
        }
    }
}

/// Converts rational-coefficient polynomials in `y` into field polynomials.
pub fn constant_poly(p: &UniPoly) -> FieldPoly {
    p.coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect()
}

/// Sturm count helper re-exported for callers that mix both worlds.
pub fn rational_count(p: &UniPoly, lo: &Rational, hi: &Rational) -> usize {
    SturmChain::new(p).count(lo, hi)
}
