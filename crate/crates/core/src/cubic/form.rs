//! Polynomials in the homogeneous coordinates `X, Y, Z`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::arith::bipoly::BiPoly;
use crate::arith::rational::{self, Rational};

/// Exponents of `X`, `Y`, `Z`.
pub type Monomial = [u32; 3];

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Form {
    terms: BTreeMap<Monomial, Rational>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: Monomial, c: Rational) -> Self {
        let mut f = Form::zero();
        f.add_term(e, c);
        f
    }

    /// The coordinate `X`, `Y` or `Z` for `v = 0, 1, 2`.
    pub fn var(v: usize) -> Self {
        let mut e = [0; 3];
        e[v] = 1;
        Self::monomial(e, Rational::one())
    }

    /// `aX + bY + cZ`.
    pub fn linear(a: &Rational, b: &Rational, c: &Rational) -> Self {
        let mut f = Form::zero();
        f.add_term([1, 0, 0], a.clone());
        f.add_term([0, 1, 0], b.clone());
        f.add_term([0, 0, 1], c.clone());
        f
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut f = Form::zero();
        for (e, c) in terms {
            f.add_term(e, c);
        }
        f
    }

    pub fn from_int_terms(terms: &[(Monomial, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, rational::int(c))))
    }

    fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Monomial) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree if every term has the same degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut f = self.clone();
        for (e, c) in &other.terms {
            f.add_term(*e, c.clone());
        }
        f
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.scale(&rational::int(-1)))
    }

    pub fn scale(&self, k: &Rational) -> Form {
        Form::from_terms(self.terms.iter().map(|(e, c)| (*e, c * k)))
    }

    pub fn mul(&self, other: &Form) -> Form {
        let mut f = Form::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                f.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], ca * cb);
            }
        }
        f
    }

    pub fn pow(&self, k: u32) -> Form {
        (0..k).fold(Form::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn partial(&self, v: usize) -> Form {
        Form::from_terms(self.terms.iter().filter(|(e, _)| e[v] > 0).map(|(e, c)| {
            let mut d = *e;
            d[v] -= 1;
            (d, c * rational::int(e[v] as i64))
        }))
    }

    /// Replaces `X, Y, Z` by the given forms.
    pub fn substitute(&self, images: [&Form; 3]) -> Form {
        let mut cache: [Vec<Form>; 3] = Default::default();
        let mut f = Form::zero();
        for (e, c) in &self.terms {
            let mut t = Form::constant(c.clone());
            for v in 0..3 {
                let powers = &mut cache[v];
                while powers.len() <= e[v] as usize {
                    let next = match powers.last() {
                        None => Form::constant(Rational::one()),
                        Some(p) => p.mul(images[v]),
                    };
                    powers.push(next);
                }
                t = t.mul(&powers[e[v] as usize]);
            }
            f = f.add(&t);
        }
        f
    }

    pub fn eval(&self, p: [&Rational; 3]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| c * num_traits::pow(p[0].clone(), e[0] as usize) * num_traits::pow(p[1].clone(), e[1] as usize) * num_traits::pow(p[2].clone(), e[2] as usize))
            .sum()
    }

    /// Sets variable `v` to the constant `value`.
    pub fn restrict(&self, v: usize, value: &Rational) -> Form {
        let mut images = [Form::var(0), Form::var(1), Form::var(2)];
        images[v] = Form::constant(value.clone());
        self.substitute([&images[0], &images[1], &images[2]])
    }

    /// Exact quotient by a nonzero linear form, or `None` if it does not divide.
    pub fn div_linear(&self, l: &Form) -> Option<Form> {
        let v = (0..3).find(|&v| {
            let mut e = [0; 3];
            e[v] = 1;
            !l.coeff(e).is_zero()
        })?;
        let mut lead = [0; 3];
        lead[v] = 1;
        let a = l.coeff(lead);
        let order = |e: &Monomial| {
            let others: Vec<u32> = (0..3).filter(|&w| w != v).map(|w| e[w]).collect();
            (e[v], others[0], others[1])
        };
        let mut r = self.clone();
        let mut q = Form::zero();
        while let Some((e, c)) = r.terms.iter().max_by_key(|(e, _)| order(e)).map(|(e, c)| (*e, c.clone())) {
            if e[v] == 0 {
                return None;
            }
            let mut te = e;
            te[v] -= 1;
            let t = Form::monomial(te, c / &a);
            r = r.sub(&t.mul(l));
            q = q.add(&t);
        }
        Some(q)
    }

    /// `F(x, y, 1)`.
    pub fn dehomogenize(&self) -> BiPoly {
        BiPoly::from_terms(&self.terms.iter().map(|(e, c)| (e[0] as usize, e[1] as usize, c.clone())).collect::<Vec<_>>())
    }

    /// Whether `self = k * other` for some nonzero rational `k`.
    pub fn proportional_to(&self, other: &Form) -> bool {
        if self.is_zero() || other.is_zero() {
            return false;
        }
        if self.terms.len() != other.terms.len() {
            return false;
        }
        let (e0, c0) = self.terms.iter().next().unwrap();
        let Some(d0) = other.terms.get(e0) else { return false };
        let k = c0 / d0;
        self.terms.iter().all(|(e, c)| other.terms.get(e).is_some_and(|d| &(d * &k) == c))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["X", "Y", "Z"];
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for v in 0..3 {
                match e[v] {
                    0 => {}
                    1 => write!(f, "*{}", names[v])?,
                    k => write!(f, "*{}^{k}", names[v])?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Determinant of the matrix of second partial derivatives.
pub fn hessian_determinant(f: &Form) -> Form {
    let h: Vec<Vec<Form>> = (0..3).map(|i| (0..3).map(|j| f.partial(i).partial(j)).collect()).collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| h[a][c].mul(&h[b][d]).sub(&h[a][d].mul(&h[b][c]));
    h[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&h[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&h[0][2].mul(&minor(1, 2, 0, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_by_linear_forms() {
        let l = Form::from_int_terms(&[([1, 0, 0], 1), ([0, 1, 0], 1)]);
        let q = Form::from_int_terms(&[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], -1)]);
        let f = l.mul(&q);
        assert_eq!(f.div_linear(&l), Some(q.clone()));
        assert_eq!(f.div_linear(&Form::var(2)), None);
        let z = Form::var(2);
        assert_eq!(z.mul(&q).div_linear(&z), Some(q));
    }

    #[test]
    fn substitution_and_restriction() {
        let f = Form::from_int_terms(&[([3, 0, 0], 1)]);
        let sheared = f.substitute([&Form::var(0).add(&Form::var(1)), &Form::var(1), &Form::var(2)]);
        assert_eq!(sheared.coeff([0, 3, 0]), rational::int(1));
        assert_eq!(sheared.coeff([2, 1, 0]), rational::int(3));
        let g = Form::from_int_terms(&[([0, 2, 1], 1), ([3, 0, 0], -1), ([1, 0, 2], 1)]);
        assert_eq!(g.restrict(2, &rational::int(0)), Form::from_int_terms(&[([3, 0, 0], -1)]));
        assert_eq!(g.eval([&rational::int(2), &rational::int(3), &rational::int(1)]), rational::int(3));
        assert!(g.scale(&rational::int(-4)).proportional_to(&g));
    }
}
