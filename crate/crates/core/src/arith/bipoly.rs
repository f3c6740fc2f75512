//! Bivariate polynomials in `x` and `y`, stored as polynomials in `y` whose
//! coefficients are polynomials in `x`.

use std::fmt;

use num_traits::Zero;

use super::poly::UniPoly;
use super::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    /// `rows[j]` is the coefficient of `y^j`.
    rows: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(mut rows: Vec<UniPoly>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly { rows }
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    /// From terms `(i, j, c)` meaning `c x^i y^j`.
    pub fn from_terms(terms: &[(usize, usize, Rational)]) -> Self {
        let dy = terms.iter().map(|t| t.1).max().map_or(0, |d| d + 1);
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); dy];
        for (i, j, c) in terms {
            let row = &mut rows[*j];
            if row.len() <= *i {
                row.resize(*i + 1, Rational::zero());
            }
            row[*i] += c;
        }
        Self::new(rows.into_iter().map(UniPoly::new).collect())
    }

    pub fn from_int_terms(terms: &[(usize, usize, i64)]) -> Self {
        let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, rational::int(c))).collect();
        Self::from_terms(&t)
    }

    /// A polynomial in `y` alone.
    pub fn from_y(p: &UniPoly) -> Self {
        Self::new(p.coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect())
    }

    /// A polynomial in `x` alone.
    pub fn from_x(p: &UniPoly) -> Self {
        Self::new(vec![p.clone()])
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[UniPoly] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> UniPoly {
        self.rows.get(j).cloned().unwrap_or_else(UniPoly::zero)
    }

    /// Degree in `y`; 0 for the zero polynomial.
    pub fn deg_y(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn deg_x(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_zero()).map(|r| r.deg()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(j, r)| j + r.deg())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.rows.get(j).map_or_else(Rational::zero, |r| r.coeff(i))
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.eval_x(x).eval(y)
    }

    /// `f(x0, y)` as a polynomial in `y`.
    pub fn eval_x(&self, x: &Rational) -> UniPoly {
        UniPoly::new(self.rows.iter().map(|r| r.eval(x)).collect())
    }

    /// `f(x, y0)` as a polynomial in `x`.
    pub fn eval_y(&self, y: &Rational) -> UniPoly {
        let mut acc = UniPoly::zero();
        for r in self.rows.iter().rev() {
            acc = &acc.scale(y) + r;
        }
        acc
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_vars(&self) -> BiPoly {
        let mut terms = Vec::new();
        for (j, r) in self.rows.iter().enumerate() {
            for (i, c) in r.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.push((j, i, c.clone()));
                }
            }
        }
        Self::from_terms(&terms)
    }

    pub fn dx(&self) -> BiPoly {
        Self::new(self.rows.iter().map(|r| r.derivative()).collect())
    }

    pub fn dy(&self) -> BiPoly {
        Self::new(
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| r.scale(&rational::int(j as i64)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> BiPoly {
        Self::new(self.rows.iter().map(|r| r.scale(k)).collect())
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(other.rows.len());
        Self::new((0..n).map(|j| &self.row(j) + &other.row(j)).collect())
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.scale(&rational::int(-1)))
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let mut rows = vec![UniPoly::zero(); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        Self::new(rows)
    }

    /// `f(p + t d)` as a polynomial in `t`.
    pub fn along_line(&self, p: (&Rational, &Rational), d: (&Rational, &Rational)) -> UniPoly {
        let xt = UniPoly::new(vec![p.0.clone(), d.0.clone()]);
        let yt = UniPoly::new(vec![p.1.clone(), d.1.clone()]);
        let mut acc = UniPoly::zero();
        for r in self.rows.iter().rev() {
            // Horner in y with each row evaluated at x(t)
            let mut rx = UniPoly::zero();
            for c in r.coeffs().iter().rev() {
                rx = &(&rx * &xt) + &UniPoly::constant(c.clone());
            }
            acc = &(&acc * &yt) + &rx;
        }
        acc
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, r) in self.rows.iter().enumerate().rev() {
            if r.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({r})")?,
                1 => write!(f, "({r})*y")?,
                _ => write!(f, "({r})*y^{j}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    #[test]
    fn evaluation_and_swap() {
        // y^2 - x^3 + x
        let f = BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, -1), (1, 0, 1)]);
        assert_eq!(f.eval(&int(2), &int(3)), int(3));
        assert_eq!(f.deg_y(), 2);
        assert_eq!(f.deg_x(), 3);
        let g = f.swap_vars();
        assert_eq!(g.eval(&int(3), &int(2)), int(3));
        assert_eq!(f.dy(), BiPoly::from_int_terms(&[(0, 1, 2)]));
        assert_eq!(f.dx(), BiPoly::from_int_terms(&[(2, 0, -3), (0, 0, 1)]));
        assert_eq!(f.total_degree(), 3);
    }

    #[test]
    fn restriction_to_a_line() {
        // y - x^3 along (1,1) + t (1,7): t^3 + 3t^2 - 4t ... check at t = 1
        let f = BiPoly::from_int_terms(&[(0, 1, 1), (3, 0, -1)]);
        let phi = f.along_line((&int(1), &int(1)), (&int(1), &int(7)));
        assert_eq!(phi.eval(&int(1)), f.eval(&int(2), &int(8)));
        assert_eq!(phi.eval(&int(-3)), f.eval(&int(-2), &int(-20)));
        assert_eq!(phi.deg(), 3);
    }
}
