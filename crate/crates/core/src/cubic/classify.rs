//! Splitting a cubic into rational lines and conics.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::form::{hessian_determinant, Form};
use super::{primitive, HomogeneousCubic};
use crate::arith::poly::UniPoly;
use crate::arith::rational::{self, Rational};
use crate::arith::roots::rational_roots;
use crate::geometry::Point;

/// `aX + bY + cZ` with primitive integer coefficients, first nonzero one positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm(pub [Rational; 3]);

impl LinearForm {
    pub fn from_form(l: &Form) -> Self {
        let p = primitive(l);
        let mut c: [Rational; 3] = [p.coeff([1, 0, 0]), p.coeff([0, 1, 0]), p.coeff([0, 0, 1])];
        if c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            c = c.map(|x| -x);
        }
        LinearForm(c)
    }

    pub fn to_form(&self) -> Form {
        Form::linear(&self.0[0], &self.0[1], &self.0[2])
    }

    pub fn eval_affine(&self, p: &Point) -> Rational {
        &self.0[0] * &p.x + &self.0[1] * &p.y + &self.0[2]
    }

    pub fn is_at_infinity(&self) -> bool {
        self.0[0].is_zero() && self.0[1].is_zero()
    }
}

impl Serialize for LinearForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }
}

/// Conic coefficients of `X^2, XY, XZ, Y^2, YZ, Z^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicForm(pub [Rational; 6]);

const CONIC_MONOMIALS: [[u32; 3]; 6] = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];

impl ConicForm {
    pub fn from_form(q: &Form) -> Self {
        let p = primitive(q);
        ConicForm(CONIC_MONOMIALS.map(|e| p.coeff(e)))
    }

    pub fn to_form(&self) -> Form {
        Form::from_terms(CONIC_MONOMIALS.iter().zip(&self.0).map(|(e, c)| (*e, c.clone())))
    }

    pub fn eval_affine(&self, p: &Point) -> Rational {
        self.to_form().eval([&p.x, &p.y, &Rational::one()])
    }

    /// Determinant of the symmetric matrix; zero exactly for degenerate conics.
    pub fn determinant(&self) -> Rational {
        let [a, b, d, c, e, f] = &self.0;
        let h = rational::rat(1, 2);
        let (b, d, e) = (b * &h, d * &h, e * &h);
        a * (c * f - &e * &e) - &b * (&b * f - &e * &d) + &d * (&b * &e - c * &d)
    }
}

impl Serialize for ConicForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag")]
pub enum CubicClassification {
    Irreducible,
    LineConic { line: LinearForm, conic: ConicForm },
    ThreeLines { lines: Vec<LinearForm> },
    Unclassified { reason: String },
}

impl CubicClassification {
    pub fn tag(&self) -> &'static str {
        match self {
            CubicClassification::Irreducible => "Irreducible",
            CubicClassification::LineConic { .. } => "LineConic",
            CubicClassification::ThreeLines { .. } => "ThreeLines",
            CubicClassification::Unclassified { .. } => "Unclassified",
        }
    }

    /// Product of the components, when the cubic was split.
    pub fn product(&self) -> Option<Form> {
        match self {
            CubicClassification::LineConic { line, conic } => Some(line.to_form().mul(&conic.to_form())),
            CubicClassification::ThreeLines { lines } => {
                Some(lines.iter().fold(Form::constant(Rational::one()), |acc, l| acc.mul(&l.to_form())))
            }
            _ => None,
        }
    }
}

/// Projective roots `[u : w]` of the binary form obtained by setting variable `drop` to zero.
fn binary_roots(f: &Form, drop: usize, degree: u32) -> Vec<(Rational, Rational)> {
    let (first, second): (usize, usize) = match drop {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    // B(t, 1) in t = first / second
    let mut coeffs = vec![Rational::zero(); degree as usize + 1];
    for i in 0..=degree {
        let mut e = [0u32; 3];
        e[first] = i;
        e[second] = degree - i;
        coeffs[i as usize] = f.coeff(e);
    }
    let b = UniPoly::new(coeffs.clone());
    let mut out: Vec<(Rational, Rational)> = rational_roots(&b).into_iter().map(|t| (t, Rational::one())).collect();
    if coeffs[degree as usize].is_zero() {
        out.push((Rational::one(), Rational::zero()));
    }
    out
}

/// A rational linear factor of a nonzero form of the given degree.
pub(crate) fn find_linear_factor(f: &Form, degree: u32) -> Option<Form> {
    for v in 0..3 {
        if f.restrict(v, &Rational::zero()).is_zero() {
            return Some(Form::var(v));
        }
    }
    // a linear factor vanishes at a root of each coordinate restriction
    let ab: Vec<(Rational, Rational)> = binary_roots(f, 2, degree).into_iter().map(|(u, w)| (w, -u)).collect();
    let ac: Vec<(Rational, Rational)> = binary_roots(f, 1, degree).into_iter().map(|(u, w)| (w, -u)).collect();
    let bc: Vec<(Rational, Rational)> = binary_roots(f, 0, degree).into_iter().map(|(u, w)| (w, -u)).collect();
    for (a, b) in &ab {
        let candidates: Vec<Form> = if !a.is_zero() {
            ac.iter()
                .filter(|(a2, _)| !a2.is_zero())
                .map(|(a2, c2)| Form::linear(&Rational::one(), &(b / a), &(c2 / a2)))
                .collect()
        } else {
            bc.iter()
                .filter(|(b2, _)| !b2.is_zero())
                .map(|(b2, c2)| Form::linear(&Rational::zero(), &Rational::one(), &(c2 / b2)))
                .collect()
        };
        for l in candidates {
            if f.div_linear(&l).is_some() {
                return Some(l);
            }
        }
    }
    None
}

/// Splits the cubic over the rationals.
///
/// Without a rational linear factor the cubic is either absolutely
/// irreducible or a product of three conjugate lines; the latter happens
/// exactly when the Hessian vanishes identically (concurrent lines) or is
/// proportional to the cubic (a triangle), and is reported as unclassified.
pub fn classify(f: &HomogeneousCubic) -> CubicClassification {
    let form = f.form();
    let Some(l) = find_linear_factor(form, 3) else {
        let h = hessian_determinant(form);
        if h.is_zero() {
            return CubicClassification::Unclassified {
                reason: "Hessian vanishes identically: three concurrent lines not defined over the rationals".into(),
            };
        }
        if h.proportional_to(form) {
            return CubicClassification::Unclassified {
                reason: "Hessian proportional to the cubic: a triangle of lines not defined over the rationals".into(),
            };
        }
        return CubicClassification::Irreducible;
    };
    let conic = form.div_linear(&l).expect("factor divides");
    let line = LinearForm::from_form(&l);
    if let Some(l2) = find_linear_factor(&conic, 2) {
        let l3 = conic.div_linear(&l2).expect("factor divides");
        return CubicClassification::ThreeLines { lines: vec![line, LinearForm::from_form(&l2), LinearForm::from_form(&l3)] };
    }
    let conic = ConicForm::from_form(&conic);
    if conic.determinant().is_zero() {
        return CubicClassification::Unclassified {
            reason: "a rational line times a degenerate conic with no rational line".into(),
        };
    }
    CubicClassification::LineConic { line, conic }
}
