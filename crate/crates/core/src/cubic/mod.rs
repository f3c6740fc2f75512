//! Homogeneous plane cubics: normalization, Hessian, classification,
//! chart changes and the exceptional points that bound visibility patches.

mod classify;
mod exceptional;
pub mod form;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::bipoly::BiPoly;
use crate::arith::rational::{self, Rational};
use crate::arith::ArithError;
use crate::geometry::Point;

pub use classify::{classify, ConicForm, CubicClassification, LinearForm};
pub use exceptional::{exceptional_set, AlgebraicPoint, ExceptionalSet, Fibre};
pub use form::{hessian_determinant, Form, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CubicError {
    #[error("the zero form is not a curve")]
    ZeroForm,
    #[error("not a homogeneous cubic form")]
    NotACubic,
    #[error("unknown monomial key {0:?}")]
    UnknownMonomial(String),
    #[error("bad coefficient for {key}: {reason}")]
    BadCoefficient { key: String, reason: String },
    #[error("no shear X -> X + lY with l in 0..=3 moves [0:1:0] off the curve")]
    NoGenericShear,
    #[error("cubic is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("certification failed: {0}")]
    CertificationFailure(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Monomial keys in the serialization order.
pub const MONOMIALS: [(&str, Monomial); 10] = [
    ("X3", [3, 0, 0]),
    ("X2Y", [2, 1, 0]),
    ("X2Z", [2, 0, 1]),
    ("XY2", [1, 2, 0]),
    ("XYZ", [1, 1, 1]),
    ("XZ2", [1, 0, 2]),
    ("Y3", [0, 3, 0]),
    ("Y2Z", [0, 2, 1]),
    ("YZ2", [0, 1, 2]),
    ("Z3", [0, 0, 3]),
];

/// A nonzero cubic form with primitive integer coefficients. The overall sign is kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousCubic {
    form: Form,
}

/// Clears denominators and divides out the content, keeping the sign.
pub(crate) fn primitive(form: &Form) -> Form {
    let den = rational::common_denominator(form.terms().map(|(_, c)| c));
    let scaled = form.scale(&Rational::from_integer(den));
    let g = scaled.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()));
    if g.is_zero() {
        return scaled;
    }
    scaled.scale(&Rational::new(BigInt::one(), g))
}

impl HomogeneousCubic {
    pub fn new(form: Form) -> Result<Self, CubicError> {
        if form.is_zero() {
            return Err(CubicError::ZeroForm);
        }
        if form.homogeneous_degree() != Some(3) {
            return Err(CubicError::NotACubic);
        }
        Ok(HomogeneousCubic { form: primitive(&form) })
    }

    pub fn from_int_terms(terms: &[(Monomial, i64)]) -> Result<Self, CubicError> {
        Self::new(Form::from_int_terms(terms))
    }

    /// Homogenizes an affine polynomial of total degree at most 3.
    pub fn from_affine(f: &BiPoly) -> Result<Self, CubicError> {
        if f.total_degree() > 3 {
            return Err(CubicError::NotACubic);
        }
        let mut terms = Vec::new();
        for (j, row) in f.rows().iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.push(([i as u32, j as u32, (3 - i - j) as u32], c.clone()));
                }
            }
        }
        Self::new(Form::from_terms(terms))
    }

    pub fn from_coeffs(coeffs: &[Rational; 10]) -> Result<Self, CubicError> {
        Self::new(Form::from_terms(MONOMIALS.iter().zip(coeffs).map(|((_, e), c)| (*e, c.clone()))))
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn coeffs(&self) -> [Rational; 10] {
        std::array::from_fn(|i| self.form.coeff(MONOMIALS[i].1))
    }

    pub fn coeff(&self, key: &str) -> Option<Rational> {
        MONOMIALS.iter().find(|(k, _)| *k == key).map(|(_, e)| self.form.coeff(*e))
    }

    /// The affine equation `f(x, y) = F(x, y, 1)`.
    pub fn affine(&self) -> BiPoly {
        self.form.dehomogenize()
    }

    pub fn eval_affine(&self, p: &Point) -> Rational {
        self.form.eval([&p.x, &p.y, &Rational::one()])
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval_affine(p).is_zero()
    }

    /// Determinant of the second-derivative matrix of the stored form.
    ///
    /// For `G(X, Y, Z) = F(aX, bY, cZ)` one has
    /// `H_G(X, Y, Z) = (abc)^2 H_F(aX, bY, cZ)`.
    pub fn hessian(&self) -> Form {
        hessian_determinant(&self.form)
    }

    /// `F(X + lambda Y, Y, Z)`.
    pub fn sheared(&self, lambda: &Rational) -> HomogeneousCubic {
        let x = Form::var(0).add(&Form::var(1).scale(lambda));
        let form = self.form.substitute([&x, &Form::var(1), &Form::var(2)]);
        HomogeneousCubic { form: primitive(&form) }
    }
}

impl std::fmt::Display for HomogeneousCubic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.form)
    }
}

impl Serialize for HomogeneousCubic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        struct Coeffs<'a>(&'a HomogeneousCubic);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(10))?;
                for (k, e) in MONOMIALS {
                    m.serialize_entry(k, &self.0.form.coeff(e).to_string())?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(1))?;
        m.serialize_entry("coeffs", &Coeffs(self))?;
        m.end()
    }
}

#[derive(Deserialize)]
struct RawCubic {
    coeffs: BTreeMap<String, rational::serde_str::RawRational>,
}

impl<'de> Deserialize<'de> for HomogeneousCubic {
    /// Missing monomial keys are read as zero.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawCubic::deserialize(d)?;
        let mut terms = Vec::new();
        for (k, v) in raw.coeffs {
            let e = MONOMIALS
                .iter()
                .find(|(name, _)| *name == k)
                .map(|(_, e)| *e)
                .ok_or_else(|| serde::de::Error::custom(CubicError::UnknownMonomial(k.clone())))?;
            let c = v
                .into_rational()
                .map_err(|reason| serde::de::Error::custom(CubicError::BadCoefficient { key: k.clone(), reason }))?;
            terms.push((e, c));
        }
        HomogeneousCubic::new(Form::from_terms(terms)).map_err(serde::de::Error::custom)
    }
}

/// Which affine coordinates the decomposition works in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// The user's coordinates.
    Standard,
    /// `X -> X + lambda Y` with `[0:1:0]` off the curve.
    #[default]
    Sheared,
}

/// Smallest `lambda` in `0..=3` with `F(lambda, 1, 0) != 0`, and the sheared form.
pub fn shear_to_generic(f: &HomogeneousCubic) -> Result<(Rational, HomogeneousCubic), CubicError> {
    for l in 0..=3 {
        let lambda = rational::int(l);
        if !f.form.eval([&lambda, &Rational::one(), &Rational::zero()]).is_zero() {
            return Ok((lambda.clone(), f.sheared(&lambda)));
        }
    }
    Err(CubicError::NoGenericShear)
}

/// User coordinates to chart coordinates: `(x - lambda y, y)`.
pub fn to_chart(p: &Point, lambda: &Rational) -> Point {
    Point::new(&p.x - lambda * &p.y, p.y.clone())
}

pub fn from_chart(p: &Point, lambda: &Rational) -> Point {
    Point::new(&p.x + lambda * &p.y, p.y.clone())
}
