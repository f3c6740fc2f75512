//! Real algebraic numbers: rationals or isolated irrational roots.

use std::cmp::Ordering;
use std::fmt;

use num_traits::One;
use serde::Serialize;

use super::poly::UniPoly;
use super::rational::{self, Rational};
use super::roots::IsolatedRoot;

#[derive(Clone, Debug)]
pub enum RealAlgebraic {
    Rational(Rational),
    /// Always irrational; rational roots are normalized to the other variant.
    Root(IsolatedRoot),
}

impl RealAlgebraic {
    pub fn from_root(r: IsolatedRoot) -> Self {
        match r.rational_value() {
            Some(q) => RealAlgebraic::Rational(q),
            None => RealAlgebraic::Root(r),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealAlgebraic::Rational(q) => Some(q),
            RealAlgebraic::Root(_) => None,
        }
    }

    /// Defining polynomial and isolating interval, also for rationals.
    pub fn to_isolated(&self) -> IsolatedRoot {
        match self {
            RealAlgebraic::Rational(q) => IsolatedRoot::from_rational(q),
            RealAlgebraic::Root(r) => r.clone(),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            RealAlgebraic::Rational(q) => rational::to_f64(q),
            RealAlgebraic::Root(r) => r
                .refine(&Rational::new(1.into(), num_bigint::BigInt::one() << 60))
                .map(|r| r.approx())
                .unwrap_or(f64::NAN),
        }
    }

    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        match self {
            RealAlgebraic::Rational(p) => p.cmp(q),
            RealAlgebraic::Root(r) => r.compare_rational(q),
        }
    }

    /// A rational enclosure `[lo, hi]` of width at most `width`.
    pub fn enclosure(&self, width: &Rational) -> (Rational, Rational) {
        match self {
            RealAlgebraic::Rational(q) => (q.clone(), q.clone()),
            RealAlgebraic::Root(r) => {
                let r = r.refine(width).expect("positive width");
                (r.lo().clone(), r.hi().clone())
            }
        }
    }

    /// A rational strictly between `self` and `other`; requires `self < other`.
    pub fn rational_between(&self, other: &RealAlgebraic) -> Rational {
        debug_assert!(self < other);
        let (mut a, mut b) = (self.to_isolated(), other.to_isolated());
        let (ar, br) = (self.as_rational().cloned(), other.as_rational().cloned());
        loop {
            let top = ar.clone().unwrap_or_else(|| a.hi().clone());
            let bottom = br.clone().unwrap_or_else(|| b.lo().clone());
            if top < bottom {
                return (top + bottom) / rational::int(2);
            }
            if ar.is_none() {
                a = a.bisect();
            }
            if br.is_none() {
                b = b.bisect();
            }
        }
    }

    /// A rational strictly below the value.
    pub fn rational_below(&self) -> Rational {
        match self {
            RealAlgebraic::Rational(q) => q - Rational::one(),
            RealAlgebraic::Root(r) => r.lo().clone(),
        }
    }

    /// A rational strictly above the value.
    pub fn rational_above(&self) -> Rational {
        match self {
            RealAlgebraic::Rational(q) => q + Rational::one(),
            RealAlgebraic::Root(r) => r.hi().clone(),
        }
    }

    pub fn defining_poly(&self) -> UniPoly {
        self.to_isolated().poly().clone()
    }
}

impl From<Rational> for RealAlgebraic {
    fn from(q: Rational) -> Self {
        RealAlgebraic::Rational(q)
    }
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for RealAlgebraic {}

impl PartialOrd for RealAlgebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealAlgebraic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (RealAlgebraic::Rational(a), RealAlgebraic::Rational(b)) => a.cmp(b),
            (RealAlgebraic::Root(r), RealAlgebraic::Rational(q)) => r.compare_rational(q),
            (RealAlgebraic::Rational(q), RealAlgebraic::Root(r)) => r.compare_rational(q).reverse(),
            (RealAlgebraic::Root(a), RealAlgebraic::Root(b)) => a.compare(b),
        }
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealAlgebraic::Rational(q) => write!(f, "{q}"),
            RealAlgebraic::Root(r) => write!(f, "~{:.6}", r.approx()),
        }
    }
}

/// Serialized as `"p/q"` for rationals and `{"root": {...}}` otherwise.
impl Serialize for RealAlgebraic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RealAlgebraic::Rational(q) => s.serialize_str(&q.to_string()),
            RealAlgebraic::Root(r) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("root", r)?;
                m.end()
            }
        }
    }
}
