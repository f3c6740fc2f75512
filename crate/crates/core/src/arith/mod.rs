//! Exact arithmetic: rationals, polynomials, real algebraic numbers and resultants.

pub mod algebraic;
pub mod bipoly;
pub mod field;
pub mod poly;
pub mod rational;
pub mod resultant;
pub mod roots;

pub use algebraic::RealAlgebraic;
pub use bipoly::BiPoly;
pub use field::NumberField;
pub use poly::UniPoly;
pub use rational::Rational;
pub use resultant::{resultant_x, resultant_y};
pub use roots::{sturm_isolate, IsolatedRoot, SturmChain};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("refinement width must be positive")]
    NonPositiveWidth,
    #[error("both polynomials are constant in y")]
    BothConstantInY,
}
