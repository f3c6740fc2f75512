//! Exact visibility geometry for planar point sets on real cubic curves.

pub mod arith;
pub mod certificate;
pub mod container;
pub mod cubic;
pub mod generators;
pub mod geometry;
pub mod orchard;
pub mod patches;
pub mod visibility;
