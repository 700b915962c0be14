//! Geometry and finite-type analysis of Lorentzian surfaces in
//! Minkowski space E⁴₁ through their Gauss maps.

pub mod algebra;
pub mod expr;
pub mod geometry;
pub mod jet;
pub mod catalog;
pub mod analyzer;
pub mod verify;
