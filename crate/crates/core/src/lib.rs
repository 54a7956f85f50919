//! Hyperbolic Symanzik polynomials of ribbon Feynman graphs in the critical
//! noncommutative scalar model on Moyal space.
//!
//! A [`ribbon::RibbonGraph`] is turned into the skew matrices of the Gaussian
//! parametric integral ([`qmatrix`]); their Pfaffian minors ([`pfaffian`])
//! give the first polynomial HU ([`hupoly`]) and the real part of the second
//! one, HV ([`hvpoly`]). The [`oracle`] recomputes the same quantities by
//! exact rational linear algebra at sample points.

pub mod hupoly;
pub mod hvpoly;
pub mod oracle;
pub mod pfaffian;
pub mod polyring;
pub mod qmatrix;
pub mod ribbon;

pub use polyring::{Poly, Rat, Var};
pub use ribbon::RibbonGraph;
