//! Discriminants, resultants, weight polytopes and Bergman-metric energy
//! functionals for smooth plane curves.
//!
//! The crate is organized by capability:
//!
//! - [`poly`]: exact and floating sparse homogeneous polynomials, linear
//!   substitutions, Sylvester matrices, fraction-free determinants.
//! - [`elimination`]: the dual-curve discriminant of a plane curve and the
//!   generic resultant/discriminant of binary forms.
//! - [`energy`]: quadrature on a plane curve viewed as a branched cover of
//!   the projective line, the energy functionals restricted to Bergman
//!   metrics, and the identity checks built on them.
//! - [`polytope`]: weight polytopes, one-parameter-subgroup weights and an
//!   exact-rational point-in-hull LP.
//! - [`cli`]: configuration and command drivers behind the `planedual` binary.

pub mod cli;
pub mod elimination;
pub mod energy;
pub mod error;
pub mod poly;
pub mod polytope;

pub use error::{Error, Result};
