//! Entire solutions of Burgers' equation, viscous shocks for convex fluxes,
//! and the shock merger construction, evaluated in overflow-safe arithmetic.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ancient;
pub mod closed_form;
pub mod conservation;
pub mod criteria;
pub mod entire;
pub mod error;
pub mod measure;
pub mod merger;
pub mod poly;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod tilt;

pub use entire::EntireSolution;
pub use error::{Error, Result};
pub use measure::{Atom, Measure, Piece, SupportGap};
pub use special::LogReal;
