//! Numerical experiments on the heat equation in annuli: admissible initial
//! data, finite-difference evolution, and certificates that level sets of the
//! solution stop being convex.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod initial_data;
pub mod io;
pub mod jet;
pub mod par;
pub mod quadrature;
pub mod solver;
pub mod stencil;
pub mod svg;
pub mod tridiag;

pub use error::{Error, Result};
