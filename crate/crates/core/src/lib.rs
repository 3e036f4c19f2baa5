//! Finite-size statistical mechanics of an ideal gas in a box with
//! Dirichlet and quasi-Neumann Robin walls.

pub mod error;
pub mod euler_maclaurin;
pub mod polylog;
pub mod quadrature;
pub mod roots;
pub mod spectrum;
pub mod statmech;

pub use error::{Error, Result};
