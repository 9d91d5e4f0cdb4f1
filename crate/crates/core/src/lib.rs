//! Leja sequences on the unit disk and their images under conformal maps,
//! univariate and bivariate Lagrange bases, and Lebesgue constant estimation.

pub mod error;
pub mod experiments;
pub mod flip;
pub mod io;
pub mod leja;
pub mod bivariate;
pub mod cli;
pub mod math;
pub mod search;
pub mod transport;

pub use error::{LejaError, Result};
pub use math::ComplexPoint;
