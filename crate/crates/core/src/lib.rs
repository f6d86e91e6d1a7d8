//! Funk and Hilbert metrics on convex domains.
//!
//! The crate has two halves that mirror each other:
//!
//! - [`euclid_convex`] and [`funk_euclid`]: convex bodies in `R^d` and the three
//!   ways of writing the Funk metric on them (ray exit, supremum over supporting
//!   hyperplanes, Finsler path length), plus the Hilbert symmetrization.
//! - [`hyperbolic_core`] and [`funk_model`]: the hyperbolic plane in the
//!   hyperboloid model, domains cut out by finitely many complete geodesics, and
//!   the analogous functionals there, where the three formulations separate into
//!   the chain `F1 <= F2 <= F3`.
//!
//! Everything is a pure function of immutable values.

pub mod error;
pub mod euclid_convex;
pub mod funk_euclid;
pub mod funk_model;
pub mod hyperbolic_core;
pub mod pathopt;
pub mod quadrature;
pub mod sampling;

pub use error::{Error, Result};
