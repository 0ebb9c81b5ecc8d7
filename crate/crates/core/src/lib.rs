//! Functional codes on quadrics and hermitian varieties over finite fields.
//!
//! The crate enumerates PG(n, q), classifies quadrics and hermitian
//! varieties, counts intersections with arbitrary quadrics, and builds the
//! evaluation codes `C_h(X)` whose codewords are the values of degree-`h`
//! forms on the points of a variety `X`. Exact weight spectra are computed by
//! walking the message space in Gray order.

pub mod error;
pub mod gf;
pub mod linalg;
pub mod proj;
pub mod forms;
pub mod codes;
pub mod intersect;
pub mod geometry;
pub mod pairs;
pub mod presets;
pub mod experiments;

pub use error::{Error, Result};
pub use gf::{Elem, Field};
pub use proj::{pi, Flat, PointSet, Space};
