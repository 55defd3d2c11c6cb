//! Affine charts for moduli of graded modules over truncated path algebras.
//!
//! Pipeline: a bound quiver algebra [`algebra::QuiverAlgebra`], a top
//! [`algebra::TopSpec`] and a dimension give skeleta ([`skeleta`]), each of
//! which yields an affine chart whose defining ideal is computed by path
//! reduction ([`chart`]). The [`oracle`] module checks chart ideals against
//! explicit representations and implements top-preserving degenerations.

pub mod algebra;
pub mod chart;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod poly;
pub mod problem;
pub mod quiver;
pub mod skeleta;

pub use error::{Error, Result};
