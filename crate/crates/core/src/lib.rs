//! Exact computation in classical generalized Weyl algebras `k[z][x, y; σ, a]`
//! with `σ(z) = z - 1`.

pub mod autos;
pub mod error;
pub mod fixed;
pub mod gwa;
pub mod homdim;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod scalars;
pub mod skew;

pub use error::{Error, Result};
pub use gwa::{GwaElement, GwaPresentation};
pub use poly::{Congruence, ZPoly};
pub use scalars::{FieldOp, FieldTower, MultOrder, Scalar};
