//! Class groups of imaginary quadratic fields, p-suitability, dihedral
//! weight-one eigenform coefficients modulo p, and the density and
//! Cohen-Lenstra scans built on top of them.

pub mod abelian;
pub mod arith;
pub mod batch;
pub mod cache;
pub mod cohen_lenstra;
pub mod cyclotomic;
pub mod density;
pub mod eigenform;
pub mod error;
pub mod forms;
pub mod gf;

pub use error::{Error, Result};
