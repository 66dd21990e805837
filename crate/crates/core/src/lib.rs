//! Decision procedures for the separation properties of toric orbit
//! closures, with certificates that re-verify by exact arithmetic.

pub mod binary;
pub mod cone;
pub mod decide;
pub mod error;
pub mod ideal;
pub mod io;
pub mod linalg;
pub mod num;
pub mod strata;

pub use error::{Error, Result};
