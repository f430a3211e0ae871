//! Quasi-polar spaces over small finite fields.
//!
//! Builds classical polar spaces, computes hyperplane-intersection spectra,
//! performs switching and pivoting surgeries, and runs exhaustive censuses
//! in PG(m,q) for q ≤ 32.

pub mod census;
pub mod error;
pub mod forms;
pub mod gf;
pub mod linalg;
pub mod pg;
pub mod pointset;
pub mod spectra;
pub mod surgery;

pub use error::{Error, Result};
