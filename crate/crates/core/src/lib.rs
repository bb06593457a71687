//! Local eigenstructure of rational matrices.

pub mod dense;
pub mod error;
pub mod format;
pub mod json;
pub mod parse;
pub mod pencilroots;
pub mod poleremoval;
pub mod poly;
pub mod ratfun;
pub mod ratmat;
pub mod realization;
pub mod report;
pub mod roots;
pub mod rootvec;
pub mod scalar;
pub mod toeplitz;

pub use error::{Error, Result};
