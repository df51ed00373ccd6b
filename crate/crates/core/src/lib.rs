pub mod defcone;
pub mod error;
pub mod flow;
mod linalg;
pub mod matrix;
pub mod polyhedra;
pub mod rat;
pub mod tesler;

pub use error::{Error, Result};
