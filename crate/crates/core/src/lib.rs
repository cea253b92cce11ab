pub mod error;
pub mod field;

pub use error::{Error, Result};
pub mod decomp;
pub mod linops;
pub mod budget;
pub mod builder;
pub mod quotient;
pub mod zeta;
pub mod classify;
pub mod format;
