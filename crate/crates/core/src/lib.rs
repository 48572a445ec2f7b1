pub mod analytic;
pub mod cli;
pub mod decomp;
pub mod dependence;
pub mod error;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod rng;
pub mod rotation;
pub mod scalar;
pub mod synth;

pub use error::{Error, ErrorClass, Result};
