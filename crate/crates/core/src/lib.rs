//! Random simplicial complexes in the lower multi-parameter model.

pub mod cycles;
pub mod degrees;
pub mod error;
pub mod experiment;
pub mod homology;
pub mod model;
pub mod numeric;
pub mod phase;
pub mod sampler;
pub mod spectra;

pub use error::{Error, Result};
