//! Weight spectra, error bounds, construction and simulation for polar codes.

pub mod bounds;
pub mod cli;
pub mod construction;
pub mod decoders;
pub mod error;
pub mod polar;
pub mod simulator;
pub mod spectra;

pub use error::{Error, Result};
