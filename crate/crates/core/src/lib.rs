pub mod catalog;
pub mod cli;
pub mod error;
pub mod formats;
pub mod gluing;
pub mod homalg;
pub mod integers;
pub mod rings;
pub mod spectral_poset;
pub mod sweeps;
pub mod thomason;
pub mod torsion_cosilting;
pub mod tstructures;

pub use error::{Error, Result};
