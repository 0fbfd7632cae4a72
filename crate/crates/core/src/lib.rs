pub mod betti;
pub mod cli;
pub mod cokernel;
pub mod error;
pub mod exactla;
pub mod lattice;
pub mod linsys;
pub mod splitting;
pub mod weyl;

pub use error::{Error, Result};

/// Seed used when none is given, so runs are reproducible by default.
pub const DEFAULT_SEED: u64 = 20240611;
