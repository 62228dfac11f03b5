pub mod error;
pub mod graph;
pub mod instance;
pub mod kminwp;
pub mod mop;
pub mod oracle;
pub mod pc;
pub mod sweep;

pub use error::{Error, Result};

/// Absolute tolerance for every floating-point comparison.
pub const TOL: f64 = 1e-9;
