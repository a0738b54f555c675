//! Subsuming-mutant selection lab.
//!
//! Pipeline pieces: corpus I/O, token abstraction, subsumption ground truth,
//! selection strategies (sequence learner, boosted trees, random), the
//! mutation-guided testing simulation and prediction metrics.

pub mod abstraction;
pub mod baselines;
mod bits;
pub mod corpus;
pub mod error;
pub mod features;
pub mod fixtures;
pub mod learner;
pub mod metrics;
pub mod planted;
pub mod seed;
pub mod simulation;
pub mod subsumption;
pub mod toy;

pub use bits::BitRow;
pub use error::{Error, Result};
