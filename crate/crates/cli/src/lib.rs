//! Command-line plumbing for the funkspace library: scene files, distance
//! queries, metric balls, SVG figures and the seeded property suites.

pub mod ball;
pub mod error;
pub mod metrics;
pub mod render;
pub mod scene;
pub mod verify;

pub use error::{CliError, Result};

/// Seed used by `verify` when neither `--seed` nor `FUNKSPACE_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;
