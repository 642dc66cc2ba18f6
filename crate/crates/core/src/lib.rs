//! Permutation groups, block systems, closures and CI-style conjugacy checks
//! for Cayley objects of small groups.

pub mod blocks;
pub mod ci;
pub mod closures;
mod chain;
pub mod error;
pub mod group;
pub mod oracle;
pub mod perm;
pub mod repro;
pub mod subgroups;
pub mod zoo;

pub use blocks::BlockSystem;
pub use error::{Error, Result};
pub use group::{PermGroup, TransitivityProfile, DEFAULT_CAP};
pub use perm::Permutation;
