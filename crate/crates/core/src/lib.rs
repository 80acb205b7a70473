//! Exact-arithmetic laboratory for generalized Franklin partition identities.
//!
//! Three independent computation paths are provided and checked against one
//! another:
//!
//! * [`counting`]: filtered exhaustive enumeration of partitions,
//! * [`qseries`]: coefficient extraction from truncated product generating
//!   functions,
//! * [`bijection`]: the explicit maps between the O- and D-families.
//!
//! [`verify`] ties them together into named, grid-driven checks.

pub mod bijection;
pub mod cli;
pub mod counting;
pub mod error;
pub mod partition;
pub mod qseries;
pub mod verify;

pub use error::{Error, Result};
pub use partition::{parse_partition, Partition};
