//! File formats, reports, parallel verification and the command layer for
//! `shatterkit-core`.
//!
//! The core crate holds every algorithm and is `no_std`; this crate adds
//! what needs an operating system: reading and writing the text formats
//! (`.fam`, `.tree`, `.cover`, `.st`), a thread pool, and the `shatterkit`
//! binary.

pub mod commands;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod report;

pub use error::{Error, Result};
pub use report::{Report, Status};
pub use shatterkit_core as core;
