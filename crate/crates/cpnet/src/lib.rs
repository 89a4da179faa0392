//! Text format, random generation, benchmarking and the command line for
//! the `cpnet-core` engine.

pub mod cli;
pub mod format;
pub mod genbench;

pub use cpnet_core as core;
