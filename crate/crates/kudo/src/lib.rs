//! File formats, report rendering, randomized verification suites and
//! Monte Carlo drivers behind the `kudo` binary.

pub mod commands;
pub mod error;
pub mod format;
pub mod generate;
pub mod lattice;
pub mod mc;
pub mod report;
pub mod suites;
