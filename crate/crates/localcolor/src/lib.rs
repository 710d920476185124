//! File formats, reports and the command-line driver for
//! [`localcolor_core`].

pub mod cli;
pub mod io;
pub mod report;

pub use localcolor_core as core;
