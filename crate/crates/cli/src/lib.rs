//! Library side of the `densefew` command-line tool.

pub mod commands;
pub mod envelope;
pub mod error;
pub mod example;
pub mod files;
