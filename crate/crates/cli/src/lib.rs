//! Library surface of the `cspace` command-line tool.

pub mod commands;
pub mod dot;
