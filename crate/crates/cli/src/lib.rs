//! Support code for the `force` command-line tool.

pub mod sim;
