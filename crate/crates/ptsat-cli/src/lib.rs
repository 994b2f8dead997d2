//! Library side of the `ptsat` command: configuration, the benchmark
//! engine, and the subcommand implementations. The binary in `main.rs` is
//! argument parsing plus dispatch.

pub mod bench;
pub mod commands;
pub mod config;
