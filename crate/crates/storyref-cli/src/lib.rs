//! Library surface of the `storyref` command-line tool, exposed so the
//! integration tests can drive the pipeline without spawning processes.

pub mod commands;
pub mod comparison;
pub mod config;
pub mod render;
