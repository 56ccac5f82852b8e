//! Scenario files, verdict records, SVG rendering and the subcommands behind
//! the `signorini` binary.

pub mod commands;
pub mod records;
pub mod render;
pub mod scenario;
