//! Spec-file parsing, CSV output and command implementations behind the `qcarnot` binary.

pub mod commands;
mod error;
pub mod format;
pub mod specfile;

pub use commands::{identity_lines, load_spec, simulate, sweep, verify_identity, SimulateOutput, SweepRow};
pub use error::CliError;
pub use format::g17;
pub use specfile::{parse_spec, render_spec, CycleSection, CycleType, SpecFile, SuddenSection, WellSection};
