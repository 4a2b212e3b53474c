//! Command-line companion to `subshift-core`: spec-file ingestion,
//! subcommand runners, and deterministic CSV/JSONL report emission.

pub mod report;
pub mod runner;
pub mod specfile;

pub use report::{Format, Table};
pub use runner::{Overrides, ToolError};
pub use specfile::{load_spec, parse_spec, ResolvedSpec, SpecError, ToolSpec};
