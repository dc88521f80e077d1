//! Command-line front end: structure-spec files, command dispatch and
//! machine-readable reports.

pub mod run;
pub mod spec_file;

pub use run::{run_command, Outcome, REPORT_SCHEMA, SCHEMA_VERSION};
pub use spec_file::{export_spec, import_spec, SpecError};
