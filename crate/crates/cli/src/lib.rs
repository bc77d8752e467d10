//! Command-line front end: reads a problem document, runs the construction
//! and all checks, and renders a deterministic report.

pub mod report;
pub mod spec;

pub use report::{render_text, run, RunError, RunReport, EXIT_CHECK_FAILURE, EXIT_INPUT_ERROR, EXIT_PASS};
pub use spec::{parse_input, parse_spec, Format, InputError, ProblemInput, ProblemSpec, VerifySpec};
