//! Front end for the `stphase` engine: problem files, report assembly, text rendering
//! and the golden corpus runner.

pub mod golden;
pub mod render;
pub mod run;
pub mod spec;

pub use golden::{golden, GoldenSummary};
pub use render::render_text;
pub use run::{run, run_text, Report, EXIT_ENGINE, EXIT_GOLDEN, EXIT_OK, EXIT_VALIDATION};
pub use spec::{Number, ProblemSpec, Task, ValidationError};
