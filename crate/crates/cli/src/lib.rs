//! Scenario-driven checks of von Kármán plate wave solutions.
//!
//! A scenario names a plate, a solution family, an optional front and
//! region, and a list of checks. [`run_scenario`] evaluates them in order and
//! [`emit_report`] renders the result as JSON, CSV or a table.

pub mod report;
pub mod run;
pub mod scenario;

pub use report::{emit_report, CheckReport, Format, Record, Report, Status};
pub use run::{run_scenario, validate};
pub use scenario::{Scenario, ScenarioError};
