//! Library side of the `adiasearch` command-line tool: sweep evaluation,
//! verification suites, and the paper-numbers report.

pub mod report;
pub mod sweep;
pub mod verify;
