//! Command-line front end for `fsmdiag-core`: the `fsm v1` text format, JSON
//! reports and the `fsmdiag` command dispatcher.

pub mod cli;
pub mod format;
pub mod report;
