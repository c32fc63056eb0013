//! Library side of the `logcy3` command-line tool: input documents,
//! reports and the subcommands.

pub mod commands;
pub mod document;
pub mod report;
