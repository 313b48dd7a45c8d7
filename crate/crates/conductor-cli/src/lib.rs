//! Script front end for the conductor library: parse declarative scripts,
//! execute them, and emit deterministic reports.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod report;
pub mod runner;

pub use ast::Script;
pub use parser::{parse, ParseError};
pub use report::{Record, Report, Status};
pub use runner::{run, Config};
