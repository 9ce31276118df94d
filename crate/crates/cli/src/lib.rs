//! Command-line front end for `qcomm-core`: an expression language over the
//! Hopf algebra and module-algebra of a session, verification suites and
//! JSON exports.

pub mod app;
pub mod error;
pub mod expr;
pub mod session;

pub use app::{execute, export, run, run_verify, Cli, Command, ExportKind, Suite, VerifyReport};
pub use error::CliError;
pub use expr::{parse, Expr, Node, Sort};
pub use session::{Session, Space, Value};
