//! The query language: parser, session evaluation, and persistence.
//!
//! ```text
//! rel I = {(1,1),(2,1),(3,2)} over (x,y);
//! rel J = {(1,1),(2,1),(3,1),(3,2)} over (x,z);
//! let K = join(I, J);
//! solve K;                      # [(1, 1, 1), (2, 1, 1), (3, 2, 1), (3, 2, 2)]
//! let P = project(K, [x,y]);
//! solve P;                      # [(1, 1), (2, 1), (3, 2)]
//! ```
//!
//! Session files are scripts: saving writes the canonical text of every
//! binding command, loading replays it.

mod parse;
mod session;

pub use parse::{parse_command, parse_script, parse_script_at, Command, Expr, Located, Over, ShowKind};
pub use session::{load_session, save_session, Outcome, ScriptRun, Session};
