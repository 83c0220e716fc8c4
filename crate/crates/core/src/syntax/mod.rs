//! Terms, concrete syntax, parser and printer.

mod env;
mod parse;
mod print;
mod term;

pub use env::DefinitionEnv;
pub use parse::{parse_configuration, parse_process, parse_program};
pub use print::print;
pub use term::{Action, Config, Key, KeyKind, Process, RuntimePrefix};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unbound constant `{0}`")]
    Unbound(String),
    #[error("recursion in `{0}` is not guarded by a prefix")]
    Unguarded(String),
    #[error("constant `{0}` is defined twice")]
    Duplicate(String),
    #[error("key {0} labels both a time action and a communication action")]
    KeyKindClash(u32),
    #[error("expected a process without history")]
    NotStandard,
}
