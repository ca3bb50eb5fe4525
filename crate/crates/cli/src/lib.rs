//! A small declarative language for stating identities of oriented
//! cohomology theories, its evaluator, and report emitters.

pub mod ast;
pub mod emit;
pub mod error;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod render;

pub use error::ParseError;
pub use eval::{run, RunOptions};
pub use parser::parse;
