//! PDDL reading, printing and grounding.

pub mod ast;
mod ground;
mod parser;
mod print;
mod sexpr;

pub use ground::ground;
pub use parser::{parse_domain, parse_problem, SUPPORTED_REQUIREMENTS};
pub use sexpr::Pos;

use crate::model::GroundedProblem;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PddlError {
    #[error("{pos}: syntax error: expected {expected}, found {found}")]
    Syntax { pos: Pos, expected: String, found: String },
    #[error("{pos}: unsupported feature: {construct}")]
    Unsupported { construct: String, pos: Pos },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("nonlinear expression: {0}")]
    Nonlinear(String),
}

/// Parses and grounds a domain/problem pair.
pub fn load(domain: &str, problem: &str) -> Result<GroundedProblem, PddlError> {
    let d = parse_domain(domain)?;
    let p = parse_problem(problem)?;
    ground(&d, &p)
}
