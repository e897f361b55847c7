//! Crate-wide error type.
//!
//! Analysis failures (bad syntax, invalid programs, inconsistent graphs,
//! runtime faults) are reported as `Error`; internal invariant breaches
//! panic instead, since they indicate a bug rather than bad input.

/// Any failure surfaced to callers of the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Lexical or grammatical error in a program or valuation file.
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    /// The program parsed but violates a static rule (scoping, affinity
    /// of subscripts and loop bounds, duplicate labels, ...).
    #[error("invalid program: {0}")]
    Validate(String),

    /// Model construction could not produce a well-formed graph.
    #[error("model construction failed: {0}")]
    Model(String),

    /// Graph inversion could not produce enumerable destinations.
    #[error("inversion failed: {0}")]
    Invert(String),

    /// A concrete execution fault: out-of-bounds access, read of a value
    /// that was never written, missing valuation entry, and the like.
    #[error("runtime error: {0}")]
    Run(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validate(msg: impl Into<String>) -> Self {
        Error::Validate(msg.into())
    }
    pub fn model(msg: impl Into<String>) -> Self {
        Error::Model(msg.into())
    }
    pub fn invert(msg: impl Into<String>) -> Self {
        Error::Invert(msg.into())
    }
    pub fn run(msg: impl Into<String>) -> Self {
        Error::Run(msg.into())
    }
}
