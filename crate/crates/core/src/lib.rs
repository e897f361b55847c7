//! Exact dataflow models of structured loop programs.
//!
//! The crate turns a structured loop program — possibly containing
//! data-dependent conditionals — into two equivalent graph forms: a
//! source graph mapping every read instance to the write instance it
//! observes, and a destination graph mapping every write instance to
//! the read instances it feeds. Both forms can be executed and checked
//! against a sequential reference interpreter.

pub mod affine;
pub mod error;
pub mod exec;
pub mod lang;
pub mod model;
pub mod tree;

pub use error::{Error, Result};
