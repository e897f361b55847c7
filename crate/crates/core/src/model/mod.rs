//! Exact dataflow model of a program: one node per labeled statement,
//! condition, input, and output, with every read occurrence resolved
//! to the write instance (or initial contents) that produced its value.

pub mod names;
