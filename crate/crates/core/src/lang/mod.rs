//! The surface language: lexing, parsing, validation, printing.
//!
//! Programs are structured loop nests over arrays and scalars —
//! assignments, sequencing, counted `do` loops with affine bounds, and
//! `if` conditionals whose tests are either affine or data-dependent.
//! Structure parameters, array declarations with `in`/`out` roles and
//! optional affine assumptions are declared in a header.

mod ast;
mod lex;
mod parse;
mod print;
mod validate;

pub use ast::{
    classify_condition, AExpr, ArrayDecl, Assign, BinOp, BoolExpr, CmpOp, CondClass, Do,
    ElemType, Expr, If, Program, Signature, Stmt, Unsupported,
};
pub use parse::parse;
pub use print::{pretty, to_sexpr};
pub use validate::{validate, Diagnostic};
