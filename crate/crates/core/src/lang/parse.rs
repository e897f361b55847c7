//! Recursive-descent parser: header clauses, then the statement body.
//!
//! The parser resolves everything that must hold for the affine model
//! to exist at all — scoping of bare names, affinity of subscripts and
//! loop bounds, statement labels, enclosing-loop contexts, and the
//! affine/data-dependent classification of every test. Violations that
//! still produce a well-shaped tree (assignments to undeclared arrays,
//! while-style loops, rank mismatches) are left for validation so they
//! can be reported together rather than one syntax error at a time.

use std::collections::BTreeMap;

use super::ast::*;
use super::lex::{lex, SpannedTok, Tok};
use crate::error::{Error, Result};

/// Parse a program. Statements are separated by `;` (extra separators
/// are harmless); assignments to an array `A` are labelled `A0`, `A1`,
/// ... in textual order.
pub fn parse(src: &str) -> Result<Program> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        sig: Signature::default(),
        loops: Vec::new(),
        labels: BTreeMap::new(),
        preds: 0,
    };
    let program = p.program()?;
    Ok(program)
}

/// Of two syntax errors from alternative readings of the same text,
/// the one that got further (ties favour the first, i.e. the reading
/// tried first).
fn farther(a: Error, b: Error) -> Error {
    let pos = |e: &Error| match e {
        Error::Syntax { line, col, .. } => (*line, *col),
        _ => (0, 0),
    };
    if pos(&a) >= pos(&b) {
        a
    } else {
        b
    }
}

struct Parser {
    toks: Vec<SpannedTok>,
    pos: usize,
    sig: Signature,
    /// Loop variables currently in scope, outermost first.
    loops: Vec<String>,
    /// Per-array assignment counters for labelling.
    labels: BTreeMap<String, usize>,
    /// Count of data-dependent tests seen so far.
    preds: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn bump(&mut self) -> SpannedTok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: impl Into<String>) -> Error {
        self.err_at(self.pos, msg)
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        let s = &self.toks[pos.min(self.toks.len() - 1)];
        Error::Syntax { line: s.line, col: s.col, msg: msg.into() }
    }

    fn expect(&mut self, t: Tok) -> Result<SpannedTok> {
        if self.at(&t) {
            Ok(self.bump())
        } else {
            Err(self.err_here(format!(
                "expected {}, found {}",
                t.describe(),
                self.peek().describe()
            )))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Tok::Ident(n) => {
                let n = n.clone();
                self.bump();
                Ok(n)
            }
            other => Err(self.err_here(format!("expected {what}, found {}", other.describe()))),
        }
    }

    // ---- header ---------------------------------------------------

    fn program(&mut self) -> Result<Program> {
        loop {
            match self.peek() {
                Tok::KwParam => self.param_clause()?,
                Tok::KwArray => self.decl_clause(false)?,
                Tok::KwScalar => self.decl_clause(true)?,
                Tok::KwAssume => self.assume_clause()?,
                _ => break,
            }
        }
        let body = self.seq(&[Tok::Eof])?;
        Ok(Program { sig: std::mem::take(&mut self.sig), body })
    }

    fn param_clause(&mut self) -> Result<()> {
        self.bump(); // param
        loop {
            let name = self.ident("parameter name")?;
            self.sig.params.push(name);
            if self.at(&Tok::Comma) {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::Semi)?;
        Ok(())
    }

    fn decl_clause(&mut self, scalar: bool) -> Result<()> {
        self.bump(); // array | scalar
        let name = self.ident(if scalar { "scalar name" } else { "array name" })?;
        let mut bounds = Vec::new();
        if !scalar {
            self.expect(Tok::LParen)?;
            loop {
                let lo = self.aexpr("declaration bound")?;
                self.expect(Tok::Colon)?;
                let hi = self.aexpr("declaration bound")?;
                bounds.push((lo, hi));
                if self.at(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        let elem = match self.peek() {
            Tok::KwInteger => ElemType::Integer,
            Tok::KwReal => ElemType::Real,
            Tok::KwBoolean => ElemType::Boolean,
            other => {
                return Err(self.err_here(format!(
                    "expected element type (`integer`, `real` or `boolean`), found {}",
                    other.describe()
                )))
            }
        };
        self.bump();
        let (mut is_input, mut is_output) = (false, false);
        loop {
            match self.peek() {
                Tok::KwIn => {
                    is_input = true;
                    self.bump();
                }
                Tok::KwOut => {
                    is_output = true;
                    self.bump();
                }
                _ => break,
            }
        }
        self.expect(Tok::Semi)?;
        self.sig.arrays.push(ArrayDecl { name, bounds, elem, is_input, is_output });
        Ok(())
    }

    fn assume_clause(&mut self) -> Result<()> {
        let at = self.pos;
        self.bump(); // assume
        let cond = self.boolexpr()?;
        self.expect(Tok::Semi)?;
        match classify_condition(&cond) {
            CondClass::Affine(_) => {
                self.sig.assumes.push(cond);
                Ok(())
            }
            CondClass::NonAffine => Err(self.err_at(
                at,
                "assumption must be an affine condition over the parameters",
            )),
        }
    }

    // ---- statements -----------------------------------------------

    /// Parse statements until one of `closers` is next (not consumed).
    fn seq(&mut self, closers: &[Tok]) -> Result<Stmt> {
        let mut acc: Option<Stmt> = None;
        loop {
            while self.at(&Tok::Semi) {
                self.bump();
            }
            if closers.iter().any(|c| self.at(c)) {
                break;
            }
            let s = self.stmt()?;
            acc = Some(match acc {
                None => s,
                Some(a) => Stmt::Seq(Box::new(a), Box::new(s)),
            });
        }
        Ok(acc.unwrap_or(Stmt::Empty))
    }

    fn stmt(&mut self) -> Result<Stmt> {
        match self.peek() {
            Tok::KwDo => self.do_stmt(),
            Tok::KwIf => self.if_stmt(),
            Tok::KwWhile => self.while_unsupported("while loop"),
            Tok::Ident(_) => self.assign_stmt(),
            other => Err(self.err_here(format!("expected a statement, found {}", other.describe()))),
        }
    }

    fn do_stmt(&mut self) -> Result<Stmt> {
        self.bump(); // do
        if self.at(&Tok::KwWhile) {
            return self.while_unsupported("do while loop");
        }
        let var = self.ident("loop variable")?;
        self.expect(Tok::Assign)?;
        let lo = self.aexpr("loop bound")?;
        self.expect(Tok::Comma)?;
        let hi = self.aexpr("loop bound")?;
        let ctx = self.loops.clone();
        self.loops.push(var.clone());
        let body = self.seq(&[Tok::KwEnddo])?;
        self.expect(Tok::KwEnddo)?;
        self.loops.pop();
        Ok(Stmt::Do(Do { var, lo, hi, body: Box::new(body), ctx }))
    }

    fn if_stmt(&mut self) -> Result<Stmt> {
        self.bump(); // if
        let cond = self.boolexpr()?;
        let class = classify_condition(&cond);
        let pred_ordinal = match class {
            CondClass::NonAffine => {
                let k = self.preds;
                self.preds += 1;
                Some(k)
            }
            CondClass::Affine(_) => None,
        };
        self.expect(Tok::KwThen)?;
        let then_branch = self.seq(&[Tok::KwElse, Tok::KwEndif])?;
        let else_branch = if self.at(&Tok::KwElse) {
            self.bump();
            self.seq(&[Tok::KwEndif])?
        } else {
            Stmt::Empty
        };
        self.expect(Tok::KwEndif)?;
        Ok(Stmt::If(If {
            cond,
            class,
            pred_ordinal,
            then_branch: Box::new(then_branch),
            else_branch: Box::new(else_branch),
            ctx: self.loops.clone(),
        }))
    }

    /// `while <cond> [do] ... enddo` or `do while <cond> ... enddo`:
    /// recognised so validation can report it, never modelled.
    fn while_unsupported(&mut self, what: &str) -> Result<Stmt> {
        let line = self.toks[self.pos].line;
        self.bump(); // while
        let _ = self.boolexpr()?;
        if self.at(&Tok::KwDo) {
            self.bump();
        }
        let _ = self.seq(&[Tok::KwEnddo])?;
        self.expect(Tok::KwEnddo)?;
        Ok(Stmt::Unsupported(Unsupported { what: what.into(), line }))
    }

    fn assign_stmt(&mut self) -> Result<Stmt> {
        // Assignment targets are resolved leniently: validation reports
        // undeclared or non-array targets.
        let target = self.ident("assignment target")?;
        let mut indexes = Vec::new();
        if self.at(&Tok::LParen) {
            self.bump();
            if !self.at(&Tok::RParen) {
                loop {
                    indexes.push(self.aexpr("subscript")?);
                    if self.at(&Tok::Comma) {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen)?;
        }
        self.expect(Tok::Assign)?;
        let rhs = self.expr()?;
        let counter = self.labels.entry(target.clone()).or_insert(0);
        let label = format!("{target}{counter}");
        *counter += 1;
        Ok(Stmt::Assign(Assign { label, target, indexes, rhs, ctx: self.loops.clone() }))
    }

    // ---- expressions ----------------------------------------------

    /// Parse an expression that must fall in the affine surface class.
    fn aexpr(&mut self, what: &str) -> Result<AExpr> {
        let at = self.pos;
        let e = self.expr()?;
        e.to_aexpr()
            .map_err(|why| self.err_at(at, format!("non-affine {what}: {why}")))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            acc = Expr::Bin(op, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            acc = Expr::Bin(op, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.at(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(k) => {
                self.bump();
                Ok(Expr::Lit(k))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.pos;
                self.bump();
                if self.at(&Tok::LParen) {
                    self.bump();
                    let mut ixs = Vec::new();
                    if !self.at(&Tok::RParen) {
                        loop {
                            ixs.push(self.aexpr("subscript")?);
                            if self.at(&Tok::Comma) {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Read(name, ixs))
                } else {
                    self.resolve_bare(&name, at)
                }
            }
            other => Err(self.err_here(format!("expected an expression, found {}", other.describe()))),
        }
    }

    /// A bare name is a loop variable or parameter (a `Var`), or a
    /// declared rank-0 array (a `Read`). Anything else is undeclared.
    fn resolve_bare(&self, name: &str, at: usize) -> Result<Expr> {
        if self.loops.iter().any(|l| l == name) || self.sig.is_param(name) {
            Ok(Expr::Var(name.to_string()))
        } else if self.sig.array(name).is_some() {
            Ok(Expr::Read(name.to_string(), Vec::new()))
        } else {
            Err(self.err_at(at, format!("use of undeclared name `{name}`")))
        }
    }

    // ---- conditions -----------------------------------------------

    fn boolexpr(&mut self) -> Result<BoolExpr> {
        let mut acc = self.bool_term()?;
        while self.at(&Tok::KwOr) {
            self.bump();
            let rhs = self.bool_term()?;
            acc = BoolExpr::Or(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn bool_term(&mut self) -> Result<BoolExpr> {
        let mut acc = self.bool_factor()?;
        while self.at(&Tok::KwAnd) {
            self.bump();
            let rhs = self.bool_factor()?;
            acc = BoolExpr::And(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn bool_factor(&mut self) -> Result<BoolExpr> {
        if self.at(&Tok::KwNot) {
            self.bump();
            return Ok(BoolExpr::Not(Box::new(self.bool_factor()?)));
        }
        // `(` is ambiguous: it may group a boolean (`(a < b) and ...`)
        // or an arithmetic subexpression (`(a + b) < c`). Try the
        // boolean reading first and fall back on a comparison; if both
        // fail, report whichever error got further.
        if self.at(&Tok::LParen) {
            let save = self.pos;
            self.bump();
            match self.boolexpr() {
                Ok(b) if self.at(&Tok::RParen) => {
                    self.bump();
                    return Ok(b);
                }
                Ok(_) => self.pos = save,
                Err(be) => {
                    self.pos = save;
                    return self.comparison().map_err(|ce| farther(be, ce));
                }
            }
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<BoolExpr> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::EqEq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            Tok::Assign => {
                return Err(self.err_here("expected comparison operator (use `==` for equality)"))
            }
            other => {
                return Err(self.err_here(format!(
                    "expected comparison operator, found {}",
                    other.describe()
                )))
            }
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(BoolExpr::Cmp(op, lhs, rhs))
    }
}
