//! Abstract syntax of the surface language.
//!
//! A program is a header — structure parameters, array and scalar
//! declarations with input/output roles, optional affine assumptions —
//! followed by one structured statement built from assignments,
//! sequencing, counted loops and two-armed conditionals. Subscripts,
//! loop bounds and declaration bounds are affine by construction
//! (`AExpr`); right-hand sides are arbitrary arithmetic (`Expr`);
//! conditional tests (`BoolExpr`) are classified at parse time as
//! affine or data-dependent.

use std::collections::BTreeMap;
use std::fmt;

use crate::affine::{AffineExpr, Cond, DivBinding, FreshVars};

/// Element type of an array or scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemType {
    Integer,
    Real,
    Boolean,
}

impl fmt::Display for ElemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemType::Integer => write!(f, "integer"),
            ElemType::Real => write!(f, "real"),
            ElemType::Boolean => write!(f, "boolean"),
        }
    }
}

/// One array (rank ≥ 1) or scalar (rank 0) declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayDecl {
    pub name: String,
    /// Per-dimension inclusive bounds, affine over the structure
    /// parameters only (never over loop variables).
    pub bounds: Vec<(AExpr, AExpr)>,
    pub elem: ElemType,
    pub is_input: bool,
    pub is_output: bool,
}

impl ArrayDecl {
    pub fn rank(&self) -> usize {
        self.bounds.len()
    }
}

/// Program header: names, roles and assumptions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    /// Structure parameters (free integer symbols of the whole model).
    pub params: Vec<String>,
    pub arrays: Vec<ArrayDecl>,
    /// Assumptions over the parameters; affine by construction.
    pub assumes: Vec<BoolExpr>,
}

impl Signature {
    pub fn array(&self, name: &str) -> Option<&ArrayDecl> {
        self.arrays.iter().find(|a| a.name == name)
    }

    pub fn is_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| p == name)
    }

    pub fn inputs(&self) -> impl Iterator<Item = &ArrayDecl> {
        self.arrays.iter().filter(|a| a.is_input)
    }

    pub fn outputs(&self) -> impl Iterator<Item = &ArrayDecl> {
        self.arrays.iter().filter(|a| a.is_output)
    }

    /// The assumptions as normalised affine conditions.
    pub fn assume_conds(&self) -> Vec<Cond> {
        let mut out = Vec::new();
        for b in &self.assumes {
            match classify_condition(b) {
                CondClass::Affine(cs) => out.extend(cs),
                CondClass::NonAffine => {
                    unreachable!("assumptions are affine by construction")
                }
            }
        }
        out
    }
}

/// A whole program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub sig: Signature,
    pub body: Stmt,
}

impl Program {
    /// Every assignment, in textual order.
    pub fn assigns(&self) -> Vec<&Assign> {
        let mut out = Vec::new();
        self.body.for_each(&mut |s| {
            if let Stmt::Assign(a) = s {
                out.push(a);
            }
        });
        out
    }

    pub fn max_rank(&self) -> usize {
        self.sig.arrays.iter().map(|a| a.rank()).max().unwrap_or(0)
    }
}

/// A statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Empty,
    Assign(Assign),
    Seq(Box<Stmt>, Box<Stmt>),
    If(If),
    Do(Do),
    /// Parsed but outside the supported class (e.g. a while loop);
    /// reported by validation, rejected by the model builder.
    Unsupported(Unsupported),
}

impl Stmt {
    /// Pre-order traversal (a statement before its substatements).
    pub fn for_each<'a>(&'a self, f: &mut impl FnMut(&'a Stmt)) {
        f(self);
        match self {
            Stmt::Seq(a, b) => {
                a.for_each(f);
                b.for_each(f);
            }
            Stmt::If(i) => {
                i.then_branch.for_each(f);
                i.else_branch.for_each(f);
            }
            Stmt::Do(d) => d.body.for_each(f),
            Stmt::Empty | Stmt::Assign(_) | Stmt::Unsupported(_) => {}
        }
    }
}

/// `target(indexes) = rhs`, labelled `<target><k>` where `k` counts
/// earlier assignments to the same array in textual order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assign {
    pub label: String,
    pub target: String,
    pub indexes: Vec<AExpr>,
    pub rhs: Expr,
    /// Enclosing loop variables, outermost first.
    pub ctx: Vec<String>,
}

/// `if <cond> then <then> [else <else>] endif`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct If {
    pub cond: BoolExpr,
    pub class: CondClass,
    /// Ordinal among data-dependent tests, in textual order; names the
    /// predicate node of the model. `None` for affine tests.
    pub pred_ordinal: Option<usize>,
    pub then_branch: Box<Stmt>,
    pub else_branch: Box<Stmt>,
    /// Enclosing loop variables, outermost first.
    pub ctx: Vec<String>,
}

/// `do var = lo, hi <body> enddo` (inclusive bounds; empty when
/// `lo > hi`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Do {
    pub var: String,
    pub lo: AExpr,
    pub hi: AExpr,
    pub body: Box<Stmt>,
    /// Enclosing loop variables, outermost first (excluding `var`).
    pub ctx: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unsupported {
    pub what: String,
    pub line: usize,
}

/// Affine surface expression: the class permitted in subscripts, loop
/// bounds, declaration bounds and assumptions. Multiplication requires
/// a literal factor; division requires a positive literal divisor and
/// means floor division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AExpr {
    Lit(i64),
    Var(String),
    Add(Box<AExpr>, Box<AExpr>),
    Sub(Box<AExpr>, Box<AExpr>),
    Neg(Box<AExpr>),
    /// literal · expr
    Mul(i64, Box<AExpr>),
    /// expr / literal with a positive literal, floor semantics
    Div(Box<AExpr>, i64),
}

impl AExpr {
    /// The linear form, if the expression contains no division.
    pub fn to_affine(&self) -> Option<AffineExpr> {
        match self {
            AExpr::Lit(c) => Some(AffineExpr::lit(*c)),
            AExpr::Var(v) => Some(AffineExpr::var(v.clone())),
            AExpr::Add(a, b) => Some(a.to_affine()?.add(&b.to_affine()?)),
            AExpr::Sub(a, b) => Some(a.to_affine()?.sub(&b.to_affine()?)),
            AExpr::Neg(e) => Some(e.to_affine()?.neg()),
            AExpr::Mul(k, e) => Some(e.to_affine()?.scale(*k)),
            AExpr::Div(..) => None,
        }
    }

    /// Linearise, materialising each division as a binding
    /// `e =: m·q + r` (emitted inner-first) and substituting the
    /// quotient variable for the division.
    pub fn lower(&self, fresh: &mut FreshVars, binds: &mut Vec<DivBinding>) -> AffineExpr {
        match self {
            AExpr::Lit(c) => AffineExpr::lit(*c),
            AExpr::Var(v) => AffineExpr::var(v.clone()),
            AExpr::Add(a, b) => a.lower(fresh, binds).add(&b.lower(fresh, binds)),
            AExpr::Sub(a, b) => a.lower(fresh, binds).sub(&b.lower(fresh, binds)),
            AExpr::Neg(e) => e.lower(fresh, binds).neg(),
            AExpr::Mul(k, e) => e.lower(fresh, binds).scale(*k),
            AExpr::Div(e, m) => {
                let inner = e.lower(fresh, binds);
                if *m == 1 {
                    return inner;
                }
                let (quot, rem) = fresh.div_pair();
                binds.push(DivBinding {
                    expr: inner,
                    modulus: *m,
                    quot: quot.clone(),
                    rem,
                });
                AffineExpr::var(quot)
            }
        }
    }

    /// Evaluate with floor division.
    pub fn eval(&self, env: &BTreeMap<String, i64>) -> i64 {
        match self {
            AExpr::Lit(c) => *c,
            AExpr::Var(v) => *env
                .get(v)
                .unwrap_or_else(|| panic!("unbound variable `{v}` in affine evaluation")),
            AExpr::Add(a, b) => a.eval(env).checked_add(b.eval(env)).expect("overflow"),
            AExpr::Sub(a, b) => a.eval(env).checked_sub(b.eval(env)).expect("overflow"),
            AExpr::Neg(e) => e.eval(env).checked_neg().expect("overflow"),
            AExpr::Mul(k, e) => k.checked_mul(e.eval(env)).expect("overflow"),
            AExpr::Div(e, m) => e.eval(env).div_euclid(*m),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(&str)) {
        match self {
            AExpr::Lit(_) => {}
            AExpr::Var(v) => f(v),
            AExpr::Add(a, b) | AExpr::Sub(a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
            AExpr::Neg(e) | AExpr::Mul(_, e) | AExpr::Div(e, _) => e.for_each_var(f),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            AExpr::Lit(_) | AExpr::Var(_) => 4,
            AExpr::Neg(_) => 3,
            AExpr::Mul(..) | AExpr::Div(..) => 2,
            AExpr::Add(..) | AExpr::Sub(..) => 1,
        }
    }

    /// Print, parenthesising whenever this node binds weaker than the
    /// position requires; faithful enough that reparsing rebuilds the
    /// same tree.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let parens = self.prec() < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            AExpr::Lit(c) => write!(f, "{c}")?,
            AExpr::Var(v) => write!(f, "{v}")?,
            AExpr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            AExpr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            AExpr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 4)?;
            }
            AExpr::Mul(k, e) => {
                write!(f, "{k}*")?;
                e.fmt_prec(f, 4)?;
            }
            AExpr::Div(e, m) => {
                e.fmt_prec(f, 4)?;
                write!(f, "/{m}")?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for AExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    fn sym(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

/// Right-hand-side expression: arithmetic over constants, parameters,
/// loop variables and array reads. The model leaves it uninterpreted —
/// only the reads matter there — but the interpreters execute it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Lit(i64),
    Var(String),
    /// `A(e_1, ..., e_k)`, affine subscripts by construction; a scalar
    /// read has no subscripts.
    Read(String, Vec<AExpr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Every array-read occurrence, in textual order.
    pub fn reads(&self) -> Vec<(&str, &[AExpr])> {
        let mut out = Vec::new();
        self.collect_reads(&mut out);
        out
    }

    fn collect_reads<'a>(&'a self, out: &mut Vec<(&'a str, &'a [AExpr])>) {
        match self {
            Expr::Lit(_) | Expr::Var(_) => {}
            Expr::Read(name, ixs) => out.push((name, ixs)),
            Expr::Neg(e) => e.collect_reads(out),
            Expr::Bin(_, a, b) => {
                a.collect_reads(out);
                b.collect_reads(out);
            }
        }
    }

    /// Constant value, if the expression folds to one without overflow.
    pub fn const_fold(&self) -> Option<i64> {
        match self {
            Expr::Lit(c) => Some(*c),
            Expr::Var(_) | Expr::Read(..) => None,
            Expr::Neg(e) => e.const_fold()?.checked_neg(),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.const_fold()?, b.const_fold()?);
                match op {
                    BinOp::Add => a.checked_add(b),
                    BinOp::Sub => a.checked_sub(b),
                    BinOp::Mul => a.checked_mul(b),
                    BinOp::Div if b > 0 => Some(a.div_euclid(b)),
                    BinOp::Div => None,
                }
            }
        }
    }

    /// Convert into the affine surface class; the error explains what
    /// disqualifies the expression.
    pub fn to_aexpr(&self) -> Result<AExpr, String> {
        if let Some(k) = self.const_fold() {
            return Ok(AExpr::Lit(k));
        }
        match self {
            Expr::Lit(c) => Ok(AExpr::Lit(*c)),
            Expr::Var(v) => Ok(AExpr::Var(v.clone())),
            Expr::Read(name, _) => Err(format!("array element `{name}(...)` participates")),
            Expr::Neg(e) => Ok(AExpr::Neg(Box::new(e.to_aexpr()?))),
            Expr::Bin(BinOp::Add, a, b) => {
                Ok(AExpr::Add(Box::new(a.to_aexpr()?), Box::new(b.to_aexpr()?)))
            }
            Expr::Bin(BinOp::Sub, a, b) => {
                Ok(AExpr::Sub(Box::new(a.to_aexpr()?), Box::new(b.to_aexpr()?)))
            }
            Expr::Bin(BinOp::Mul, a, b) => {
                if let Some(k) = a.const_fold() {
                    Ok(AExpr::Mul(k, Box::new(b.to_aexpr()?)))
                } else if let Some(k) = b.const_fold() {
                    Ok(AExpr::Mul(k, Box::new(a.to_aexpr()?)))
                } else {
                    Err("product of two non-constant factors".into())
                }
            }
            Expr::Bin(BinOp::Div, a, b) => match b.const_fold() {
                Some(m) if m >= 1 => Ok(AExpr::Div(Box::new(a.to_aexpr()?), m)),
                Some(_) => Err("division by a non-positive literal".into()),
                None => Err("division by a non-literal".into()),
            },
        }
    }

    /// Purely affine view: no reads, no division.
    pub fn as_affine(&self) -> Option<AffineExpr> {
        self.to_aexpr().ok()?.to_affine()
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Lit(_) | Expr::Var(_) | Expr::Read(..) => 4,
            Expr::Neg(_) => 3,
            Expr::Bin(op, ..) => op.prec(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let parens = self.prec() < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Lit(c) => write!(f, "{c}")?,
            Expr::Var(v) => write!(f, "{v}")?,
            Expr::Read(name, ixs) => {
                write!(f, "{name}")?;
                if !ixs.is_empty() {
                    write!(f, "(")?;
                    for (k, ix) in ixs.iter().enumerate() {
                        if k > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{ix}")?;
                    }
                    write!(f, ")")?;
                }
            }
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 4)?;
            }
            Expr::Bin(op, a, b) => {
                a.fmt_prec(f, op.prec())?;
                write!(f, " {} ", op.sym())?;
                b.fmt_prec(f, op.prec() + 1)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "/=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        };
        write!(f, "{s}")
    }
}

/// A conditional test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    Cmp(CmpOp, Expr, Expr),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Not(Box<BoolExpr>),
}

impl BoolExpr {
    /// Every array-read occurrence, in textual order.
    pub fn reads(&self) -> Vec<(&str, &[AExpr])> {
        let mut out = Vec::new();
        self.collect_reads(&mut out);
        out
    }

    fn collect_reads<'a>(&'a self, out: &mut Vec<(&'a str, &'a [AExpr])>) {
        match self {
            BoolExpr::Cmp(_, a, b) => {
                a.collect_reads(out);
                b.collect_reads(out);
            }
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.collect_reads(out);
                b.collect_reads(out);
            }
            BoolExpr::Not(e) => e.collect_reads(out),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            BoolExpr::Or(..) => 1,
            BoolExpr::And(..) => 2,
            BoolExpr::Not(_) => 3,
            BoolExpr::Cmp(..) => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let parens = self.prec() < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            BoolExpr::Cmp(op, a, b) => write!(f, "{a} {op} {b}")?,
            BoolExpr::And(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " and ")?;
                b.fmt_prec(f, 3)?;
            }
            BoolExpr::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " or ")?;
                b.fmt_prec(f, 2)?;
            }
            BoolExpr::Not(e) => {
                write!(f, "not ")?;
                e.fmt_prec(f, 4)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Outcome of classifying a conditional test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CondClass {
    /// Equivalent to a conjunction of affine comparisons; the
    /// conjuncts are recorded in textual order.
    Affine(Vec<Cond>),
    /// Anything else — the test stays a runtime predicate.
    NonAffine,
}

/// Classify a test: affine iff it is a conjunction of comparisons whose
/// sides are affine in the loop variables and parameters (no array
/// reads, no division).
pub fn classify_condition(b: &BoolExpr) -> CondClass {
    fn go(b: &BoolExpr, out: &mut Vec<Cond>) -> bool {
        match b {
            BoolExpr::Cmp(op, l, r) => {
                let (Some(a), Some(b)) = (l.as_affine(), r.as_affine()) else {
                    return false;
                };
                out.push(match op {
                    CmpOp::Eq => Cond::eq(&a, &b),
                    CmpOp::Ne => Cond::Neq(a.sub(&b)),
                    CmpOp::Lt => Cond::gt(b.sub(&a)),
                    CmpOp::Le => Cond::ge(&b, &a),
                    CmpOp::Gt => Cond::gt(a.sub(&b)),
                    CmpOp::Ge => Cond::ge(&a, &b),
                });
                true
            }
            BoolExpr::And(x, y) => go(x, out) && go(y, out),
            BoolExpr::Or(..) | BoolExpr::Not(_) => false,
        }
    }
    let mut out = Vec::new();
    if go(b, &mut out) {
        CondClass::Affine(out)
    } else {
        CondClass::NonAffine
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(e: &AExpr, pairs: &[(&str, i64)]) -> i64 {
        let env: BTreeMap<String, i64> =
            pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        e.eval(&env)
    }

    #[test]
    fn affine_test_classifies_to_conditions() {
        // 2*i - j + 1 > 0
        let b = BoolExpr::Cmp(
            CmpOp::Gt,
            Expr::Bin(
                BinOp::Add,
                Box::new(Expr::Bin(
                    BinOp::Sub,
                    Box::new(Expr::Bin(
                        BinOp::Mul,
                        Box::new(Expr::Lit(2)),
                        Box::new(Expr::Var("i".into())),
                    )),
                    Box::new(Expr::Var("j".into())),
                )),
                Box::new(Expr::Lit(1)),
            ),
            Expr::Lit(0),
        );
        match classify_condition(&b) {
            CondClass::Affine(cs) => {
                assert_eq!(cs.len(), 1);
                // 2i - j + 1 > 0  ≡  2i - j >= 0
                assert_eq!(cs[0].to_string(), "2i >= j");
            }
            CondClass::NonAffine => panic!("expected affine"),
        }
    }

    #[test]
    fn array_value_in_test_is_data_dependent() {
        // R < X(i): a scalar read compared against an array read.
        let b = BoolExpr::Cmp(
            CmpOp::Lt,
            Expr::Read("R".into(), vec![]),
            Expr::Read("X".into(), vec![AExpr::Var("i".into())]),
        );
        assert_eq!(classify_condition(&b), CondClass::NonAffine);
    }

    #[test]
    fn equality_of_counter_and_parameter_is_affine() {
        let b = BoolExpr::Cmp(CmpOp::Eq, Expr::Var("i".into()), Expr::Var("n".into()));
        match classify_condition(&b) {
            CondClass::Affine(cs) => assert_eq!(cs.len(), 1),
            CondClass::NonAffine => panic!("expected affine"),
        }
    }

    #[test]
    fn division_evaluates_with_floor_semantics() {
        // (i + 1)/2 at i = -4 is floor(-3/2) = -2.
        let e = AExpr::Div(
            Box::new(AExpr::Add(
                Box::new(AExpr::Var("i".into())),
                Box::new(AExpr::Lit(1)),
            )),
            2,
        );
        assert_eq!(ev(&e, &[("i", -4)]), -2);
        assert_eq!(ev(&e, &[("i", 3)]), 2);
        assert_eq!(ev(&e, &[("i", 4)]), 2);
    }

    #[test]
    fn lowering_division_introduces_a_binding() {
        let e = AExpr::Div(
            Box::new(AExpr::Add(
                Box::new(AExpr::Var("i".into())),
                Box::new(AExpr::Lit(1)),
            )),
            2,
        );
        let mut fresh = FreshVars::new(1);
        let mut binds = Vec::new();
        let lin = e.lower(&mut fresh, &mut binds);
        assert_eq!(binds.len(), 1);
        assert_eq!(binds[0].modulus, 2);
        assert_eq!(binds[0].expr, AffineExpr::var("i").add_const(1));
        assert_eq!(lin, AffineExpr::var(binds[0].quot.clone()));
    }

    #[test]
    fn printing_keeps_structure_explicit() {
        // a - (b - c) must not print as a - b - c.
        let e = AExpr::Sub(
            Box::new(AExpr::Var("a".into())),
            Box::new(AExpr::Sub(
                Box::new(AExpr::Var("b".into())),
                Box::new(AExpr::Var("c".into())),
            )),
        );
        assert_eq!(e.to_string(), "a - (b - c)");
        let m = AExpr::Mul(
            2,
            Box::new(AExpr::Add(
                Box::new(AExpr::Var("i".into())),
                Box::new(AExpr::Lit(1)),
            )),
        );
        assert_eq!(m.to_string(), "2*(i + 1)");
        assert_eq!(AExpr::Div(Box::new(m), 3).to_string(), "(2*(i + 1))/3");
    }

    #[test]
    fn reads_are_reported_in_textual_order() {
        // S + X(i) * Y(j)
        let e = Expr::Bin(
            BinOp::Add,
            Box::new(Expr::Read("S".into(), vec![])),
            Box::new(Expr::Bin(
                BinOp::Mul,
                Box::new(Expr::Read("X".into(), vec![AExpr::Var("i".into())])),
                Box::new(Expr::Read("Y".into(), vec![AExpr::Var("j".into())])),
            )),
        );
        let names: Vec<&str> = e.reads().iter().map(|(n, _)| *n).collect();
        assert_eq!(names, ["S", "X", "Y"]);
    }
}
