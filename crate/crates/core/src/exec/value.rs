//! Runtime values and the expression evaluator shared by every
//! executor.
//!
//! The default numeric story is exact: integer cells hold checked
//! machine integers and real cells hold arbitrary-precision rationals,
//! so results can be compared for equality without tolerances. A
//! floating mode (`real` cells as `f64`) exists for callers who want
//! hardware arithmetic; the equivalence checks never use it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::lang::{AExpr, BinOp, BoolExpr, CmpOp, ElemType, Expr};

/// A runtime value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Rat(BigRational),
    Float(f64),
    Bool(bool),
}

impl Value {
    pub fn rat(n: i64, d: i64) -> Value {
        Value::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Rat(_) => "real",
            Value::Float(_) => "float",
            Value::Bool(_) => "boolean",
        }
    }

    fn as_rat(&self) -> Option<BigRational> {
        match self {
            Value::Int(k) => Some(BigRational::from(BigInt::from(*k))),
            Value::Rat(r) => Some(r.clone()),
            Value::Float(_) | Value::Bool(_) => None,
        }
    }

    fn as_float(&self) -> Option<f64> {
        match self {
            Value::Int(k) => Some(*k as f64),
            Value::Float(x) => Some(*x),
            Value::Rat(_) | Value::Bool(_) => None,
        }
    }

    fn arith(op: BinOp, a: &Value, b: &Value) -> Result<Value, String> {
        if let (Value::Int(x), Value::Int(y)) = (a, b) {
            let r = match op {
                BinOp::Add => x.checked_add(*y),
                BinOp::Sub => x.checked_sub(*y),
                BinOp::Mul => x.checked_mul(*y),
                BinOp::Div if *y == 0 => return Err("division by zero".into()),
                // Integer division floors, matching the affine layer.
                BinOp::Div => x.checked_div_euclid(*y),
            };
            return r
                .map(Value::Int)
                .ok_or_else(|| format!("integer overflow in {x} {} {y}", op_sym(op)));
        }
        if matches!(a, Value::Float(_)) || matches!(b, Value::Float(_)) {
            let (x, y) = (
                a.as_float().ok_or_else(|| bad_operands(op, a, b))?,
                b.as_float().ok_or_else(|| bad_operands(op, a, b))?,
            );
            return Ok(Value::Float(match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x / y,
            }));
        }
        let (x, y) = (
            a.as_rat().ok_or_else(|| bad_operands(op, a, b))?,
            b.as_rat().ok_or_else(|| bad_operands(op, a, b))?,
        );
        Ok(Value::Rat(match op {
            BinOp::Add => x + y,
            BinOp::Sub => x - y,
            BinOp::Mul => x * y,
            BinOp::Div if y.is_zero() => return Err("division by zero".into()),
            BinOp::Div => x / y,
        }))
    }

    fn neg(&self) -> Result<Value, String> {
        match self {
            Value::Int(k) => k
                .checked_neg()
                .map(Value::Int)
                .ok_or_else(|| format!("integer overflow in -{k}")),
            Value::Rat(r) => Ok(Value::Rat(-r.clone())),
            Value::Float(x) => Ok(Value::Float(-x)),
            Value::Bool(_) => Err("cannot negate a boolean".into()),
        }
    }

    fn compare(op: CmpOp, a: &Value, b: &Value) -> Result<bool, String> {
        if let (Value::Bool(x), Value::Bool(y)) = (a, b) {
            return match op {
                CmpOp::Eq => Ok(x == y),
                CmpOp::Ne => Ok(x != y),
                _ => Err(format!("booleans cannot be ordered with `{op}`")),
            };
        }
        let ord = if matches!(a, Value::Float(_)) || matches!(b, Value::Float(_)) {
            let (x, y) = (
                a.as_float().ok_or_else(|| bad_compare(op, a, b))?,
                b.as_float().ok_or_else(|| bad_compare(op, a, b))?,
            );
            x.partial_cmp(&y)
                .ok_or_else(|| "comparison with NaN".to_string())?
        } else {
            let (x, y) = (
                a.as_rat().ok_or_else(|| bad_compare(op, a, b))?,
                b.as_rat().ok_or_else(|| bad_compare(op, a, b))?,
            );
            x.cmp(&y)
        };
        Ok(match op {
            CmpOp::Eq => ord == std::cmp::Ordering::Equal,
            CmpOp::Ne => ord != std::cmp::Ordering::Equal,
            CmpOp::Lt => ord == std::cmp::Ordering::Less,
            CmpOp::Le => ord != std::cmp::Ordering::Greater,
            CmpOp::Gt => ord == std::cmp::Ordering::Greater,
            CmpOp::Ge => ord != std::cmp::Ordering::Less,
        })
    }

    /// Adapt a value for storage in a cell of the given element type.
    /// `float_mode` selects how `real` cells are represented.
    pub fn coerce(self, elem: ElemType, float_mode: bool) -> Result<Value, String> {
        match (elem, self) {
            (ElemType::Integer, Value::Int(k)) => Ok(Value::Int(k)),
            (ElemType::Integer, Value::Rat(r)) if r.is_integer() => r
                .to_integer()
                .to_i64()
                .map(Value::Int)
                .ok_or_else(|| "integer overflow in stored value".into()),
            (ElemType::Integer, v) => {
                Err(format!("cannot store {} value in an integer cell", v.type_name()))
            }
            (ElemType::Real, Value::Int(k)) if float_mode => Ok(Value::Float(k as f64)),
            (ElemType::Real, Value::Int(k)) => {
                Ok(Value::Rat(BigRational::from(BigInt::from(k))))
            }
            (ElemType::Real, Value::Rat(r)) => Ok(Value::Rat(r)),
            (ElemType::Real, Value::Float(x)) => Ok(Value::Float(x)),
            (ElemType::Real, v) => {
                Err(format!("cannot store {} value in a real cell", v.type_name()))
            }
            (ElemType::Boolean, Value::Bool(b)) => Ok(Value::Bool(b)),
            (ElemType::Boolean, v) => {
                Err(format!("cannot store {} value in a boolean cell", v.type_name()))
            }
        }
    }
}

fn op_sym(op: BinOp) -> &'static str {
    match op {
        BinOp::Add => "+",
        BinOp::Sub => "-",
        BinOp::Mul => "*",
        BinOp::Div => "/",
    }
}

fn bad_operands(op: BinOp, a: &Value, b: &Value) -> String {
    format!("`{}` is not defined on {} and {}", op_sym(op), a.type_name(), b.type_name())
}

fn bad_compare(op: CmpOp, a: &Value, b: &Value) -> String {
    format!("`{op}` is not defined on {} and {}", a.type_name(), b.type_name())
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(k) => write!(f, "{k}"),
            Value::Rat(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            Value::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Float(x) => write!(f, "{x}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Integer environment binding parameters and live loop variables.
pub type IntEnv = BTreeMap<String, i64>;

/// How an evaluator satisfies one array-read occurrence: called with
/// the occurrence index (textual order, from 0), the array name and the
/// concrete subscripts.
pub type ReadFn<'a> = dyn FnMut(usize, &str, Vec<i64>) -> Result<Value, String> + 'a;

/// Evaluate a right-hand side. Reads are delegated so the same code
/// serves memory-backed, demand-driven and token-driven execution.
pub fn eval_expr(e: &Expr, env: &IntEnv, read: &mut ReadFn) -> Result<Value, String> {
    let mut k = 0;
    eval_expr_in(e, env, read, &mut k)
}

fn eval_expr_in(
    e: &Expr,
    env: &IntEnv,
    read: &mut ReadFn,
    k: &mut usize,
) -> Result<Value, String> {
    match e {
        Expr::Lit(c) => Ok(Value::Int(*c)),
        Expr::Var(v) => env
            .get(v)
            .map(|c| Value::Int(*c))
            .ok_or_else(|| format!("unbound variable `{v}`")),
        Expr::Read(name, ixs) => {
            let vals: Vec<i64> = ixs.iter().map(|ix| ix.eval(env)).collect();
            let occ = *k;
            *k += 1;
            read(occ, name, vals)
        }
        Expr::Neg(inner) => eval_expr_in(inner, env, read, k)?.neg(),
        Expr::Bin(op, a, b) => {
            let a = eval_expr_in(a, env, read, k)?;
            let b = eval_expr_in(b, env, read, k)?;
            Value::arith(*op, &a, &b)
        }
    }
}

/// Evaluate a condition. Both operands of every connective are
/// evaluated (no short-circuiting), so the set of reads performed is
/// the full textual set — the same set a condition node receives as
/// input tokens.
pub fn eval_bool(b: &BoolExpr, env: &IntEnv, read: &mut ReadFn) -> Result<bool, String> {
    let mut k = 0;
    eval_bool_in(b, env, read, &mut k)
}

fn eval_bool_in(
    b: &BoolExpr,
    env: &IntEnv,
    read: &mut ReadFn,
    k: &mut usize,
) -> Result<bool, String> {
    match b {
        BoolExpr::Cmp(op, l, r) => {
            let l = eval_expr_in(l, env, read, k)?;
            let r = eval_expr_in(r, env, read, k)?;
            Value::compare(*op, &l, &r)
        }
        BoolExpr::And(a, b) => {
            let a = eval_bool_in(a, env, read, k)?;
            let b = eval_bool_in(b, env, read, k)?;
            Ok(a && b)
        }
        BoolExpr::Or(a, b) => {
            let a = eval_bool_in(a, env, read, k)?;
            let b = eval_bool_in(b, env, read, k)?;
            Ok(a || b)
        }
        BoolExpr::Not(inner) => Ok(!eval_bool_in(inner, env, read, k)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    #[test]
    fn integer_division_floors() {
        let v = Value::arith(BinOp::Div, &Value::Int(-7), &Value::Int(2)).unwrap();
        assert_eq!(v, Value::Int(-4));
    }

    #[test]
    fn rational_division_is_exact() {
        let v = Value::arith(BinOp::Div, &Value::rat(1, 1), &Value::Int(3)).unwrap();
        assert_eq!(v, Value::rat(1, 3));
        let back = Value::arith(BinOp::Mul, &v, &Value::Int(3)).unwrap();
        assert_eq!(back, Value::rat(1, 1));
    }

    #[test]
    fn overflow_is_an_error_not_a_wrap() {
        let e = Value::arith(BinOp::Mul, &Value::Int(i64::MAX), &Value::Int(2));
        assert!(e.unwrap_err().contains("overflow"));
    }

    #[test]
    fn coercion_per_element_type() {
        assert_eq!(Value::Int(3).coerce(ElemType::Real, false).unwrap(), Value::rat(3, 1));
        assert_eq!(Value::Int(3).coerce(ElemType::Real, true).unwrap(), Value::Float(3.0));
        assert_eq!(Value::rat(6, 2).coerce(ElemType::Integer, false).unwrap(), Value::Int(3));
        assert!(Value::rat(1, 2).coerce(ElemType::Integer, false).is_err());
        assert!(Value::Bool(true).coerce(ElemType::Real, false).is_err());
    }

    #[test]
    fn reads_are_numbered_in_textual_order() {
        let p = parse(
            "param n; array X(1:n) integer in; scalar s integer out;\n\
             s = X(1) * 10 + X(2);",
        )
        .unwrap();
        let assign = p.assigns()[0].clone();
        let env: IntEnv = [("n".to_string(), 2)].into();
        let mut seen = Vec::new();
        let v = eval_expr(&assign.rhs, &env, &mut |occ, name, ixs| {
            seen.push((occ, name.to_string(), ixs.clone()));
            Ok(Value::Int(ixs[0]))
        })
        .unwrap();
        assert_eq!(v, Value::Int(12));
        assert_eq!(seen, vec![(0, "X".into(), vec![1]), (1, "X".into(), vec![2])]);
    }

    #[test]
    fn conditions_do_not_short_circuit() {
        let p = parse(
            "param n; array X(1:n) integer in; scalar s integer out;\n\
             if (1 == 1 or X(1) == 0) then s = 1; endif",
        )
        .unwrap();
        let cond = match &p.body {
            crate::lang::Stmt::If(i) => i.cond.clone(),
            _ => panic!("expected a conditional"),
        };
        let env: IntEnv = [("n".to_string(), 1)].into();
        let mut reads = 0;
        let b = eval_bool(&cond, &env, &mut |_, _, _| {
            reads += 1;
            Ok(Value::Int(5))
        })
        .unwrap();
        assert!(b);
        assert_eq!(reads, 1, "the disjunct after a true one must still read");
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(Value::rat(4, 2).to_string(), "2");
        assert_eq!(Value::rat(-3, 2).to_string(), "-3/2");
        assert_eq!(Value::Int(-5).to_string(), "-5");
    }
}
