//! Exact integer affine machinery: expressions, conditions, condition
//! systems with division bindings, satisfiability, variable elimination
//! and one-dimensional parametric integer maximisation.
//!
//! Everything here is integer-exact. Arithmetic is checked `i64`; an
//! overflow aborts loudly rather than silently wrapping, which is the
//! right trade-off for the desk-scale systems this crate manipulates.

mod cond;
mod eliminate;
pub(crate) mod pim;
mod sat;

pub use cond::{Cond, CondSystem, DivBinding, PredCond, SysItem};
pub use eliminate::{eliminate, solve_equalities, Solved};
pub use pim::{param_int_max, Piece, Piecewise};
pub use sat::satisfiable;

use std::collections::BTreeMap;
use std::fmt;

/// Checked addition; aborts on overflow.
pub(crate) fn iadd(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow in affine arithmetic")
}

/// Checked multiplication; aborts on overflow.
pub(crate) fn imul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer overflow in affine arithmetic")
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// An affine expression: an integer constant plus a sum of variables with
/// non-zero integer coefficients. Variables are plain names; the map is
/// ordered so printing and hashing are deterministic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AffineExpr {
    constant: i64,
    coeffs: BTreeMap<String, i64>,
}

impl AffineExpr {
    pub fn lit(c: i64) -> Self {
        AffineExpr { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn var(name: impl Into<String>) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.into(), 1);
        AffineExpr { constant: 0, coeffs }
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    pub fn coeff(&self, var: &str) -> i64 {
        self.coeffs.get(var).copied().unwrap_or(0)
    }

    pub fn is_const(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The constant value if the expression has no variables.
    pub fn as_const(&self) -> Option<i64> {
        if self.is_const() {
            Some(self.constant)
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, i64)> {
        self.coeffs.iter().map(|(v, &c)| (v.as_str(), c))
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(|v| v.as_str())
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.coeffs.contains_key(var)
    }

    pub fn add(&self, other: &AffineExpr) -> AffineExpr {
        let mut out = self.clone();
        out.constant = iadd(out.constant, other.constant);
        for (v, &c) in &other.coeffs {
            out.add_term(v, c);
        }
        out
    }

    pub fn sub(&self, other: &AffineExpr) -> AffineExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AffineExpr {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> AffineExpr {
        if k == 0 {
            return AffineExpr::lit(0);
        }
        let mut out = self.clone();
        out.constant = imul(out.constant, k);
        for c in out.coeffs.values_mut() {
            *c = imul(*c, k);
        }
        out
    }

    pub fn add_const(&self, c: i64) -> AffineExpr {
        let mut out = self.clone();
        out.constant = iadd(out.constant, c);
        out
    }

    fn add_term(&mut self, var: &str, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(var.to_string()).or_insert(0);
        *entry = iadd(*entry, c);
        if *entry == 0 {
            self.coeffs.remove(var);
        }
    }

    /// Replace `var` by `repl` (exact; the coefficient multiplies through).
    pub fn subst(&self, var: &str, repl: &AffineExpr) -> AffineExpr {
        let c = self.coeff(var);
        if c == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        out.coeffs.remove(var);
        out.add(&repl.scale(c))
    }

    /// Apply several substitutions simultaneously.
    pub fn subst_map(&self, map: &BTreeMap<String, AffineExpr>) -> AffineExpr {
        let mut out = AffineExpr::lit(self.constant);
        for (v, &c) in &self.coeffs {
            match map.get(v) {
                Some(repl) => out = out.add(&repl.scale(c)),
                None => out.add_term(v, c),
            }
        }
        out
    }

    /// Rename a variable (must not collide with an existing one).
    pub fn rename(&self, from: &str, to: &str) -> AffineExpr {
        self.subst(from, &AffineExpr::var(to))
    }

    /// Evaluate under a complete environment. Missing variables are an
    /// internal error: the caller is responsible for scoping.
    pub fn eval(&self, env: &BTreeMap<String, i64>) -> i64 {
        let mut acc = self.constant;
        for (v, &c) in &self.coeffs {
            let val = *env
                .get(v)
                .unwrap_or_else(|| panic!("unbound variable `{v}` in affine evaluation"));
            acc = iadd(acc, imul(c, val));
        }
        acc
    }

    /// Greatest common divisor of the variable coefficients (0 if none).
    pub fn coeff_gcd(&self) -> i64 {
        self.coeffs.values().fold(0, |g, &c| gcd(g, c))
    }

    /// Divide every coefficient and the constant by `d` exactly.
    pub fn div_exact(&self, d: i64) -> AffineExpr {
        assert!(d != 0 && self.constant % d == 0);
        let mut out = AffineExpr::lit(self.constant / d);
        for (v, &c) in &self.coeffs {
            assert!(c % d == 0);
            out.add_term(v, c / d);
        }
        out
    }

    /// Format one side of a relation: terms with positive coefficients.
    fn fmt_side(terms: &[(String, i64)], constant: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in terms {
            if first {
                if *c == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{c}{v}")?;
                }
                first = false;
            } else if *c == 1 {
                write!(f, " + {v}")?;
            } else {
                write!(f, " + {c}{v}")?;
            }
        }
        if constant != 0 || first {
            if first {
                write!(f, "{constant}")?;
            } else if constant > 0 {
                write!(f, " + {constant}")?;
            } else {
                write!(f, " - {}", -constant)?;
            }
        }
        Ok(())
    }

    /// Print `self op 0` as a balanced relation, e.g. `i - n = 0` prints
    /// as `i = n` and `i - 1 >= 0` as `i >= 1`.
    pub(crate) fn fmt_relation(&self, op: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pos: Vec<(String, i64)> = Vec::new();
        let mut neg: Vec<(String, i64)> = Vec::new();
        for (v, &c) in &self.coeffs {
            if c > 0 {
                pos.push((v.clone(), c));
            } else {
                neg.push((v.clone(), -c));
            }
        }
        let (lc, rc) = if self.constant > 0 { (self.constant, 0) } else { (0, -self.constant) };
        if pos.is_empty() && lc == 0 && !neg.is_empty() {
            // Nothing on the left: flip sides and the operator.
            let flipped = match op {
                ">=" => "<=",
                "<=" => ">=",
                other => other,
            };
            Self::fmt_side(&neg, rc, f)?;
            write!(f, " {flipped} ")?;
            return Self::fmt_side(&[], lc, f);
        }
        Self::fmt_side(&pos, lc, f)?;
        write!(f, " {op} ")?;
        Self::fmt_side(&neg, rc, f)
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &c) in &self.coeffs {
            if first {
                match c {
                    1 => write!(f, "{v}")?,
                    -1 => write!(f, "-{v}")?,
                    _ => write!(f, "{c}{v}")?,
                }
                first = false;
            } else if c == 1 {
                write!(f, " + {v}")?;
            } else if c == -1 {
                write!(f, " - {v}")?;
            } else if c > 0 {
                write!(f, " + {c}{v}")?;
            } else {
                write!(f, " - {}{v}", -c)?;
            }
        }
        if first {
            write!(f, "{}", self.constant)?;
        } else if self.constant > 0 {
            write!(f, " + {}", self.constant)?;
        } else if self.constant < 0 {
            write!(f, " - {}", -self.constant)?;
        }
        Ok(())
    }
}

impl fmt::Debug for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Deterministic generator for fresh variable names. Division bindings use
/// the `q`/`r` stems with a shared counter; loop renamings add a prime.
#[derive(Debug, Clone)]
pub struct FreshVars {
    next: usize,
}

impl FreshVars {
    /// `start` should exceed any reserved index (formal array indexes use
    /// `q1..qk`, so pass the maximum array rank).
    pub fn new(start: usize) -> Self {
        FreshVars { next: start + 1 }
    }

    /// A fresh quotient/remainder pair `qN`, `rN`.
    pub fn div_pair(&mut self) -> (String, String) {
        let n = self.next;
        self.next += 1;
        (format!("q{n}"), format!("r{n}"))
    }

    /// A fresh scratch variable with the given stem.
    pub fn scratch(&mut self, stem: &str) -> String {
        let n = self.next;
        self.next += 1;
        format!("{stem}{n}")
    }
}
