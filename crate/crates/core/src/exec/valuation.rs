//! Concrete inputs for one run: parameter values and the initial
//! contents of every input array.
//!
//! The text format is a sequence of `name = value;` entries where a
//! value is an integer, a rational `p/q`, a decimal (floating mode
//! only), a boolean, or a bracketed list nested to the array's rank:
//!
//! ```text
//! n = 4;
//! X = [3, 1, 2, 0];
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exec::value::{IntEnv, Value};
use crate::lang::{ArrayDecl, ElemType, Program};

/// Inputs bound to a program: parameters plus per-array initial
/// contents keyed by absolute index vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Valuation {
    pub params: IntEnv,
    pub inputs: BTreeMap<String, BTreeMap<Vec<i64>, Value>>,
    /// Whether `real` cells use hardware floats instead of exact
    /// rationals. The equivalence checks only use the exact mode.
    pub float_mode: bool,
}

impl Valuation {
    /// Initial contents of one cell, if the array is an input.
    pub fn initial(&self, array: &str, ixs: &[i64]) -> Option<&Value> {
        self.inputs.get(array)?.get(ixs)
    }
}

/// A parsed but untyped entry value.
#[derive(Debug, Clone, PartialEq)]
enum Raw {
    Int(i64),
    Ratio(i64, i64),
    Dec(f64),
    Bool(bool),
    List(Vec<Raw>),
}

impl Raw {
    fn describe(&self) -> &'static str {
        match self {
            Raw::Int(_) => "an integer",
            Raw::Ratio(..) => "a rational",
            Raw::Dec(_) => "a decimal",
            Raw::Bool(_) => "a boolean",
            Raw::List(_) => "a list",
        }
    }
}

/// Parse and type a valuation against a program: every parameter and
/// every input array must be given, shapes must match the declared
/// bounds under the parameters, and nothing else may appear.
pub fn load_valuation(p: &Program, text: &str, float_mode: bool) -> Result<Valuation> {
    let entries = parse_entries(text)?;
    let mut params = IntEnv::new();
    let mut inputs = BTreeMap::new();
    let mut used: BTreeMap<&str, bool> = entries.keys().map(|k| (k.as_str(), false)).collect();

    for name in &p.sig.params {
        match entries.get(name) {
            Some(Raw::Int(k)) => {
                params.insert(name.clone(), *k);
            }
            Some(other) => {
                return Err(Error::run(format!(
                    "parameter `{name}` must be an integer, got {}",
                    other.describe()
                )));
            }
            None => return Err(Error::run(format!("missing value for parameter `{name}`"))),
        }
        used.insert(name, true);
    }

    for decl in p.sig.inputs() {
        let raw = entries.get(&decl.name).ok_or_else(|| {
            Error::run(format!("missing contents for input array `{}`", decl.name))
        })?;
        used.insert(&decl.name, true);
        let dims = concrete_bounds(decl, &params);
        let mut cells = BTreeMap::new();
        fill(decl, &dims, raw, &mut Vec::new(), float_mode, &mut cells)?;
        inputs.insert(decl.name.clone(), cells);
    }

    if let Some((name, _)) = used.iter().find(|(_, seen)| !**seen) {
        return Err(Error::run(format!(
            "valuation entry `{name}` matches no parameter or input array"
        )));
    }

    Ok(Valuation { params, inputs, float_mode })
}

/// Declared bounds evaluated under concrete parameters.
pub fn concrete_bounds(decl: &ArrayDecl, params: &IntEnv) -> Vec<(i64, i64)> {
    decl.bounds.iter().map(|(lo, hi)| (lo.eval(params), hi.eval(params))).collect()
}

fn fill(
    decl: &ArrayDecl,
    dims: &[(i64, i64)],
    raw: &Raw,
    prefix: &mut Vec<i64>,
    float_mode: bool,
    out: &mut BTreeMap<Vec<i64>, Value>,
) -> Result<()> {
    let Some(((lo, hi), rest)) = dims.split_first() else {
        let v = type_leaf(raw, decl.elem, float_mode).map_err(|why| {
            Error::run(format!("in contents of `{}`: {why}", decl.name))
        })?;
        out.insert(prefix.clone(), v);
        return Ok(());
    };
    let Raw::List(items) = raw else {
        return Err(Error::run(format!(
            "contents of `{}` must nest lists to rank {}, found {} at depth {}",
            decl.name,
            decl.rank(),
            raw.describe(),
            prefix.len()
        )));
    };
    let want = (hi - lo + 1).max(0) as usize;
    if items.len() != want {
        return Err(Error::run(format!(
            "contents of `{}` have {} entries along dimension {} but the bounds {}:{} require {}",
            decl.name,
            items.len(),
            prefix.len() + 1,
            lo,
            hi,
            want
        )));
    }
    for (off, item) in items.iter().enumerate() {
        prefix.push(lo + off as i64);
        fill(decl, rest, item, prefix, float_mode, out)?;
        prefix.pop();
    }
    Ok(())
}

fn type_leaf(raw: &Raw, elem: ElemType, float_mode: bool) -> std::result::Result<Value, String> {
    match (elem, raw) {
        (ElemType::Integer, Raw::Int(k)) => Ok(Value::Int(*k)),
        (ElemType::Real, Raw::Int(k)) if float_mode => Ok(Value::Float(*k as f64)),
        (ElemType::Real, Raw::Int(k)) => Ok(Value::Rat(BigRational::from(BigInt::from(*k)))),
        (ElemType::Real, Raw::Ratio(n, d)) if float_mode => Ok(Value::Float(*n as f64 / *d as f64)),
        (ElemType::Real, Raw::Ratio(n, d)) => {
            Ok(Value::Rat(BigRational::new(BigInt::from(*n), BigInt::from(*d))))
        }
        (ElemType::Real, Raw::Dec(x)) if float_mode => Ok(Value::Float(*x)),
        (ElemType::Real, Raw::Dec(_)) => {
            Err("decimal literals need the floating mode; use p/q for exact reals".into())
        }
        (ElemType::Boolean, Raw::Bool(b)) => Ok(Value::Bool(*b)),
        (elem, raw) => Err(format!("expected {elem} value, got {}", raw.describe())),
    }
}

// ---------------------------------------------------------------------
// Text parsing

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_space(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                // Comments run to end of line, as in program files.
                Some(b'!') => {
                    while let Some(c) = self.bump() {
                        if c == b'\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_space();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_space();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.bump();
            } else {
                break;
            }
        }
        if self.pos == start || self.src[start].is_ascii_digit() {
            return Err(self.err("expected a name"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn number(&mut self) -> Result<Raw> {
        let neg = if self.peek() == Some(b'-') {
            self.bump();
            self.skip_space();
            true
        } else {
            false
        };
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let int_part = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if self.peek() == Some(b'.') {
            self.bump();
            let fs = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            let frac = std::str::from_utf8(&self.src[fs..self.pos]).unwrap();
            let text = format!("{int_part}.{frac}");
            let x: f64 = text.parse().map_err(|_| self.err("bad decimal literal"))?;
            return Ok(Raw::Dec(if neg { -x } else { x }));
        }
        let k: i64 = int_part.parse().map_err(|_| self.err("integer literal overflows"))?;
        let k = if neg { -k } else { k };
        if self.peek() == Some(b'/') {
            self.bump();
            self.skip_space();
            let dneg = if self.peek() == Some(b'-') {
                self.bump();
                true
            } else {
                false
            };
            let ds = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            let d: i64 = std::str::from_utf8(&self.src[ds..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad denominator"))?;
            if d == 0 {
                return Err(self.err("zero denominator"));
            }
            return Ok(Raw::Ratio(k, if dneg { -d } else { d }));
        }
        Ok(Raw::Int(k))
    }

    fn value(&mut self) -> Result<Raw> {
        self.skip_space();
        match self.peek() {
            Some(b'[') => {
                self.bump();
                let mut items = Vec::new();
                self.skip_space();
                if self.peek() == Some(b']') {
                    self.bump();
                    return Ok(Raw::List(items));
                }
                loop {
                    items.push(self.value()?);
                    self.skip_space();
                    match self.peek() {
                        Some(b',') => {
                            self.bump();
                        }
                        Some(b']') => {
                            self.bump();
                            return Ok(Raw::List(items));
                        }
                        _ => return Err(self.err("expected `,` or `]` in list")),
                    }
                }
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let word = self.ident()?;
                match word.as_str() {
                    "true" => Ok(Raw::Bool(true)),
                    "false" => Ok(Raw::Bool(false)),
                    _ => Err(self.err(format!("unexpected word `{word}` in value"))),
                }
            }
            _ => Err(self.err("expected a value")),
        }
    }
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, Raw>> {
    let mut s = Scanner::new(text);
    let mut out = BTreeMap::new();
    loop {
        s.skip_space();
        if s.peek().is_none() {
            return Ok(out);
        }
        let name = s.ident()?;
        s.expect(b'=')?;
        let v = s.value()?;
        s.expect(b';')?;
        if out.insert(name.clone(), v).is_some() {
            return Err(s.err(format!("duplicate valuation entry `{name}`")));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    const SUMMISH: &str = "param n;\narray X(1:n) real in;\nscalar S real out;\n\
                           S = 0; do i = 1, n S = S + X(i); enddo";

    #[test]
    fn loads_params_and_rank_one_contents() {
        let p = parse(SUMMISH).unwrap();
        let v = load_valuation(&p, "n = 3; X = [5, -1, 2];", false).unwrap();
        assert_eq!(v.params["n"], 3);
        assert_eq!(v.initial("X", &[1]), Some(&Value::rat(5, 1)));
        assert_eq!(v.initial("X", &[3]), Some(&Value::rat(2, 1)));
        assert_eq!(v.initial("X", &[4]), None);
    }

    #[test]
    fn empty_range_needs_empty_list() {
        let p = parse(SUMMISH).unwrap();
        let v = load_valuation(&p, "n = 0; X = [];", false).unwrap();
        assert!(v.inputs["X"].is_empty());
        let e = load_valuation(&p, "n = 0; X = [1];", false).unwrap_err();
        assert!(e.to_string().contains("require 0"), "{e}");
    }

    #[test]
    fn length_mismatch_is_reported() {
        let p = parse(SUMMISH).unwrap();
        let e = load_valuation(&p, "n = 3; X = [1, 2];", false).unwrap_err();
        assert!(e.to_string().contains("bounds 1:3"), "{e}");
    }

    #[test]
    fn missing_and_unexpected_entries_are_errors() {
        let p = parse(SUMMISH).unwrap();
        let e = load_valuation(&p, "n = 2;", false).unwrap_err();
        assert!(e.to_string().contains("input array `X`"), "{e}");
        let e = load_valuation(&p, "n = 0; X = []; Y = 1;", false).unwrap_err();
        assert!(e.to_string().contains("`Y`"), "{e}");
    }

    #[test]
    fn rank_two_contents_nest_row_major() {
        let p = parse(
            "param n;\narray A(0:1, 1:n) integer in;\nscalar s integer out;\ns = A(0, 1);",
        )
        .unwrap();
        let v = load_valuation(&p, "n = 2; A = [[1, 2], [3, 4]];", false).unwrap();
        assert_eq!(v.initial("A", &[0, 1]), Some(&Value::Int(1)));
        assert_eq!(v.initial("A", &[1, 2]), Some(&Value::Int(4)));
    }

    #[test]
    fn exact_mode_rejects_decimals_but_takes_ratios() {
        let p = parse(SUMMISH).unwrap();
        let e = load_valuation(&p, "n = 1; X = [1.5];", false).unwrap_err();
        assert!(e.to_string().contains("floating mode"), "{e}");
        let v = load_valuation(&p, "n = 1; X = [3/2];", false).unwrap();
        assert_eq!(v.initial("X", &[1]), Some(&Value::rat(3, 2)));
        let v = load_valuation(&p, "n = 1; X = [1.5];", true).unwrap();
        assert_eq!(v.initial("X", &[1]), Some(&Value::Float(1.5)));
    }

    #[test]
    fn comments_and_newlines_are_allowed() {
        let p = parse(SUMMISH).unwrap();
        let v = load_valuation(&p, "! inputs\nn = 2;\nX = [\n  1, ! first\n  2,\n];", false);
        // A trailing comma is not part of the format.
        assert!(v.is_err());
        let v = load_valuation(&p, "! inputs\nn = 2;\nX = [\n  1, ! first\n  2\n];", false).unwrap();
        assert_eq!(v.initial("X", &[2]), Some(&Value::rat(2, 1)));
    }
}
