//! Sequential reference interpreter.
//!
//! Runs a program in textual order under a valuation and records an
//! instrumented trace: every write, every read (tagged with the node
//! and port names the graph builder will assign to the same
//! occurrence), the verdict of every data-dependent condition, and the
//! final memory. The trace doubles as an oracle: replaying it yields,
//! for each read instance, the write instance that produced the value —
//! the ground truth the analytical model is checked against.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::valuation::{concrete_bounds, Valuation};
use crate::exec::value::{eval_bool, eval_expr, IntEnv, Value};
use crate::lang::{Assign, Do, If, Program, Stmt, Unsupported};
use crate::model::names::{output_node, pred_node, read_ports};

/// One traced memory access.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    /// `label` at iteration `iter` stored `value` into `array(ixs)`.
    Write { label: String, iter: Vec<i64>, array: String, ixs: Vec<i64>, value: Value },
    /// Port `port` of `node` at iteration `iter` fetched `value` from
    /// `array(ixs)`.
    Read { node: String, port: String, iter: Vec<i64>, array: String, ixs: Vec<i64>, value: Value },
}

/// Everything observable about one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    /// Reads and writes in execution order, ending with one read per
    /// output cell (attributed to the array's output node).
    pub events: Vec<Event>,
    /// Verdict of each data-dependent condition instance.
    pub preds: BTreeMap<(String, Vec<i64>), bool>,
    /// Written cells at the end of the run.
    pub final_mem: BTreeMap<(String, Vec<i64>), Value>,
}

/// Final contents of the output arrays, one map per array.
pub type Outputs = BTreeMap<String, BTreeMap<Vec<i64>, Value>>;

/// A read instance: node, port and iteration vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReadKey {
    pub node: String,
    pub port: String,
    pub iter: Vec<i64>,
}

/// Where a read instance got its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceRef {
    /// The write instance `label` at iteration `iter`.
    Write { label: String, iter: Vec<i64> },
    /// The initial contents of `array(ixs)`.
    Initial { array: String, ixs: Vec<i64> },
}

/// Run the program to completion and return the output contents plus
/// the full trace.
pub fn run_sequential(p: &Program, val: &Valuation) -> Result<(Outputs, Trace)> {
    let mut m = Machine {
        p,
        val,
        env: val.params.clone(),
        bounds: p
            .sig
            .arrays
            .iter()
            .map(|a| (a.name.clone(), concrete_bounds(a, &val.params)))
            .collect(),
        mem: BTreeMap::new(),
        trace: Trace::default(),
    };
    m.exec(&p.body)?;

    let mut outputs = Outputs::new();
    for decl in p.sig.outputs() {
        let node = output_node(&decl.name);
        let port = read_ports([decl.name.as_str()]).remove(0);
        let mut cells = BTreeMap::new();
        for ixs in enumerate_cells(&m.bounds[&decl.name]) {
            let v = m.read_cell(&node, &port, ixs.clone(), &decl.name, ixs.clone())?;
            cells.insert(ixs, v);
        }
        outputs.insert(decl.name.clone(), cells);
    }
    m.trace.final_mem = m.mem;
    Ok((outputs, m.trace))
}

/// Derive the ground-truth source function of one run: each read
/// instance maps to the most recent write of the cell it fetched, or
/// to the cell's initial contents if nothing had written it yet.
pub fn trace_source_oracle(trace: &Trace) -> BTreeMap<ReadKey, SourceRef> {
    let mut last: BTreeMap<(&str, &[i64]), (&str, &[i64])> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for ev in &trace.events {
        match ev {
            Event::Write { label, iter, array, ixs, .. } => {
                last.insert((array, ixs), (label, iter));
            }
            Event::Read { node, port, iter, array, ixs, .. } => {
                let src = match last.get(&(array.as_str(), ixs.as_slice())) {
                    Some((label, it)) => {
                        SourceRef::Write { label: label.to_string(), iter: it.to_vec() }
                    }
                    None => SourceRef::Initial { array: array.clone(), ixs: ixs.clone() },
                };
                let key =
                    ReadKey { node: node.clone(), port: port.clone(), iter: iter.clone() };
                let dup = out.insert(key, src);
                assert!(dup.is_none(), "read instance traced twice");
            }
        }
    }
    out
}

/// All index vectors inside the given inclusive bounds, in row-major
/// order; a rank-0 cell is the single empty vector.
pub fn enumerate_cells(dims: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in dims {
        let mut next = Vec::new();
        for prefix in &out {
            for ix in lo..=hi {
                let mut cell = prefix.clone();
                cell.push(ix);
                next.push(cell);
            }
        }
        out = next;
    }
    out
}

struct Machine<'a> {
    p: &'a Program,
    val: &'a Valuation,
    env: IntEnv,
    bounds: BTreeMap<String, Vec<(i64, i64)>>,
    mem: BTreeMap<(String, Vec<i64>), Value>,
    trace: Trace,
}

impl Machine<'_> {
    fn exec(&mut self, s: &Stmt) -> Result<()> {
        match s {
            Stmt::Empty => Ok(()),
            Stmt::Seq(a, b) => {
                self.exec(a)?;
                self.exec(b)
            }
            Stmt::Assign(a) => self.assign(a),
            Stmt::If(i) => self.branch(i),
            Stmt::Do(d) => self.repeat(d),
            Stmt::Unsupported(Unsupported { what, line }) => {
                Err(Error::run(format!("cannot execute {what} at line {line}")))
            }
        }
    }

    fn assign(&mut self, a: &Assign) -> Result<()> {
        let iter: Vec<i64> = a.ctx.iter().map(|v| self.env[v]).collect();
        let here = instance(&a.label, &a.ctx, &iter);
        let ixs: Vec<i64> = a.indexes.iter().map(|ix| ix.eval(&self.env)).collect();
        self.check_bounds(&a.target, &ixs, &here, "write")?;

        let ports = read_ports(a.rhs.reads().iter().map(|(n, _)| *n));
        let (env, mut reader) = (self.env.clone(), ReadSink { m: self, iter: &iter });
        let raw = eval_expr(&a.rhs, &env, &mut |occ, name, cell| {
            reader.fetch(&a.label, &ports[occ], name, cell)
        })
        .map_err(|why| Error::run(format!("at {here}: {why}")))?;

        let elem = self
            .p
            .sig
            .array(&a.target)
            .ok_or_else(|| Error::run(format!("at {here}: `{}` is not declared", a.target)))?
            .elem;
        let value = raw
            .coerce(elem, self.val.float_mode)
            .map_err(|why| Error::run(format!("at {here}: {why}")))?;

        self.mem.insert((a.target.clone(), ixs.clone()), value.clone());
        self.trace.events.push(Event::Write {
            label: a.label.clone(),
            iter,
            array: a.target.clone(),
            ixs,
            value,
        });
        Ok(())
    }

    fn branch(&mut self, i: &If) -> Result<()> {
        let iter: Vec<i64> = i.ctx.iter().map(|v| self.env[v]).collect();
        let verdict = match i.pred_ordinal {
            Some(ord) => {
                let node = pred_node(ord);
                let here = instance(&node, &i.ctx, &iter);
                let ports = read_ports(i.cond.reads().iter().map(|(n, _)| *n));
                let (env, mut reader) = (self.env.clone(), ReadSink { m: self, iter: &iter });
                let b = eval_bool(&i.cond, &env, &mut |occ, name, cell| {
                    reader.fetch(&node, &ports[occ], name, cell)
                })
                .map_err(|why| Error::run(format!("at {here}: {why}")))?;
                self.trace.preds.insert((node, iter), b);
                b
            }
            None => {
                // An affine condition cannot read memory, so the
                // environment alone decides it.
                eval_bool(&i.cond, &self.env, &mut |_, _, _| {
                    unreachable!("affine condition performed a read")
                })
                .map_err(Error::run)?
            }
        };
        if verdict {
            self.exec(&i.then_branch)
        } else {
            self.exec(&i.else_branch)
        }
    }

    fn repeat(&mut self, d: &Do) -> Result<()> {
        let lo = d.lo.eval(&self.env);
        let hi = d.hi.eval(&self.env);
        let shadow = self.env.get(&d.var).copied();
        for v in lo..=hi {
            self.env.insert(d.var.clone(), v);
            self.exec(&d.body)?;
        }
        match shadow {
            Some(old) => self.env.insert(d.var.clone(), old),
            None => self.env.remove(&d.var),
        };
        Ok(())
    }

    fn check_bounds(&self, array: &str, ixs: &[i64], here: &str, what: &str) -> Result<()> {
        let dims = self
            .bounds
            .get(array)
            .ok_or_else(|| Error::run(format!("at {here}: `{array}` is not declared")))?;
        if dims.len() != ixs.len() {
            return Err(Error::run(format!(
                "at {here}: `{array}` has rank {} but the {what} uses {} subscripts",
                dims.len(),
                ixs.len()
            )));
        }
        for (dim, (&ix, &(lo, hi))) in ixs.iter().zip(dims).enumerate() {
            if ix < lo || ix > hi {
                return Err(Error::run(format!(
                    "at {here}: out-of-bounds {what} {array}({}): dimension {} has bounds \
                     {lo}:{hi}",
                    fmt_ixs(ixs),
                    dim + 1
                )));
            }
        }
        Ok(())
    }

    /// Fetch one cell for a read occurrence, record the event, and
    /// fault if the cell has no value yet.
    fn read_cell(
        &mut self,
        node: &str,
        port: &str,
        iter: Vec<i64>,
        array: &str,
        ixs: Vec<i64>,
    ) -> Result<Value> {
        let here = format!("{node}.{port}");
        self.check_bounds(array, &ixs, &here, "read")?;
        let value = match self.mem.get(&(array.to_string(), ixs.clone())) {
            Some(v) => v.clone(),
            None => match self.val.initial(array, &ixs) {
                Some(v) => v.clone(),
                None => {
                    return Err(Error::run(format!(
                        "at {here}: {array}({}) was never written and `{array}` is not an \
                         input",
                        fmt_ixs(&ixs)
                    )));
                }
            },
        };
        self.trace.events.push(Event::Read {
            node: node.to_string(),
            port: port.to_string(),
            iter,
            array: array.to_string(),
            ixs,
            value: value.clone(),
        });
        Ok(value)
    }
}

/// Borrow splitter: lets the read callback use the machine mutably
/// while the statement's environment is borrowed immutably.
struct ReadSink<'a, 'b> {
    m: &'a mut Machine<'b>,
    iter: &'a [i64],
}

impl ReadSink<'_, '_> {
    fn fetch(
        &mut self,
        node: &str,
        port: &str,
        array: &str,
        ixs: Vec<i64>,
    ) -> std::result::Result<Value, String> {
        self.m
            .read_cell(node, port, self.iter.to_vec(), array, ixs)
            .map_err(|e| e.to_string())
    }
}

fn instance(label: &str, ctx: &[String], iter: &[i64]) -> String {
    if ctx.is_empty() {
        label.to_string()
    } else {
        let binds: Vec<String> =
            ctx.iter().zip(iter).map(|(v, k)| format!("{v}={k}")).collect();
        format!("{label} ({})", binds.join(", "))
    }
}

fn fmt_ixs(ixs: &[i64]) -> String {
    ixs.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ")
}
