//! Source trees and destination trees.
//!
//! A source tree (`STree`) maps one read instance to the write instance
//! it observes: leaves are either a concrete write/input atom or
//! "nothing written yet"; interior vertices branch on affine
//! conditions or predicate outcomes, or bind floor-division variables.
//!
//! A destination tree (`MTree`) maps one write instance to the set of
//! read instances that observe it: on top of the source-tree vertex
//! forms it adds finite unions and bounded enumerations, and its
//! branches may test the value arriving on a boolean port instead of a
//! predicate (keeping destination trees free of predicates).

pub mod eval;
pub mod fold;
pub mod ops;

use std::collections::BTreeMap;
use std::fmt;

use crate::affine::{AffineExpr, Cond, DivBinding};

/// A write instance or input atom: name plus index expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub args: Vec<AffineExpr>,
}

impl Atom {
    pub fn new(name: impl Into<String>, args: Vec<AffineExpr>) -> Atom {
        Atom { name: name.into(), args }
    }

    pub fn subst_map(&self, map: &BTreeMap<String, AffineExpr>) -> Atom {
        Atom { name: self.name.clone(), args: self.args.iter().map(|a| a.subst_map(map)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.name)?;
        for (k, a) in self.args.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Source tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum STree {
    /// No write instance: the read observes the initial state (or the
    /// tree is still mid-construction and means "nothing yet").
    Bottom,
    Term(Atom),
    Branch(Cond, Box<STree>, Box<STree>),
    Div(DivBinding, Box<STree>),
}

impl STree {
    pub fn branch(c: Cond, t: STree, e: STree) -> STree {
        STree::Branch(c, Box::new(t), Box::new(e))
    }

    pub fn div(d: DivBinding, t: STree) -> STree {
        STree::Div(d, Box::new(t))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, STree::Bottom)
    }
}

impl fmt::Display for STree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            STree::Bottom => write!(f, "_|_"),
            STree::Term(a) => write!(f, "{a}"),
            STree::Branch(c, t, e) => write!(f, "({c} -> {t} : {e})"),
            STree::Div(d, t) => write!(f, "({d} -> {t})"),
        }
    }
}

/// One delivery target: a port of a graph node, at an instance given by
/// index expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Send {
    pub node: String,
    pub port: String,
    pub args: Vec<AffineExpr>,
}

impl Send {
    pub fn subst_map(&self, map: &BTreeMap<String, AffineExpr>) -> Send {
        Send {
            node: self.node.clone(),
            port: self.port.clone(),
            args: self.args.iter().map(|a| a.subst_map(map)).collect(),
        }
    }
}

impl fmt::Display for Send {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}{{", self.node, self.port)?;
        for (k, a) in self.args.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A test on the boolean value arriving on one of the sending node's
/// own ports; used by filters to gate forwarding without referring to
/// a predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortRef {
    pub port: String,
    pub positive: bool,
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "!")?;
        }
        write!(f, "{}", self.port)
    }
}

/// Condition on a destination-tree branch: affine (predicates are not
/// allowed on the destination side) or a port-value test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MCond {
    Aff(Cond),
    Port(PortRef),
}

impl fmt::Display for MCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MCond::Aff(c) => write!(f, "{c}"),
            MCond::Port(p) => write!(f, "{p}"),
        }
    }
}

/// Destination tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MTree {
    Bottom,
    Send(Send),
    Branch(MCond, Box<MTree>, Box<MTree>),
    Div(DivBinding, Box<MTree>),
    /// Finite union of disjoint destination subsets.
    Union(Vec<MTree>),
    /// Bounded enumeration: the body is sent once per integer point of
    /// the listed variable ranges.
    Enum(Vec<(String, AffineExpr, AffineExpr)>, Box<MTree>),
}

impl MTree {
    pub fn branch(c: MCond, t: MTree, e: MTree) -> MTree {
        MTree::Branch(c, Box::new(t), Box::new(e))
    }

    pub fn div(d: DivBinding, t: MTree) -> MTree {
        MTree::Div(d, Box::new(t))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, MTree::Bottom)
    }

    /// Union that collapses trivial cases.
    pub fn union(parts: Vec<MTree>) -> MTree {
        let mut parts: Vec<MTree> = parts.into_iter().filter(|p| !p.is_bottom()).collect();
        match parts.len() {
            0 => MTree::Bottom,
            1 => parts.remove(0),
            _ => MTree::Union(parts),
        }
    }
}

impl fmt::Display for MTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MTree::Bottom => write!(f, "_|_"),
            MTree::Send(s) => write!(f, "{s}"),
            MTree::Branch(c, t, e) => write!(f, "({c} -> {t} : {e})"),
            MTree::Div(d, t) => write!(f, "({d} -> {t})"),
            MTree::Union(parts) => {
                write!(f, "(&")?;
                for p in parts {
                    write!(f, " {p}")?;
                }
                write!(f, ")")
            }
            MTree::Enum(ranges, t) => {
                write!(f, "(@")?;
                for (v, lo, hi) in ranges {
                    write!(f, " {v} ({lo} {hi})")?;
                }
                write!(f, " {t})")
            }
        }
    }
}
