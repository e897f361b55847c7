//! Static checks beyond what parsing already enforces.
//!
//! Parsing guarantees shape, scoping of bare names and affinity of
//! subscripts and bounds; validation checks the rest of the class
//! rules and reports all violations together as diagnostics.

use std::collections::BTreeSet;
use std::fmt;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    /// Two declarations share a name.
    DuplicateName(String),
    /// A loop variable collides with a parameter, an array, or an
    /// enclosing loop variable.
    NameClash(String),
    /// A read or write of a name that is not a declared array/scalar.
    UndeclaredArray(String),
    /// Subscript count differs from the declared rank.
    RankMismatch { name: String, expected: usize, got: usize },
    /// Two assignments ended up with the same label (only possible
    /// with adversarial declaration names such as `A` and `A1`).
    DuplicateLabel(String),
    /// A parsed construct outside the supported class.
    UnsupportedConstruct { what: String, line: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateName(n) => write!(f, "duplicate declaration of `{n}`"),
            Diagnostic::NameClash(v) => {
                write!(f, "loop variable `{v}` collides with another name in scope")
            }
            Diagnostic::UndeclaredArray(n) => {
                write!(f, "`{n}` is not a declared array or scalar")
            }
            Diagnostic::RankMismatch { name, expected, got } => write!(
                f,
                "`{name}` has rank {expected} but is used with {got} subscripts"
            ),
            Diagnostic::DuplicateLabel(l) => write!(f, "duplicate statement label `{l}`"),
            Diagnostic::UnsupportedConstruct { what, line } => {
                write!(f, "unsupported construct at line {line}: {what}")
            }
        }
    }
}

/// All class violations, in deterministic (declaration, then textual)
/// order. An empty result means the program is in the modelled class.
pub fn validate(p: &Program) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut seen = BTreeSet::new();
    for name in &p.sig.params {
        if !seen.insert(name.clone()) {
            out.push(Diagnostic::DuplicateName(name.clone()));
        }
    }
    for a in &p.sig.arrays {
        if !seen.insert(a.name.clone()) {
            out.push(Diagnostic::DuplicateName(a.name.clone()));
        }
    }

    let mut loops: Vec<String> = Vec::new();
    walk(p, &p.body, &mut loops, &mut out);

    let mut labels = BTreeSet::new();
    for a in p.assigns() {
        if !labels.insert(a.label.clone()) {
            out.push(Diagnostic::DuplicateLabel(a.label.clone()));
        }
    }

    out
}

fn walk(p: &Program, s: &Stmt, loops: &mut Vec<String>, out: &mut Vec<Diagnostic>) {
    match s {
        Stmt::Empty => {}
        Stmt::Seq(a, b) => {
            walk(p, a, loops, out);
            walk(p, b, loops, out);
        }
        Stmt::Assign(a) => {
            check_access(p, &a.target, a.indexes.len(), out);
            for (name, ixs) in a.rhs.reads() {
                check_access(p, name, ixs.len(), out);
            }
        }
        Stmt::If(i) => {
            for (name, ixs) in i.cond.reads() {
                check_access(p, name, ixs.len(), out);
            }
            walk(p, &i.then_branch, loops, out);
            walk(p, &i.else_branch, loops, out);
        }
        Stmt::Do(d) => {
            if p.sig.is_param(&d.var)
                || p.sig.array(&d.var).is_some()
                || loops.iter().any(|l| l == &d.var)
            {
                out.push(Diagnostic::NameClash(d.var.clone()));
            }
            loops.push(d.var.clone());
            walk(p, &d.body, loops, out);
            loops.pop();
        }
        Stmt::Unsupported(u) => {
            out.push(Diagnostic::UnsupportedConstruct { what: u.what.clone(), line: u.line });
        }
    }
}

fn check_access(p: &Program, name: &str, got: usize, out: &mut Vec<Diagnostic>) {
    match p.sig.array(name) {
        None => out.push(Diagnostic::UndeclaredArray(name.to_string())),
        Some(decl) if decl.rank() != got => out.push(Diagnostic::RankMismatch {
            name: name.to_string(),
            expected: decl.rank(),
            got,
        }),
        Some(_) => {}
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::*;

    #[test]
    fn a_well_formed_program_has_no_diagnostics() {
        let p = parse(
            "param n;
             array X(1:n) real in;
             scalar S real out;
             S = 0;
             do i = 1, n
               S = S + X(i);
             enddo",
        )
        .unwrap();
        assert_eq!(validate(&p), vec![]);
    }

    #[test]
    fn writing_to_an_undeclared_array_is_reported() {
        let p = parse("param n; scalar S real out; do i = 1, n Q(i) = i; enddo").unwrap();
        assert_eq!(validate(&p), vec![Diagnostic::UndeclaredArray("Q".into())]);
    }

    #[test]
    fn while_style_loops_are_out_of_class() {
        let p = parse("scalar S real out; do while S == 0 S = 1; enddo").unwrap();
        assert_eq!(
            validate(&p),
            vec![Diagnostic::UnsupportedConstruct { what: "do while loop".into(), line: 1 }]
        );
    }

    #[test]
    fn rank_mismatches_are_reported_for_reads_and_writes() {
        let p = parse(
            "param n; array A(1:n) integer out; scalar S integer in;
             do i = 1, n
               A(i, i) = S + A(i);
             enddo",
        )
        .unwrap();
        // A(i) on the read side is fine; A(i, i) on the write side is not.
        assert_eq!(
            validate(&p),
            vec![Diagnostic::RankMismatch { name: "A".into(), expected: 1, got: 2 }]
        );
    }

    #[test]
    fn name_collisions_are_reported() {
        let p = parse(
            "param n, n; scalar S integer out;
             do n = 1, 3
               do i = 1, n
                 do i = 1, 2
                   S = i;
                 enddo
               enddo
             enddo",
        )
        .unwrap();
        let ds = validate(&p);
        assert!(ds.contains(&Diagnostic::DuplicateName("n".into())));
        // `do n` collides with the parameter, the inner `do i` with the
        // enclosing `do i`.
        assert_eq!(
            ds.iter().filter(|d| matches!(d, Diagnostic::NameClash(_))).count(),
            2
        );
    }

    #[test]
    fn adversarial_declaration_names_can_collide_labels() {
        // Assignments to `A` are labelled A0, A1, ..., A10, ...; the
        // first assignment to an array named `A1` is labelled A10 too.
        let assigns_to_a: String = (0..11).map(|k| format!("A = {k}; ")).collect();
        let p = parse(&format!(
            "scalar A integer out; scalar A1 integer out;
             {assigns_to_a} A1 = 9;"
        ))
        .unwrap();
        assert_eq!(validate(&p), vec![Diagnostic::DuplicateLabel("A10".into())]);
    }

    #[test]
    fn sibling_loops_may_reuse_a_variable() {
        let p = parse(
            "param n; scalar S integer out;
             do i = 1, n S = i; enddo
             do i = 1, n S = S + i; enddo",
        )
        .unwrap();
        assert_eq!(validate(&p), vec![]);
    }
}
