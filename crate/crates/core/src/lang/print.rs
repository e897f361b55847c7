//! Canonical text and s-expression views of a program.
//!
//! `pretty` emits surface syntax that reparses to a structurally
//! identical tree (labels, contexts and classifications are all
//! recomputed deterministically). `to_sexpr` emits the labelled AST
//! for inspection.

use super::ast::*;

/// Canonical surface form.
pub fn pretty(p: &Program) -> String {
    let mut out = String::new();
    if !p.sig.params.is_empty() {
        out.push_str("param ");
        out.push_str(&p.sig.params.join(", "));
        out.push_str(";\n");
    }
    for a in &p.sig.arrays {
        if a.rank() == 0 {
            out.push_str(&format!("scalar {} {}", a.name, a.elem));
        } else {
            let bounds: Vec<String> =
                a.bounds.iter().map(|(l, u)| format!("{l}:{u}")).collect();
            out.push_str(&format!("array {}({}) {}", a.name, bounds.join(", "), a.elem));
        }
        if a.is_input {
            out.push_str(" in");
        }
        if a.is_output {
            out.push_str(" out");
        }
        out.push_str(";\n");
    }
    for b in &p.sig.assumes {
        out.push_str(&format!("assume {b};\n"));
    }
    if !matches!(p.body, Stmt::Empty) {
        if !out.is_empty() {
            out.push('\n');
        }
        push_stmt(&mut out, &p.body, 0);
    }
    out
}

fn push_stmt(out: &mut String, s: &Stmt, ind: usize) {
    let pad = "  ".repeat(ind);
    match s {
        Stmt::Empty => {}
        Stmt::Seq(a, b) => {
            push_stmt(out, a, ind);
            push_stmt(out, b, ind);
        }
        Stmt::Assign(a) => {
            out.push_str(&pad);
            out.push_str(&a.target);
            if !a.indexes.is_empty() {
                let ixs: Vec<String> = a.indexes.iter().map(|e| e.to_string()).collect();
                out.push_str(&format!("({})", ixs.join(", ")));
            }
            out.push_str(&format!(" = {};\n", a.rhs));
        }
        Stmt::Do(d) => {
            out.push_str(&format!("{pad}do {} = {}, {}\n", d.var, d.lo, d.hi));
            push_stmt(out, &d.body, ind + 1);
            out.push_str(&format!("{pad}enddo\n"));
        }
        Stmt::If(i) => {
            out.push_str(&format!("{pad}if ({}) then\n", i.cond));
            push_stmt(out, &i.then_branch, ind + 1);
            if !matches!(*i.else_branch, Stmt::Empty) {
                out.push_str(&format!("{pad}else\n"));
                push_stmt(out, &i.else_branch, ind + 1);
            }
            out.push_str(&format!("{pad}endif\n"));
        }
        Stmt::Unsupported(u) => {
            out.push_str(&format!("{pad}! <unsupported: {}>\n", u.what));
        }
    }
}

/// The labelled AST as an s-expression.
pub fn to_sexpr(p: &Program) -> String {
    let mut out = String::from("(program");
    out.push_str(&format!("\n  (params{})", list(&p.sig.params)));
    for a in &p.sig.arrays {
        let mut roles = Vec::new();
        if a.is_input {
            roles.push("in".to_string());
        }
        if a.is_output {
            roles.push("out".to_string());
        }
        if a.rank() == 0 {
            out.push_str(&format!("\n  (scalar {} {} ({}))", a.name, a.elem, roles.join(" ")));
        } else {
            let bounds: Vec<String> = a
                .bounds
                .iter()
                .map(|(l, u)| format!("({} {})", aexpr_sx(l), aexpr_sx(u)))
                .collect();
            out.push_str(&format!(
                "\n  (array {} ({}) {} ({}))",
                a.name,
                bounds.join(" "),
                a.elem,
                roles.join(" ")
            ));
        }
    }
    for b in &p.sig.assumes {
        out.push_str(&format!("\n  (assume {})", bool_sx(b)));
    }
    out.push_str("\n  (body");
    push_stmt_sx(&mut out, &p.body, 2);
    out.push_str("))");
    out
}

fn list(items: &[String]) -> String {
    items.iter().map(|s| format!(" {s}")).collect()
}

fn push_stmt_sx(out: &mut String, s: &Stmt, ind: usize) {
    let pad = format!("\n{}", "  ".repeat(ind));
    match s {
        Stmt::Empty => {}
        Stmt::Seq(a, b) => {
            push_stmt_sx(out, a, ind);
            push_stmt_sx(out, b, ind);
        }
        Stmt::Assign(a) => {
            let ixs: Vec<String> = a.indexes.iter().map(aexpr_sx).collect();
            out.push_str(&format!(
                "{pad}(assign {} {} ({}) {} (ctx{}))",
                a.label,
                a.target,
                ixs.join(" "),
                expr_sx(&a.rhs),
                list(&a.ctx)
            ));
        }
        Stmt::Do(d) => {
            out.push_str(&format!(
                "{pad}(do {} {} {}",
                d.var,
                aexpr_sx(&d.lo),
                aexpr_sx(&d.hi)
            ));
            push_stmt_sx(out, &d.body, ind + 1);
            out.push(')');
        }
        Stmt::If(i) => {
            let head = match i.pred_ordinal {
                Some(k) => format!("if-pred {k}"),
                None => "if".to_string(),
            };
            out.push_str(&format!("{pad}({head} {}", bool_sx(&i.cond)));
            out.push_str(&format!("{pad}  (then"));
            push_stmt_sx(out, &i.then_branch, ind + 2);
            out.push(')');
            out.push_str(&format!("{pad}  (else"));
            push_stmt_sx(out, &i.else_branch, ind + 2);
            out.push(')');
            out.push_str(&format!("{pad}  (ctx{}))", list(&i.ctx)));
        }
        Stmt::Unsupported(u) => {
            out.push_str(&format!("{pad}(unsupported \"{}\")", u.what));
        }
    }
}

fn aexpr_sx(e: &AExpr) -> String {
    match e {
        AExpr::Lit(c) => c.to_string(),
        AExpr::Var(v) => v.clone(),
        AExpr::Add(a, b) => format!("(+ {} {})", aexpr_sx(a), aexpr_sx(b)),
        AExpr::Sub(a, b) => format!("(- {} {})", aexpr_sx(a), aexpr_sx(b)),
        AExpr::Neg(a) => format!("(neg {})", aexpr_sx(a)),
        AExpr::Mul(k, a) => format!("(* {k} {})", aexpr_sx(a)),
        AExpr::Div(a, m) => format!("(/ {} {m})", aexpr_sx(a)),
    }
}

fn expr_sx(e: &Expr) -> String {
    match e {
        Expr::Lit(c) => c.to_string(),
        Expr::Var(v) => v.clone(),
        Expr::Read(name, ixs) => {
            let ixs: Vec<String> = ixs.iter().map(aexpr_sx).collect();
            if ixs.is_empty() {
                format!("(read {name})")
            } else {
                format!("(read {name} {})", ixs.join(" "))
            }
        }
        Expr::Neg(a) => format!("(neg {})", expr_sx(a)),
        Expr::Bin(op, a, b) => {
            let sym = match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::Div => "/",
            };
            format!("({sym} {} {})", expr_sx(a), expr_sx(b))
        }
    }
}

fn bool_sx(b: &BoolExpr) -> String {
    match b {
        BoolExpr::Cmp(op, a, bb) => format!("({op} {} {})", expr_sx(a), expr_sx(bb)),
        BoolExpr::And(a, bb) => format!("(and {} {})", bool_sx(a), bool_sx(bb)),
        BoolExpr::Or(a, bb) => format!("(or {} {})", bool_sx(a), bool_sx(bb)),
        BoolExpr::Not(a) => format!("(not {})", bool_sx(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::*;

    const SUM: &str = "\
param n;
array X(1:n) real in;
scalar S real out;

S = 0;
do i = 1, n
  S = S + X(i);
enddo
";

    #[test]
    fn sum_pretty_print_is_canonical() {
        let p = parse(SUM).unwrap();
        assert_eq!(pretty(&p), SUM);
    }

    #[test]
    fn round_trip_reparses_to_an_identical_tree() {
        let sources = [
            SUM,
            // Messy separators and spacing collapse to the same tree.
            "param n; array X(1:n) real in; scalar S real out; S=0; do i=1,n; S=S+X(i); enddo",
            // Nested control flow, both test classes, else branches.
            "param n, m;
             array A(0:n, 1:m) integer in out;
             scalar T integer;
             assume n >= 0;
             do i = 1, n
               do j = 1, m
                 if (A(i - 1, j) > 0 and j <= i) then
                   A(i, j) = A(i - 1, j) + T;
                 else
                   T = A(i, j/2) - 2*(j + 1);
                 endif
               enddo
             enddo",
            // Expression shapes that need explicit parentheses.
            "param n; scalar S integer out;
             do i = 1, n
               S = i - (i - 1) - (2*(i + 1))/3 + -4*i;
             enddo",
        ];
        for src in sources {
            let p1 = parse(src).unwrap();
            let text = pretty(&p1);
            let p2 = parse(&text).unwrap_or_else(|e| panic!("reparse failed: {e}\n{text}"));
            assert_eq!(p1, p2, "round trip changed the tree for:\n{text}");
            // And printing is a fixed point.
            assert_eq!(pretty(&p2), text);
        }
    }

    #[test]
    fn sexpr_dump_is_stable_for_sum() {
        let p = parse(SUM).unwrap();
        assert_eq!(
            to_sexpr(&p),
            "(program\n  (params n)\n  (array X ((1 n)) real (in))\n  (scalar S real (out))\n  \
             (body\n    (assign S0 S () 0 (ctx))\n    (do i 1 n\n      \
             (assign S1 S () (+ (read S) (read X i)) (ctx i)))))"
        );
    }

    #[test]
    fn sexpr_marks_data_dependent_tests() {
        let p = parse(
            "param n; array X(1:n) real in; scalar R real out;
             do i = 1, n
               if (R < X(i)) then R = X(i); endif
             enddo",
        )
        .unwrap();
        let sx = to_sexpr(&p);
        assert!(sx.contains("(if-pred 0 (< (read R) (read X i))"), "{sx}");
    }
}
