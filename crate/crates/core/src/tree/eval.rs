//! Concrete evaluation of trees at a point: walk the branches under an
//! integer environment, consulting an oracle for predicate outcomes.

use std::collections::BTreeMap;

use super::{MCond, MTree, STree};

/// A fully evaluated write instance: statement label and argument values.
pub type Instance = (String, Vec<i64>);

/// A fully evaluated send: target node, target port, argument values.
pub type Delivery = (String, String, Vec<i64>);

/// Evaluate a source tree. `None` means the lookup falls through to no
/// write at all. Predicates are resolved by the oracle, which receives
/// the predicate name and its evaluated arguments.
pub fn eval_stree(
    tree: &STree,
    env: &BTreeMap<String, i64>,
    pred: &mut dyn FnMut(&str, &[i64]) -> bool,
) -> Option<Instance> {
    match tree {
        STree::Bottom => None,
        STree::Term(a) => {
            Some((a.name.clone(), a.args.iter().map(|e| e.eval(env)).collect()))
        }
        STree::Branch(c, t, e) => {
            if c.eval(env, pred) {
                eval_stree(t, env, pred)
            } else {
                eval_stree(e, env, pred)
            }
        }
        STree::Div(d, t) => {
            let mut env = env.clone();
            d.bind(&mut env);
            eval_stree(t, &env, pred)
        }
    }
}

/// Evaluate a destination tree into the list of deliveries it denotes.
/// Port conditions are resolved by `port`, which receives the port name
/// and answers with the boolean travelling on it for this firing.
pub fn eval_mtree(
    tree: &MTree,
    env: &BTreeMap<String, i64>,
    port: &mut dyn FnMut(&str) -> bool,
) -> Vec<Delivery> {
    let mut out = Vec::new();
    collect(tree, env, port, &mut out);
    out
}

fn collect(
    tree: &MTree,
    env: &BTreeMap<String, i64>,
    port: &mut dyn FnMut(&str) -> bool,
    out: &mut Vec<Delivery>,
) {
    match tree {
        MTree::Bottom => {}
        MTree::Send(s) => {
            out.push((
                s.node.clone(),
                s.port.clone(),
                s.args.iter().map(|e| e.eval(env)).collect(),
            ));
        }
        MTree::Branch(c, t, e) => {
            let taken = match c {
                MCond::Aff(c) => {
                    c.eval(env, &mut |name, _| {
                        panic!("destination tree asked for predicate {name}")
                    })
                }
                MCond::Port(p) => port(&p.port) == p.positive,
            };
            collect(if taken { t } else { e }, env, port, out);
        }
        MTree::Div(d, t) => {
            let mut env = env.clone();
            d.bind(&mut env);
            collect(t, &env, port, out);
        }
        MTree::Union(parts) => {
            for p in parts {
                collect(p, env, port, out);
            }
        }
        MTree::Enum(ranges, t) => {
            enumerate(ranges, 0, &mut env.clone(), t, port, out);
        }
    }
}

fn enumerate(
    ranges: &[(String, crate::affine::AffineExpr, crate::affine::AffineExpr)],
    k: usize,
    env: &mut BTreeMap<String, i64>,
    body: &MTree,
    port: &mut dyn FnMut(&str) -> bool,
    out: &mut Vec<Delivery>,
) {
    if k == ranges.len() {
        collect(body, env, port, out);
        return;
    }
    let (v, lo, hi) = &ranges[k];
    let (lo, hi) = (lo.eval(env), hi.eval(env));
    for x in lo..=hi {
        let prev = env.insert(v.clone(), x);
        enumerate(ranges, k + 1, env, body, port, out);
        match prev {
            Some(p) => env.insert(v.clone(), p),
            None => env.remove(v),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Atom, PortRef, Send};
    use super::*;
    use crate::affine::{AffineExpr, Cond, DivBinding};

    fn v(name: &str) -> AffineExpr {
        AffineExpr::var(name)
    }

    fn env(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
        pairs.iter().map(|(k, x)| (k.to_string(), *x)).collect()
    }

    #[test]
    fn source_tree_follows_branches_and_divisions() {
        // (i =: 2q + r -> (r = 0 -> A{q} : B{i}))
        let t = STree::div(
            DivBinding { expr: v("i"), modulus: 2, quot: "q1".into(), rem: "r1".into() },
            STree::branch(
                Cond::Eq(v("r1")),
                STree::Term(Atom::new("A", vec![v("q1")])),
                STree::Term(Atom::new("B", vec![v("i")])),
            ),
        );
        let mut no_pred = |_: &str, _: &[i64]| panic!("no predicates here");
        assert_eq!(eval_stree(&t, &env(&[("i", 6)]), &mut no_pred), Some(("A".into(), vec![3])));
        assert_eq!(eval_stree(&t, &env(&[("i", 7)]), &mut no_pred), Some(("B".into(), vec![7])));
        assert_eq!(eval_stree(&t, &env(&[("i", -3)]), &mut no_pred), Some(("B".into(), vec![-3])));
    }

    #[test]
    fn predicates_are_answered_by_the_oracle() {
        let t = STree::branch(
            Cond::Pred(crate::affine::PredCond {
                name: "P1".into(),
                positive: false,
                args: vec![v("i")],
            }),
            STree::Term(Atom::new("A", vec![])),
            STree::Term(Atom::new("B", vec![])),
        );
        let mut odd = |_: &str, args: &[i64]| args[0] % 2 != 0;
        assert_eq!(eval_stree(&t, &env(&[("i", 2)]), &mut odd), Some(("A".into(), vec![])));
        assert_eq!(eval_stree(&t, &env(&[("i", 3)]), &mut odd), Some(("B".into(), vec![])));
    }

    #[test]
    fn destination_tree_enumerates_and_unions() {
        // (& OUT.x{i} (@ j (i + 1, n) S.y{j, i}))
        let t = MTree::union(vec![
            MTree::Send(Send { node: "OUT".into(), port: "x1".into(), args: vec![v("i")] }),
            MTree::Enum(
                vec![("j".into(), v("i").add_const(1), v("n"))],
                Box::new(MTree::Send(Send {
                    node: "S".into(),
                    port: "y1".into(),
                    args: vec![v("j"), v("i")],
                })),
            ),
        ]);
        let got = eval_mtree(&t, &env(&[("i", 2), ("n", 4)]), &mut |_| unreachable!());
        assert_eq!(
            got,
            vec![
                ("OUT".into(), "x1".into(), vec![2]),
                ("S".into(), "y1".into(), vec![3, 2]),
                ("S".into(), "y1".into(), vec![4, 2]),
            ]
        );
        // Empty range enumerates nothing.
        let got = eval_mtree(&t, &env(&[("i", 4), ("n", 4)]), &mut |_| unreachable!());
        assert_eq!(got, vec![("OUT".into(), "x1".into(), vec![4])]);
    }

    #[test]
    fn port_conditions_route_on_token_values() {
        let t = MTree::branch(
            MCond::Port(PortRef { port: "b1".into(), positive: true }),
            MTree::Send(Send { node: "T".into(), port: "x1".into(), args: vec![] }),
            MTree::Send(Send { node: "F".into(), port: "x1".into(), args: vec![] }),
        );
        let yes = eval_mtree(&t, &env(&[]), &mut |_| true);
        assert_eq!(yes, vec![("T".into(), "x1".into(), vec![])]);
        let no = eval_mtree(&t, &env(&[]), &mut |_| false);
        assert_eq!(no, vec![("F".into(), "x1".into(), vec![])]);
    }
}
