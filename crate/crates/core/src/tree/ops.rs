//! Structural operations on trees: substitution, sequencing, reachable
//! paths, and pruning under a reachability context.

use std::collections::BTreeMap;

use crate::affine::{satisfiable, AffineExpr, Cond, CondSystem, DivBinding, SysItem};

use super::{MCond, MTree, STree};

/// Substitute free variables throughout a source tree. Division
/// vertices check that their bound variables are not captured.
pub fn subst_stree(tree: &STree, map: &BTreeMap<String, AffineExpr>) -> STree {
    match tree {
        STree::Bottom => STree::Bottom,
        STree::Term(a) => STree::Term(a.subst_map(map)),
        STree::Branch(c, t, e) => {
            STree::branch(c.subst_map(map), subst_stree(t, map), subst_stree(e, map))
        }
        STree::Div(d, t) => STree::div(d.subst_map(map), subst_stree(t, map)),
    }
}

/// Substitute free variables throughout a destination tree.
pub fn subst_mtree(tree: &MTree, map: &BTreeMap<String, AffineExpr>) -> MTree {
    match tree {
        MTree::Bottom => MTree::Bottom,
        MTree::Send(s) => MTree::Send(s.subst_map(map)),
        MTree::Branch(c, t, e) => {
            let c2 = match c {
                MCond::Aff(c) => MCond::Aff(c.subst_map(map)),
                MCond::Port(p) => MCond::Port(p.clone()),
            };
            MTree::branch(c2, subst_mtree(t, map), subst_mtree(e, map))
        }
        MTree::Div(d, t) => MTree::div(d.subst_map(map), subst_mtree(t, map)),
        MTree::Union(parts) => MTree::Union(parts.iter().map(|p| subst_mtree(p, map)).collect()),
        MTree::Enum(ranges, t) => {
            for (v, _, _) in ranges {
                assert!(!map.contains_key(v), "enumeration variable {v} captured");
            }
            let ranges = ranges
                .iter()
                .map(|(v, lo, hi)| (v.clone(), lo.subst_map(map), hi.subst_map(map)))
                .collect();
            MTree::Enum(ranges, Box::new(subst_mtree(t, map)))
        }
    }
}

/// Sequential composition: the effect of running `earlier` then
/// `later`. Reads that `later` leaves untouched fall through to
/// `earlier`, so every bottom leaf of `later` is replaced by `earlier`.
pub fn seq(earlier: &STree, later: &STree) -> STree {
    match later {
        STree::Bottom => earlier.clone(),
        STree::Term(a) => STree::Term(a.clone()),
        STree::Branch(c, t, e) => {
            STree::branch(c.clone(), seq(earlier, t), seq(earlier, e))
        }
        STree::Div(d, t) => STree::div(d.clone(), seq(earlier, t)),
    }
}

/// The disjoint ways a condition can fail.
pub fn negations(c: &Cond) -> Vec<Cond> {
    match c {
        Cond::Eq(e) => vec![Cond::Ge(e.add_const(-1)), Cond::Ge(e.neg().add_const(-1))],
        Cond::Ge(e) => vec![Cond::Ge(e.neg().add_const(-1))],
        Cond::Neq(e) => vec![Cond::Eq(e.clone())],
        Cond::Pred(p) => vec![Cond::Pred(p.negated())],
    }
}

/// Reachability context for pruning: the region a vertex can be reached
/// from, kept as a union of alternative systems because the negation of
/// an equality is not convex.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub alts: Vec<CondSystem>,
}

impl Ctx {
    pub fn top() -> Ctx {
        Ctx { alts: vec![CondSystem::new()] }
    }

    pub fn of(sys: CondSystem) -> Ctx {
        Ctx { alts: vec![sys] }
    }

    pub fn is_empty_region(&self) -> bool {
        self.alts.iter().all(|a| a.is_trivially_false() || !satisfiable(a))
    }

    fn map(&self, f: impl Fn(&CondSystem) -> Vec<CondSystem>) -> Ctx {
        let mut alts = Vec::new();
        for a in &self.alts {
            for b in f(a) {
                if !b.is_trivially_false() {
                    alts.push(b);
                }
            }
        }
        Ctx { alts }
    }

    pub fn and_cond(&self, c: &Cond) -> Ctx {
        self.map(|a| {
            let mut b = a.clone();
            b.push_cond(c.clone());
            vec![b]
        })
    }

    pub fn and_not(&self, c: &Cond) -> Ctx {
        let negs = negations(c);
        self.map(|a| {
            negs.iter()
                .map(|n| {
                    let mut b = a.clone();
                    b.push_cond(n.clone());
                    b
                })
                .collect()
        })
    }

    pub fn and_div(&self, d: &DivBinding) -> Ctx {
        self.map(|a| {
            let mut b = a.clone();
            b.push_div(d.clone());
            vec![b]
        })
    }
}

/// Remove branches that cannot be taken from wherever this tree is
/// evaluated, and collapse branches whose arms became identical.
pub fn prune_stree(tree: &STree, ctx: &Ctx) -> STree {
    if ctx.is_empty_region() {
        return STree::Bottom;
    }
    match tree {
        STree::Bottom => STree::Bottom,
        STree::Term(a) => STree::Term(a.clone()),
        STree::Div(d, t) => {
            let t2 = prune_stree(t, &ctx.and_div(d));
            if t2.is_bottom() {
                STree::Bottom
            } else {
                STree::div(d.clone(), t2)
            }
        }
        STree::Branch(c, t, e) => {
            let ct = ctx.and_cond(c);
            if ct.is_empty_region() {
                return prune_stree(e, ctx);
            }
            let cf = ctx.and_not(c);
            if cf.is_empty_region() {
                return prune_stree(t, ctx);
            }
            let t2 = prune_stree(t, &ct);
            let e2 = prune_stree(e, &cf);
            if t2 == e2 {
                t2
            } else {
                STree::branch(c.clone(), t2, e2)
            }
        }
    }
}

/// Prune a destination tree. Port conditions are opaque (both arms stay
/// reachable); enumeration bodies are pruned without the range bounds,
/// which is sound but weaker.
pub fn prune_mtree(tree: &MTree, ctx: &Ctx) -> MTree {
    if ctx.is_empty_region() {
        return MTree::Bottom;
    }
    match tree {
        MTree::Bottom => MTree::Bottom,
        MTree::Send(s) => MTree::Send(s.clone()),
        MTree::Div(d, t) => {
            let t2 = prune_mtree(t, &ctx.and_div(d));
            if t2.is_bottom() {
                MTree::Bottom
            } else {
                MTree::div(d.clone(), t2)
            }
        }
        MTree::Branch(MCond::Aff(c), t, e) => {
            let ct = ctx.and_cond(c);
            if ct.is_empty_region() {
                return prune_mtree(e, ctx);
            }
            let cf = ctx.and_not(c);
            if cf.is_empty_region() {
                return prune_mtree(t, ctx);
            }
            let t2 = prune_mtree(t, &ct);
            let e2 = prune_mtree(e, &cf);
            if t2 == e2 {
                t2
            } else {
                MTree::branch(MCond::Aff(c.clone()), t2, e2)
            }
        }
        MTree::Branch(MCond::Port(p), t, e) => {
            let t2 = prune_mtree(t, ctx);
            let e2 = prune_mtree(e, ctx);
            if t2.is_bottom() && e2.is_bottom() {
                MTree::Bottom
            } else {
                MTree::branch(MCond::Port(p.clone()), t2, e2)
            }
        }
        MTree::Union(parts) => MTree::union(parts.iter().map(|p| prune_mtree(p, ctx)).collect()),
        MTree::Enum(ranges, t) => {
            let t2 = prune_mtree(t, ctx);
            if t2.is_bottom() {
                MTree::Bottom
            } else {
                MTree::Enum(ranges.clone(), Box::new(t2))
            }
        }
    }
}

/// One root-to-leaf path of a source tree ending in a write atom; the
/// items are the conditions and bindings along the way, with else-arm
/// conditions expanded into their disjoint negations.
#[derive(Debug, Clone)]
pub struct SPath {
    pub items: Vec<SysItem>,
    pub leaf: super::Atom,
}

impl SPath {
    pub fn system(&self) -> CondSystem {
        let mut sys = CondSystem::new();
        for item in &self.items {
            sys.push_item(item.clone());
        }
        sys
    }
}

/// All paths that reach a write atom. Bottom leaves yield no path.
pub fn stree_paths(tree: &STree) -> Vec<SPath> {
    fn go(tree: &STree, prefix: &mut Vec<SysItem>, out: &mut Vec<SPath>) {
        match tree {
            STree::Bottom => {}
            STree::Term(a) => out.push(SPath { items: prefix.clone(), leaf: a.clone() }),
            STree::Div(d, t) => {
                prefix.push(SysItem::Div(d.clone()));
                go(t, prefix, out);
                prefix.pop();
            }
            STree::Branch(c, t, e) => {
                prefix.push(SysItem::Cond(c.clone()));
                go(t, prefix, out);
                prefix.pop();
                for n in negations(c) {
                    prefix.push(SysItem::Cond(n));
                    go(e, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(tree, &mut Vec::new(), &mut out);
    out
}

/// Rename the division variables of a tree to fresh names, avoiding
/// clashes when a tree is instantiated more than once in one scope.
pub fn refresh_divs_stree(tree: &STree, fresh: &mut crate::affine::FreshVars) -> STree {
    fn go(
        tree: &STree,
        map: &BTreeMap<String, AffineExpr>,
        fresh: &mut crate::affine::FreshVars,
    ) -> STree {
        match tree {
            STree::Bottom => STree::Bottom,
            STree::Term(a) => STree::Term(a.subst_map(map)),
            STree::Branch(c, t, e) => {
                STree::branch(c.subst_map(map), go(t, map, fresh), go(e, map, fresh))
            }
            STree::Div(d, t) => {
                let (q, r) = fresh.div_pair();
                let mut map2 = map.clone();
                map2.insert(d.quot.clone(), AffineExpr::var(&q));
                map2.insert(d.rem.clone(), AffineExpr::var(&r));
                let d2 = DivBinding {
                    expr: d.expr.subst_map(map),
                    modulus: d.modulus,
                    quot: q,
                    rem: r,
                };
                STree::Div(d2, Box::new(go(t, &map2, fresh)))
            }
        }
    }
    go(tree, &BTreeMap::new(), fresh)
}

#[cfg(test)]
mod tests {
    use super::super::Atom;
    use super::*;
    use crate::affine::FreshVars;

    fn v(name: &str) -> AffineExpr {
        AffineExpr::var(name)
    }

    fn term(name: &str, args: Vec<AffineExpr>) -> STree {
        STree::Term(Atom::new(name, args))
    }

    #[test]
    fn seq_fills_bottoms_of_the_later_tree() {
        let earlier = term("S1", vec![v("i")]);
        let later = STree::branch(Cond::gt(v("i")), term("S2", vec![v("i")]), STree::Bottom);
        assert_eq!(seq(&earlier, &later).to_string(), "(i >= 1 -> S2{i} : S1{i})");
    }

    #[test]
    fn prune_removes_entailed_tests_and_dead_arms() {
        // Under i >= 2, the inner test i >= 1 always holds.
        let t = STree::branch(
            Cond::ge(&v("i"), &AffineExpr::lit(2)),
            STree::branch(Cond::gt(v("i")), term("A", vec![]), STree::Bottom),
            term("B", vec![]),
        );
        let pruned = prune_stree(&t, &Ctx::top());
        assert_eq!(pruned.to_string(), "(i >= 2 -> A{} : B{})");
    }

    #[test]
    fn prune_collapses_identical_arms() {
        let t = STree::branch(Cond::gt(v("i")), term("A", vec![]), term("A", vec![]));
        assert_eq!(prune_stree(&t, &Ctx::top()).to_string(), "A{}");
    }

    #[test]
    fn prune_uses_division_bindings() {
        // (i =: 2q + r -> (r = 3 -> A : B)): the remainder of a division
        // by 2 is never 3, so the branch folds to B.
        let mut fresh = FreshVars::new(3);
        let (q, r) = fresh.div_pair();
        let t = STree::div(
            DivBinding { expr: v("i"), modulus: 2, quot: q, rem: r.clone() },
            STree::branch(
                Cond::eq(&v(&r), &AffineExpr::lit(3)),
                term("A", vec![]),
                term("B", vec![]),
            ),
        );
        assert_eq!(prune_stree(&t, &Ctx::top()).to_string(), "(i =: 2q4 + r4 -> B{})");
    }

    #[test]
    fn prune_respects_outer_context() {
        let t = STree::branch(Cond::ge(&v("n"), &v("i")), term("A", vec![]), term("B", vec![]));
        let ctx = Ctx::of(CondSystem::of(vec![Cond::ge(&v("n"), &v("i"))]));
        assert_eq!(prune_stree(&t, &ctx).to_string(), "A{}");
        let ctx2 = Ctx::of(CondSystem::of(vec![Cond::gt(v("i").sub(&v("n")))]));
        assert_eq!(prune_stree(&t, &ctx2).to_string(), "B{}");
    }

    #[test]
    fn paths_expand_equality_negations() {
        let t = STree::branch(
            Cond::eq(&v("i"), &v("j")),
            term("A", vec![v("i")]),
            term("B", vec![v("i")]),
        );
        let paths = stree_paths(&t);
        let shown: Vec<String> =
            paths.iter().map(|p| format!("{} -> {}", p.system(), p.leaf)).collect();
        assert_eq!(
            shown,
            vec![
                "{i = j} -> A{i}".to_string(),
                "{i >= j + 1} -> B{i}".to_string(),
                "{j >= i + 1} -> B{i}".to_string(),
            ]
        );
    }

    #[test]
    fn refresh_divs_renames_consistently() {
        let mut fresh = FreshVars::new(3);
        let (q, r) = fresh.div_pair();
        let t = STree::div(
            DivBinding { expr: v("i"), modulus: 2, quot: q.clone(), rem: r },
            term("A", vec![v(&q)]),
        );
        let mut fresh2 = FreshVars::new(7);
        let renamed = refresh_divs_stree(&t, &mut fresh2);
        assert_eq!(renamed.to_string(), "(i =: 2q8 + r8 -> A{q8})");
    }
}
