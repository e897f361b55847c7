//! Folding a counted loop: given the effect of a single iteration on
//! one array cell, compute the cumulative effect of the whole loop with
//! the loop variable eliminated. The write that survives is the one
//! from the latest iteration whose guard admits it, so each reachable
//! leaf becomes a parametric integer maximisation problem and the
//! per-leaf maxima compete for recency.

use std::collections::BTreeSet;

use crate::affine::pim::{max_piece_groups, negate, winner_flatten, TotalPiece};
use crate::affine::{satisfiable, AffineExpr, Cond, CondSystem, FreshVars, SysItem};

use super::ops::{prune_stree, stree_paths, Ctx, SPath};
use super::{Atom, STree};

/// Effect of `do v = lo, hi { body }` on a cell, from the effect `body`
/// of one iteration. The result no longer mentions `v`.
pub fn fold_stree(
    v: &str,
    lo: &AffineExpr,
    hi: &AffineExpr,
    body: &STree,
    fresh: &mut FreshVars,
) -> STree {
    assert!(!lo.mentions(v) && !hi.mentions(v), "loop bounds may not use {v}");

    // Iterations only run inside the range; prune the body under it.
    let vx = AffineExpr::var(v);
    let range = CondSystem::of(vec![Cond::ge(&vx, lo), Cond::ge(hi, &vx)]);
    let body = prune_stree(body, &Ctx::of(range));

    // Each root-to-write path with disequalities split apart is one
    // competitor; paths are mutually exclusive for a fixed iteration,
    // so maxima from different paths can never tie.
    let paths = split_neqs(stree_paths(&body));
    let mut groups: Vec<(Vec<TotalPiece>, usize)> = Vec::new();
    for (k, path) in paths.iter().enumerate() {
        let sys = path.system();
        assert!(!sys.has_preds(), "predicate under a fold: {sys}");
        for g in max_piece_groups(v, lo, hi, &sys, fresh) {
            groups.push((g, k));
        }
    }

    let winners = winner_flatten(&groups);
    let resolved: Vec<(Vec<SysItem>, Atom)> = winners
        .into_iter()
        .map(|(guard, _, rew, k)| {
            let atom = paths[k].leaf.subst_map(&rew);
            (drop_unused_divs(guard, &atom).items, atom)
        })
        .collect();

    let tree = decision_tree(resolved, &CondSystem::new());
    debug_assert!(!stree_mentions(&tree, v), "loop variable {v} survived folding: {tree}");
    tree
}

fn feasible(sys: &CondSystem) -> bool {
    !sys.is_trivially_false() && satisfiable(sys)
}

/// Turn disjoint guarded writes into one decision tree. At each step
/// the first unresolved guard item of the first arm becomes a vertex;
/// both sides then discard arms that became impossible and guard items
/// that became redundant, so shared and tournament-implied conditions
/// are tested once instead of being re-spelled per arm.
fn decision_tree(arms: Vec<(Vec<SysItem>, Atom)>, ctx: &CondSystem) -> STree {
    // Keep only arms feasible under the context, with entailed
    // conditions and already-bound divisions removed from their guards.
    let mut live: Vec<(Vec<SysItem>, Atom)> = Vec::new();
    for (items, atom) in arms {
        let mut whole = ctx.clone();
        for it in &items {
            whole.push_item(it.clone());
        }
        if !feasible(&whole) {
            continue;
        }
        let items: Vec<SysItem> = items
            .into_iter()
            .filter(|it| match it {
                SysItem::Div(d) => !ctx.divs().any(|d2| d2 == d),
                SysItem::Cond(c) => {
                    let mut s = ctx.clone();
                    s.push_cond(negate(c));
                    feasible(&s)
                }
            })
            .collect();
        live.push((items, atom));
    }
    if live.is_empty() {
        return STree::Bottom;
    }
    if live[0].0.is_empty() {
        // This arm covers the whole remaining region; disjointness has
        // already eliminated every other arm.
        assert!(live.len() == 1, "overlapping write regions in a fold");
        return STree::Term(live[0].1.clone());
    }

    match live[0].0[0].clone() {
        SysItem::Div(d) => {
            let rest: Vec<(Vec<SysItem>, Atom)> = live
                .into_iter()
                .map(|(items, atom)| {
                    let items =
                        items.into_iter().filter(|it| *it != SysItem::Div(d.clone())).collect();
                    (items, atom)
                })
                .collect();
            let mut ctx2 = ctx.clone();
            ctx2.push_div(d.clone());
            STree::div(d, decision_tree(rest, &ctx2))
        }
        SysItem::Cond(c) => {
            let t_arms: Vec<(Vec<SysItem>, Atom)> = live
                .iter()
                .map(|(items, atom)| {
                    let items = items
                        .iter()
                        .filter(|it| **it != SysItem::Cond(c.clone()))
                        .cloned()
                        .collect();
                    (items, atom.clone())
                })
                .collect();
            let mut ctx_t = ctx.clone();
            ctx_t.push_cond(c.clone());
            let t = decision_tree(t_arms, &ctx_t);
            let mut ctx_f = ctx.clone();
            ctx_f.push_cond(negate(&c));
            let e = if feasible(&ctx_f) { decision_tree(live, &ctx_f) } else { STree::Bottom };
            if t == e {
                t
            } else {
                STree::branch(c, t, e)
            }
        }
    }
}

/// Remove division bindings whose variables nothing (transitively)
/// uses: an unused binding is semantically free, and the tournament of
/// winners leaves plenty of them behind.
fn drop_unused_divs(guard: CondSystem, atom: &Atom) -> CondSystem {
    let mut used: BTreeSet<String> = BTreeSet::new();
    for arg in &atom.args {
        used.extend(arg.vars().map(str::to_string));
    }
    for item in &guard.items {
        if let SysItem::Cond(c) = item {
            used.extend(c.vars());
        }
    }
    let mut keep = vec![false; guard.items.len()];
    for (i, item) in guard.items.iter().enumerate().rev() {
        match item {
            SysItem::Cond(_) => keep[i] = true,
            SysItem::Div(d) => {
                if used.contains(&d.quot) || used.contains(&d.rem) {
                    keep[i] = true;
                    used.extend(d.expr.vars().map(str::to_string));
                }
            }
        }
    }
    let mut out = CondSystem::new();
    for (i, item) in guard.items.into_iter().enumerate() {
        if keep[i] {
            out.push_item(item);
        }
    }
    out
}

fn split_neqs(paths: Vec<SPath>) -> Vec<SPath> {
    let mut out = Vec::new();
    for path in paths {
        let mut variants: Vec<Vec<SysItem>> = vec![Vec::new()];
        for item in &path.items {
            match item {
                SysItem::Cond(Cond::Neq(e)) => {
                    let lt = Cond::Ge(e.neg().add_const(-1));
                    let gt = Cond::Ge(e.add_const(-1));
                    variants = variants
                        .into_iter()
                        .flat_map(|p| {
                            let mut a = p.clone();
                            a.push(SysItem::Cond(gt.clone()));
                            let mut b = p;
                            b.push(SysItem::Cond(lt.clone()));
                            [a, b]
                        })
                        .collect();
                }
                other => {
                    for p in &mut variants {
                        p.push(other.clone());
                    }
                }
            }
        }
        for items in variants {
            out.push(SPath { items, leaf: path.leaf.clone() });
        }
    }
    out
}

fn stree_mentions(tree: &STree, v: &str) -> bool {
    match tree {
        STree::Bottom => false,
        STree::Term(a) => a.args.iter().any(|e| e.mentions(v)),
        STree::Branch(c, t, e) => {
            c.mentions(v) || stree_mentions(t, v) || stree_mentions(e, v)
        }
        STree::Div(d, t) => d.expr.mentions(v) || stree_mentions(t, v),
    }
}
