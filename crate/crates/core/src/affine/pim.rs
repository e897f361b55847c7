//! Parametric integer maximisation: the largest value of one variable
//! in a box, subject to a condition system, as a function of the
//! remaining variables.
//!
//! The result is piecewise affine. Division bindings among the guards
//! are handled exactly by refining the maximised variable into residue
//! classes `v = P*t + rho`; within a class every binding becomes affine
//! in the class variable `t`, bounds on `t` become unit through fresh
//! parametric divisions, and the maximum is an explicit case split over
//! which upper bound is smallest. Classes are then recombined by
//! comparing their per-class maxima, which keeps the pieces disjoint.

use std::collections::{BTreeMap, BTreeSet};

use super::cond::{Cond, CondSystem, DivBinding, SysItem};
use super::{gcd, AffineExpr, FreshVars};

/// One case of a piecewise affine function.
#[derive(Debug, Clone)]
pub struct Piece<T> {
    pub guard: CondSystem,
    pub value: AffineExpr,
    pub payload: T,
}

/// A piecewise affine function with pairwise disjoint guards; inputs
/// matching no guard have no value.
#[derive(Debug, Clone)]
pub struct Piecewise<T> {
    pub pieces: Vec<Piece<T>>,
}

impl<T> Piecewise<T> {
    /// Evaluate at a concrete point. Guards are disjoint, so at most
    /// one piece applies (checked).
    pub fn eval(&self, env: &BTreeMap<String, i64>) -> Option<(i64, &T)> {
        let mut no_preds = |_: &str, _: &[i64]| panic!("predicate in piecewise guard");
        let mut hit: Option<(i64, &T)> = None;
        for p in &self.pieces {
            if let Some(ext) = p.guard.eval_extending(env, &mut no_preds) {
                let val = p.value.eval(&ext);
                assert!(hit.is_none(), "overlapping pieces in piecewise function");
                hit = Some((val, &p.payload));
            }
        }
        hit
    }
}

/// One case of a group's contribution: where `guard` holds, the group
/// contributes `value` (the admissible maximum together with rewrites
/// for the maximised variable and its dependent division variables), or
/// nothing at all when `value` is `None`. The pieces of one group are
/// pairwise disjoint and jointly cover every valuation, which is what
/// lets groups be combined by plain conjunction.
#[derive(Debug, Clone)]
pub(crate) struct TotalPiece {
    pub guard: CondSystem,
    pub value: Option<(AffineExpr, BTreeMap<String, AffineExpr>)>,
}

/// A flattened winner: guard, maximum value, rewrites, group tag.
pub(crate) type Winner<T> = (CondSystem, AffineExpr, BTreeMap<String, AffineExpr>, T);

/// Largest `v` with `lo <= v <= hi` satisfying `guard`, as a piecewise
/// affine function of the other variables.
pub fn param_int_max(
    v: &str,
    lo: &AffineExpr,
    hi: &AffineExpr,
    guard: &CondSystem,
    fresh: &mut FreshVars,
) -> Piecewise<()> {
    let groups: Vec<(Vec<TotalPiece>, ())> = max_piece_groups(v, lo, hi, guard, fresh)
        .into_iter()
        .map(|g| (g, ()))
        .collect();
    let pieces = winner_flatten(&groups)
        .into_iter()
        .map(|(guard, value, _, ())| Piece { guard, value, payload: () })
        .collect();
    Piecewise { pieces }
}

pub(crate) fn negate(c: &Cond) -> Cond {
    match c {
        Cond::Eq(e) => Cond::Neq(e.clone()),
        Cond::Neq(e) => Cond::Eq(e.clone()),
        Cond::Ge(e) => Cond::Ge(e.neg().add_const(-1)),
        Cond::Pred(p) => Cond::Pred(p.negated()),
    }
}

/// Combine total groups of candidate maxima into one disjoint list of
/// winners. Requires that two values from different groups can never
/// coincide where both apply (groups here are residue classes or
/// disjoint branch paths, which guarantees it). Groups are merged one
/// at a time into a running "best so far" decomposition, so infeasible
/// combinations are discarded as soon as they arise instead of at the
/// end of a full cartesian product.
pub(crate) fn winner_flatten<T: Clone>(groups: &[(Vec<TotalPiece>, T)]) -> Vec<Winner<T>> {
    struct Best<T> {
        guard: CondSystem,
        value: Option<(AffineExpr, BTreeMap<String, AffineExpr>, T)>,
    }

    fn feasible(sys: &CondSystem) -> bool {
        !sys.is_trivially_false() && super::satisfiable(sys)
    }

    /// Merging guards from different groups piles up duplicate division
    /// bindings (same expression, different names) and bindings nothing
    /// references; both slow the remaining satisfiability queries down.
    fn tidy<T>(b: &mut Best<T>) {
        let renames = b.guard.unify_divs();
        if !renames.is_empty() {
            if let Some((val, rew, _)) = &mut b.value {
                debug_assert!(rew.keys().all(|k| !renames.contains_key(k)));
                *val = val.subst_map(&renames);
                for e in rew.values_mut() {
                    *e = e.subst_map(&renames);
                }
            }
        }
        let mut used: BTreeSet<String> = BTreeSet::new();
        for item in &b.guard.items {
            if let SysItem::Cond(c) = item {
                used.extend(c.vars());
            }
        }
        if let Some((val, rew, _)) = &b.value {
            used.extend(val.vars().map(str::to_string));
            for e in rew.values() {
                used.extend(e.vars().map(str::to_string));
            }
        }
        let mut keep = vec![true; b.guard.items.len()];
        for (i, item) in b.guard.items.iter().enumerate().rev() {
            if let SysItem::Div(d) = item {
                if used.contains(&d.quot) || used.contains(&d.rem) {
                    used.extend(d.expr.vars().map(str::to_string));
                } else {
                    keep[i] = false;
                }
            }
        }
        if keep.iter().any(|k| !k) {
            let items = std::mem::take(&mut b.guard.items);
            for (i, item) in items.into_iter().enumerate() {
                if keep[i] {
                    b.guard.push_item(item);
                }
            }
        }
    }

    let mut acc: Vec<Best<T>> = vec![Best { guard: CondSystem::new(), value: None }];
    for (pieces, tag) in groups {
        let somes: Vec<&TotalPiece> = pieces.iter().filter(|p| p.value.is_some()).collect();
        let mut next: Vec<Best<T>> = Vec::new();
        for a in &acc {
            // If none of the group's value pieces can hold here, the
            // group is silent on this whole region: totality of its
            // pieces means the region sits inside the valueless rest,
            // so the entry passes through unchanged.
            let live: Vec<&TotalPiece> = somes
                .iter()
                .copied()
                .filter(|p| feasible(&a.guard.concat(&p.guard)))
                .collect();
            if live.is_empty() {
                next.push(Best { guard: a.guard.clone(), value: a.value.clone() });
                continue;
            }
            for p in pieces {
                let joint = a.guard.concat(&p.guard);
                if !feasible(&joint) {
                    continue;
                }
                match (&a.value, &p.value) {
                    (_, None) => {
                        next.push(Best { guard: joint, value: a.value.clone() });
                    }
                    (None, Some((val, rew))) => {
                        next.push(Best {
                            guard: joint,
                            value: Some((val.clone(), rew.clone(), tag.clone())),
                        });
                    }
                    (Some((va, _, _)), Some((vb, rewb))) => {
                        // The values cannot tie where both apply, so
                        // strict comparisons split the region exactly.
                        let mut ga = joint.clone();
                        ga.push_cond(Cond::Ge(va.sub(vb).add_const(-1)));
                        if feasible(&ga) {
                            next.push(Best { guard: ga, value: a.value.clone() });
                        }
                        let mut gb = joint;
                        gb.push_cond(Cond::Ge(vb.sub(va).add_const(-1)));
                        if feasible(&gb) {
                            next.push(Best {
                                guard: gb,
                                value: Some((vb.clone(), rewb.clone(), tag.clone())),
                            });
                        }
                    }
                }
            }
        }
        acc = next;
        for b in &mut acc {
            tidy(b);
        }
    }
    acc.into_iter()
        .filter_map(|b| b.value.map(|(val, rew, tag)| (b.guard, val, rew, tag)))
        .collect()
}

/// Per-residue-class candidate maxima; each inner vector is one total
/// group (disjoint pieces covering all valuations of the free
/// variables).
pub(crate) fn max_piece_groups(
    v: &str,
    lo: &AffineExpr,
    hi: &AffineExpr,
    guard: &CondSystem,
    fresh: &mut FreshVars,
) -> Vec<Vec<TotalPiece>> {
    assert!(!guard.has_preds(), "predicate reached integer maximisation: {guard}");

    // Separate guard items that (transitively) constrain `v`.
    let mut dep: Vec<String> = vec![v.to_string()];
    let mut indep: Vec<SysItem> = Vec::new();
    let mut dep_divs: Vec<DivBinding> = Vec::new();
    let mut dep_conds: Vec<Cond> = Vec::new();
    for item in &guard.items {
        match item {
            SysItem::Div(d) => {
                if d.expr.vars().any(|x| dep.iter().any(|y| y.as_str() == x)) {
                    dep.push(d.quot.clone());
                    dep.push(d.rem.clone());
                    dep_divs.push(d.clone());
                } else {
                    indep.push(item.clone());
                }
            }
            SysItem::Cond(c) => {
                if c.vars().iter().any(|x| dep.contains(x)) {
                    dep_conds.push(c.clone());
                } else {
                    indep.push(item.clone());
                }
            }
        }
    }

    // Refine v = P*t + rho until every dependent binding is affine in t.
    let t = fresh.scratch("t");
    struct Cls {
        period: i64,
        offset: i64,
        rew: BTreeMap<String, AffineExpr>,
        items: Vec<SysItem>,
        todo: Vec<DivBinding>,
    }
    let mut start_rew = BTreeMap::new();
    start_rew.insert(v.to_string(), AffineExpr::var(&t));
    let mut queue = vec![Cls {
        period: 1,
        offset: 0,
        rew: start_rew,
        items: Vec::new(),
        todo: dep_divs,
    }];
    let mut ready: Vec<Cls> = Vec::new();
    while let Some(mut cls) = queue.pop() {
        if cls.todo.is_empty() {
            ready.push(cls);
            continue;
        }
        let d = cls.todo.remove(0);
        let expr2 = d.expr.subst_map(&cls.rew);
        let a = expr2.coeff(&t);
        let m = d.modulus;
        if a % m == 0 {
            // floor((a*t + e0) / m) = (a/m)*t + floor(e0 / m).
            let e0 = expr2.subst(&t, &AffineExpr::lit(0));
            let (q_expr, r_expr) = if let Some(k) = e0.as_const() {
                (AffineExpr::lit(k.div_euclid(m)), AffineExpr::lit(k.rem_euclid(m)))
            } else {
                let (qn, rn) = fresh.div_pair();
                cls.items.push(SysItem::Div(DivBinding {
                    expr: e0,
                    modulus: m,
                    quot: qn.clone(),
                    rem: rn.clone(),
                }));
                (AffineExpr::var(&qn), AffineExpr::var(&rn))
            };
            cls.rew.insert(d.quot.clone(), AffineExpr::var(&t).scale(a / m).add(&q_expr));
            cls.rew.insert(d.rem.clone(), r_expr);
            queue.push(cls);
        } else {
            // Split t into residue classes so the coefficient becomes
            // divisible: t = g*t' + tau, tau in [0, g).
            let g = m / gcd(m, a);
            for tau in (0..g).rev() {
                let sub = AffineExpr::var(&t).scale(g).add_const(tau);
                let rew: BTreeMap<String, AffineExpr> =
                    cls.rew.iter().map(|(k, e)| (k.clone(), e.subst(&t, &sub))).collect();
                let mut todo = cls.todo.clone();
                todo.insert(0, d.clone());
                queue.push(Cls {
                    period: cls.period * g,
                    offset: cls.period * tau + cls.offset,
                    rew,
                    items: cls.items.clone(),
                    todo,
                });
            }
        }
    }
    ready.sort_by_key(|c| c.offset);

    let mut groups: Vec<Vec<TotalPiece>> = Vec::new();
    for cls in ready {
        groups.push(class_pieces(&cls.rew, cls.period, cls.offset, &cls.items, &dep_conds, &indep, v, &t, lo, hi, fresh));
    }
    groups
}

/// A lower or upper bound on the class variable, made unit through a
/// parametric floor division when the raw coefficient exceeds one.
fn unit_bound(
    num: AffineExpr,
    denom: i64,
    items: &mut Vec<SysItem>,
    fresh: &mut FreshVars,
) -> AffineExpr {
    debug_assert!(denom > 0);
    if denom == 1 {
        return num;
    }
    if let Some(k) = num.as_const() {
        return AffineExpr::lit(k.div_euclid(denom));
    }
    let (qn, rn) = fresh.div_pair();
    items.push(SysItem::Div(DivBinding { expr: num, modulus: denom, quot: qn.clone(), rem: rn }));
    AffineExpr::var(&qn)
}

#[allow(clippy::too_many_arguments)]
fn class_pieces(
    rew: &BTreeMap<String, AffineExpr>,
    period: i64,
    offset: i64,
    class_items: &[SysItem],
    dep_conds: &[Cond],
    indep: &[SysItem],
    v: &str,
    t: &str,
    lo: &AffineExpr,
    hi: &AffineExpr,
    fresh: &mut FreshVars,
) -> Vec<TotalPiece> {
    let vexpr = rew[v].clone();
    debug_assert_eq!(vexpr.coeff(t), period);
    debug_assert_eq!(vexpr.subst(t, &AffineExpr::lit(0)).as_const(), Some(offset));
    let rewritten: Vec<Cond> = dep_conds.iter().map(|c| c.subst_map(rew)).collect();

    // Shared guard prefix: independent items, class bindings, and any
    // bindings introduced to make bounds unit.
    let mut prefix: Vec<SysItem> = indep.to_vec();
    prefix.extend(class_items.iter().cloned());

    // Equality on t pins the class variable outright.
    if let Some(pos) = rewritten
        .iter()
        .position(|c| matches!(c, Cond::Eq(e) if e.coeff(t) != 0))
    {
        let Cond::Eq(e) = &rewritten[pos] else { unreachable!() };
        let c = e.coeff(t);
        let rest_e = e.subst(t, &AffineExpr::lit(0));
        let mut items = prefix.clone();
        let mut conds: Vec<Cond> = Vec::new();
        let sol = if c.abs() == 1 {
            if c == 1 {
                rest_e.neg()
            } else {
                rest_e
            }
        } else {
            let (num, m) = if c > 0 { (rest_e.neg(), c) } else { (rest_e, -c) };
            let (qn, rn) = fresh.div_pair();
            items.push(SysItem::Div(DivBinding {
                expr: num,
                modulus: m,
                quot: qn.clone(),
                rem: rn.clone(),
            }));
            conds.push(Cond::Eq(AffineExpr::var(&rn)));
            AffineExpr::var(&qn)
        };
        // Range membership, then the untouched conditions.
        conds.push(Cond::Ge(vexpr.subst(t, &sol).sub(lo)));
        conds.push(Cond::Ge(hi.sub(&vexpr.subst(t, &sol))));
        for (k, c) in rewritten.iter().enumerate() {
            if k != pos {
                conds.push(c.subst_map(&single(t, &sol)));
            }
        }
        let base = |upto: usize| {
            let mut g = CondSystem::new();
            for item in &items {
                g.push_item(subst_item(item, t, &sol));
            }
            for c in &conds[..upto] {
                g.push_cond(c.clone());
            }
            g
        };
        let mut pieces: Vec<TotalPiece> = Vec::new();
        for (i, c) in conds.iter().enumerate() {
            let mut g = base(i);
            g.push_cond(negate(c));
            pieces.push(TotalPiece { guard: g, value: None });
        }
        let value = vexpr.subst(t, &sol);
        let rewrites = rew.iter().map(|(k, e)| (k.clone(), e.subst(t, &sol))).collect();
        pieces.push(TotalPiece { guard: base(conds.len()), value: Some((value, rewrites)) });
        pieces.retain(|p| !p.guard.is_trivially_false() && super::satisfiable(&p.guard));
        return pieces;
    }

    // Bounds path: collect unit bounds on t (range first, then guard
    // conditions in order).
    let mut items = prefix.clone();
    let mut plain: Vec<Cond> = Vec::new();
    let mut lowers: Vec<AffineExpr> = Vec::new();
    let mut uppers: Vec<AffineExpr> = Vec::new();
    // lo <= P*t + rho  =>  t >= ceil((lo - rho)/P)
    lowers.push(unit_bound(lo.add_const(-offset).add_const(period - 1), period, &mut items, fresh));
    // P*t + rho <= hi  =>  t <= floor((hi - rho)/P)
    uppers.push(unit_bound(hi.add_const(-offset), period, &mut items, fresh));
    for c in &rewritten {
        match c {
            Cond::Ge(e) => {
                let ct = e.coeff(t);
                let e0 = e.subst(t, &AffineExpr::lit(0));
                if ct == 0 {
                    plain.push(c.clone());
                } else if ct > 0 {
                    // ct*t >= -e0  =>  t >= ceil(-e0/ct)
                    lowers.push(unit_bound(e0.neg().add_const(ct - 1), ct, &mut items, fresh));
                } else {
                    // (-ct)*t <= e0  =>  t <= floor(e0/(-ct))
                    uppers.push(unit_bound(e0, -ct, &mut items, fresh));
                }
            }
            Cond::Eq(e) | Cond::Neq(e) if e.coeff(t) == 0 => plain.push(c.clone()),
            Cond::Neq(_) => panic!("disequality bound in integer maximisation"),
            Cond::Eq(_) => unreachable!("handled above"),
            Cond::Pred(_) => unreachable!("guards are predicate-free here"),
        }
    }

    let base = |plain_upto: Option<usize>| {
        let mut g = CondSystem::new();
        for item in &items {
            g.push_item(item.clone());
        }
        let upto = plain_upto.unwrap_or(plain.len());
        for c in &plain[..upto] {
            g.push_cond(c.clone());
        }
        g
    };

    let mut pieces: Vec<TotalPiece> = Vec::new();
    // The class contributes nothing where a plain condition fails.
    for (i, c) in plain.iter().enumerate() {
        let mut g = base(Some(i));
        g.push_cond(negate(c));
        pieces.push(TotalPiece { guard: g, value: None });
    }
    // Otherwise exactly one upper bound is the first minimum.
    for (k, uk) in uppers.iter().enumerate() {
        let mut gk = base(None);
        for (m, um) in uppers.iter().enumerate() {
            if m < k {
                gk.push_cond(Cond::Ge(um.sub(uk).add_const(-1)));
            } else if m > k {
                gk.push_cond(Cond::Ge(um.sub(uk)));
            }
        }
        // Infeasible: some lower bound exceeds the minimal upper.
        for j in 0..lowers.len() {
            let mut g = gk.clone();
            for l in &lowers[..j] {
                g.push_cond(Cond::Ge(uk.sub(l)));
            }
            g.push_cond(Cond::Ge(lowers[j].sub(uk).add_const(-1)));
            pieces.push(TotalPiece { guard: g, value: None });
        }
        // Feasible: the maximum sits at the minimal upper bound.
        let mut g = gk;
        for l in &lowers {
            g.push_cond(Cond::Ge(uk.sub(l)));
        }
        let value = vexpr.subst(t, uk);
        let rewrites = rew.iter().map(|(kk, e)| (kk.clone(), e.subst(t, uk))).collect();
        pieces.push(TotalPiece { guard: g, value: Some((value, rewrites)) });
    }
    pieces.retain(|p| !p.guard.is_trivially_false() && super::satisfiable(&p.guard));
    pieces
}

fn single(t: &str, sol: &AffineExpr) -> BTreeMap<String, AffineExpr> {
    let mut m = BTreeMap::new();
    m.insert(t.to_string(), sol.clone());
    m
}

fn subst_item(item: &SysItem, t: &str, sol: &AffineExpr) -> SysItem {
    let map = single(t, sol);
    match item {
        SysItem::Cond(c) => SysItem::Cond(c.subst_map(&map)),
        SysItem::Div(d) => SysItem::Div(d.subst_map(&map)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> AffineExpr {
        AffineExpr::var(name)
    }

    fn show(pw: &Piecewise<()>) -> Vec<(String, String)> {
        pw.pieces
            .iter()
            .map(|p| (p.guard.to_string(), p.value.to_string()))
            .collect()
    }

    #[test]
    fn unconstrained_range_max_is_upper_bound() {
        let mut fresh = FreshVars::new(0);
        let pw = param_int_max("v", &AffineExpr::lit(1), &v("n"), &CondSystem::new(), &mut fresh);
        assert_eq!(show(&pw), vec![("{n >= 1}".to_string(), "n".to_string())]);
    }

    #[test]
    fn equality_guard_pins_value() {
        let mut fresh = FreshVars::new(0);
        let guard = CondSystem::of(vec![Cond::eq(&v("v"), &v("q"))]);
        let pw = param_int_max("v", &AffineExpr::lit(1), &v("n"), &guard, &mut fresh);
        assert_eq!(show(&pw), vec![("{q >= 1, n >= q}".to_string(), "q".to_string())]);
    }

    #[test]
    fn competing_upper_bounds_split() {
        let mut fresh = FreshVars::new(0);
        let guard = CondSystem::of(vec![Cond::ge(&v("j"), &v("v"))]);
        let pw = param_int_max("v", &AffineExpr::lit(1), &v("n"), &guard, &mut fresh);
        assert_eq!(
            show(&pw),
            vec![
                ("{j >= n, n >= 1}".to_string(), "n".to_string()),
                ("{n >= j + 1, j >= 1}".to_string(), "j".to_string()),
            ]
        );
    }

    #[test]
    fn division_guard_splits_residue_classes() {
        // Largest even v in [1, n]: v = 2q + r with r = 0.
        let mut fresh = FreshVars::new(2);
        let mut guard = CondSystem::new();
        guard.push_div(DivBinding { expr: v("v"), modulus: 2, quot: "q1".into(), rem: "r1".into() });
        guard.push_cond(Cond::Eq(v("r1")));
        let pw = param_int_max("v", &AffineExpr::lit(1), &v("n"), &guard, &mut fresh);
        // Exactness against direct search for n in a window.
        for n in -3..=9 {
            let mut env = BTreeMap::new();
            env.insert("n".to_string(), n);
            let want = (1..=n.max(0)).filter(|x| x % 2 == 0).max();
            let got = pw.eval(&env).map(|(x, _)| x);
            assert_eq!(got, want, "n = {n}");
        }
    }

    #[test]
    fn dependent_binding_value_survives() {
        // Largest v in [1, n] with v = 3q (q the quotient by 3):
        // pieces must describe v exactly; check by evaluation.
        let mut fresh = FreshVars::new(2);
        let mut guard = CondSystem::new();
        guard.push_div(DivBinding { expr: v("v"), modulus: 3, quot: "q1".into(), rem: "r1".into() });
        guard.push_cond(Cond::Eq(v("r1")));
        guard.push_cond(Cond::ge(&v("j"), &v("q1")));
        let pw = param_int_max("v", &AffineExpr::lit(1), &v("n"), &guard, &mut fresh);
        for n in 0..=10 {
            for j in -1..=4 {
                let mut env = BTreeMap::new();
                env.insert("n".to_string(), n);
                env.insert("j".to_string(), j);
                let want = (1..=n).filter(|x| x % 3 == 0 && x / 3 <= j).max();
                let got = pw.eval(&env).map(|(x, _)| x);
                assert_eq!(got, want, "n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn randomized_against_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xfa57);
        for _round in 0..120 {
            let mut fresh = FreshVars::new(9);
            let mut guard = CondSystem::new();
            let with_div = rng.gen_bool(0.4);
            if with_div {
                let m = rng.gen_range(2..=3);
                let ce = rng.gen_range(1..=2);
                let c0 = rng.gen_range(-2..=2);
                guard.push_div(DivBinding {
                    expr: v("v").scale(ce).add_const(c0),
                    modulus: m,
                    quot: "q8".into(),
                    rem: "r8".into(),
                });
                if rng.gen_bool(0.5) {
                    guard.push_cond(Cond::Eq(v("r8")));
                } else {
                    guard.push_cond(Cond::ge(&v("j"), &v("q8")));
                }
            }
            for _ in 0..rng.gen_range(0..=2) {
                let cv = rng.gen_range(-2..=2);
                let cj = rng.gen_range(-1..=1);
                let c0 = rng.gen_range(-3..=3);
                let e = v("v").scale(cv).add(&v("j").scale(cj)).add_const(c0);
                if rng.gen_bool(0.25) {
                    guard.push_cond(Cond::Eq(e));
                } else {
                    guard.push_cond(Cond::Ge(e));
                }
            }
            let pw = param_int_max("v", &v("m0"), &v("m1"), &guard, &mut fresh);
            let mut no_preds = |_: &str, _: &[i64]| panic!("no predicates");
            for m0 in -3..=2 {
                for m1 in -1..=5 {
                    for j in -2..=3 {
                        let mut env = BTreeMap::new();
                        env.insert("m0".to_string(), m0);
                        env.insert("m1".to_string(), m1);
                        env.insert("j".to_string(), j);
                        let want = (m0..=m1)
                            .filter(|&x| {
                                let mut e = env.clone();
                                e.insert("v".to_string(), x);
                                guard.eval(&e, &mut no_preds)
                            })
                            .max();
                        let got = pw.eval(&env).map(|(x, _)| x);
                        assert_eq!(got, want, "guard {guard} at m0={m0} m1={m1} j={j}");
                    }
                }
            }
        }
    }
}
