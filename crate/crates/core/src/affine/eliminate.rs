//! Identity-preserving projection of variables out of condition
//! systems, and equality solving for inversion.
//!
//! `eliminate` removes a variable (together with every division
//! variable that transitively depends on it) from a system without
//! losing integer points: where classical projection would approximate,
//! a floor-division binding is introduced instead, so the result is an
//! exact description of the projection.

use std::collections::{BTreeMap, BTreeSet};

use super::cond::{Cond, CondSystem, DivBinding, SysItem};
use super::{AffineExpr, FreshVars};

/// Outcome of solving equalities for one unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solved {
    /// The unknown equals this expression (over the remaining variables)
    /// whenever the accompanying guards hold.
    Expr(AffineExpr),
    /// The equalities do not determine the unknown.
    Underdetermined,
}

/// Solve a list of equalities (`e = 0` each) for the given unknowns by
/// repeated single-unknown substitution. Non-unit coefficients are
/// handled exactly by introducing a division binding plus a
/// divisibility guard (`remainder = 0`). Returns the solution map, the
/// bindings introduced, and the guards they require; equalities that
/// still involve several unknowns leave those unknowns undetermined.
pub fn solve_equalities(
    eqs: &[AffineExpr],
    unknowns: &[String],
    fresh: &mut FreshVars,
) -> (BTreeMap<String, Solved>, Vec<DivBinding>, Vec<Cond>) {
    let mut work: Vec<AffineExpr> = eqs.to_vec();
    let mut out: BTreeMap<String, Solved> = BTreeMap::new();
    let mut divs: Vec<DivBinding> = Vec::new();
    let mut guards: Vec<Cond> = Vec::new();

    loop {
        let mut progressed = false;
        let mut k = 0;
        while k < work.len() {
            let open: Vec<&str> = work[k]
                .vars()
                .filter(|v| unknowns.iter().any(|u| u.as_str() == *v) && !out.contains_key(*v))
                .collect();
            if open.len() != 1 {
                k += 1;
                continue;
            }
            let u = open[0].to_string();
            let eq = work.remove(k);
            let a = eq.coeff(&u);
            let rest = eq.subst(&u, &AffineExpr::lit(0));
            let sol = if a.abs() == 1 {
                // a*u + rest = 0  =>  u = -rest/a.
                if a == 1 { rest.neg() } else { rest }
            } else {
                // a*u = -rest with |a| > 1: u is the exact quotient,
                // valid only where the remainder vanishes.
                let (num, m) = if a > 0 { (rest.neg(), a) } else { (rest, -a) };
                let (q, r) = fresh.div_pair();
                divs.push(DivBinding { expr: num, modulus: m, quot: q.clone(), rem: r.clone() });
                guards.push(Cond::Eq(AffineExpr::var(&r)));
                AffineExpr::var(&q)
            };
            for e in &mut work {
                *e = e.subst(&u, &sol);
            }
            out.insert(u, Solved::Expr(sol));
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    for u in unknowns {
        out.entry(u.clone()).or_insert(Solved::Underdetermined);
    }
    (out, divs, guards)
}

/// Exact projection: remove `var` (and division variables defined from
/// it) from `sys`. The result holds for exactly those valuations of the
/// remaining variables that extend to a solution of `sys`.
///
/// Panics if `var` occurs in a predicate or disequality condition —
/// callers dispose of those before projecting.
pub fn eliminate(var: &str, sys: &CondSystem, fresh: &mut FreshVars) -> CondSystem {
    // Transitive closure of division variables defined over `var`.
    let mut dep: BTreeSet<String> = BTreeSet::new();
    dep.insert(var.to_string());
    loop {
        let mut changed = false;
        for d in sys.divs() {
            if d.expr.vars().any(|v| dep.contains(v)) && !dep.contains(&d.quot) {
                dep.insert(d.quot.clone());
                dep.insert(d.rem.clone());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut kept: Vec<SysItem> = Vec::new();
    let mut eqs: Vec<AffineExpr> = Vec::new();
    let mut ges: Vec<AffineExpr> = Vec::new();
    for item in &sys.items {
        match item {
            SysItem::Div(d) if dep.contains(&d.quot) => {
                let q = AffineExpr::var(&d.quot);
                let r = AffineExpr::var(&d.rem);
                eqs.push(d.expr.sub(&q.scale(d.modulus)).sub(&r));
                ges.push(r.clone());
                ges.push(AffineExpr::lit(d.modulus - 1).sub(&r));
            }
            SysItem::Cond(c) if c.vars().iter().any(|v| dep.contains(v)) => match c {
                Cond::Eq(e) => eqs.push(e.clone()),
                Cond::Ge(e) => ges.push(e.clone()),
                Cond::Neq(_) | Cond::Pred(_) => {
                    panic!("cannot project {var} out of non-convex condition {c}")
                }
            },
            other => kept.push(other.clone()),
        }
    }

    let mut new_divs: Vec<DivBinding> = Vec::new();
    fn never() -> CondSystem {
        CondSystem::of(vec![Cond::never()])
    }

    loop {
        // Normalise equalities; detect ground contradictions.
        let mut k = 0;
        while k < eqs.len() {
            let g = eqs[k].coeff_gcd();
            if g == 0 {
                if eqs[k].constant() != 0 {
                    return never();
                }
                eqs.swap_remove(k);
                continue;
            }
            if eqs[k].constant() % g != 0 {
                return never();
            }
            if g > 1 {
                eqs[k] = eqs[k].div_exact(g);
            }
            k += 1;
        }

        if let Some(idx) = eqs
            .iter()
            .position(|e| e.vars().any(|v| dep.contains(v)))
        {
            let eq = eqs[idx].clone();
            let dep_terms: Vec<(String, i64)> = eq
                .terms()
                .filter(|(v, _)| dep.contains(*v))
                .map(|(v, c)| (v.to_string(), c))
                .collect();
            if let Some((u, c)) = dep_terms.iter().find(|(_, c)| c.abs() == 1).cloned() {
                // Unit coefficient: substitute the variable away.
                let repl = if c == 1 {
                    AffineExpr::var(&u).sub(&eq)
                } else {
                    AffineExpr::var(&u).add(&eq)
                };
                eqs.remove(idx);
                subst_all(&mut eqs, &mut ges, &u, &repl);
                continue;
            }
            let (u, au) = dep_terms
                .iter()
                .min_by_key(|(v, c)| (c.abs(), v.clone()))
                .cloned()
                .unwrap();
            if let Some((w, aw)) = dep_terms.iter().find(|(v, c)| *v != u && c % au != 0).cloned()
            {
                // Shrink coefficients with a unimodular change of the
                // variables being removed (their identity is free).
                let q = if au > 0 {
                    round_div(aw, au)
                } else {
                    -round_div(aw, -au)
                };
                let repl = AffineExpr::var(&u).sub(&AffineExpr::var(&w).scale(q));
                subst_all(&mut eqs, &mut ges, &u, &repl);
                continue;
            }
            if dep_terms.len() > 1 {
                // Every other removable coefficient is a multiple of au:
                // fold them into u, leaving a single removable variable.
                let mut repl = AffineExpr::var(&u);
                for (w, aw) in dep_terms.iter().filter(|(v, _)| *v != u) {
                    repl = repl.sub(&AffineExpr::var(w).scale(aw / au));
                }
                subst_all(&mut eqs, &mut ges, &u, &repl);
                continue;
            }
            // Single removable variable with |au| > 1 and unit gcd with
            // the kept part: u is an exact quotient of kept variables.
            let rest = eq.subst(&u, &AffineExpr::lit(0));
            let (num, m) = if au > 0 { (rest.neg(), au) } else { (rest, -au) };
            assert!(
                num.vars().all(|v| !dep.contains(v)),
                "division numerator must survive the projection"
            );
            let (qn, rn) = fresh.div_pair();
            new_divs.push(DivBinding { expr: num, modulus: m, quot: qn.clone(), rem: rn.clone() });
            eqs[idx] = AffineExpr::var(&rn);
            subst_all(&mut eqs, &mut ges, &u, &AffineExpr::var(&qn));
            continue;
        }

        // Normalise inequalities.
        let mut k = 0;
        while k < ges.len() {
            let g = ges[k].coeff_gcd();
            if g == 0 {
                if ges[k].constant() < 0 {
                    return never();
                }
                ges.swap_remove(k);
                continue;
            }
            k += 1;
        }

        // Project one inequality-only variable.
        let present: Vec<String> = dep
            .iter()
            .filter(|v| ges.iter().any(|e| e.mentions(v)))
            .cloned()
            .collect();
        if present.is_empty() {
            break;
        }
        let mut done = false;
        for u in &present {
            if let Some((out, divs)) = project(u, &ges, &dep, fresh) {
                ges = out;
                new_divs.extend(divs);
                done = true;
                break;
            }
        }
        assert!(done, "interlocked non-unit bounds while projecting {var}");
    }

    let mut result = CondSystem::new();
    for item in kept {
        result.push_item(item);
    }
    for d in new_divs {
        result.push_div(d);
    }
    for e in eqs {
        result.push_cond(Cond::Eq(e));
    }
    for e in ges {
        result.push_cond(Cond::Ge(e));
    }
    result
}

fn subst_all(eqs: &mut [AffineExpr], ges: &mut [AffineExpr], var: &str, repl: &AffineExpr) {
    for e in eqs.iter_mut() {
        *e = e.subst(var, repl);
    }
    for e in ges.iter_mut() {
        *e = e.subst(var, repl);
    }
}

fn round_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r > b {
        q + 1
    } else {
        q
    }
}

/// Project `u` out of the inequalities. Pairs with a unit side are
/// projected directly; a pair of non-unit bounds compares the lower
/// ceiling against the upper floor through fresh division bindings,
/// which requires both bound expressions to be free of variables that
/// are themselves being removed — returns `None` (defer) otherwise.
fn project(
    u: &str,
    ges: &[AffineExpr],
    dep: &BTreeSet<String>,
    fresh: &mut FreshVars,
) -> Option<(Vec<AffineExpr>, Vec<DivBinding>)> {
    let mut lowers: Vec<(i64, AffineExpr)> = Vec::new(); // b*u >= beta
    let mut uppers: Vec<(i64, AffineExpr)> = Vec::new(); // a*u <= alpha
    let mut out: Vec<AffineExpr> = Vec::new();
    for e in ges {
        let c = e.coeff(u);
        let without = e.subst(u, &AffineExpr::lit(0));
        if c > 0 {
            lowers.push((c, without.neg()));
        } else if c < 0 {
            uppers.push((-c, without));
        } else {
            out.push(e.clone());
        }
    }
    if lowers.is_empty() || uppers.is_empty() {
        return Some((out, Vec::new()));
    }

    // Check feasibility of every non-unit pair before allocating names.
    let clean = |e: &AffineExpr| e.vars().all(|v| !dep.contains(v));
    for (b, beta) in &lowers {
        for (a, alpha) in &uppers {
            if *b > 1 && *a > 1 && !(clean(beta) && clean(alpha)) {
                return None;
            }
        }
    }

    let mut divs: Vec<DivBinding> = Vec::new();
    let mut ceils: BTreeMap<usize, AffineExpr> = BTreeMap::new();
    let mut floors: BTreeMap<usize, AffineExpr> = BTreeMap::new();
    for (i, (b, beta)) in lowers.iter().enumerate() {
        for (j, (a, alpha)) in uppers.iter().enumerate() {
            if *b == 1 {
                // u >= beta, a*u <= alpha: integer u exists iff a*beta <= alpha.
                out.push(alpha.sub(&beta.scale(*a)));
            } else if *a == 1 {
                // b*u >= beta, u <= alpha: iff beta <= b*alpha.
                out.push(alpha.scale(*b).sub(beta));
            } else {
                let q = ceils
                    .entry(i)
                    .or_insert_with(|| {
                        let (qn, rn) = fresh.div_pair();
                        divs.push(DivBinding {
                            expr: beta.add_const(*b - 1),
                            modulus: *b,
                            quot: qn.clone(),
                            rem: rn,
                        });
                        AffineExpr::var(&qn)
                    })
                    .clone();
                let p = floors
                    .entry(j)
                    .or_insert_with(|| {
                        let (qn, rn) = fresh.div_pair();
                        divs.push(DivBinding {
                            expr: alpha.clone(),
                            modulus: *a,
                            quot: qn.clone(),
                            rem: rn,
                        });
                        AffineExpr::var(&qn)
                    })
                    .clone();
                out.push(p.sub(&q));
            }
        }
    }
    Some((out, divs))
}

#[cfg(test)]
mod tests {
    use super::super::satisfiable;
    use super::*;

    fn v(name: &str) -> AffineExpr {
        AffineExpr::var(name)
    }

    #[test]
    fn solve_unit_equalities() {
        // { j - i - 1 = 0, k - 2j = 0 } solved for {j, k}:
        // j = i + 1, k = 2j = 2i + 2.
        let eqs = vec![
            v("j").sub(&v("i")).add_const(-1),
            v("k").sub(&v("j").scale(2)),
        ];
        let mut fresh = FreshVars::new(0);
        let (sol, divs, guards) =
            solve_equalities(&eqs, &["j".into(), "k".into()], &mut fresh);
        assert_eq!(sol["j"], Solved::Expr(v("i").add_const(1)));
        assert_eq!(sol["k"], Solved::Expr(v("i").scale(2).add_const(2)));
        assert!(divs.is_empty() && guards.is_empty());
    }

    #[test]
    fn solve_needs_division() {
        // { 2j - i = 0 } solved for j: j = q with i =: 2q + r, r = 0.
        let eqs = vec![v("j").scale(2).sub(&v("i"))];
        let mut fresh = FreshVars::new(3);
        let (sol, divs, guards) = solve_equalities(&eqs, &["j".into()], &mut fresh);
        assert_eq!(sol["j"], Solved::Expr(v("q4")));
        assert_eq!(divs.len(), 1);
        assert_eq!(divs[0].to_string(), "i =: 2q4 + r4");
        assert_eq!(guards, vec![Cond::Eq(v("r4"))]);
    }

    #[test]
    fn solve_underdetermined() {
        // { j + k - i = 0 } determines neither j nor k.
        let eqs = vec![v("j").add(&v("k")).sub(&v("i"))];
        let mut fresh = FreshVars::new(0);
        let (sol, _, _) = solve_equalities(&eqs, &["j".into(), "k".into()], &mut fresh);
        assert_eq!(sol["j"], Solved::Underdetermined);
        assert_eq!(sol["k"], Solved::Underdetermined);
    }

    #[test]
    fn eliminate_by_equality() {
        // { v = j, v >= 1, n >= v } minus v = { j >= 1, n >= j }.
        let sys = CondSystem::of(vec![
            Cond::eq(&v("v"), &v("j")),
            Cond::ge(&v("v"), &AffineExpr::lit(1)),
            Cond::ge(&v("n"), &v("v")),
        ]);
        let mut fresh = FreshVars::new(0);
        let out = eliminate("v", &sys, &mut fresh);
        assert_eq!(out.to_string(), "{j >= 1, n >= j}");
    }

    #[test]
    fn eliminate_unbounded_side_drops() {
        // { v >= i, j >= 0 } minus v = { j >= 0 }.
        let sys = CondSystem::of(vec![
            Cond::ge(&v("v"), &v("i")),
            Cond::Ge(v("j")),
        ]);
        let mut fresh = FreshVars::new(0);
        let out = eliminate("v", &sys, &mut fresh);
        assert_eq!(out.to_string(), "{j >= 0}");
    }

    #[test]
    fn eliminate_scaled_equality_makes_division() {
        // { 2v = i, v >= 1 } minus v: i =: 2q + r with r = 0, q >= 1.
        let sys = CondSystem::of(vec![
            Cond::Eq(v("v").scale(2).sub(&v("i"))),
            Cond::ge(&v("v"), &AffineExpr::lit(1)),
        ]);
        let mut fresh = FreshVars::new(0);
        let out = eliminate("v", &sys, &mut fresh);
        assert_eq!(out.to_string(), "{i =: 2q1 + r1, r1 = 0, q1 >= 1}");
    }

    #[test]
    fn eliminate_dependent_divisions_go_too() {
        // { v =: 2q + r, r = 0, q >= 1, n >= v } minus v: the binding
        // depends on v, so q and r leave with it. The remainder must
        // keep exactly the even-v witnesses: n >= 2, i.e. there is an
        // even v in [2, n] iff n >= 2.
        let mut sys = CondSystem::new();
        sys.push_div(DivBinding { expr: v("v"), modulus: 2, quot: "q1".into(), rem: "r1".into() });
        sys.push_cond(Cond::Eq(v("r1")));
        sys.push_cond(Cond::ge(&v("q1"), &AffineExpr::lit(1)));
        sys.push_cond(Cond::ge(&v("n"), &v("v")));
        let mut fresh = FreshVars::new(1);
        let out = eliminate("v", &sys, &mut fresh);
        // Exactness check on a range of n.
        for n in -2..=6 {
            let mut env = BTreeMap::new();
            env.insert("n".to_string(), n);
            let mut no_preds = |_: &str, _: &[i64]| panic!("no predicates");
            let direct = (1..=100).any(|q| 2 * q <= n);
            assert_eq!(out.eval(&env, &mut no_preds), direct, "n = {n}: {out}");
        }
    }

    /// Brute-force oracle for projection: `sys` over vars ∪ {target};
    /// the projection must hold exactly where some target value works.
    fn check_projection_exact(
        sys: &CondSystem,
        target: &str,
        free: &[&str],
        lo: i64,
        hi: i64,
        target_lo: i64,
        target_hi: i64,
    ) {
        let mut fresh = FreshVars::new(50);
        let out = eliminate(target, sys, &mut fresh);
        let mut env: Vec<i64> = Vec::new();
        enumerate(free, lo, hi, &mut env, &mut |vals| {
            let mut base = BTreeMap::new();
            for (name, val) in free.iter().zip(vals) {
                base.insert((*name).to_string(), *val);
            }
            let mut no_preds = |_: &str, _: &[i64]| panic!("no predicates");
            let want = (target_lo..=target_hi).any(|t| {
                let mut e = base.clone();
                e.insert(target.to_string(), t);
                sys.eval(&e, &mut no_preds)
            });
            let got = out.eval(&base, &mut no_preds);
            assert_eq!(got, want, "at {base:?}: projected {out}");
        });
    }

    fn enumerate(vars: &[&str], lo: i64, hi: i64, env: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
        if env.len() == vars.len() {
            f(env);
            return;
        }
        for x in lo..=hi {
            env.push(x);
            enumerate(vars, lo, hi, env, f);
            env.pop();
        }
    }

    #[test]
    fn non_unit_pair_is_exact() {
        // { 3v >= i, 2v <= j } — both sides non-unit; exactness demands
        // ceil(i/3) <= floor(j/2), which plain projection would miss.
        let sys = CondSystem::of(vec![
            Cond::Ge(v("v").scale(3).sub(&v("i"))),
            Cond::Ge(v("j").sub(&v("v").scale(2))),
        ]);
        check_projection_exact(&sys, "v", &["i", "j"], -7, 7, -20, 20);
    }

    #[test]
    fn randomized_projection_against_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xe11b);
        let free = ["i", "j"];
        for round in 0..120 {
            let mut sys = CondSystem::new();
            // Box the target so the brute-force window [-30, 30] is
            // sound: |v| <= 10.
            sys.push_cond(Cond::Ge(v("v").add_const(10)));
            sys.push_cond(Cond::Ge(v("v").neg().add_const(10)));
            let n = rng.gen_range(1..=3);
            for _ in 0..n {
                let cv = rng.gen_range(-3..=3);
                let ci = rng.gen_range(-2..=2);
                let cj = rng.gen_range(-2..=2);
                let c0 = rng.gen_range(-5..=5);
                let e = v("v")
                    .scale(cv)
                    .add(&v("i").scale(ci))
                    .add(&v("j").scale(cj))
                    .add_const(c0);
                if rng.gen_bool(0.25) {
                    sys.push_cond(Cond::Eq(e));
                } else {
                    sys.push_cond(Cond::Ge(e));
                }
            }
            let _ = round;
            check_projection_exact(&sys, "v", &free, -4, 4, -30, 30);
        }
    }

    #[test]
    fn projection_feeds_satisfiability() {
        // Projection then satisfiability agrees with direct satisfiability.
        let sys = CondSystem::of(vec![
            Cond::Ge(v("v").scale(2).sub(&v("i"))),
            Cond::Ge(v("i").sub(&v("v").scale(2)).add_const(1)),
            Cond::Eq(v("i").add_const(-3)),
        ]);
        // 2v ∈ {i, i+1} with i = 3 → v = 2 works (2v = 4 = i + 1).
        let mut fresh = FreshVars::new(10);
        let out = eliminate("v", &sys, &mut fresh);
        assert!(satisfiable(&out));
        assert!(satisfiable(&sys));
    }
}
