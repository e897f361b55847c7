//! Exact integer satisfiability of condition systems.
//!
//! The decision procedure is elimination-based and exact over the
//! integers: equalities are removed by unit substitution (reaching a
//! unit coefficient through Euclidean coefficient reduction when
//! necessary), then one variable at a time is projected out of the
//! inequalities. A lower/upper bound pair combines exactly when either
//! side has a unit coefficient. For pairs that are non-unit on both
//! sides the plain pairwise product is exact only over the rationals,
//! so the verdict is completed the classical way: unsatisfiability of
//! that rational projection refutes, satisfiability of the projection
//! padded by (a-1)(b-1) accepts, and the remaining gap is decided by
//! enumerating the few values at which a non-unit lower bound would be
//! almost tight. Coupled division bindings additionally have one
//! remainder per family enumerated up front, which lets the equality
//! phase dissolve the rest of the family cheaply.
//!
//! Projection multiplies coefficients, so the solver works on its own
//! rows with 128-bit coefficients; conversion happens once at entry.
//! Arithmetic is checked and a work limit guards the recursion: a query
//! past either limit fails loudly rather than returning a wrong or
//! silently truncated verdict.
//!
//! Predicates are never decided: a system is reported satisfiable
//! unless it contains the same predicate instance with both polarities.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use super::cond::{Cond, CondSystem, SysItem};
use super::AffineExpr;

const DEPTH_LIMIT: usize = 400;

thread_local! {
    static CACHE: RefCell<HashMap<String, bool>> = RefCell::new(HashMap::new());
    static CURRENT: RefCell<String> = const { RefCell::new(String::new()) };
    static WORK: RefCell<u64> = const { RefCell::new(0) };
}

/// Exact integer satisfiability. Division bindings are expanded into
/// their defining constraints; `e != 0` conditions split the check in
/// two; predicate conditions stay symbolic. Verdicts are memoised per
/// printed form, since callers re-test many identical systems.
pub fn satisfiable(sys: &CondSystem) -> bool {
    // Callers often conjoin systems that each bind the same division
    // expression under different names; merging those both shrinks the
    // solver's job and canonicalises the cache key.
    let mut sys = sys.clone();
    sys.unify_divs();
    let sys = &sys;
    let key = sys.to_string();
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&key).copied()) {
        return hit;
    }
    CURRENT.with(|s| *s.borrow_mut() = key.clone());
    WORK.with(|w| *w.borrow_mut() = 0);
    let verdict = satisfiable_uncached(sys);
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= 200_000 {
            c.clear();
        }
        c.insert(key, verdict);
    });
    verdict
}

fn satisfiable_uncached(sys: &CondSystem) -> bool {
    // Contradictory predicate polarities on one path are unsatisfiable
    // even though predicates are otherwise kept symbolic.
    let preds: Vec<_> = sys.preds().collect();
    for (k, p) in preds.iter().enumerate() {
        if preds[..k].iter().any(|q| q.same_instance(p) && q.positive != p.positive) {
            return false;
        }
    }

    let mut eqs: Vec<Row> = Vec::new();
    let mut ges: Vec<Row> = Vec::new();
    let mut neqs: Vec<Row> = Vec::new();
    for item in &sys.items {
        match item {
            SysItem::Cond(Cond::Eq(e)) => eqs.push(Row::of(e)),
            SysItem::Cond(Cond::Ge(e)) => ges.push(Row::of(e)),
            SysItem::Cond(Cond::Neq(e)) => neqs.push(Row::of(e)),
            SysItem::Cond(Cond::Pred(_)) => {}
            SysItem::Div(d) => {
                // expr = m*q + r, 0 <= r < m.
                let q = Row::var(&d.quot);
                let r = Row::var(&d.rem);
                eqs.push(Row::of(&d.expr).sub(&q.scale(d.modulus as i128)).sub(&r));
                ges.push(r.clone());
                ges.push(Row::lit((d.modulus - 1) as i128).sub(&r));
            }
        }
    }

    // Division bindings whose expressions share variables (directly or
    // through earlier bindings) form coupled residue families that the
    // projection phase resolves very slowly. Fixing one remainder per
    // family to a literal makes the rest cascade through the equality
    // phase, so enumerate those remainders up front.
    let divs: Vec<_> = sys.divs().collect();
    let mut comp: Vec<usize> = (0..divs.len()).collect();
    for i in 0..divs.len() {
        for j in 0..i {
            let shared = divs[i].expr.vars().any(|v| {
                divs[j].expr.mentions(v) || divs[j].quot == v || divs[j].rem == v
            });
            if shared && comp[i] != comp[j] {
                let (from, to) = (comp[i].max(comp[j]), comp[i].min(comp[j]));
                for c in comp.iter_mut() {
                    if *c == from {
                        *c = to;
                    }
                }
            }
        }
    }
    let mut pivots: Vec<(String, i128)> = Vec::new();
    let mut seen_comp: Vec<usize> = Vec::new();
    for (i, d) in divs.iter().enumerate() {
        let multi = comp.iter().filter(|&&c| c == comp[i]).count() > 1;
        if multi && !seen_comp.contains(&comp[i]) {
            seen_comp.push(comp[i]);
            pivots.push((d.rem.clone(), d.modulus as i128));
        }
    }

    fn enumerate(pivots: &[(String, i128)], eqs: &[Row], ges: &[Row], neqs: &[Row]) -> bool {
        match pivots.first() {
            None => sat_split_neqs(eqs.to_vec(), ges.to_vec(), neqs),
            Some((r, m)) => (0..*m).any(|rem| {
                let mut eqs = eqs.to_vec();
                eqs.push(Row::var(r).add_const(-rem));
                enumerate(&pivots[1..], &eqs, ges, neqs)
            }),
        }
    }
    enumerate(&pivots, &eqs, &ges, &neqs)
}

/// One linear form over 128-bit integers: sum of terms plus a constant.
/// All arithmetic is checked; growth past 128 bits panics loudly
/// instead of returning a wrong verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Row {
    coeffs: BTreeMap<String, i128>,
    c: i128,
}

fn add128(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("coefficient overflow in satisfiability solver")
}

fn mul128(a: i128, b: i128) -> i128 {
    a.checked_mul(b).unwrap_or_else(|| {
        CURRENT.with(|s| panic!("coefficient overflow solving {}", s.borrow()))
    })
}

impl Row {
    fn of(e: &AffineExpr) -> Row {
        Row {
            coeffs: e.terms().map(|(v, c)| (v.to_string(), c as i128)).collect(),
            c: e.constant() as i128,
        }
    }

    fn lit(c: i128) -> Row {
        Row { coeffs: BTreeMap::new(), c }
    }

    fn var(v: &str) -> Row {
        Row { coeffs: [(v.to_string(), 1)].into(), c: 0 }
    }

    fn coeff(&self, v: &str) -> i128 {
        self.coeffs.get(v).copied().unwrap_or(0)
    }

    fn add(&self, other: &Row) -> Row {
        let mut out = self.clone();
        out.c = add128(out.c, other.c);
        for (v, cv) in &other.coeffs {
            let n = add128(out.coeff(v), *cv);
            if n == 0 {
                out.coeffs.remove(v);
            } else {
                out.coeffs.insert(v.clone(), n);
            }
        }
        out
    }

    fn neg(&self) -> Row {
        self.scale(-1)
    }

    fn sub(&self, other: &Row) -> Row {
        self.add(&other.neg())
    }

    fn scale(&self, k: i128) -> Row {
        if k == 0 {
            return Row::lit(0);
        }
        Row {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), mul128(*c, k))).collect(),
            c: mul128(self.c, k),
        }
    }

    fn add_const(&self, k: i128) -> Row {
        let mut out = self.clone();
        out.c = add128(out.c, k);
        out
    }

    /// Replace `v` by `repl` throughout.
    fn subst(&self, v: &str, repl: &Row) -> Row {
        let a = self.coeff(v);
        if a == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        out.coeffs.remove(v);
        out.add(&repl.scale(a))
    }

    /// Gcd of the variable coefficients (0 when ground).
    fn coeff_gcd(&self) -> i128 {
        let mut g: i128 = 0;
        for c in self.coeffs.values() {
            g = gcd128(g, c.abs());
        }
        g
    }

    fn div_exact(&self, g: i128) -> Row {
        Row {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c / g)).collect(),
            c: self.c / g,
        }
    }

    /// Integer tightening of `self >= 0`: divide the variable part by
    /// its gcd and floor the constant.
    fn tighten(&self, g: i128) -> Row {
        Row {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c / g)).collect(),
            c: self.c.div_euclid(g),
        }
    }
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn sat_split_neqs(eqs: Vec<Row>, ges: Vec<Row>, neqs: &[Row]) -> bool {
    match neqs.split_first() {
        None => sat_pure(eqs, ges, 0),
        Some((e, rest)) => {
            let mut pos = ges.clone();
            pos.push(e.add_const(-1));
            if sat_split_neqs(eqs.clone(), pos, rest) {
                return true;
            }
            let mut neg = ges;
            neg.push(e.neg().add_const(-1));
            sat_split_neqs(eqs, neg, rest)
        }
    }
}

/// Nearest-integer division (ties round away from zero); used to shrink
/// coefficients during Euclidean equality reduction.
fn round_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r > b {
        q + 1
    } else {
        q
    }
}

fn sat_pure(mut eqs: Vec<Row>, mut ges: Vec<Row>, depth: usize) -> bool {
    assert!(depth < DEPTH_LIMIT, "satisfiability recursion limit exceeded");
    WORK.with(|w| {
        let mut w = w.borrow_mut();
        *w += 1;
        assert!(
            *w < 2_000_000,
            "satisfiability work limit exceeded solving {}",
            CURRENT.with(|s| s.borrow().clone())
        );
    });

    // Phase 1: dispose of equalities by substitution.
    loop {
        // Normalise; detect ground contradictions.
        let mut k = 0;
        while k < eqs.len() {
            let g = eqs[k].coeff_gcd();
            if g == 0 {
                if eqs[k].c != 0 {
                    return false;
                }
                eqs.swap_remove(k);
                continue;
            }
            if eqs[k].c % g != 0 {
                return false;
            }
            if g > 1 {
                eqs[k] = eqs[k].div_exact(g);
            }
            k += 1;
        }
        let Some(eq) = eqs.first().cloned() else { break };

        if let Some((v, c)) =
            eq.coeffs.iter().find(|&(_, c)| c.abs() == 1).map(|(v, c)| (v.clone(), *c))
        {
            // v occurs with coefficient +-1: solve and substitute out.
            let repl = if c == 1 { Row::var(&v).sub(&eq) } else { Row::var(&v).add(&eq) };
            eqs.remove(0);
            for e in &mut eqs {
                *e = e.subst(&v, &repl);
            }
            for e in &mut ges {
                *e = e.subst(&v, &repl);
            }
            continue;
        }

        // Euclidean reduction: all coefficients exceed 1 in magnitude but
        // their gcd is 1, so two of them are not mutually divisible.
        // Rewriting vk := vk - q*vj is a bijection on integer points and
        // strictly shrinks the smallest coefficient magnitude.
        let (vk, ak) = eq
            .coeffs
            .iter()
            .min_by_key(|&(v, c)| (c.abs(), v.clone()))
            .map(|(v, c)| (v.clone(), *c))
            .expect("equality with unit gcd has variables");
        let (vj, aj) = eq
            .coeffs
            .iter()
            .find(|&(v, c)| *v != vk && c % ak != 0)
            .map(|(v, c)| (v.clone(), *c))
            .expect("gcd 1 guarantees a non-divisible pair");
        let q = if ak > 0 { round_div(aj, ak) } else { -round_div(aj, -ak) };
        let repl = Row::var(&vk).sub(&Row::var(&vj).scale(q));
        for e in &mut eqs {
            *e = e.subst(&vk, &repl);
        }
        for e in &mut ges {
            *e = e.subst(&vk, &repl);
        }
    }

    // Phase 2: inequalities only. Normalise and drop ground facts.
    let mut k = 0;
    while k < ges.len() {
        let g = ges[k].coeff_gcd();
        if g == 0 {
            if ges[k].c < 0 {
                return false;
            }
            ges.swap_remove(k);
            continue;
        }
        if g > 1 {
            // Integer tightening.
            ges[k] = ges[k].tighten(g);
        }
        k += 1;
    }
    if ges.is_empty() {
        return true;
    }

    // Drop duplicates and dominated bounds (same coefficients, weaker
    // constant): pairwise projection multiplies near-identical rows.
    dedup_ges(&mut ges);

    // Choose the variable with the cheapest projection, strongly
    // preferring ones that need no remainder splitting. A lower/upper
    // pair combines exactly when either side's coefficient is a unit.
    let mut vars: Vec<String> = Vec::new();
    for e in &ges {
        for v in e.coeffs.keys() {
            if !vars.iter().any(|w| w == v) {
                vars.push(v.clone());
            }
        }
    }
    let v = vars
        .iter()
        .min_by_key(|v| {
            let lowers: Vec<i128> = ges.iter().map(|e| e.coeff(v)).filter(|&c| c > 0).collect();
            let uppers: Vec<i128> = ges.iter().map(|e| e.coeff(v)).filter(|&c| c < 0).collect();
            if lowers.is_empty() || uppers.is_empty() {
                return (0usize, 0usize, (*v).clone());
            }
            let splits = lowers
                .iter()
                .flat_map(|b| uppers.iter().map(move |a| (*b, -*a)))
                .filter(|&(b, a)| b != 1 && a != 1)
                .count();
            (splits + 1, lowers.len() * uppers.len(), (*v).clone())
        })
        .unwrap()
        .clone();

    let mut lowers: Vec<(i128, Row)> = Vec::new(); // b*v >= beta
    let mut uppers: Vec<(i128, Row)> = Vec::new(); // a*v <= alpha
    let mut rest: Vec<Row> = Vec::new();
    for e in ges {
        let c = e.coeff(&v);
        let without = e.subst(&v, &Row::lit(0));
        if c > 0 {
            lowers.push((c, without.neg()));
        } else if c < 0 {
            uppers.push((-c, without));
        } else {
            rest.push(e);
        }
    }

    if lowers.is_empty() || uppers.is_empty() {
        // Unbounded on one side: an integer value always exists.
        return sat_pure(Vec::new(), rest, depth + 1);
    }

    // Pairwise projection of v. A pair b*v >= beta, a*v <= alpha with a
    // unit coefficient on either side eliminates exactly to
    // b*alpha - a*beta >= 0. When both coefficients exceed one, that row
    // is only the rational condition (the real shadow); padding its
    // constant by (a-1)(b-1) yields a sufficient integer condition (the
    // dark shadow). Real unsat refutes, dark sat accepts, and the gap in
    // between is closed by enumerating the few values where a non-unit
    // lower bound is almost tight.
    let hard = lowers.iter().any(|(b, _)| *b > 1) && uppers.iter().any(|(a, _)| *a > 1);
    let mut real = rest.clone();
    let mut dark = if hard { rest.clone() } else { Vec::new() };
    for (b, beta) in &lowers {
        for (a, alpha) in &uppers {
            let row = alpha.scale(*b).sub(&beta.scale(*a));
            if hard {
                dark.push(row.add_const(-mul128(*a - 1, *b - 1)));
            }
            real.push(row);
        }
    }
    if !hard {
        return sat_pure(Vec::new(), real, depth + 1);
    }
    if !sat_pure(Vec::new(), real, depth + 1) {
        return false;
    }
    if sat_pure(Vec::new(), dark, depth + 1) {
        return true;
    }
    // Grey region: an integer point exists only if some non-unit lower
    // bound is within (a_max*b - a_max - b)/a_max of being tight.
    let a_max = uppers.iter().map(|(a, _)| *a).max().expect("uppers nonempty");
    for (b, beta) in &lowers {
        if *b == 1 {
            continue;
        }
        let top = (mul128(a_max, *b) - a_max - *b) / a_max;
        for i in 0..=top {
            let eq = Row::var(&v).scale(*b).sub(beta).add_const(-i);
            let mut ges2 = rest.clone();
            for (b2, beta2) in &lowers {
                ges2.push(Row::var(&v).scale(*b2).sub(beta2));
            }
            for (a2, alpha2) in &uppers {
                ges2.push(alpha2.sub(&Row::var(&v).scale(*a2)));
            }
            if sat_pure(vec![eq], ges2, depth + 1) {
                return true;
            }
        }
    }
    false
}

/// Remove duplicate rows and rows implied by another row with the same
/// coefficients and a smaller constant.
fn dedup_ges(ges: &mut Vec<Row>) {
    let mut best: BTreeMap<Vec<(String, i128)>, i128> = BTreeMap::new();
    for e in ges.iter() {
        let key: Vec<(String, i128)> =
            e.coeffs.iter().map(|(v, c)| (v.clone(), *c)).collect();
        match best.get_mut(&key) {
            Some(prev) => *prev = (*prev).min(e.c),
            None => {
                best.insert(key, e.c);
            }
        }
    }
    ges.clear();
    for (key, c) in best {
        ges.push(Row { coeffs: key.into_iter().collect(), c });
    }
}

#[cfg(test)]
mod tests {
    use super::super::cond::{DivBinding, PredCond};
    use super::*;

    fn v(name: &str) -> AffineExpr {
        AffineExpr::var(name)
    }

    fn sys(conds: Vec<Cond>) -> CondSystem {
        CondSystem::of(conds)
    }

    #[test]
    fn ground_and_trivial() {
        assert!(satisfiable(&sys(vec![])));
        assert!(satisfiable(&sys(vec![Cond::Ge(AffineExpr::lit(0))])));
        assert!(!satisfiable(&sys(vec![Cond::Ge(AffineExpr::lit(-1))])));
        assert!(!satisfiable(&sys(vec![Cond::Eq(AffineExpr::lit(2))])));
    }

    #[test]
    fn spec_interval_example() {
        // {i >= 1, i <= n, n <= 0} has no integer solution.
        let s = sys(vec![
            Cond::ge(&v("i"), &AffineExpr::lit(1)),
            Cond::ge(&v("n"), &v("i")),
            Cond::ge(&AffineExpr::lit(0), &v("n")),
        ]);
        assert!(!satisfiable(&s));
    }

    #[test]
    fn parity_via_equalities() {
        // {i = 2k, i = 2m + 1} is unsatisfiable: i cannot be both even
        // and odd. Exactness here needs the gcd test after substitution.
        let s = sys(vec![
            Cond::Eq(v("i").sub(&v("k").scale(2))),
            Cond::Eq(v("i").sub(&v("m").scale(2)).add_const(-1)),
        ]);
        assert!(!satisfiable(&s));
    }

    #[test]
    fn non_unit_coefficients_are_exact() {
        // {3v >= 1, 3v <= 2} has a rational solution but no integer one.
        let s = sys(vec![
            Cond::Ge(v("x").scale(3).add_const(-1)),
            Cond::Ge(AffineExpr::lit(2).sub(&v("x").scale(3))),
        ]);
        assert!(!satisfiable(&s));
        // {3v >= 1, 3v <= 3} admits v = 1.
        let s = sys(vec![
            Cond::Ge(v("x").scale(3).add_const(-1)),
            Cond::Ge(AffineExpr::lit(3).sub(&v("x").scale(3))),
        ]);
        assert!(satisfiable(&s));
    }

    #[test]
    fn division_bindings_constrain() {
        // {i =: 2q + r, r = 0, i = 3} is unsatisfiable (3 is odd).
        let mut s = sys(vec![]);
        s.push_div(DivBinding { expr: v("i"), modulus: 2, quot: "q8".into(), rem: "r8".into() });
        s.push_cond(Cond::Eq(v("r8")));
        s.push_cond(Cond::Eq(v("i").add_const(-3)));
        assert!(!satisfiable(&s));
        let mut s2 = sys(vec![]);
        s2.push_div(DivBinding { expr: v("i"), modulus: 2, quot: "q8".into(), rem: "r8".into() });
        s2.push_cond(Cond::Eq(v("r8")));
        s2.push_cond(Cond::Eq(v("i").add_const(-4)));
        assert!(satisfiable(&s2));
    }

    #[test]
    fn disequalities_split() {
        // {i >= 1, i <= 2, i != 1, i != 2} is unsatisfiable.
        let s = sys(vec![
            Cond::ge(&v("i"), &AffineExpr::lit(1)),
            Cond::ge(&AffineExpr::lit(2), &v("i")),
            Cond::Neq(v("i").add_const(-1)),
            Cond::Neq(v("i").add_const(-2)),
        ]);
        assert!(!satisfiable(&s));
    }

    #[test]
    fn contradictory_predicates() {
        let p = |positive| {
            Cond::Pred(PredCond { name: "P1".into(), positive, args: vec![v("i")] })
        };
        assert!(satisfiable(&sys(vec![p(true)])));
        assert!(!satisfiable(&sys(vec![p(true), p(false)])));
        // Different instances of the same predicate are independent.
        let q = Cond::Pred(PredCond {
            name: "P1".into(),
            positive: false,
            args: vec![v("i").add_const(1)],
        });
        assert!(satisfiable(&sys(vec![p(true), q])));
    }

    /// Brute-force oracle: search a box for an integer solution.
    fn brute_sat(conds: &[(Vec<i64>, i64, bool)], vars: &[&str], lo: i64, hi: i64) -> bool {
        fn rec(
            conds: &[(Vec<i64>, i64, bool)],
            vars: &[&str],
            env: &mut Vec<i64>,
            lo: i64,
            hi: i64,
        ) -> bool {
            if env.len() == vars.len() {
                return conds.iter().all(|(cs, c0, is_eq)| {
                    let val: i64 = cs.iter().zip(env.iter()).map(|(a, x)| a * x).sum::<i64>() + c0;
                    if *is_eq {
                        val == 0
                    } else {
                        val >= 0
                    }
                });
            }
            (lo..=hi).any(|x| {
                env.push(x);
                let ok = rec(conds, vars, env, lo, hi);
                env.pop();
                ok
            })
        }
        rec(conds, vars, &mut Vec::new(), lo, hi)
    }

    #[test]
    fn randomized_against_brute_force() {
        // Systems over a box wide enough that bounded search is a sound
        // oracle: every constraint carries |coeff| <= 3, |const| <= 6,
        // and each variable is boxed to [-8, 8] inside the system itself,
        // so satisfiability equals satisfiability within the box.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_5a7);
        let vars = ["x", "y", "z"];
        for _ in 0..400 {
            let mut conds = Vec::new();
            let mut sysv = CondSystem::new();
            for var in vars {
                // x in [-8, 8] both in the oracle encoding and the system.
                conds.push((vars.iter().map(|w| i64::from(*w == var)).collect(), 8, false));
                conds.push((vars.iter().map(|w| -i64::from(*w == var)).collect(), 8, false));
                sysv.push_cond(Cond::Ge(v(var).add_const(8)));
                sysv.push_cond(Cond::Ge(v(var).neg().add_const(8)));
            }
            for _ in 0..rng.gen_range(1..=4) {
                let cs: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
                let c0 = rng.gen_range(-6..=6);
                let is_eq = rng.gen_bool(0.3);
                let mut e = AffineExpr::lit(c0);
                for (w, c) in vars.iter().zip(&cs) {
                    e = e.add(&v(w).scale(*c));
                }
                sysv.push_cond(if is_eq { Cond::Eq(e) } else { Cond::Ge(e) });
                conds.push((cs, c0, is_eq));
            }
            let want = brute_sat(&conds, &vars, -8, 8);
            assert_eq!(satisfiable(&sysv), want, "system {sysv}");
        }
    }

    #[test]
    fn coupled_residue_families_resolve() {
        // Several bindings over shifted copies of one expression, with
        // quotients compared against each other: the shape that loop
        // folding produces when competing writes live in different
        // residue classes. Once a regression: projection used to grind
        // on these for seconds (or overflow) instead of microseconds.
        // Expected verdict checked by brute force over
        // m0, m1 in [-40, 40]; smallest witnesses include (9, -13).
        let mut s = CondSystem::new();
        let e = |k: i64| v("m1").scale(2).add_const(k);
        let d = |e, q: &str, r: &str| DivBinding {
            expr: e,
            modulus: 3,
            quot: q.into(),
            rem: r.into(),
        };
        s.push_div(d(e(2), "q3", "r3"));
        s.push_cond(Cond::Ge(v("m0").add(&v("q3")).add_const(-1)));
        s.push_cond(Cond::Ge(v("m0").scale(-5).sub(&v("q3").scale(6))));
        s.push_div(d(e(3), "q4", "r4"));
        s.push_cond(Cond::Ge(v("m0").add(&v("q4")).add_const(-1)));
        s.push_cond(Cond::Ge(AffineExpr::lit(2).sub(&v("m0").scale(5)).sub(&v("q4").scale(6))));
        s.push_cond(Cond::Ge(v("q3").sub(&v("q4"))));
        s.push_div(d(e(4), "q5", "r5"));
        s.push_cond(Cond::Ge(v("m0").add(&v("q5")).add_const(-1)));
        s.push_cond(Cond::Ge(AffineExpr::lit(4).sub(&v("m0").scale(5)).sub(&v("q5").scale(6))));
        s.push_cond(Cond::Ge(v("q3").sub(&v("q5"))));
        s.push_div(d(e(2), "q7", "r7"));
        s.push_div(DivBinding {
            expr: v("m0"),
            modulus: 3,
            quot: "q10".into(),
            rem: "r10".into(),
        });
        s.push_cond(Cond::Ge(v("q10").add_const(-1)));
        s.push_cond(Cond::Ge(
            v("q10").sub(&v("m0").scale(2)).sub(&v("q7").scale(2)).add_const(-1),
        ));
        assert!(satisfiable(&s));
        // Capping m0 below the forced q10 >= 1 flips the verdict.
        s.push_cond(Cond::Ge(v("m0").neg().add_const(-100)));
        assert!(!satisfiable(&s));
    }
}
