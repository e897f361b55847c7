//! Conditions and ordered condition systems.
//!
//! A condition is an affine equality `e = 0`, inequality `e >= 0`
//! (strict `e > 0` is normalised to `e - 1 >= 0` on construction), a
//! disequality `e != 0` (needed only for domains of else-branches of
//! affine equality tests), or a predicate occurrence `p^b{args}` whose
//! truth is data-dependent and therefore never decided statically.
//!
//! A condition system is an ordered list of conditions interleaved with
//! division bindings `e =: m*q + r` that introduce the floor quotient
//! `q` and remainder `r in [0, m)` of an earlier expression. Order
//! matters: a binding's variables may be used only by later items.

use std::collections::BTreeMap;
use std::fmt;

use super::AffineExpr;

/// A data-dependent predicate occurrence with a polarity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PredCond {
    pub name: String,
    pub positive: bool,
    pub args: Vec<AffineExpr>,
}

impl PredCond {
    pub fn negated(&self) -> PredCond {
        PredCond { name: self.name.clone(), positive: !self.positive, args: self.args.clone() }
    }

    pub fn subst_map(&self, map: &BTreeMap<String, AffineExpr>) -> PredCond {
        PredCond {
            name: self.name.clone(),
            positive: self.positive,
            args: self.args.iter().map(|a| a.subst_map(map)).collect(),
        }
    }

    /// Same predicate instance, either polarity.
    pub fn same_instance(&self, other: &PredCond) -> bool {
        self.name == other.name && self.args == other.args
    }
}

impl fmt::Display for PredCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "!")?;
        }
        write!(f, "{}{{", self.name)?;
        for (k, a) in self.args.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A single condition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Cond {
    /// `e = 0`
    Eq(AffineExpr),
    /// `e >= 0`
    Ge(AffineExpr),
    /// `e != 0` (domain lists only; never appears in solution trees)
    Neq(AffineExpr),
    /// Data-dependent predicate with polarity.
    Pred(PredCond),
}

impl Cond {
    /// `e > 0` over the integers, stored as `e - 1 >= 0`.
    pub fn gt(e: AffineExpr) -> Cond {
        Cond::Ge(e.add_const(-1))
    }

    /// `a >= b`.
    pub fn ge(a: &AffineExpr, b: &AffineExpr) -> Cond {
        Cond::Ge(a.sub(b))
    }

    /// `a = b`.
    pub fn eq(a: &AffineExpr, b: &AffineExpr) -> Cond {
        Cond::Eq(a.sub(b))
    }

    /// gcd-normalise. Returns `None` for a tautology and the canonical
    /// impossible condition `Ge(-1)` for a ground contradiction.
    pub fn normalize(self) -> Option<Cond> {
        match self {
            Cond::Eq(e) => {
                let g = e.coeff_gcd();
                if g == 0 {
                    return if e.constant() == 0 { None } else { Some(Cond::never()) };
                }
                if e.constant() % g != 0 {
                    return Some(Cond::never());
                }
                Some(Cond::Eq(e.div_exact(g)))
            }
            Cond::Ge(e) => {
                let g = e.coeff_gcd();
                if g == 0 {
                    return if e.constant() >= 0 { None } else { Some(Cond::never()) };
                }
                // Integer tightening: divide and floor the constant.
                let mut out = AffineExpr::lit(e.constant().div_euclid(g));
                for (v, c) in e.terms() {
                    out = out.add(&AffineExpr::var(v).scale(c / g));
                }
                Some(Cond::Ge(out))
            }
            Cond::Neq(e) => {
                let g = e.coeff_gcd();
                if g == 0 {
                    return if e.constant() != 0 { None } else { Some(Cond::never()) };
                }
                if e.constant() % g != 0 {
                    // e is never zero, the disequality always holds.
                    return None;
                }
                Some(Cond::Neq(e.div_exact(g)))
            }
            c @ Cond::Pred(_) => Some(c),
        }
    }

    /// The canonical unsatisfiable condition.
    pub fn never() -> Cond {
        Cond::Ge(AffineExpr::lit(-1))
    }

    pub fn is_never(&self) -> bool {
        matches!(self, Cond::Ge(e) if e.as_const().is_some_and(|c| c < 0))
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Cond::Eq(e) | Cond::Ge(e) | Cond::Neq(e) => e.mentions(var),
            Cond::Pred(p) => p.args.iter().any(|a| a.mentions(var)),
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            Cond::Eq(e) | Cond::Ge(e) | Cond::Neq(e) => {
                out.extend(e.vars().map(str::to_string));
            }
            Cond::Pred(p) => {
                for a in &p.args {
                    out.extend(a.vars().map(str::to_string));
                }
            }
        }
        out
    }

    pub fn subst_map(&self, map: &BTreeMap<String, AffineExpr>) -> Cond {
        match self {
            Cond::Eq(e) => Cond::Eq(e.subst_map(map)),
            Cond::Ge(e) => Cond::Ge(e.subst_map(map)),
            Cond::Neq(e) => Cond::Neq(e.subst_map(map)),
            Cond::Pred(p) => Cond::Pred(p.subst_map(map)),
        }
    }

    /// Evaluate under a complete environment; predicates are resolved by
    /// the oracle (called with name and concrete argument values).
    pub fn eval(
        &self,
        env: &BTreeMap<String, i64>,
        pred: &mut dyn FnMut(&str, &[i64]) -> bool,
    ) -> bool {
        match self {
            Cond::Eq(e) => e.eval(env) == 0,
            Cond::Ge(e) => e.eval(env) >= 0,
            Cond::Neq(e) => e.eval(env) != 0,
            Cond::Pred(p) => {
                let args: Vec<i64> = p.args.iter().map(|a| a.eval(env)).collect();
                pred(&p.name, &args) == p.positive
            }
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond::Eq(e) => e.fmt_relation("=", f),
            Cond::Ge(e) => e.fmt_relation(">=", f),
            Cond::Neq(e) => e.fmt_relation("!=", f),
            Cond::Pred(p) => write!(f, "{p}"),
        }
    }
}

/// `expr =: modulus * quot + rem`, binding the floor quotient and the
/// remainder `rem in [0, modulus)` of `expr`. `modulus` is at least 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DivBinding {
    pub expr: AffineExpr,
    pub modulus: i64,
    pub quot: String,
    pub rem: String,
}

impl DivBinding {
    pub fn subst_map(&self, map: &BTreeMap<String, AffineExpr>) -> DivBinding {
        debug_assert!(!map.contains_key(&self.quot) && !map.contains_key(&self.rem));
        DivBinding {
            expr: self.expr.subst_map(map),
            modulus: self.modulus,
            quot: self.quot.clone(),
            rem: self.rem.clone(),
        }
    }

    /// Extend `env` with the quotient and remainder values.
    pub fn bind(&self, env: &mut BTreeMap<String, i64>) {
        let e = self.expr.eval(env);
        env.insert(self.quot.clone(), e.div_euclid(self.modulus));
        env.insert(self.rem.clone(), e.rem_euclid(self.modulus));
    }
}

impl fmt::Display for DivBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =: {}{} + {}", self.expr, self.modulus, self.quot, self.rem)
    }
}

/// One item of a condition system.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SysItem {
    Cond(Cond),
    Div(DivBinding),
}

impl fmt::Display for SysItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SysItem::Cond(c) => write!(f, "{c}"),
            SysItem::Div(d) => write!(f, "{d}"),
        }
    }
}

/// An ordered conjunction of conditions and division bindings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct CondSystem {
    pub items: Vec<SysItem>,
}

impl CondSystem {
    pub fn new() -> Self {
        CondSystem { items: Vec::new() }
    }

    pub fn of(conds: impl IntoIterator<Item = Cond>) -> Self {
        let mut s = CondSystem::new();
        for c in conds {
            s.push_cond(c);
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Append a condition, normalising it; tautologies are dropped.
    pub fn push_cond(&mut self, c: Cond) {
        if let Some(c) = c.normalize() {
            self.items.push(SysItem::Cond(c));
        }
    }

    pub fn push_div(&mut self, d: DivBinding) {
        self.items.push(SysItem::Div(d));
    }

    pub fn push_item(&mut self, item: SysItem) {
        match item {
            SysItem::Cond(c) => self.push_cond(c),
            SysItem::Div(d) => self.push_div(d),
        }
    }

    pub fn concat(&self, other: &CondSystem) -> CondSystem {
        let mut out = self.clone();
        for item in &other.items {
            out.push_item(item.clone());
        }
        out
    }

    pub fn conds(&self) -> impl Iterator<Item = &Cond> {
        self.items.iter().filter_map(|i| match i {
            SysItem::Cond(c) => Some(c),
            SysItem::Div(_) => None,
        })
    }

    pub fn divs(&self) -> impl Iterator<Item = &DivBinding> {
        self.items.iter().filter_map(|i| match i {
            SysItem::Div(d) => Some(d),
            SysItem::Cond(_) => None,
        })
    }

    pub fn preds(&self) -> impl Iterator<Item = &PredCond> {
        self.conds().filter_map(|c| match c {
            Cond::Pred(p) => Some(p),
            _ => None,
        })
    }

    pub fn has_preds(&self) -> bool {
        self.preds().next().is_some()
    }

    /// Variables bound by division bindings inside this system.
    pub fn bound_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for d in self.divs() {
            out.push(d.quot.clone());
            out.push(d.rem.clone());
        }
        out
    }

    /// Free variables: everything mentioned that is not division-bound.
    pub fn free_vars(&self) -> Vec<String> {
        let bound: Vec<String> = self.bound_vars();
        let mut out: Vec<String> = Vec::new();
        let mut push = |v: String| {
            if !bound.contains(&v) && !out.contains(&v) {
                out.push(v);
            }
        };
        for item in &self.items {
            match item {
                SysItem::Cond(c) => {
                    for v in c.vars() {
                        push(v);
                    }
                }
                SysItem::Div(d) => {
                    for v in d.expr.vars() {
                        push(v.to_string());
                    }
                }
            }
        }
        out
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.items.iter().any(|item| match item {
            SysItem::Cond(c) => c.mentions(var),
            SysItem::Div(d) => d.expr.mentions(var) || d.quot == var || d.rem == var,
        })
    }

    /// Substitute free variables. Keys must not collide with bound names.
    pub fn subst_map(&self, map: &BTreeMap<String, AffineExpr>) -> CondSystem {
        let mut out = CondSystem::new();
        for item in &self.items {
            match item {
                SysItem::Cond(c) => out.push_cond(c.subst_map(map)),
                SysItem::Div(d) => out.push_div(d.subst_map(map)),
            }
        }
        out
    }

    pub fn is_trivially_false(&self) -> bool {
        self.conds().any(Cond::is_never)
    }

    /// Merge division bindings over the same expression and modulus:
    /// later duplicates are dropped and their quotient/remainder names
    /// rewritten to the first binding's names in every following item.
    /// Duplicate conditions are dropped as well. Returns the renames so
    /// callers can rewrite values that live outside the system.
    pub fn unify_divs(&mut self) -> BTreeMap<String, AffineExpr> {
        let mut renames: BTreeMap<String, AffineExpr> = BTreeMap::new();
        let mut seen: BTreeMap<(AffineExpr, i64), (String, String)> = BTreeMap::new();
        let items = std::mem::take(&mut self.items);
        for item in items {
            match item {
                SysItem::Div(d) => {
                    let d = d.subst_map(&renames);
                    match seen.get(&(d.expr.clone(), d.modulus)) {
                        Some((q, r)) => {
                            if *q != d.quot {
                                renames.insert(d.quot, AffineExpr::var(q));
                            }
                            if *r != d.rem {
                                renames.insert(d.rem, AffineExpr::var(r));
                            }
                        }
                        None => {
                            seen.insert(
                                (d.expr.clone(), d.modulus),
                                (d.quot.clone(), d.rem.clone()),
                            );
                            self.items.push(SysItem::Div(d));
                        }
                    }
                }
                SysItem::Cond(c) => {
                    if let Some(c) = c.subst_map(&renames).normalize() {
                        let dup = self
                            .items
                            .iter()
                            .any(|it| matches!(it, SysItem::Cond(c2) if *c2 == c));
                        if !dup {
                            self.items.push(SysItem::Cond(c));
                        }
                    }
                }
            }
        }
        renames
    }

    /// Evaluate the whole system under an environment, resolving
    /// predicates through `pred`. Division bindings extend a local copy
    /// of the environment for the items after them.
    pub fn eval(
        &self,
        env: &BTreeMap<String, i64>,
        pred: &mut dyn FnMut(&str, &[i64]) -> bool,
    ) -> bool {
        let mut env = env.clone();
        for item in &self.items {
            match item {
                SysItem::Cond(c) => {
                    if !c.eval(&env, pred) {
                        return false;
                    }
                }
                SysItem::Div(d) => d.bind(&mut env),
            }
        }
        true
    }

    /// Like `eval`, returning the extended environment (with division
    /// variables bound) when the system holds.
    pub fn eval_extending(
        &self,
        env: &BTreeMap<String, i64>,
        pred: &mut dyn FnMut(&str, &[i64]) -> bool,
    ) -> Option<BTreeMap<String, i64>> {
        let mut env = env.clone();
        for item in &self.items {
            match item {
                SysItem::Cond(c) => {
                    if !c.eval(&env, pred) {
                        return None;
                    }
                }
                SysItem::Div(d) => d.bind(&mut env),
            }
        }
        Some(env)
    }
}

impl fmt::Display for CondSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, item) in self.items.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{item}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Cond> for CondSystem {
    fn from_iter<T: IntoIterator<Item = Cond>>(iter: T) -> Self {
        CondSystem::of(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> AffineExpr {
        AffineExpr::var(name)
    }

    #[test]
    fn strict_inequality_normalises_to_ge() {
        // i > 0 becomes i - 1 >= 0, i.e. prints as i >= 1.
        let c = Cond::gt(v("i"));
        assert_eq!(format!("{c}"), "i >= 1");
    }

    #[test]
    fn gcd_tightening() {
        // 2i - 3 >= 0 tightens to i - 2 >= 0 over the integers.
        let c = Cond::Ge(v("i").scale(2).add_const(-3)).normalize().unwrap();
        assert_eq!(c, Cond::Ge(v("i").add_const(-2)));
        // 2i + 1 = 0 has no integer solution.
        let c = Cond::Eq(v("i").scale(2).add_const(1)).normalize().unwrap();
        assert!(c.is_never());
        // 2i + 1 != 0 always holds.
        assert!(Cond::Neq(v("i").scale(2).add_const(1)).normalize().is_none());
    }

    #[test]
    fn relation_printing_balances_sides() {
        let c = Cond::eq(&v("q1"), &v("i"));
        assert_eq!(format!("{c}"), "q1 = i");
        let c = Cond::ge(&v("n"), &v("i"));
        assert_eq!(format!("{c}"), "n >= i");
        // Empty left side flips the operator: -i >= 0 prints as i <= 0.
        let c = Cond::Ge(v("i").neg());
        assert_eq!(format!("{c}"), "i <= 0");
    }

    #[test]
    fn system_eval_binds_divisions() {
        // { i =: 2q+r, r = 0 } holds exactly for even i.
        let mut s = CondSystem::new();
        s.push_div(DivBinding {
            expr: v("i"),
            modulus: 2,
            quot: "q9".into(),
            rem: "r9".into(),
        });
        s.push_cond(Cond::Eq(v("r9")));
        let mut no_preds = |_: &str, _: &[i64]| unreachable!();
        let env = |i| [("i".to_string(), i)].into_iter().collect();
        assert!(s.eval(&env(4), &mut no_preds));
        assert!(!s.eval(&env(5), &mut no_preds));
        // Floor semantics for negative dividends: -4 = 2*(-2) + 0.
        assert!(s.eval(&env(-4), &mut no_preds));
    }

    #[test]
    fn predicate_polarity() {
        let p = Cond::Pred(PredCond {
            name: "P1".into(),
            positive: false,
            args: vec![v("i")],
        });
        let env = [("i".to_string(), 3)].into_iter().collect();
        let mut oracle = |name: &str, args: &[i64]| {
            assert_eq!(name, "P1");
            assert_eq!(args, [3]);
            true
        };
        assert!(!p.eval(&env, &mut oracle));
        assert_eq!(format!("{p}"), "!P1{i}");
    }
}
