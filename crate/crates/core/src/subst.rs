//! Equation sets, solved forms, and unification.
//!
//! A substitution is an equation set in solved form: every left-hand side is
//! a distinct variable that occurs nowhere else in the set. [`unify`] brings
//! an arbitrary equation set into that shape or reports that none exists.
//! The occurs check is always on, so solved forms are idempotent and acyclic.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::{Term, Var, VarGen};

/// A finite set of equations between terms, not necessarily solvable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquationSet {
    eqs: Vec<(Term, Term)>,
}

impl EquationSet {
    pub fn new() -> Self {
        EquationSet::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Term, Term)>) -> Self {
        EquationSet {
            eqs: pairs.into_iter().collect(),
        }
    }

    pub fn push(&mut self, lhs: Term, rhs: Term) {
        self.eqs.push((lhs, rhs));
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (Term, Term)> {
        self.eqs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for (l, r) in &self.eqs {
            l.collect_vars(&mut out);
            r.collect_vars(&mut out);
        }
        out
    }

    /// Scan check for solved form: all left-hand sides are distinct
    /// variables occurring nowhere else in the set.
    pub fn is_solved_form(&self) -> bool {
        let mut lhs_vars = BTreeSet::new();
        for (l, _) in &self.eqs {
            match l {
                Term::Var(v) => {
                    if !lhs_vars.insert(v.clone()) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        self.eqs.iter().all(|(_, r)| {
            r.vars().iter().all(|v| !lhs_vars.contains(v))
        })
    }
}

impl FromIterator<(Term, Term)> for EquationSet {
    fn from_iter<I: IntoIterator<Item = (Term, Term)>>(iter: I) -> Self {
        EquationSet::from_pairs(iter)
    }
}

/// An idempotent substitution: the solved form of some equation set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: std::collections::BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::Comp(f, args) => {
                Term::Comp(f.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    pub fn apply_tuple(&self, tuple: &[Term]) -> Vec<Term> {
        tuple.iter().map(|t| self.apply(t)).collect()
    }

    /// Binds `v` to `t`, substituting the new binding into every stored
    /// right-hand side so the map stays idempotent. The caller is
    /// responsible for the occurs check.
    fn bind(&mut self, v: Var, t: Term) {
        let single = Substitution {
            map: [(v.clone(), t.clone())].into_iter().collect(),
        };
        for rhs in self.map.values_mut() {
            *rhs = single.apply(rhs);
        }
        self.map.insert(v, t);
    }

    /// Composition: `self` first, then `other` on the result.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut map = std::collections::BTreeMap::new();
        for (v, t) in &self.map {
            let t = other.apply(t);
            // drop trivial bindings that composition may create
            if t != Term::Var(v.clone()) {
                map.insert(v.clone(), t);
            }
        }
        for (v, t) in &other.map {
            map.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution { map }
    }

    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(v, _)| vars.contains(*v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    pub fn to_equations(&self) -> EquationSet {
        self.map
            .iter()
            .map(|(v, t)| (Term::Var(v.clone()), t.clone()))
            .collect()
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={t}")?;
        }
        f.write_str("}")
    }
}

/// Most general solved form of an equation set, or `None` when unsolvable.
///
/// Variable-variable equations keep their left-hand side as the bound
/// variable, so equations of the shape `v = rhs` never flip `v` onto a
/// right-hand side unless merging forces it.
pub fn unify(eqs: &EquationSet) -> Option<Substitution> {
    let mut sub = Substitution::new();
    let mut work: Vec<(Term, Term)> = eqs.iter().rev().cloned().collect();
    while let Some((l, r)) = work.pop() {
        let l = sub.apply(&l);
        let r = sub.apply(&r);
        if l == r {
            continue;
        }
        match (l, r) {
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if t.contains_var(&v) {
                    return None; // occurs check
                }
                sub.bind(v, t);
            }
            (Term::Comp(f, fa), Term::Comp(g, ga)) => {
                if f != g || fa.len() != ga.len() {
                    return None;
                }
                // preserve left-to-right processing order
                for pair in fa.into_iter().zip(ga).rev() {
                    work.push(pair);
                }
            }
            _ => return None, // distinct constants, or constant vs compound
        }
    }
    Some(sub)
}

/// Unifies two term tuples of equal length.
pub fn unify_tuples(lhs: &[Term], rhs: &[Term]) -> Option<Substitution> {
    debug_assert_eq!(lhs.len(), rhs.len());
    unify(&EquationSet::from_pairs(
        lhs.iter().cloned().zip(rhs.iter().cloned()),
    ))
}

/// One-way matching: finds a substitution over `pattern`'s variables only
/// that turns `pattern` into `target`. Variables of `target` are rigid.
pub fn match_onto(pattern: &[Term], target: &[Term]) -> Option<Substitution> {
    if pattern.len() != target.len() {
        return None;
    }
    let mut sub = Substitution::new();
    let mut work: Vec<(Term, Term)> = pattern
        .iter()
        .cloned()
        .zip(target.iter().cloned())
        .rev()
        .collect();
    while let Some((p, t)) = work.pop() {
        match p {
            Term::Var(v) => match sub.get(&v) {
                Some(bound) => {
                    if *bound != t {
                        return None;
                    }
                }
                None => {
                    sub.bind(v, t);
                }
            },
            Term::Const(c) => match t {
                Term::Const(d) if c == d => {}
                _ => return None,
            },
            Term::Comp(f, fa) => match t {
                Term::Comp(g, ga) if f == g && fa.len() == ga.len() => {
                    for pair in fa.into_iter().zip(ga).rev() {
                        work.push(pair);
                    }
                }
                _ => return None,
            },
        }
    }
    Some(sub)
}

/// Replaces every variable outside `protect` by a fresh one drawn from
/// `gen`, avoiding the names in `avoid`. Structure is preserved and equal
/// variables stay equal.
pub struct Renamer<'a> {
    protect: &'a BTreeSet<Var>,
    avoid: BTreeSet<Var>,
    gen: &'a mut VarGen,
    map: std::collections::BTreeMap<Var, Var>,
}

impl<'a> Renamer<'a> {
    pub fn new(protect: &'a BTreeSet<Var>, avoid: &BTreeSet<Var>, gen: &'a mut VarGen) -> Self {
        Renamer {
            protect,
            avoid: avoid.clone(),
            gen,
            map: Default::default(),
        }
    }

    pub fn rename_var(&mut self, v: &Var) -> Var {
        if self.protect.contains(v) {
            return v.clone();
        }
        if let Some(w) = self.map.get(v) {
            return w.clone();
        }
        let w = self.gen.fresh(&self.avoid);
        self.avoid.insert(w.clone());
        self.map.insert(v.clone(), w.clone());
        w
    }

    pub fn rename_term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(self.rename_var(v)),
            Term::Const(_) => t.clone(),
            Term::Comp(f, args) => Term::Comp(
                f.clone(),
                args.iter().map(|a| self.rename_term(a)).collect(),
            ),
        }
    }

    pub fn rename_tuple(&mut self, tuple: &[Term]) -> Vec<Term> {
        tuple.iter().map(|t| self.rename_term(t)).collect()
    }
}

/// Renames apart a single term. See [`Renamer`].
pub fn rename_term_apart(
    t: &Term,
    protect: &BTreeSet<Var>,
    avoid: &BTreeSet<Var>,
    gen: &mut VarGen,
) -> Term {
    Renamer::new(protect, avoid, gen).rename_term(t)
}

/// Renames apart an equation set. See [`Renamer`].
pub fn rename_equations_apart(
    eqs: &EquationSet,
    protect: &BTreeSet<Var>,
    avoid: &BTreeSet<Var>,
    gen: &mut VarGen,
) -> EquationSet {
    let mut r = Renamer::new(protect, avoid, gen);
    eqs.iter()
        .map(|(l, rhs)| (r.rename_term(l), r.rename_term(rhs)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        crate::lang::parse_term(s).unwrap()
    }

    fn eqs(pairs: &[(&str, &str)]) -> EquationSet {
        pairs.iter().map(|(l, r)| (t(l), t(r))).collect()
    }

    #[test]
    fn unify_propagates_through_solved_form() {
        // {X=a, Y=X} solves to {X=a, Y=a}
        let sub = unify(&eqs(&[("X", "a"), ("Y", "X")])).unwrap();
        assert_eq!(sub.apply(&t("X")), t("a"));
        assert_eq!(sub.apply(&t("Y")), t("a"));
        assert!(sub.to_equations().is_solved_form());
    }

    #[test]
    fn unify_occurs_check_rejects_cyclic_equation() {
        assert_eq!(unify(&eqs(&[("X", "f(X)")])), None);
    }

    #[test]
    fn unify_rejects_constant_clash() {
        assert_eq!(unify(&eqs(&[("X", "b"), ("X", "c")])), None);
    }

    #[test]
    fn unify_output_is_idempotent() {
        let sub = unify(&eqs(&[("X", "f(Y)"), ("Y", "g(Z)")])).unwrap();
        for (_, rhs) in sub.iter() {
            assert_eq!(&sub.apply(rhs), rhs);
        }
    }

    #[test]
    fn unify_keeps_lhs_variable_bound_in_var_var_equations() {
        let sub = unify(&eqs(&[("X", "W")])).unwrap();
        assert_eq!(sub.apply(&t("X")), t("W"));
    }

    #[test]
    fn solved_form_scan() {
        assert!(eqs(&[("X", "a"), ("Y", "f(Z)")]).is_solved_form());
        // LHS repeated
        assert!(!eqs(&[("X", "a"), ("X", "b")]).is_solved_form());
        // LHS occurs in another RHS
        assert!(!eqs(&[("X", "f(Y)"), ("Y", "a")]).is_solved_form());
        // non-variable LHS
        assert!(!eqs(&[("f(X)", "f(a)")]).is_solved_form());
    }

    #[test]
    fn match_onto_is_one_way() {
        let sub = match_onto(&[t("f(X,b)")], &[t("f(a,b)")]).unwrap();
        assert_eq!(sub.apply(&t("X")), t("a"));
        // target variables are rigid: cannot match a constant pattern onto a var
        assert!(match_onto(&[t("a")], &[t("Y")]).is_none());
        // but a pattern variable may match a target variable
        assert!(match_onto(&[t("X")], &[t("Y")]).is_some());
    }

    #[test]
    fn rename_apart_replaces_unprotected_vars() {
        let mut gen = VarGen::new();
        let avoid: BTreeSet<Var> = [Var::new("X")].into_iter().collect();
        let renamed = rename_term_apart(&t("f(X,Y)"), &BTreeSet::new(), &avoid, &mut gen);
        match renamed {
            Term::Comp(_, args) => {
                assert!(matches!(&args[0], Term::Var(v) if v.0 != "X" && v.0 != "Y"));
                assert!(matches!(&args[1], Term::Var(v) if v.0 != "X" && v.0 != "Y"));
                assert_ne!(args[0], args[1]);
            }
            _ => panic!("structure not preserved"),
        }
    }

    #[test]
    fn rename_apart_keeps_constants_and_protected_vars() {
        let mut gen = VarGen::new();
        assert_eq!(
            rename_term_apart(&t("a"), &BTreeSet::new(), &BTreeSet::new(), &mut gen),
            t("a")
        );

        let protect: BTreeSet<Var> = [Var::new("X")].into_iter().collect();
        let avoid: BTreeSet<Var> = [Var::new("Z")].into_iter().collect();
        let renamed = rename_equations_apart(
            &eqs(&[("X", "g(Z)")]),
            &protect,
            &avoid,
            &mut gen,
        );
        let (l, r) = renamed.iter().next().unwrap().clone();
        assert_eq!(l, t("X"));
        match r {
            Term::Comp(_, args) => {
                assert!(matches!(&args[0], Term::Var(v) if v.0 != "Z"));
            }
            _ => panic!(),
        }
    }
}
