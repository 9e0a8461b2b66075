//! Herbrand terms: variables, constants, and compound terms.
//!
//! Lists are ordinary compounds over the functor `'.'/2` and the constant
//! `[]`; `U-W` pairs are compounds over `'-'/2`. The pretty-printer folds
//! both back into their surface syntax.

use std::collections::BTreeSet;
use std::fmt;

/// Functor used by list cells.
pub const LIST_FUNCTOR: &str = ".";
/// Constant naming the empty list.
pub const NIL: &str = "[]";
/// Functor used by `U-W` pairs.
pub const PAIR_FUNCTOR: &str = "-";

/// A variable, identified globally by its name.
///
/// Names produced by [`VarGen`] live in the reserved `_G<n>` namespace;
/// canonicalized row variables use `_R<n>`; parser-generated anonymous
/// variables use `_#<n>`, which no identifier token can spell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True for parser-generated anonymous variables (`_` occurrences).
    /// These never contribute to a table heading.
    pub fn is_anonymous(&self) -> bool {
        self.0.starts_with("_#")
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A Herbrand term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    /// An identifier starting lowercase, an integer literal, or `[]`.
    Const(String),
    /// A functor applied to at least one argument.
    Comp(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn comp(functor: impl Into<String>, args: Vec<Term>) -> Term {
        assert!(!args.is_empty(), "compound terms have arity >= 1");
        Term::Comp(functor.into(), args)
    }

    /// Builds a proper list `[t1,...,tn]` from its elements.
    pub fn list(items: Vec<Term>) -> Term {
        Term::list_with_tail(items, Term::Const(NIL.into()))
    }

    /// Builds `[t1,...,tn|tail]`.
    pub fn list_with_tail(items: Vec<Term>, tail: Term) -> Term {
        items.into_iter().rev().fold(tail, |acc, item| {
            Term::Comp(LIST_FUNCTOR.into(), vec![item, acc])
        })
    }

    /// Builds `lhs-rhs`.
    pub fn pair(lhs: Term, rhs: Term) -> Term {
        Term::Comp(PAIR_FUNCTOR.into(), vec![lhs, rhs])
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Comp(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Const(_) => false,
            Term::Comp(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Appends this term's variables to `out` in first-occurrence order.
    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Comp(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }
}

/// Variables of a term tuple, in first-occurrence order.
pub fn tuple_vars(tuple: &[Term]) -> Vec<Var> {
    let mut out = Vec::new();
    for t in tuple {
        t.collect_vars(&mut out);
    }
    out
}

/// Named (non-anonymous) variables of a term tuple. These are the variables
/// that form table headings.
pub fn named_tuple_vars(tuple: &[Term]) -> Vec<Var> {
    tuple_vars(tuple)
        .into_iter()
        .filter(|v| !v.is_anonymous())
        .collect()
}

pub fn tuple_is_ground(tuple: &[Term]) -> bool {
    tuple.iter().all(Term::is_ground)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => f.write_str(c),
            Term::Comp(functor, args) if functor == LIST_FUNCTOR && args.len() == 2 => {
                write_list(f, &args[0], &args[1])
            }
            Term::Comp(functor, args) if functor == PAIR_FUNCTOR && args.len() == 2 => {
                // Left-nested pairs print flat; right-nested need parentheses
                // to round-trip through the left-associative parser.
                write!(f, "{}-", args[0])?;
                match &args[1] {
                    t @ Term::Comp(g, a2) if g == PAIR_FUNCTOR && a2.len() == 2 => {
                        write!(f, "({t})")
                    }
                    t => write!(f, "{t}"),
                }
            }
            Term::Comp(functor, args) => {
                write!(f, "{functor}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &Term, tail: &Term) -> fmt::Result {
    write!(f, "[{head}")?;
    let mut cur = tail;
    loop {
        match cur {
            Term::Const(c) if c == NIL => break,
            Term::Comp(functor, args) if functor == LIST_FUNCTOR && args.len() == 2 => {
                write!(f, ",{}", args[0])?;
                cur = &args[1];
            }
            other => {
                write!(f, "|{other}")?;
                break;
            }
        }
    }
    f.write_str("]")
}

/// Generator for fresh variables in the reserved `_G<n>` namespace.
///
/// Each consumer (one SLD query, one intersection, one translation) owns its
/// own generator, so there is no shared mutable state across threads.
#[derive(Debug, Default)]
pub struct VarGen {
    counter: u64,
}

impl VarGen {
    pub fn new() -> Self {
        VarGen::default()
    }

    /// Next fresh variable, skipping any name present in `avoid`.
    pub fn fresh(&mut self, avoid: &BTreeSet<Var>) -> Var {
        loop {
            self.counter += 1;
            let v = Var(format!("_G{}", self.counter));
            if !avoid.contains(&v) {
                return v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        crate::lang::parse_term(s).unwrap()
    }

    #[test]
    fn list_sugar_desugars_to_dot_functor() {
        let parsed = t("[a,b]");
        let expected = Term::comp(
            LIST_FUNCTOR,
            vec![
                Term::constant("a"),
                Term::comp(
                    LIST_FUNCTOR,
                    vec![Term::constant("b"), Term::constant(NIL)],
                ),
            ],
        );
        assert_eq!(parsed, expected);
        assert_eq!(parsed.to_string(), "[a,b]");
    }

    #[test]
    fn partial_list_prints_with_bar() {
        assert_eq!(t("[a,b|T]").to_string(), "[a,b|T]");
        assert_eq!(t("[H|T]").to_string(), "[H|T]");
    }

    #[test]
    fn pair_desugars_to_minus_functor() {
        let parsed = t("U-W");
        assert_eq!(
            parsed,
            Term::pair(Term::var("U"), Term::var("W"))
        );
        assert_eq!(parsed.to_string(), "U-W");
        // left-associative round trip
        assert_eq!(t("a-b-c").to_string(), "a-b-c");
        assert_eq!(t("a-(b-c)").to_string(), "a-(b-c)");
    }

    #[test]
    fn vars_in_first_occurrence_order() {
        let term = t("f(X,g(Y,X),Z)");
        let names: Vec<_> = term.vars().into_iter().map(|v| v.0).collect();
        assert_eq!(names, ["X", "Y", "Z"]);
    }

    #[test]
    fn fresh_vars_skip_avoid_set() {
        let mut gen = VarGen::new();
        let avoid: BTreeSet<Var> = [Var::new("_G1"), Var::new("_G2")].into_iter().collect();
        assert_eq!(gen.fresh(&avoid).0, "_G3");
    }
}
