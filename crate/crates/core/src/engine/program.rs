//! Definite-clause programs: atoms, clauses, queries, and program values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::term::{Term, Var};
use crate::universe::Universe;

/// A predicate applied to argument terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        for a in &self.args {
            a.collect_vars(out);
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            return f.write_str(&self.pred);
        }
        write!(f, "{}(", self.pred)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// `head :- body.` A fact is a clause with an empty body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Clause {
    pub fn fact(head: Atom) -> Self {
        Clause {
            head,
            body: Vec::new(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = Vec::new();
        self.head.collect_vars(&mut out);
        for b in &self.body {
            b.collect_vars(&mut out);
        }
        out.into_iter().collect()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}

/// A validated definite-clause program.
///
/// Every body predicate must be defined by some clause head or declared as a
/// relation variable; predicate names have a single arity throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    clauses: Vec<Clause>,
    rel_vars: BTreeMap<String, usize>,
    /// Universe declared by `#universe` / `#depth` directives, if any.
    pub universe_decl: Option<Universe>,
}

impl Program {
    pub fn new(
        clauses: Vec<Clause>,
        rel_vars: BTreeMap<String, usize>,
        universe_decl: Option<Universe>,
    ) -> Result<Self> {
        let mut arities: BTreeMap<String, usize> = rel_vars.clone();
        let mut check = |atom: &Atom| -> Result<()> {
            match arities.get(&atom.pred) {
                Some(&a) if a != atom.arity() => Err(Error::InvalidProgram(format!(
                    "predicate {} used with arities {} and {}",
                    atom.pred,
                    a,
                    atom.arity()
                ))),
                Some(_) => Ok(()),
                None => {
                    arities.insert(atom.pred.clone(), atom.arity());
                    Ok(())
                }
            }
        };
        let mut defined: BTreeSet<String> = BTreeSet::new();
        for c in &clauses {
            check(&c.head)?;
            if rel_vars.contains_key(&c.head.pred) {
                return Err(Error::InvalidProgram(format!(
                    "relation variable {} cannot head a clause",
                    c.head.pred
                )));
            }
            defined.insert(c.head.pred.clone());
            for b in &c.body {
                check(b)?;
            }
        }
        for c in &clauses {
            for b in &c.body {
                if !defined.contains(&b.pred) && !rel_vars.contains_key(&b.pred) {
                    return Err(Error::InvalidProgram(format!(
                        "body predicate {} is neither defined nor a declared relation variable",
                        b.pred
                    )));
                }
            }
        }
        Ok(Program {
            clauses,
            rel_vars,
            universe_decl,
        })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clauses_for<'a>(&'a self, pred: &'a str) -> impl Iterator<Item = &'a Clause> + 'a {
        self.clauses.iter().filter(move |c| c.head.pred == pred)
    }

    /// Relation variables (free body predicates bound from outside) and
    /// their arities.
    pub fn rel_vars(&self) -> &BTreeMap<String, usize> {
        &self.rel_vars
    }

    pub fn is_rel_var(&self, name: &str) -> bool {
        self.rel_vars.contains_key(name)
    }

    /// Predicates defined by clause heads, with arities.
    pub fn defined_predicates(&self) -> BTreeMap<String, usize> {
        self.clauses
            .iter()
            .map(|c| (c.head.pred.clone(), c.head.arity()))
            .collect()
    }

    pub fn all_vars(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, arity) in &self.rel_vars {
            writeln!(f, "#rel {name}/{arity}.")?;
        }
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A program together with relation-variable bindings: the value a program
/// expression evaluates to. Shareable and immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramVal {
    pub ast: Arc<Program>,
    pub bindings: BTreeMap<String, Relation>,
}

impl ProgramVal {
    pub fn new(ast: Arc<Program>) -> Self {
        ProgramVal {
            ast,
            bindings: BTreeMap::new(),
        }
    }

    pub fn with_binding(&self, name: impl Into<String>, rel: Relation) -> Self {
        let mut out = self.clone();
        out.bindings.insert(name.into(), rel);
        out
    }

    /// Errors unless every declared relation variable is bound.
    pub fn check_bound(&self) -> Result<()> {
        for (name, arity) in self.ast.rel_vars() {
            match self.bindings.get(name) {
                None => return Err(Error::Unbound(format!("relation variable {name}"))),
                Some(r) if r.arity() != *arity => {
                    return Err(Error::ArityMismatch {
                        context: format!("binding for relation variable {name}"),
                        expected: *arity,
                        found: r.arity(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

/// A nonempty conjunction of goals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    goals: Vec<Atom>,
}

impl Query {
    pub fn new(goals: Vec<Atom>) -> Result<Self> {
        if goals.is_empty() {
            return Err(Error::InvalidProgram("a query needs at least one goal".into()));
        }
        Ok(Query { goals })
    }

    pub fn goals(&self) -> &[Atom] {
        &self.goals
    }

    /// Heading of the answer table: the named variables of the goals, in
    /// first-occurrence order. Anonymous variables are don't-cares and do
    /// not become columns.
    pub fn heading_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for g in &self.goals {
            g.collect_vars(&mut out);
        }
        out.retain(|v| !v.is_anonymous());
        out
    }

    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = Vec::new();
        for g in &self.goals {
            g.collect_vars(&mut out);
        }
        out.into_iter().collect()
    }

    /// Concatenates the goals of two queries.
    pub fn conjoin(&self, other: &Query) -> Query {
        Query {
            goals: self
                .goals
                .iter()
                .chain(other.goals.iter())
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("?- ")?;
        for (i, g) in self.goals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;

    #[test]
    fn programs_validate_body_predicates() {
        let err = parse_program("p(X) :- q(X).").unwrap_err();
        assert!(matches!(err, Error::InvalidProgram(_)));
        assert!(parse_program("q(a). p(X) :- q(X).").is_ok());
        assert!(parse_program("#rel q/1. p(X) :- q(X).").is_ok());
    }

    #[test]
    fn programs_reject_mixed_arities() {
        let err = parse_program("q(a). q(a,b).").unwrap_err();
        assert!(matches!(err, Error::InvalidProgram(_)));
    }

    #[test]
    fn rel_var_cannot_head_a_clause() {
        let err = parse_program("#rel q/1. q(a).").unwrap_err();
        assert!(matches!(err, Error::InvalidProgram(_)));
    }

    #[test]
    fn empty_query_is_rejected() {
        assert!(Query::new(vec![]).is_err());
    }
}
