//! Abstract syntax and values of the expression language.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::engine::{Program, ProgramVal, Query};
use crate::relation::Relation;
use crate::table::Table;
use crate::term::Term;

/// Reference to a program: a bound name, an inline `{ clauses }` block, or a
/// program value produced by evaluation or translation.
#[derive(Debug, Clone, PartialEq)]
pub enum ProgRef {
    Named(String),
    Inline(Arc<Program>),
    Value(ProgramVal),
}

/// An expression of the table/relation language.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// `(?- goals where prog)`: the table of all answer substitutions.
    Where(Query, ProgRef),
    /// `t1 /\ t2` on tables.
    Intersect(Box<Expr>, Box<Expr>),
    /// `rel : (t1,...,tn)`: application, yielding a table.
    Apply(Box<Expr>, Vec<Term>),
    /// `(t1,...,tn) / tab`: projection, yielding a relation.
    Project(Vec<Term>, Box<Expr>),
    /// `r1 \/ r2` on relations.
    Union(Box<Expr>, Box<Expr>),
    /// `top`: the unit table.
    Top,
    /// `bot`: the empty table.
    Bottom,
    /// `{(a,b),(b,c)}`: an extensional relation literal.
    RelLit(Vec<Vec<Term>>),
    /// A relation variable.
    Var(String),
    /// `mu name . name >= rhs ; ...`: least solution of an inclusion group,
    /// yielding the relation bound to `name`.
    Mu(String, Vec<Inclusion>),
    /// `nu pred . prog`: the relation of a predicate defined in a program.
    Nu(String, ProgRef),
    /// `lam param . prog`: abstraction over one relation variable of a
    /// program; only meaningful applied.
    Lam(String, ProgRef),
    /// `(lam x.P)(r)`: binds the relation variable, yielding a program.
    App(Box<Expr>, Box<Expr>),
}

/// One inclusion `name >= rhs` of a fixpoint group.
#[derive(Debug, Clone, PartialEq)]
pub struct Inclusion {
    pub name: String,
    pub rhs: Expr,
}

/// Result of evaluating an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Table(Table),
    Rel(Relation),
    Prog(ProgramVal),
}

impl Value {
    pub fn sort_name(&self) -> &'static str {
        match self {
            Value::Table(_) => "table",
            Value::Rel(_) => "relation",
            Value::Prog(_) => "program",
        }
    }

    pub fn into_table(self) -> crate::error::Result<Table> {
        match self {
            Value::Table(t) => Ok(t),
            other => Err(crate::error::Error::TypeMismatch(format!(
                "expected a table, got a {}",
                other.sort_name()
            ))),
        }
    }

    pub fn into_relation(self) -> crate::error::Result<Relation> {
        match self {
            Value::Rel(r) => Ok(r),
            other => Err(crate::error::Error::TypeMismatch(format!(
                "expected a relation, got a {}",
                other.sort_name()
            ))),
        }
    }
}

/// What a name is bound to.
#[derive(Debug, Clone, PartialEq)]
pub enum Binding {
    Rel(Relation),
    Prog(ProgramVal),
}

/// Lexically scoped bindings; extending returns a new environment, so inner
/// bindings shadow outer ones without mutating them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Env {
    map: BTreeMap<String, Binding>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn lookup(&self, name: &str) -> Option<&Binding> {
        self.map.get(name)
    }

    pub fn bind(&self, name: impl Into<String>, binding: Binding) -> Env {
        let mut map = self.map.clone();
        map.insert(name.into(), binding);
        Env { map }
    }

    pub fn bind_mut(&mut self, name: impl Into<String>, binding: Binding) {
        self.map.insert(name.into(), binding);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Binding)> {
        self.map.iter()
    }
}
