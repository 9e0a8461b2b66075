//! First-class relation values, application `:` and projection `/`.
//!
//! A relation is either extensional (a finite set of ground tuples) or
//! intensional (a predicate of a program, evaluated on demand). Application
//! turns a relation into a table by solving the equations between a term
//! tuple and each relation tuple; projection turns a table back into a
//! relation by instantiating a term tuple with each row and grounding.

use std::collections::BTreeSet;
use std::fmt;

use crate::config::EvalConfig;
use crate::engine::{least_model, where_query, Atom, ProgramVal, Query};
use crate::error::{Error, Result};
use crate::subst::unify_tuples;
use crate::table::Table;
use crate::term::{named_tuple_vars, Term};
use crate::universe::{ground_instances, Universe};

#[derive(Debug, Clone, PartialEq)]
pub enum RelBody {
    /// A finite set of ground tuples.
    Extensional(BTreeSet<Vec<Term>>),
    /// A predicate of a program, evaluated by resolution or bottom-up.
    Intensional { program: ProgramVal, pred: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    arity: usize,
    body: RelBody,
}

impl Relation {
    pub fn extensional(arity: usize, tuples: impl IntoIterator<Item = Vec<Term>>) -> Result<Self> {
        let tuples: BTreeSet<Vec<Term>> = tuples.into_iter().collect();
        for t in &tuples {
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    context: "relation literal".into(),
                    expected: arity,
                    found: t.len(),
                });
            }
            if !crate::term::tuple_is_ground(t) {
                return Err(Error::InvalidProgram(
                    "extensional relation tuples must be ground".into(),
                ));
            }
        }
        Ok(Relation {
            arity,
            body: RelBody::Extensional(tuples),
        })
    }

    pub fn empty(arity: usize) -> Self {
        Relation {
            arity,
            body: RelBody::Extensional(BTreeSet::new()),
        }
    }

    /// The relation named by a predicate of a program. The predicate must be
    /// defined by the program's clauses.
    pub fn intensional(program: ProgramVal, pred: impl Into<String>) -> Result<Self> {
        let pred = pred.into();
        match program.ast.defined_predicates().get(&pred) {
            Some(&arity) => Ok(Relation {
                arity,
                body: RelBody::Intensional { program, pred },
            }),
            None => Err(Error::Unbound(format!(
                "predicate {pred} is not defined in the program"
            ))),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn body(&self) -> &RelBody {
        &self.body
    }

    pub fn is_extensional(&self) -> bool {
        matches!(self.body, RelBody::Extensional(_))
    }

    /// Tuples of an extensional relation; errors on intensional ones
    /// (materialize first).
    pub fn tuples(&self) -> Result<&BTreeSet<Vec<Term>>> {
        match &self.body {
            RelBody::Extensional(ts) => Ok(ts),
            RelBody::Intensional { pred, .. } => Err(Error::UnsupportedExpression(format!(
                "intensional relation {pred} has no materialized tuples"
            ))),
        }
    }

    /// Relation literal syntax, e.g. `{(a,b),(b,c)}`.
    pub fn to_json(&self, cfg: &EvalConfig) -> Result<serde_json::Value> {
        let ext = materialize(self, cfg)?;
        let tuples: Vec<Vec<String>> = ext
            .tuples()?
            .iter()
            .map(|t| t.iter().map(|x| x.to_string()).collect())
            .collect();
        Ok(serde_json::json!({ "arity": self.arity, "tuples": tuples }))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            RelBody::Extensional(tuples) => {
                f.write_str("{")?;
                let mut strings: Vec<String> = tuples
                    .iter()
                    .map(|t| {
                        format!(
                            "({})",
                            t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                        )
                    })
                    .collect();
                strings.sort();
                f.write_str(&strings.join(","))?;
                f.write_str("}")
            }
            RelBody::Intensional { pred, .. } => {
                write!(f, "<intensional {}/{}>", pred, self.arity)
            }
        }
    }
}

/// Application `r : (t1,...,tn)`: the table whose heading is the named
/// variables of the tuple and whose rows are the solved forms of
/// `{t1=e1,...,tn=en}` for each tuple `(e1,...,en)` of the relation,
/// restricted to the heading. Intensional relations are applied by querying
/// `?- p(t1,...,tn)` against their program.
pub fn apply(rel: &Relation, tuple: &[Term], cfg: &EvalConfig) -> Result<Table> {
    if tuple.len() != rel.arity {
        return Err(Error::ArityMismatch {
            context: "application".into(),
            expected: rel.arity,
            found: tuple.len(),
        });
    }
    match &rel.body {
        RelBody::Extensional(tuples) => {
            let mut out = Table::empty(named_tuple_vars(tuple));
            for e in tuples {
                if let Some(solved) = unify_tuples(tuple, e) {
                    out.insert_from_substitution(&solved);
                }
            }
            Ok(out)
        }
        RelBody::Intensional { program, pred } => {
            let query = Query::new(vec![Atom::new(pred.clone(), tuple.to_vec())])?;
            where_query(&query, program, cfg)
        }
    }
}

/// Projection `(t1,...,tn) / T`: instantiate the tuple with every row of the
/// table and collect all ground instances. A universe is consulted only when
/// some instantiated tuple still contains variables.
pub fn project(tuple: &[Term], table: &Table, universe: Option<&Universe>) -> Result<Relation> {
    let mut tuples: BTreeSet<Vec<Term>> = BTreeSet::new();
    for row in table.rows() {
        // Row entry variables are canonical `_R*` names; if the tuple itself
        // uses such a name the row must be relabeled away from it first.
        let sub = row.as_substitution();
        let tuple_vars: BTreeSet<_> = crate::term::tuple_vars(tuple).into_iter().collect();
        let needs_relabel = sub.iter().any(|(_, t)| {
            t.vars().iter().any(|v| tuple_vars.contains(v))
        });
        let instantiated = if needs_relabel {
            let mut gen = crate::term::VarGen::new();
            let avoid: BTreeSet<_> = tuple_vars
                .iter()
                .cloned()
                .chain(table.heading().iter().cloned())
                .collect();
            let eqs = crate::subst::rename_equations_apart(
                &row.to_equations(),
                table.heading(),
                &avoid,
                &mut gen,
            );
            let sub = crate::subst::unify(&eqs).expect("renamed solved form stays solved");
            sub.apply_tuple(tuple)
        } else {
            sub.apply_tuple(tuple)
        };
        tuples.extend(ground_instances(&instantiated, universe)?);
    }
    Relation::extensional(tuple.len(), tuples)
}

/// Materializes a relation to extensional form. Intensional relations are
/// evaluated bottom-up and restricted to their predicate; the search limits
/// and fixpoint cap of `cfg` bound the computation.
pub fn materialize(rel: &Relation, cfg: &EvalConfig) -> Result<Relation> {
    match &rel.body {
        RelBody::Extensional(_) => Ok(rel.clone()),
        RelBody::Intensional { program, pred } => {
            let model = least_model(program, cfg)?;
            Ok(model
                .get(pred)
                .cloned()
                .unwrap_or_else(|| Relation::empty(rel.arity)))
        }
    }
}

/// Set union of two relations of equal arity (materializing as needed).
pub fn rel_union(r1: &Relation, r2: &Relation, cfg: &EvalConfig) -> Result<Relation> {
    check_same_arity(r1, r2, "union")?;
    let a = materialize(r1, cfg)?;
    let b = materialize(r2, cfg)?;
    let tuples: BTreeSet<Vec<Term>> = a.tuples()?.union(b.tuples()?).cloned().collect();
    Relation::extensional(r1.arity, tuples)
}

/// Subset test on materialized tuple sets.
pub fn rel_subset(r1: &Relation, r2: &Relation, cfg: &EvalConfig) -> Result<bool> {
    check_same_arity(r1, r2, "inclusion")?;
    let a = materialize(r1, cfg)?;
    let b = materialize(r2, cfg)?;
    Ok(a.tuples()?.is_subset(b.tuples()?))
}

/// Equality on materialized tuple sets.
pub fn rel_equal(r1: &Relation, r2: &Relation, cfg: &EvalConfig) -> Result<bool> {
    check_same_arity(r1, r2, "equality")?;
    let a = materialize(r1, cfg)?;
    let b = materialize(r2, cfg)?;
    Ok(a.tuples()? == b.tuples()?)
}

fn check_same_arity(r1: &Relation, r2: &Relation, context: &str) -> Result<()> {
    if r1.arity != r2.arity {
        return Err(Error::ArityMismatch {
            context: context.into(),
            expected: r1.arity,
            found: r2.arity,
        });
    }
    Ok(())
}
