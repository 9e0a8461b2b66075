//! SLD resolution with a complete, depth-bounded search.
//!
//! `where_query` returns the table of answer substitutions of *all* success
//! leaves of the SLD tree. Plain depth-first search cannot promise that under
//! infinite branches, so the search runs iterative deepening on SLD-tree
//! depth: a bound where no branch was cut off has explored the entire tree.
//! If the depth limit is reached while branches remain unexplored the result
//! would not be trustworthy and the search fails with `Incomplete`.

use std::collections::BTreeSet;

use crate::config::EvalConfig;
use crate::engine::program::{Atom, ProgramVal, Query};
use crate::error::{Error, Result};
use crate::relation::RelBody;
use crate::subst::{unify_tuples, Renamer, Substitution};
use crate::table::Table;
use crate::term::{Var, VarGen};

/// Which goal the resolution step rewrites. The answer table is the same
/// for every selection rule; exposing the choice lets tests demonstrate it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionRule {
    Leftmost,
    Rightmost,
}

/// The table of all answer substitutions for `query` against `program`,
/// restricted to the query's named variables.
pub fn where_query(query: &Query, program: &ProgramVal, cfg: &EvalConfig) -> Result<Table> {
    where_query_with_rule(query, program, cfg, SelectionRule::Leftmost)
}

/// A goal paired with the program it resolves against. Goals delegated to an
/// intensional relation carry that relation's program, which keeps predicate
/// namespaces separate.
type ScopedGoal = (Atom, ProgramVal);

struct Search<'a> {
    cfg: &'a EvalConfig,
    rule: SelectionRule,
    gen: VarGen,
    avoid: BTreeSet<Var>,
    answers: Table,
    cutoff: bool,
}

pub fn where_query_with_rule(
    query: &Query,
    program: &ProgramVal,
    cfg: &EvalConfig,
    rule: SelectionRule,
) -> Result<Table> {
    program.check_bound()?;
    let heading = query.heading_vars();
    let goals: Vec<ScopedGoal> = query
        .goals()
        .iter()
        .map(|g| (g.clone(), program.clone()))
        .collect();

    // Fresh names must not collide with anything the caller wrote.
    let avoid = query.all_vars();

    for bound in 1..=cfg.limits.max_depth {
        let mut search = Search {
            cfg,
            rule,
            gen: VarGen::new(),
            avoid: avoid.clone(),
            answers: Table::empty(heading.clone()),
            cutoff: false,
        };
        search.run(&goals, &Substitution::new(), 0, bound)?;
        if !search.cutoff {
            return Ok(search.answers);
        }
    }
    Err(Error::Incomplete {
        depth: cfg.limits.max_depth,
    })
}

impl Search<'_> {
    fn run(
        &mut self,
        goals: &[ScopedGoal],
        sub: &Substitution,
        depth: usize,
        bound: usize,
    ) -> Result<()> {
        if goals.is_empty() {
            self.answers.insert_from_substitution(sub);
            if self.answers.len() > self.cfg.limits.max_answers {
                return Err(Error::ResourceExceeded(format!(
                    "more than {} answers",
                    self.cfg.limits.max_answers
                )));
            }
            return Ok(());
        }
        if depth >= bound {
            self.cutoff = true;
            return Ok(());
        }
        let idx = match self.rule {
            SelectionRule::Leftmost => 0,
            SelectionRule::Rightmost => goals.len() - 1,
        };
        let (goal, ctx) = &goals[idx];

        if ctx.ast.is_rel_var(&goal.pred) {
            let rel = ctx
                .bindings
                .get(&goal.pred)
                .ok_or_else(|| Error::Unbound(format!("relation variable {}", goal.pred)))?
                .clone();
            if rel.arity() != goal.arity() {
                return Err(Error::ArityMismatch {
                    context: format!("goal over relation variable {}", goal.pred),
                    expected: rel.arity(),
                    found: goal.arity(),
                });
            }
            match rel.body() {
                // A goal over an extensional relation resolves like a goal
                // against one fact per tuple.
                RelBody::Extensional(tuples) => {
                    for e in tuples {
                        let lhs = sub.apply_tuple(&goal.args);
                        if let Some(delta) = unify_tuples(&lhs, e) {
                            let next = sub.compose(&delta);
                            let rest = without(goals, idx);
                            self.run(&rest, &next, depth + 1, bound)?;
                        }
                    }
                }
                // A goal over an intensional relation continues inside the
                // captured program, in that program's own namespace.
                RelBody::Intensional { program, pred } => {
                    program.check_bound()?;
                    let mut rest = goals.to_vec();
                    rest[idx] = (Atom::new(pred.clone(), goal.args.clone()), program.clone());
                    self.run(&rest, sub, depth + 1, bound)?;
                }
            }
            return Ok(());
        }

        let clauses: Vec<_> = ctx.ast.clauses_for(&goal.pred).cloned().collect();
        for clause in clauses {
            if clause.head.arity() != goal.arity() {
                continue;
            }
            // standardize the clause apart
            let protect = BTreeSet::new();
            let mut renamer = Renamer::new(&protect, &self.avoid, &mut self.gen);
            let head_args = renamer.rename_tuple(&clause.head.args);
            let body: Vec<Atom> = clause
                .body
                .iter()
                .map(|a| Atom::new(a.pred.clone(), renamer.rename_tuple(&a.args)))
                .collect();

            let lhs = sub.apply_tuple(&goal.args);
            if let Some(delta) = unify_tuples(&lhs, &head_args) {
                let next = sub.compose(&delta);
                let mut rest: Vec<ScopedGoal> = Vec::with_capacity(goals.len() + body.len() - 1);
                rest.extend_from_slice(&goals[..idx]);
                rest.extend(body.into_iter().map(|a| (a, ctx.clone())));
                rest.extend_from_slice(&goals[idx + 1..]);
                self.run(&rest, &next, depth + 1, bound)?;
            }
        }
        Ok(())
    }
}

fn without(goals: &[ScopedGoal], idx: usize) -> Vec<ScopedGoal> {
    let mut out = goals.to_vec();
    out.remove(idx);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_program, parse_query};

    fn cfg() -> EvalConfig {
        EvalConfig::new()
    }

    fn pv(src: &str) -> ProgramVal {
        ProgramVal::new(parse_program(src).unwrap().into())
    }

    #[test]
    fn facts_query_produces_the_relation_table() {
        let p = pv("q(a,b). q(b,c). q(c,a).");
        let q = parse_query("?- q(X,Y)").unwrap();
        let got = where_query(&q, &p, &cfg()).unwrap();
        assert_eq!(
            got.to_string(),
            "| X | Y |\n|---|---|\n| a | b |\n| b | c |\n| c | a |"
        );
    }

    #[test]
    fn unsatisfiable_query_is_bottom() {
        let p = pv("q(a,b). q(b,c). q(c,a).");
        let q = parse_query("?- q(X,X)").unwrap();
        let got = where_query(&q, &p, &cfg()).unwrap();
        assert!(got.table_equal(&Table::bottom()));
    }

    #[test]
    fn two_goal_query_joins_on_shared_variable() {
        let p = pv("q(a,b). q(b,c). q(c,d). q(d,e).");
        let q = parse_query("?- q(X,Y), q(Y,Z)").unwrap();
        let got = where_query(&q, &p, &cfg()).unwrap();
        assert_eq!(
            got.to_string(),
            "| X | Y | Z |\n|---|---|---|\n| a | b | c |\n| b | c | d |\n| c | d | e |"
        );
    }

    #[test]
    fn ground_query_yields_top_or_bottom() {
        let p = pv("q(a,b).");
        let yes = where_query(&parse_query("?- q(a,b)").unwrap(), &p, &cfg()).unwrap();
        assert!(yes.is_top());
        let no = where_query(&parse_query("?- q(b,a)").unwrap(), &p, &cfg()).unwrap();
        assert!(no.table_equal(&Table::bottom()));
    }

    #[test]
    fn rules_resolve_recursively() {
        let p = pv("e(a,b). e(b,c). path(X,Y) :- e(X,Y). path(X,Z) :- e(X,Y), path(Y,Z).");
        let q = parse_query("?- path(a,Z)").unwrap();
        let got = where_query(&q, &p, &cfg()).unwrap();
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn answer_overflow_reports_resource_exhaustion() {
        let p = pv("q(a). q(b). q(c). q(d).");
        let q = parse_query("?- q(X), q(Y)").unwrap();
        let tight = EvalConfig {
            limits: crate::config::SearchLimits::new(64, 3),
            ..EvalConfig::new()
        };
        assert!(matches!(
            where_query(&q, &p, &tight),
            Err(Error::ResourceExceeded(_))
        ));
    }

    #[test]
    fn infinite_tree_reports_incomplete() {
        let p = pv("loop(a) :- loop(a). loop(a).");
        let q = parse_query("?- loop(X)").unwrap();
        let err = where_query(
            &q,
            &p,
            &EvalConfig {
                limits: crate::config::SearchLimits::new(8, 100),
                ..EvalConfig::new()
            },
        )
        .unwrap_err();
        assert_eq!(err, Error::Incomplete { depth: 8 });
    }

    #[test]
    fn selection_rule_does_not_change_the_table() {
        let p = pv("q(a,b). q(b,c). q(c,d). r(b). r(c).");
        let q = parse_query("?- q(X,Y), r(Y)").unwrap();
        let left = where_query_with_rule(&q, &p, &cfg(), SelectionRule::Leftmost).unwrap();
        let right = where_query_with_rule(&q, &p, &cfg(), SelectionRule::Rightmost).unwrap();
        assert!(left.table_equal(&right));
    }

    #[test]
    fn nonground_answers_keep_linked_variables() {
        let p = pv("same(X,X).");
        let q = parse_query("?- same(U,W)").unwrap();
        let got = where_query(&q, &p, &cfg()).unwrap();
        assert_eq!(got.len(), 1);
        let row = got.rows().next().unwrap();
        // both columns bound to one shared entry variable
        assert_eq!(
            row.get(&Var::new("U")),
            row.get(&Var::new("W"))
        );
        assert!(row.to_equations().is_solved_form());
    }

    #[test]
    fn goals_over_bound_extensional_relation_variables() {
        let p = pv("#rel r/2. sym(X,Y) :- r(X,Y), r(Y,X).");
        let bound = p.with_binding(
            "r",
            crate::relation::Relation::extensional(
                2,
                [
                    vec![crate::term::Term::constant("a"), crate::term::Term::constant("b")],
                    vec![crate::term::Term::constant("b"), crate::term::Term::constant("a")],
                    vec![crate::term::Term::constant("b"), crate::term::Term::constant("c")],
                ],
            )
            .unwrap(),
        );
        let q = parse_query("?- sym(X,Y)").unwrap();
        let got = where_query(&q, &bound, &cfg()).unwrap();
        assert_eq!(got.len(), 2); // (a,b) and (b,a)
    }

    #[test]
    fn goals_over_intensional_relation_variables_descend_into_their_program() {
        // `reach` is exported from its own program and imported here; its
        // predicates stay in their own namespace.
        let inner = pv("edge(a,b). edge(b,c). reach(X,Y) :- edge(X,Y). reach(X,Z) :- edge(X,Y), reach(Y,Z).");
        let reach = crate::relation::Relation::intensional(inner, "reach").unwrap();
        let outer = pv("#rel r/2. endpoint(Y) :- r(a,Y).").with_binding("r", reach);
        let q = parse_query("?- endpoint(Y)").unwrap();
        let got = where_query(&q, &outer, &cfg()).unwrap();
        assert_eq!(got.len(), 2); // b and c
    }

    #[test]
    fn unbound_relation_variable_is_an_error() {
        let p = pv("#rel r/1. p(X) :- r(X).");
        let q = parse_query("?- p(X)").unwrap();
        assert!(matches!(
            where_query(&q, &p, &cfg()),
            Err(Error::Unbound(_))
        ));
    }
}
