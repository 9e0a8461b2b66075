//! Structural evaluation of expressions.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::config::EvalConfig;
use crate::engine::{tra_to_clauses, where_query, ProgramVal};
use crate::error::{Error, Result};
use crate::relation::{self, Relation};
use crate::table::Table;

use super::ast::{Binding, Env, Expr, Inclusion, ProgRef, Value};
use super::check;

/// Type-checks and evaluates an expression.
pub fn eval(expr: &Expr, env: &Env, cfg: &EvalConfig) -> Result<Value> {
    check::check(expr, env)?;
    eval_unchecked(expr, env, cfg)
}

fn eval_unchecked(expr: &Expr, env: &Env, cfg: &EvalConfig) -> Result<Value> {
    let table = |e: &Expr| -> Result<Table> {
        eval_unchecked(e, env, cfg).and_then(Value::into_table)
    };
    let rel = |e: &Expr| -> Result<Relation> {
        eval_unchecked(e, env, cfg).and_then(Value::into_relation)
    };
    match expr {
        Expr::Where(query, pr) => {
            let pv = resolve_progref(pr, env)?;
            Ok(Value::Table(where_query(query, &pv, cfg)?))
        }
        Expr::Intersect(a, b) => Ok(Value::Table(table(a)?.intersect(&table(b)?))),
        Expr::Apply(rel_expr, tuple) => {
            Ok(Value::Table(relation::apply(&rel(rel_expr)?, tuple, cfg)?))
        }
        Expr::Project(tuple, tab) => Ok(Value::Rel(relation::project(
            tuple,
            &table(tab)?,
            cfg.universe.as_ref(),
        )?)),
        Expr::Union(a, b) => Ok(Value::Rel(relation::rel_union(&rel(a)?, &rel(b)?, cfg)?)),
        Expr::Top => Ok(Value::Table(Table::top())),
        Expr::Bottom => Ok(Value::Table(Table::bottom())),
        Expr::RelLit(tuples) => {
            let arity = tuples.first().map(Vec::len).unwrap_or(0);
            Ok(Value::Rel(Relation::extensional(
                arity,
                tuples.iter().cloned(),
            )?))
        }
        Expr::Var(name) => match env.lookup(name) {
            Some(Binding::Rel(r)) => Ok(Value::Rel(r.clone())),
            Some(Binding::Prog(_)) => Err(Error::TypeMismatch(format!(
                "{name} is bound to a program, not a relation"
            ))),
            None => Err(Error::Unbound(name.clone())),
        },
        Expr::Mu(name, incs) => Ok(Value::Rel(solve_mu(
            incs,
            name,
            env,
            cfg,
            MuStrategy::Auto,
        )?)),
        Expr::Nu(pred, pr) => {
            let pv = resolve_progref(pr, env)?;
            Ok(Value::Rel(Relation::intensional(pv, pred.clone())?))
        }
        Expr::Lam(..) => Err(Error::TypeMismatch(
            "a lambda abstraction is only meaningful applied".into(),
        )),
        Expr::App(f, arg) => match f.as_ref() {
            Expr::Lam(param, pr) => {
                let pv = resolve_progref(pr, env)?;
                if !pv.ast.is_rel_var(param) {
                    return Err(Error::Unbound(format!(
                        "lambda parameter {param} is not a relation variable of the program"
                    )));
                }
                let bound = rel(arg)?;
                Ok(Value::Prog(pv.with_binding(param.clone(), bound)))
            }
            _ => Err(Error::TypeMismatch(
                "only lambda abstractions can be applied to relations".into(),
            )),
        },
    }
}

/// Resolves a program reference to a value, capturing bindings for its
/// unbound relation variables from the current environment.
pub fn resolve_progref(pr: &ProgRef, env: &Env) -> Result<ProgramVal> {
    let mut pv = match pr {
        ProgRef::Named(name) => match env.lookup(name) {
            Some(Binding::Prog(pv)) => pv.clone(),
            Some(Binding::Rel(_)) => {
                return Err(Error::TypeMismatch(format!(
                    "{name} is bound to a relation, not a program"
                )))
            }
            None => return Err(Error::Unbound(name.clone())),
        },
        ProgRef::Inline(ast) => ProgramVal::new(ast.clone()),
        ProgRef::Value(pv) => pv.clone(),
    };
    let rel_vars: Vec<String> = pv.ast.rel_vars().keys().cloned().collect();
    for rv in rel_vars {
        if let std::collections::btree_map::Entry::Vacant(slot) = pv.bindings.entry(rv.clone()) {
            if let Some(Binding::Rel(r)) = env.lookup(&rv) {
                slot.insert(r.clone());
            }
        }
    }
    Ok(pv)
}

/// How to solve a fixpoint group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuStrategy {
    /// Try bottom-up iteration; fall back to the goal-directed translation
    /// when iteration needs an undeclared universe, exhausts its resource
    /// limits, or cannot complete a subquery.
    Auto,
    BottomUp,
    GoalDirected,
}

/// Least solution of an inclusion group, returned as the relation bound to
/// `target`.
pub fn solve_mu(
    incs: &[Inclusion],
    target: &str,
    env: &Env,
    cfg: &EvalConfig,
    strategy: MuStrategy,
) -> Result<Relation> {
    if !incs.iter().any(|i| i.name == target) {
        return Err(Error::Unbound(format!(
            "mu result {target} has no inclusion in the group"
        )));
    }
    let names: std::collections::BTreeSet<String> =
        incs.iter().map(|i| i.name.clone()).collect();
    for inc in incs {
        check::check_positive(&names, &inc.rhs, env)?;
    }

    match strategy {
        MuStrategy::BottomUp => solve_bottom_up(incs, target, env, cfg),
        MuStrategy::GoalDirected => solve_goal_directed(incs, target, env),
        MuStrategy::Auto => match solve_bottom_up(incs, target, env, cfg) {
            Ok(rel) => Ok(rel),
            Err(Error::UniverseRequired)
            | Err(Error::ResourceExceeded(_))
            | Err(Error::Incomplete { .. }) => solve_goal_directed(incs, target, env),
            Err(other) => Err(other),
        },
    }
}

/// Kleene iteration from empty relations: each round evaluates every
/// right-hand side under the current iterates and replaces them, until
/// nothing changes. Iterates grow monotonically because every operator is
/// monotone in its relation arguments.
fn solve_bottom_up(
    incs: &[Inclusion],
    target: &str,
    env: &Env,
    cfg: &EvalConfig,
) -> Result<Relation> {
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    for inc in incs {
        arities.insert(inc.name.clone(), infer_arity(inc)?);
    }
    let mut iterates: BTreeMap<String, Relation> = arities
        .iter()
        .map(|(n, &a)| (n.clone(), Relation::empty(a)))
        .collect();

    for _round in 0..cfg.fix_cap {
        let mut round_env = env.clone();
        for (name, rel) in &iterates {
            round_env.bind_mut(name.clone(), Binding::Rel(rel.clone()));
        }
        let mut next: BTreeMap<String, Relation> = BTreeMap::new();
        let mut changed = false;
        for inc in incs {
            let value = eval_unchecked(&inc.rhs, &round_env, cfg)?
                .into_relation()?;
            let value = relation::materialize(&value, cfg)?;
            let old = &iterates[&inc.name];
            debug_assert!(
                relation::rel_subset(old, &value, cfg).unwrap_or(false),
                "fixpoint iterates must grow monotonically"
            );
            changed |= !relation::rel_equal(old, &value, cfg)?;
            next.insert(inc.name.clone(), value);
        }
        if !changed {
            return Ok(iterates.remove(target).expect("target in group"));
        }
        iterates = next;
    }
    Err(Error::ResourceExceeded(format!(
        "no fixpoint after {} iterations",
        cfg.fix_cap
    )))
}

/// Goal-directed strategy: rebuild clauses from the inclusions and return
/// the target's relation intensionally, so answers come from resolution at
/// application time.
fn solve_goal_directed(incs: &[Inclusion], target: &str, env: &Env) -> Result<Relation> {
    let pv = tra_to_clauses(incs, env)?;
    if !pv.ast.defined_predicates().contains_key(target) {
        // a group whose target never gained a clause denotes the empty
        // relation; give it arity from usage if inferable
        let arity = incs
            .iter()
            .find(|i| i.name == target)
            .and_then(|i| infer_arity(i).ok())
            .unwrap_or(0);
        return Ok(Relation::empty(arity));
    }
    Relation::intensional(pv, target)
}

/// Arity of an inclusion's relation variable, read off its branches.
fn infer_arity(inc: &Inclusion) -> Result<usize> {
    fn scan(e: &Expr) -> Option<usize> {
        match e {
            Expr::Union(a, b) => scan(a).or_else(|| scan(b)),
            Expr::Project(tuple, _) => Some(tuple.len()),
            Expr::RelLit(tuples) => tuples.first().map(Vec::len),
            _ => None,
        }
    }
    scan(&inc.rhs).ok_or_else(|| {
        Error::UnsupportedExpression(format!(
            "cannot infer the arity of {} from its inclusion",
            inc.name
        ))
    })
}

/// Does `lhs >= rhs` hold? The inclusion says the left side contains the
/// right side's tuples.
pub fn check_inclusion(lhs: &Relation, rhs: &Relation, cfg: &EvalConfig) -> Result<bool> {
    relation::rel_subset(rhs, lhs, cfg)
}

/// Wraps a program so it can live in an environment.
pub fn prog_value(ast: Arc<crate::engine::Program>) -> Binding {
    Binding::Prog(ProgramVal::new(ast))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_expr, parse_program, parse_term};
    use crate::term::Term;

    fn cfg() -> EvalConfig {
        EvalConfig::new()
    }

    fn rel(arity: usize, tuples: &[&[&str]]) -> Relation {
        Relation::extensional(
            arity,
            tuples
                .iter()
                .map(|t| t.iter().map(|s| parse_term(s).unwrap()).collect::<Vec<_>>()),
        )
        .unwrap()
    }

    fn env_with(name: &str, r: Relation) -> Env {
        Env::new().bind(name, Binding::Rel(r))
    }

    #[test]
    fn composition_preview_formula() {
        let r = rel(2, &[&["a", "b"], &["b", "c"], &["c", "a"]]);
        let env = env_with("q", r.clone()).bind("r", Binding::Rel(r));
        let e = parse_expr(r"(X,Z)/(q:(X,Y) /\ r:(Y,Z))").unwrap();
        let got = eval(&e, &env, &cfg()).unwrap().into_relation().unwrap();
        assert_eq!(got, rel(2, &[&["a", "c"], &["b", "a"], &["c", "b"]]));
    }

    #[test]
    fn top_evaluates_to_the_unit_table() {
        let got = eval(&Expr::Top, &Env::new(), &cfg()).unwrap();
        assert_eq!(got, Value::Table(Table::top()));
    }

    #[test]
    fn transitive_closure_mu() {
        let env = env_with("e", rel(2, &[&["a", "b"], &["b", "c"]]));
        let e =
            parse_expr(r"mu t . t >= (X,Y)/(e:(X,Y)) \/ (X,Z)/(e:(X,Y) /\ t:(Y,Z))").unwrap();
        let got = eval(&e, &env, &cfg()).unwrap().into_relation().unwrap();
        assert_eq!(got, rel(2, &[&["a", "b"], &["b", "c"], &["a", "c"]]));
    }

    #[test]
    fn mu_ignoring_its_variable_converges_in_one_round() {
        let env = env_with("e", rel(2, &[&["a", "b"]]));
        let e = parse_expr(r"mu q . q >= (X,Y)/(e:(X,Y))").unwrap();
        let got = eval(&e, &env, &cfg()).unwrap().into_relation().unwrap();
        assert_eq!(got, rel(2, &[&["a", "b"]]));
    }

    #[test]
    fn mu_strategies_agree_on_transitive_closure() {
        let env = env_with("e", rel(2, &[&["a", "b"], &["b", "c"], &["c", "d"]]));
        let e = parse_expr(r"mu t . t >= (X,Y)/(e:(X,Y)) \/ (X,Z)/(e:(X,Y) /\ t:(Y,Z))").unwrap();
        let incs = match e {
            Expr::Mu(_, incs) => incs,
            _ => unreachable!(),
        };
        let bottom_up = solve_mu(&incs, "t", &env, &cfg(), MuStrategy::BottomUp).unwrap();
        let goal_directed =
            solve_mu(&incs, "t", &env, &cfg(), MuStrategy::GoalDirected).unwrap();
        assert!(relation::rel_equal(&bottom_up, &goal_directed, &cfg()).unwrap());
    }

    #[test]
    fn mu_groups_solve_mutual_recursion_jointly() {
        // walk a path alternating between two relation variables: `even`
        // holds the nodes at even distance from n1, `odd` the rest
        let env = env_with(
            "e",
            rel(2, &[&["n1", "n2"], &["n2", "n3"], &["n3", "n4"]]),
        )
        .bind("start", Binding::Rel(rel(1, &[&["n1"]])));
        let e = parse_expr(
            r"mu even . even >= (X)/(start:(X)) \/ (Y)/(e:(X,Y) /\ odd:(X)) ; odd >= (Y)/(e:(X,Y) /\ even:(X))",
        )
        .unwrap();
        let got = eval(&e, &env, &cfg()).unwrap().into_relation().unwrap();
        assert_eq!(got, rel(1, &[&["n1"], &["n3"]]));
    }

    #[test]
    fn nu_selects_a_predicate_intensionally() {
        let prog = parse_program("leq(a,a). leq(a,b). leq(b,b).").unwrap();
        let env = Env::new().bind("ords", prog_value(prog.into()));
        let e = parse_expr("nu leq.ords").unwrap();
        let got = eval(&e, &env, &cfg()).unwrap().into_relation().unwrap();
        assert!(!got.is_extensional());
        let materialized = relation::materialize(&got, &cfg()).unwrap();
        assert_eq!(
            materialized,
            rel(2, &[&["a", "a"], &["a", "b"], &["b", "b"]])
        );
    }

    #[test]
    fn lambda_application_binds_a_relation_variable() {
        let prog = parse_program("#rel s/1. p(X) :- s(X).").unwrap();
        let env = Env::new().bind("P", prog_value(prog.into()));
        let e = parse_expr("(lam s.P)({(a),(b)})").unwrap();
        let got = eval(&e, &env, &cfg()).unwrap();
        match got {
            Value::Prog(pv) => {
                let q = crate::lang::parse_query("?- p(X)").unwrap();
                let tab = where_query(&q, &pv, &cfg()).unwrap();
                assert_eq!(tab.len(), 2);
            }
            other => panic!("expected a program value, got {other:?}"),
        }
    }

    #[test]
    fn check_inclusion_reads_right_to_left() {
        let p = rel(2, &[&["a", "c"], &["b", "a"], &["c", "b"]]);
        assert!(check_inclusion(&p, &p, &cfg()).unwrap());
        assert!(!check_inclusion(&Relation::empty(2), &p, &cfg()).unwrap());
        // bottom projects to the empty relation, included in anything
        let empty = rel(2, &[]);
        assert!(check_inclusion(&p, &empty, &cfg()).unwrap());
    }

    #[test]
    fn union_with_arity_mismatch_fails() {
        let env = env_with("a", rel(1, &[&["a"]])).bind("b", Binding::Rel(rel(2, &[])));
        let e = parse_expr(r"a \/ b").unwrap();
        assert!(matches!(
            eval(&e, &env, &cfg()),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn unbound_mu_target_is_rejected() {
        let incs = vec![Inclusion {
            name: "other".into(),
            rhs: Expr::RelLit(vec![vec![Term::constant("a")]]),
        }];
        assert!(matches!(
            solve_mu(&incs, "t", &Env::new(), &cfg(), MuStrategy::Auto),
            Err(Error::Unbound(_))
        ));
    }

    #[test]
    fn runaway_mu_exhausts_the_cap_between_strategies() {
        // t >= {(a)} \/ t has a fixpoint in one step; make one that keeps
        // growing instead by pairing with a successor-like program through
        // where, which the positivity check rejects; so instead check the
        // cap with a plain nonterminating bottom-up via tiny fix_cap.
        let env = env_with("e", rel(2, &[&["a", "b"], &["b", "c"], &["c", "d"]]));
        let e = parse_expr(r"mu t . t >= (X,Y)/(e:(X,Y)) \/ (X,Z)/(e:(X,Y) /\ t:(Y,Z))").unwrap();
        let incs = match e {
            Expr::Mu(_, incs) => incs,
            _ => unreachable!(),
        };
        let tight = EvalConfig {
            fix_cap: 1,
            ..EvalConfig::new()
        };
        // bottom-up alone hits the cap...
        assert!(matches!(
            solve_mu(&incs, "t", &env, &tight, MuStrategy::BottomUp),
            Err(Error::ResourceExceeded(_))
        ));
        // ...and Auto falls back to the goal-directed strategy
        let auto = solve_mu(&incs, "t", &env, &tight, MuStrategy::Auto).unwrap();
        assert!(!auto.is_extensional());
    }
}
