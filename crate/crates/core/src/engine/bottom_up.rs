//! Naive bottom-up evaluation: iterate the immediate-consequence step from
//! empty relations until a fixpoint.
//!
//! This is the brute-force counterpart to SLD resolution. It is sound and
//! complete for programs whose least model is finite; rule heads that remain
//! non-ground after solving the body are grounded over the declared universe.

use std::collections::{BTreeMap, BTreeSet};

use crate::config::EvalConfig;
use crate::engine::program::{Atom, ProgramVal};
use crate::error::{Error, Result};
use crate::relation::{materialize, Relation};
use crate::subst::{unify_tuples, Substitution};
use crate::term::{tuple_is_ground, Term};
use crate::universe::ground_instances;

/// The least model of a program, one extensional relation per defined
/// predicate.
pub fn least_model(
    program: &ProgramVal,
    cfg: &EvalConfig,
) -> Result<BTreeMap<String, Relation>> {
    program.check_bound()?;

    let mut bound_tuples: BTreeMap<String, BTreeSet<Vec<Term>>> = BTreeMap::new();
    for (name, rel) in &program.bindings {
        bound_tuples.insert(name.clone(), materialize(rel, cfg)?.tuples()?.clone());
    }

    let defined = program.ast.defined_predicates();
    let mut facts: BTreeMap<String, BTreeSet<Vec<Term>>> = defined
        .keys()
        .map(|p| (p.clone(), BTreeSet::new()))
        .collect();

    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > cfg.fix_cap {
            return Err(Error::ResourceExceeded(format!(
                "no fixpoint after {} bottom-up iterations",
                cfg.fix_cap
            )));
        }
        let mut changed = false;
        for clause in program.ast.clauses() {
            for sol in solve_body(&clause.body, &facts, &bound_tuples) {
                let head = sol.apply_tuple(&clause.head.args);
                let instances: BTreeSet<Vec<Term>> = if tuple_is_ground(&head) {
                    [head].into_iter().collect()
                } else {
                    ground_instances(&head, cfg.universe.as_ref())?
                };
                let store = facts.get_mut(&clause.head.pred).expect("defined");
                for inst in instances {
                    changed |= store.insert(inst);
                }
            }
        }
        let total: usize = facts.values().map(BTreeSet::len).sum();
        if total > cfg.limits.max_answers {
            return Err(Error::ResourceExceeded(format!(
                "more than {} derived facts",
                cfg.limits.max_answers
            )));
        }
        if !changed {
            break;
        }
    }

    facts
        .into_iter()
        .map(|(pred, tuples)| {
            let arity = defined[&pred];
            Relation::extensional(arity, tuples).map(|r| (pred, r))
        })
        .collect()
}

/// All substitutions over a clause's variables that make every body atom a
/// current fact (or a tuple of a bound relation variable).
fn solve_body(
    body: &[Atom],
    facts: &BTreeMap<String, BTreeSet<Vec<Term>>>,
    bound: &BTreeMap<String, BTreeSet<Vec<Term>>>,
) -> Vec<Substitution> {
    let mut sols = vec![Substitution::new()];
    for atom in body {
        let tuples = facts
            .get(&atom.pred)
            .or_else(|| bound.get(&atom.pred))
            .expect("validated body predicate");
        let mut next = Vec::new();
        for sol in &sols {
            let args = sol.apply_tuple(&atom.args);
            for e in tuples {
                if let Some(delta) = unify_tuples(&args, e) {
                    next.push(sol.compose(&delta));
                }
            }
        }
        sols = next;
        if sols.is_empty() {
            break;
        }
    }
    sols
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_program, parse_term};
    use crate::universe::Universe;

    fn cfg() -> EvalConfig {
        EvalConfig::new()
    }

    fn pv(src: &str) -> ProgramVal {
        ProgramVal::new(parse_program(src).unwrap().into())
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

    #[test]
    fn facts_only_program_is_its_own_model() {
        let model = least_model(&pv("q(a,b). q(b,c)."), &cfg()).unwrap();
        assert_eq!(model["q"], rel(2, &[&["a", "b"], &["b", "c"]]));
    }

    #[test]
    fn composition_rule() {
        let p = pv("q(a,b). q(b,c). q(c,a). p(X,Z) :- q(X,Y), q(Y,Z).");
        let model = least_model(&p, &cfg()).unwrap();
        assert_eq!(model["p"], rel(2, &[&["a", "c"], &["b", "a"], &["c", "b"]]));
    }

    #[test]
    fn transitive_closure() {
        let p = pv("e(a,b). e(b,c). t(X,Y) :- e(X,Y). t(X,Z) :- e(X,Y), t(Y,Z).");
        let model = least_model(&p, &cfg()).unwrap();
        assert_eq!(
            model["t"],
            rel(2, &[&["a", "b"], &["b", "c"], &["a", "c"]])
        );
    }

    #[test]
    fn nonground_heads_ground_over_the_universe() {
        let p = pv("r(X).");
        let err = least_model(&p, &cfg()).unwrap_err();
        assert_eq!(err, Error::UniverseRequired);

        let with_universe = EvalConfig::new().with_universe(Universe::of_constants(&["a", "b"]));
        let model = least_model(&p, &with_universe).unwrap();
        assert_eq!(model["r"], rel(1, &[&["a"], &["b"]]));
    }

    #[test]
    fn runaway_programs_hit_the_fact_cap() {
        let p = pv("n(z). n(s(X)) :- n(X).");
        let tight = EvalConfig {
            limits: crate::config::SearchLimits::new(64, 50),
            ..EvalConfig::new()
        };
        assert!(matches!(
            least_model(&p, &tight),
            Err(Error::ResourceExceeded(_))
        ));
    }
}
