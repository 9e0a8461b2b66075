//! Brute-force oracles used by property and acceptance tests.
//!
//! These deliberately take the slow road of full enumeration over a finite
//! universe, so the production operations have something independent to be
//! checked against.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::subst::{match_onto, unify, EquationSet, Substitution};
use crate::table::Table;
use crate::term::{Term, Var};
use crate::universe::{ground_instances, Universe};

/// Replaces every row of a table by all of its ground instances over the
/// universe. This is the fully grounded reading of a table.
pub fn ground_table(table: &Table, universe: &Universe) -> Result<Table> {
    let heading: Vec<Var> = table.heading().iter().cloned().collect();
    let mut out = Table::empty(heading.clone());
    for row in table.rows() {
        let image: Vec<Term> = heading
            .iter()
            .map(|v| row.get(v).expect("row binds heading").clone())
            .collect();
        for ground in ground_instances(&image, Some(universe))? {
            out.insert_image(&ground);
        }
    }
    Ok(out)
}

/// All ground substitutions over `vars(eqs)` drawn from the universe that
/// solve the equation set, found by exhaustive enumeration.
pub fn enumerate_solutions(eqs: &EquationSet, universe: &Universe) -> Vec<Substitution> {
    let vars: Vec<Var> = {
        let mut seen = Vec::new();
        for v in eqs.vars() {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    };
    let herbrand = universe.ground_terms();
    if !vars.is_empty() && herbrand.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut assignment = vec![0usize; vars.len()];
    loop {
        let sub: Substitution = vars
            .iter()
            .cloned()
            .zip(assignment.iter().map(|&i| herbrand[i].clone()))
            .collect();
        if eqs.iter().all(|(l, r)| sub.apply(l) == sub.apply(r)) {
            out.push(sub);
        }
        // odometer step
        let mut pos = 0;
        loop {
            if pos == vars.len() {
                return out;
            }
            assignment[pos] += 1;
            if assignment[pos] < herbrand.len() {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Is `specific` an instance of `general` on the given variables? Checked by
/// one-way matching of the image tuples.
pub fn is_instance_of(
    general: &Substitution,
    specific: &Substitution,
    vars: &BTreeSet<Var>,
) -> bool {
    let pattern: Vec<Term> = vars
        .iter()
        .map(|v| general.apply(&Term::Var(v.clone())))
        .collect();
    let target: Vec<Term> = vars
        .iter()
        .map(|v| specific.apply(&Term::Var(v.clone())))
        .collect();
    match_onto(&pattern, &target).is_some()
}

/// Does `sub` solve the equation set? (Both sides become syntactically equal
/// after applying it.)
pub fn solves(sub: &Substitution, eqs: &EquationSet) -> bool {
    eqs.iter().all(|(l, r)| sub.apply(l) == sub.apply(r))
}

/// The most-general-unifier property relative to a finite universe: every
/// enumerated ground solution factors through the solved form.
pub fn mgu_against_enumeration(eqs: &EquationSet, universe: &Universe) -> bool {
    let vars: BTreeSet<Var> = eqs.vars().into_iter().collect();
    match unify(eqs) {
        Some(mgu) => enumerate_solutions(eqs, universe)
            .iter()
            .all(|sol| solves(sol, &eqs_of(&mgu, &vars)) && is_instance_of(&mgu, sol, &vars)),
        None => enumerate_solutions(eqs, universe).is_empty(),
    }
}

fn eqs_of(sub: &Substitution, vars: &BTreeSet<Var>) -> EquationSet {
    vars.iter()
        .map(|v| (Term::Var(v.clone()), sub.apply(&Term::Var(v.clone()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn ground_table_expands_entry_variables() {
        let mut tab = Table::empty([Var::new("X")]);
        tab.insert_image(&[t("W")]);
        let u = Universe::of_constants(&["a", "b"]);
        let grounded = ground_table(&tab, &u).unwrap();
        assert_eq!(grounded.len(), 2);
    }

    #[test]
    fn enumeration_finds_exactly_the_solutions() {
        let eqs: EquationSet = [(t("X"), t("Y"))].into_iter().collect();
        let u = Universe::of_constants(&["a", "b"]);
        let sols = enumerate_solutions(&eqs, &u);
        assert_eq!(sols.len(), 2); // X=Y=a and X=Y=b
    }

    #[test]
    fn unsolvable_sets_have_no_enumerated_solutions() {
        let eqs: EquationSet = [(t("a"), t("b"))].into_iter().collect();
        let u = Universe::of_constants(&["a", "b"]);
        assert!(enumerate_solutions(&eqs, &u).is_empty());
        assert!(mgu_against_enumeration(&eqs, &u));
    }
}
