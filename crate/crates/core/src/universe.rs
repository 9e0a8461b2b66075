//! Finite ground-term universes and grounding of term tuples.
//!
//! A universe declares the constants and functors available plus a depth
//! bound, so the set of ground terms it generates is always finite. Grounding
//! a tuple that already is ground never consults the universe; grounding a
//! non-ground tuple without one is an error.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::term::Term;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Universe {
    pub constants: BTreeSet<String>,
    pub functors: BTreeSet<(String, usize)>,
    /// Maximum nesting depth of functors in enumerated ground terms;
    /// depth 0 enumerates constants only.
    pub depth_bound: usize,
}

impl Universe {
    pub fn new(
        constants: impl IntoIterator<Item = String>,
        functors: impl IntoIterator<Item = (String, usize)>,
        depth_bound: usize,
    ) -> Self {
        Universe {
            constants: constants.into_iter().collect(),
            functors: functors.into_iter().collect(),
            depth_bound,
        }
    }

    /// Universe of bare constants (depth 0, no functors).
    pub fn of_constants(names: &[&str]) -> Self {
        Universe::new(names.iter().map(|s| s.to_string()), [], 0)
    }

    /// Merges another universe declaration into this one. Constants and
    /// functors accumulate; the larger depth bound wins.
    pub fn merge(&mut self, other: &Universe) {
        self.constants.extend(other.constants.iter().cloned());
        self.functors.extend(other.functors.iter().cloned());
        self.depth_bound = self.depth_bound.max(other.depth_bound);
    }

    /// All ground terms up to the depth bound, in a deterministic order.
    pub fn ground_terms(&self) -> Vec<Term> {
        let mut by_depth: Vec<Vec<Term>> = vec![self
            .constants
            .iter()
            .map(|c| Term::Const(c.clone()))
            .collect()];
        if self.functors.is_empty() {
            return by_depth.pop().unwrap_or_default();
        }
        for depth in 1..=self.depth_bound {
            let shallower: Vec<Term> = by_depth.iter().flatten().cloned().collect();
            let mut level = Vec::new();
            for (f, arity) in &self.functors {
                for args in std::iter::repeat_n(shallower.iter(), *arity)
                    .multi_cartesian_product()
                {
                    let t = Term::Comp(f.clone(), args.into_iter().cloned().collect());
                    // keep only terms whose actual depth is `depth`, so
                    // levels stay disjoint
                    if term_depth(&t) == depth {
                        level.push(t);
                    }
                }
            }
            by_depth.push(level);
        }
        by_depth.into_iter().flatten().collect()
    }
}

fn term_depth(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Const(_) => 0,
        Term::Comp(_, args) => 1 + args.iter().map(term_depth).max().unwrap_or(0),
    }
}

impl std::fmt::Display for Universe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "constants={{{}}}", self.constants.iter().join(","))?;
        if !self.functors.is_empty() {
            write!(
                f,
                " functors={{{}}}",
                self.functors
                    .iter()
                    .map(|(n, a)| format!("{n}/{a}"))
                    .join(",")
            )?;
        }
        write!(f, " depth={}", self.depth_bound)
    }
}

/// All variable-free instances of a term tuple over the given universe.
///
/// Shared variables are instantiated consistently. A ground tuple is its own
/// (singleton) instance set and needs no universe.
pub fn ground_instances(
    tuple: &[Term],
    universe: Option<&Universe>,
) -> Result<BTreeSet<Vec<Term>>> {
    let vars = crate::term::tuple_vars(tuple);
    if vars.is_empty() {
        return Ok([tuple.to_vec()].into_iter().collect());
    }
    let u = universe.ok_or(Error::UniverseRequired)?;
    let herbrand = u.ground_terms();
    let mut out = BTreeSet::new();
    for assignment in std::iter::repeat_n(herbrand.iter(), vars.len())
        .multi_cartesian_product()
    {
        let sub: crate::subst::Substitution = vars
            .iter()
            .cloned()
            .zip(assignment.into_iter().cloned())
            .collect();
        out.insert(sub.apply_tuple(tuple));
    }
    Ok(out)
}

/// Ground instances of a single term.
pub fn ground_instances_of_term(t: &Term, universe: Option<&Universe>) -> Result<BTreeSet<Term>> {
    Ok(ground_instances(std::slice::from_ref(t), universe)?
        .into_iter()
        .map(|mut tuple| tuple.pop().expect("singleton tuple"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        crate::lang::parse_term(s).unwrap()
    }

    #[test]
    fn ground_tuple_is_its_own_instance_set() {
        let got = ground_instances(&[t("a"), t("b")], None).unwrap();
        assert_eq!(got, [vec![t("a"), t("b")]].into_iter().collect());
    }

    #[test]
    fn single_variable_ranges_over_constants() {
        let u = Universe::of_constants(&["a", "b", "c"]);
        let got = ground_instances(&[t("X")], Some(&u)).unwrap();
        let want: BTreeSet<_> = [vec![t("a")], vec![t("b")], vec![t("c")]]
            .into_iter()
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn shared_variables_are_instantiated_consistently() {
        let u = Universe::of_constants(&["a", "b"]);
        let got = ground_instances(&[t("X"), t("X")], Some(&u)).unwrap();
        let want: BTreeSet<_> = [vec![t("a"), t("a")], vec![t("b"), t("b")]]
            .into_iter()
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn grounding_without_universe_is_an_error() {
        assert_eq!(
            ground_instances(&[t("X")], None).unwrap_err(),
            Error::UniverseRequired
        );
    }

    #[test]
    fn depth_bound_makes_functor_universes_finite() {
        let u = Universe::new(
            ["a".to_string(), "b".to_string()],
            [("f".to_string(), 1)],
            1,
        );
        let terms = u.ground_terms();
        // a, b, f(a), f(b)
        assert_eq!(terms.len(), 4);
        assert!(terms.contains(&t("f(a)")));

        let every_ground = terms.iter().all(Term::is_ground);
        assert!(every_ground);
    }

    #[test]
    fn instances_are_instances_of_the_tuple() {
        let u = Universe::of_constants(&["a", "b"]);
        let tuple = [t("f(X,Y)"), t("X")];
        for inst in ground_instances(&tuple, Some(&u)).unwrap() {
            assert!(crate::term::tuple_is_ground(&inst));
            assert!(crate::subst::match_onto(&tuple, &inst).is_some());
        }
    }
}
