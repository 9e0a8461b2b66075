//! Materialized cylinders over a finite universe.
//!
//! A cylinder is the set of full-width ground tuples whose coordinates at the
//! selector positions lie in a base relation. Tables are the compact
//! production representation; materializing the cylinder is what the oracle
//! and golden tests use, because on cylinders intersection is literally set
//! intersection and projection is coordinate selection.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::table::Table;
use crate::term::{Term, Var};
use crate::universe::{ground_instances, Universe};

/// Hard cap on materialized cylinder size; the oracle is meant for small
/// finite universes only.
const MAX_TUPLES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    /// Length of every tuple (the enumeration length).
    pub width: usize,
    /// Positions (0-based) of the base relation's coordinates in the
    /// enumeration.
    pub selector: BTreeSet<usize>,
    pub tuples: BTreeSet<Vec<Term>>,
}

impl Cylinder {
    /// Set intersection of two cylinders over the same enumeration.
    pub fn intersect(&self, other: &Cylinder) -> BTreeSet<Vec<Term>> {
        assert_eq!(self.width, other.width, "cylinders over one enumeration");
        self.tuples.intersection(&other.tuples).cloned().collect()
    }

    /// Projects a tuple set onto the given (0-based) positions.
    pub fn project_positions(tuples: &BTreeSet<Vec<Term>>, positions: &[usize]) -> BTreeSet<Vec<Term>> {
        tuples
            .iter()
            .map(|t| positions.iter().map(|&i| t[i].clone()).collect())
            .collect()
    }
}

/// Materializes a table as a cylinder over `universe`, with columns placed
/// according to `enumeration`, which must cover the table's heading.
pub fn to_cylinder(table: &Table, universe: &Universe, enumeration: &[Var]) -> Result<Cylinder> {
    for v in table.heading() {
        assert!(
            enumeration.contains(v),
            "enumeration must cover the table heading"
        );
    }
    let selector: BTreeSet<usize> = enumeration
        .iter()
        .enumerate()
        .filter(|(_, v)| table.heading().contains(v))
        .map(|(i, _)| i)
        .collect();

    // base: ground instances of each row's entries, in selector order
    let heading_in_enum_order: Vec<Var> = enumeration
        .iter()
        .filter(|v| table.heading().contains(v))
        .cloned()
        .collect();
    let mut base: BTreeSet<Vec<Term>> = BTreeSet::new();
    for row in table.rows() {
        let image: Vec<Term> = heading_in_enum_order
            .iter()
            .map(|v| row.get(v).expect("row binds heading").clone())
            .collect();
        base.extend(ground_instances(&image, Some(universe))?);
    }

    let herbrand = universe.ground_terms();
    herbrand
        .len()
        .checked_pow(enumeration.len() as u32)
        .filter(|&n| n <= MAX_TUPLES)
        .ok_or_else(|| Error::ResourceExceeded("cylinder materialization too large".into()))?;

    let selector_order: Vec<usize> = selector.iter().copied().collect();
    let tuples = std::iter::repeat_n(herbrand.iter(), enumeration.len())
        .multi_cartesian_product()
        .map(|tuple| tuple.into_iter().cloned().collect::<Vec<Term>>())
        .filter(|tuple| {
            let restricted: Vec<Term> =
                selector_order.iter().map(|&i| tuple[i].clone()).collect();
            base.contains(&restricted)
        })
        .collect();

    Ok(Cylinder {
        width: enumeration.len(),
        selector,
        tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn t(s: &str) -> Term {
        crate::lang::parse_term(s).unwrap()
    }

    fn v(s: &str) -> Var {
        Var::new(s)
    }

    fn tuples(rows: &[&[&str]]) -> BTreeSet<Vec<Term>> {
        rows.iter()
            .map(|r| r.iter().map(|s| t(s)).collect())
            .collect()
    }

    fn base_table(heading: &[&str], rows: &[&[&str]]) -> Table {
        let mut tab = Table::empty(heading.iter().map(|s| v(s)));
        for row in rows {
            let image: Vec<Term> = row.iter().map(|s| t(s)).collect();
            tab.insert_image(&image);
        }
        tab
    }

    fn abc() -> Universe {
        Universe::of_constants(&["a", "b", "c"])
    }

    fn xyz() -> Vec<Var> {
        vec![v("X"), v("Y"), v("Z")]
    }

    /// The three-row cyclic relation laid out under the given heading.
    fn r_table(heading: &[&str]) -> Table {
        base_table(heading, &[&["a", "b"], &["b", "c"], &["c", "a"]])
    }

    #[test]
    fn cylinder_on_first_two_coordinates() {
        let tab = r_table(&["X", "Y"]);
        let cyl = to_cylinder(&tab, &abc(), &xyz()).unwrap();
        assert_eq!(cyl.selector, [0, 1].into_iter().collect());
        let want = tuples(&[
            &["a", "b", "a"],
            &["a", "b", "b"],
            &["a", "b", "c"],
            &["b", "c", "a"],
            &["b", "c", "b"],
            &["b", "c", "c"],
            &["c", "a", "a"],
            &["c", "a", "b"],
            &["c", "a", "c"],
        ]);
        assert_eq!(cyl.tuples, want);
    }

    #[test]
    fn cylinder_on_last_two_coordinates() {
        let tab = r_table(&["Y", "Z"]);
        let cyl = to_cylinder(&tab, &abc(), &xyz()).unwrap();
        assert_eq!(cyl.selector, [1, 2].into_iter().collect());
        let want = tuples(&[
            &["a", "a", "b"],
            &["b", "a", "b"],
            &["c", "a", "b"],
            &["a", "b", "c"],
            &["b", "b", "c"],
            &["c", "b", "c"],
            &["a", "c", "a"],
            &["b", "c", "a"],
            &["c", "c", "a"],
        ]);
        assert_eq!(cyl.tuples, want);
    }

    #[test]
    fn intersection_and_projection_compose_the_relation() {
        let c2 = to_cylinder(&r_table(&["X", "Y"]), &abc(), &xyz()).unwrap();
        let c3 = to_cylinder(&r_table(&["Y", "Z"]), &abc(), &xyz()).unwrap();
        let meet = c2.intersect(&c3);
        assert_eq!(
            meet,
            tuples(&[&["a", "b", "c"], &["b", "c", "a"], &["c", "a", "b"]])
        );
        let projected = Cylinder::project_positions(&meet, &[0, 2]);
        assert_eq!(projected, tuples(&[&["a", "c"], &["b", "a"], &["c", "b"]]));
    }

    #[test]
    fn empty_table_gives_empty_cylinder() {
        let cyl = to_cylinder(&Table::bottom(), &abc(), &xyz()).unwrap();
        assert!(cyl.tuples.is_empty());
    }

    #[test]
    fn nonground_rows_are_grounded() {
        // row {X=_, Y=a} over {a,b,c}: X ranges over the universe
        let tab = base_table(&["X", "Y"], &[&["W", "a"]]);
        let cyl = to_cylinder(&tab, &abc(), &[v("X"), v("Y")]).unwrap();
        assert_eq!(
            cyl.tuples,
            tuples(&[&["a", "a"], &["b", "a"], &["c", "a"]])
        );
    }
}
