//! Tables: sets of solved-form substitutions sharing a common heading.
//!
//! A table is the answer-set view of a cylinder: the heading names the
//! columns, and each row binds exactly the heading variables. Right-hand
//! sides may contain variables; rows are stored in a canonical form where
//! those variables are renamed to `_R1, _R2, ...` in first-occurrence order
//! over the sorted heading, which makes row equality plain structural
//! equality and keeps the set free of alpha-duplicates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::subst::{unify, EquationSet, Substitution};
use crate::term::{Term, Var};

/// One table row: a solved-form substitution over the heading.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Row(BTreeMap<Var, Term>);

impl Row {
    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    /// The row as a substitution (heading variable -> entry).
    pub fn as_substitution(&self) -> Substitution {
        self.0
            .iter()
            .map(|(v, t)| (v.clone(), t.clone()))
            .collect()
    }

    /// The row read as an equation set.
    pub fn to_equations(&self) -> EquationSet {
        self.0
            .iter()
            .map(|(v, t)| (Term::Var(v.clone()), t.clone()))
            .collect()
    }

    /// The row's entries in sorted-heading order.
    pub fn image(&self, heading: &BTreeSet<Var>) -> Vec<Term> {
        heading
            .iter()
            .map(|v| self.0.get(v).cloned().expect("row binds heading"))
            .collect()
    }

    fn vars(&self) -> BTreeSet<Var> {
        let mut out = Vec::new();
        for t in self.0.values() {
            t.collect_vars(&mut out);
        }
        out.into_iter().collect()
    }
}

/// Canonicalizes a row image: every variable occurring in the entry terms is
/// renamed to `_R<k>` in first-occurrence order (skipping names already used
/// by the heading). This restores solved form, since entry variables can no
/// longer collide with heading variables, and makes alpha-equivalent rows
/// identical.
fn canonical_row(heading: &BTreeSet<Var>, image: &[Term]) -> Row {
    debug_assert_eq!(heading.len(), image.len());
    let mut rename: BTreeMap<Var, Var> = BTreeMap::new();
    let mut next = 1usize;
    let mut order = Vec::new();
    for t in image {
        t.collect_vars(&mut order);
    }
    for v in order {
        if rename.contains_key(&v) {
            continue;
        }
        let fresh = loop {
            let candidate = Var::new(format!("_R{next}"));
            next += 1;
            if !heading.contains(&candidate) {
                break candidate;
            }
        };
        rename.insert(v, fresh);
    }
    fn rewrite(t: &Term, rename: &BTreeMap<Var, Var>) -> Term {
        match t {
            Term::Var(v) => Term::Var(rename[v].clone()),
            Term::Const(_) => t.clone(),
            Term::Comp(f, args) => Term::Comp(
                f.clone(),
                args.iter().map(|a| rewrite(a, rename)).collect(),
            ),
        }
    }
    Row(heading
        .iter()
        .cloned()
        .zip(image.iter().map(|t| rewrite(t, &rename)))
        .collect())
}

/// A set of solved-form substitutions with a common heading.
#[derive(Debug, Clone, Eq)]
pub struct Table {
    heading: BTreeSet<Var>,
    rows: BTreeSet<Row>,
}

impl Table {
    /// The unit table: no columns, one empty row. This is the table of the
    /// empty answer substitution.
    pub fn top() -> Table {
        Table {
            heading: BTreeSet::new(),
            rows: [Row(BTreeMap::new())].into_iter().collect(),
        }
    }

    /// The empty table. All empty tables compare equal regardless of
    /// heading, so a single value suffices.
    pub fn bottom() -> Table {
        Table {
            heading: BTreeSet::new(),
            rows: BTreeSet::new(),
        }
    }

    /// An empty table that remembers a heading (used when building up).
    pub fn empty(heading: impl IntoIterator<Item = Var>) -> Table {
        Table {
            heading: heading.into_iter().collect(),
            rows: BTreeSet::new(),
        }
    }

    pub fn heading(&self) -> &BTreeSet<Var> {
        &self.heading
    }

    pub fn rows(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.heading.is_empty() && !self.rows.is_empty()
    }

    /// Inserts a row given as entry terms in sorted-heading order.
    /// The row is canonicalized; alpha-duplicates collapse.
    pub fn insert_image(&mut self, image: &[Term]) {
        let row = canonical_row(&self.heading, image);
        self.rows.insert(row);
    }

    /// Inserts a row obtained from a substitution: each heading variable
    /// maps to its (fully applied) image under `sub`.
    pub fn insert_from_substitution(&mut self, sub: &Substitution) {
        let image: Vec<Term> = self
            .heading
            .iter()
            .map(|v| sub.apply(&Term::Var(v.clone())))
            .collect();
        self.insert_image(&image);
    }

    /// Intersection of tables. The result heading is the union of the two
    /// headings; each pair of rows is renamed apart on its entry variables
    /// and combined into one equation set, and every solvable combination
    /// contributes the solved form restricted to the union heading.
    pub fn intersect(&self, other: &Table) -> Table {
        let heading: BTreeSet<Var> = self.heading.union(&other.heading).cloned().collect();
        let mut out = Table::empty(heading.clone());
        for srow in &self.rows {
            for trow in &other.rows {
                // Entry variables are canonical `_R*` names; remap the two
                // sides to disjoint `_L*`/`_M*` namespaces (skipping heading
                // names) so unrelated local variables cannot be conflated.
                let s = relabel_row_vars(srow, "_L", &heading);
                let t = relabel_row_vars(trow, "_M", &heading);
                let mut eqs = EquationSet::new();
                for (v, term) in s.iter() {
                    eqs.push(Term::Var(v.clone()), term.clone());
                }
                for (v, term) in t.iter() {
                    eqs.push(Term::Var(v.clone()), term.clone());
                }
                if let Some(solved) = unify(&eqs) {
                    out.insert_from_substitution(&solved);
                }
            }
        }
        out
    }

    /// Equality of tables: all empty tables are equal; otherwise headings
    /// must agree as sets and the canonical row sets must coincide.
    pub fn table_equal(&self, other: &Table) -> bool {
        if self.rows.is_empty() && other.rows.is_empty() {
            return true;
        }
        self.heading == other.heading && self.rows == other.rows
    }

    /// Row images as printable strings, sorted lexicographically.
    fn sorted_row_strings(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.image(&self.heading).iter().map(|t| t.to_string()).collect())
            .collect();
        out.sort();
        out
    }

    /// JSON export: `{"heading":[...],"rows":[[...],...]}` with terms in
    /// concrete syntax and rows sorted as printed.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "heading": self.heading.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "rows": self.sorted_row_strings(),
        })
    }
}

fn relabel_row_vars(row: &Row, prefix: &str, heading: &BTreeSet<Var>) -> Row {
    let mut rename: BTreeMap<Var, Var> = BTreeMap::new();
    let mut next = 1usize;
    for v in row.vars() {
        let fresh = loop {
            let candidate = Var::new(format!("{prefix}{next}"));
            next += 1;
            if !heading.contains(&candidate) {
                break candidate;
            }
        };
        rename.insert(v, fresh);
    }
    fn rewrite(t: &Term, rename: &BTreeMap<Var, Var>) -> Term {
        match t {
            Term::Var(v) => Term::Var(rename[v].clone()),
            Term::Const(_) => t.clone(),
            Term::Comp(f, args) => Term::Comp(
                f.clone(),
                args.iter().map(|a| rewrite(a, rename)).collect(),
            ),
        }
    }
    Row(row
        .0
        .iter()
        .map(|(v, t)| (v.clone(), rewrite(t, &rename)))
        .collect())
}

impl PartialEq for Table {
    fn eq(&self, other: &Self) -> bool {
        self.table_equal(other)
    }
}

impl fmt::Display for Table {
    /// Golden print format: `| X | Y |` header in heading order, a
    /// separator line, then one row per line sorted lexicographically on
    /// the printed terms. The empty table prints `<empty>`, the unit table
    /// `<unit>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return f.write_str("<empty>");
        }
        if self.heading.is_empty() {
            return f.write_str("<unit>");
        }
        let mut lines = Vec::new();
        let header: Vec<String> = self.heading.iter().map(|v| v.to_string()).collect();
        lines.push(format!("| {} |", header.join(" | ")));
        lines.push(format!(
            "|{}|",
            header.iter().map(|_| "---").collect::<Vec<_>>().join("|")
        ));
        for row in self.sorted_row_strings() {
            lines.push(format!("| {} |", row.join(" | ")));
        }
        f.write_str(&lines.join("\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn v(s: &str) -> Var {
        Var::new(s)
    }

    /// Table with the given heading and rows written as term strings in
    /// sorted-heading order.
    pub(crate) fn table(heading: &[&str], rows: &[&[&str]]) -> Table {
        let mut tab = Table::empty(heading.iter().map(|s| v(s)));
        for row in rows {
            let image: Vec<Term> = row.iter().map(|s| t(s)).collect();
            tab.insert_image(&image);
        }
        tab
    }

    #[test]
    fn top_has_no_columns_and_one_row() {
        let top = Table::top();
        assert!(top.heading().is_empty());
        assert_eq!(top.len(), 1);
        assert_eq!(top.to_string(), "<unit>");
    }

    #[test]
    fn bottom_is_empty_and_heading_polymorphic() {
        let bot = Table::bottom();
        assert_eq!(bot.len(), 0);
        assert_eq!(bot.to_string(), "<empty>");
        assert!(bot.table_equal(&Table::empty([v("X"), v("Y")])));
    }

    #[test]
    fn top_is_intersection_unit() {
        let tab = table(&["X", "Y"], &[&["a", "b"], &["b", "c"]]);
        assert!(Table::top().intersect(&tab).table_equal(&tab));
        assert!(tab.intersect(&Table::top()).table_equal(&tab));
    }

    #[test]
    fn bottom_is_intersection_null() {
        let tab = table(&["X"], &[&["a"]]);
        assert!(tab.intersect(&Table::bottom()).table_equal(&Table::bottom()));
        assert!(Table::bottom().intersect(&tab).is_empty());
    }

    #[test]
    fn q_chain_intersection() {
        // q = {(a,b),(b,c),(c,d),(d,e)}: intersecting the (X,Y) and (Y,Z)
        // tables joins on Y.
        let q_xy = table(
            &["X", "Y"],
            &[&["a", "b"], &["b", "c"], &["c", "d"], &["d", "e"]],
        );
        let q_yz = table(
            &["Y", "Z"],
            &[&["a", "b"], &["b", "c"], &["c", "d"], &["d", "e"]],
        );
        let got = q_xy.intersect(&q_yz);
        let want = table(
            &["X", "Y", "Z"],
            &[&["a", "b", "c"], &["b", "c", "d"], &["c", "d", "e"]],
        );
        assert!(got.table_equal(&want));
    }

    #[test]
    fn intersection_binds_entry_variables() {
        // {X=f(Y)} /\ {X=f(a)} has one row {X=f(a)}
        let s = table(&["X"], &[&["f(Y)"]]);
        let u = table(&["X"], &[&["f(a)"]]);
        let got = s.intersect(&u);
        assert!(got.table_equal(&table(&["X"], &[&["f(a)"]])));
    }

    #[test]
    fn rows_are_alpha_canonicalized() {
        let a = table(&["X"], &[&["f(Z)"]]);
        let b = table(&["X"], &[&["f(W)"]]);
        assert!(a.table_equal(&b));
        // and the set semantics collapses alpha-duplicates
        let c = table(&["X"], &[&["f(Z)"], &["f(W)"]]);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn nonempty_tables_with_different_headings_differ() {
        let a = table(&["X"], &[&["a"]]);
        let b = table(&["Y"], &[&["a"]]);
        assert!(!a.table_equal(&b));
    }

    #[test]
    fn entry_variables_link_within_a_row() {
        // a row may link two columns through a shared entry variable
        let tab = table(&["X", "Y"], &[&["Z", "Z"]]);
        let ground = table(&["X"], &[&["a"]]);
        let got = tab.intersect(&ground);
        assert!(got.table_equal(&table(&["X", "Y"], &[&["a", "a"]])));
    }

    #[test]
    fn rows_remain_solved_forms_after_intersection() {
        let s = table(&["X", "Y"], &[&["Z", "Z"], &["f(W)", "b"]]);
        let u = table(&["Y", "Z"], &[&["b", "V"]]);
        for row in s.intersect(&u).rows() {
            assert!(row.to_equations().is_solved_form());
        }
    }

    #[test]
    fn canonical_names_skip_heading_collisions() {
        // a heading may legitimately use the `_R1` spelling; entry variables
        // must not be renamed onto it
        let tab = table(&["_R1", "X"], &[&["W", "W"]]);
        let row = tab.rows().next().unwrap();
        assert!(row.to_equations().is_solved_form());
        let entry = row.get(&v("X")).unwrap();
        assert!(matches!(entry, Term::Var(w) if w.0 == "_R2"));
    }

    #[test]
    fn print_format_is_stable() {
        let tab = table(&["X", "Y"], &[&["b", "c"], &["a", "b"], &["c", "a"]]);
        assert_eq!(
            tab.to_string(),
            "| X | Y |\n|---|---|\n| a | b |\n| b | c |\n| c | a |"
        );
    }

    #[test]
    fn json_export_shape() {
        let tab = table(&["X"], &[&["a"]]);
        assert_eq!(
            tab.to_json().to_string(),
            r#"{"heading":["X"],"rows":[["a"]]}"#
        );
        assert_eq!(
            Table::top().to_json().to_string(),
            r#"{"heading":[],"rows":[[]]}"#
        );
        assert_eq!(
            Table::bottom().to_json().to_string(),
            r#"{"heading":[],"rows":[]}"#
        );
    }
}
