//! Static checks run before evaluation: sorting expressions into tables,
//! relations, and programs, and the positivity check for fixpoints.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::lang::ast::{Binding, Env, Expr, ProgRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    Table,
    Rel,
    Prog,
}

impl Sort {
    fn name(self) -> &'static str {
        match self {
            Sort::Table => "table",
            Sort::Rel => "relation",
            Sort::Prog => "program",
        }
    }
}

/// Checks that every operator receives operands of the right sort and every
/// free identifier is bound, returning the expression's sort.
pub fn check(expr: &Expr, env: &Env) -> Result<Sort> {
    check_with(expr, env, &BTreeMap::new())
}

fn check_with(expr: &Expr, env: &Env, locals: &BTreeMap<String, Sort>) -> Result<Sort> {
    let expect = |e: &Expr, want: Sort, op: &str| -> Result<()> {
        let got = check_with(e, env, locals)?;
        if got != want {
            return Err(Error::TypeMismatch(format!(
                "{op} needs a {}, got a {}",
                want.name(),
                got.name()
            )));
        }
        Ok(())
    };
    match expr {
        Expr::Where(_, pr) => {
            check_progref(pr, env, locals)?;
            Ok(Sort::Table)
        }
        Expr::Intersect(a, b) => {
            expect(a, Sort::Table, "'/\\'")?;
            expect(b, Sort::Table, "'/\\'")?;
            Ok(Sort::Table)
        }
        Expr::Apply(rel, _) => {
            expect(rel, Sort::Rel, "':'")?;
            Ok(Sort::Table)
        }
        Expr::Project(_, tab) => {
            expect(tab, Sort::Table, "'/'")?;
            Ok(Sort::Rel)
        }
        Expr::Union(a, b) => {
            expect(a, Sort::Rel, "'\\/'")?;
            expect(b, Sort::Rel, "'\\/'")?;
            Ok(Sort::Rel)
        }
        Expr::Top | Expr::Bottom => Ok(Sort::Table),
        Expr::RelLit(tuples) => {
            if let Some(first) = tuples.first() {
                for t in tuples {
                    if t.len() != first.len() {
                        return Err(Error::TypeMismatch(format!(
                            "relation literal mixes tuple widths {} and {}",
                            first.len(),
                            t.len()
                        )));
                    }
                }
            }
            Ok(Sort::Rel)
        }
        Expr::Var(name) => match locals.get(name) {
            Some(&s) => Ok(s),
            None => match env.lookup(name) {
                Some(Binding::Rel(_)) => Ok(Sort::Rel),
                Some(Binding::Prog(_)) => Err(Error::TypeMismatch(format!(
                    "{name} is bound to a program, not a relation"
                ))),
                None => Err(Error::Unbound(name.clone())),
            },
        },
        Expr::Mu(name, incs) => {
            let mut inner = locals.clone();
            for inc in incs {
                inner.insert(inc.name.clone(), Sort::Rel);
            }
            if !incs.iter().any(|i| &i.name == name) {
                return Err(Error::Unbound(format!(
                    "mu result {name} has no inclusion in the group"
                )));
            }
            for inc in incs {
                let got = check_with(&inc.rhs, env, &inner)?;
                if got != Sort::Rel {
                    return Err(Error::TypeMismatch(format!(
                        "inclusion for {} needs a relation right-hand side, got a {}",
                        inc.name,
                        got.name()
                    )));
                }
            }
            Ok(Sort::Rel)
        }
        Expr::Nu(_, pr) => {
            check_progref(pr, env, locals)?;
            Ok(Sort::Rel)
        }
        Expr::Lam(..) => Err(Error::TypeMismatch(
            "a lambda abstraction is only meaningful applied".into(),
        )),
        Expr::App(f, arg) => match f.as_ref() {
            Expr::Lam(_, pr) => {
                check_progref(pr, env, locals)?;
                expect(arg, Sort::Rel, "lambda application")?;
                Ok(Sort::Prog)
            }
            _ => Err(Error::TypeMismatch(
                "only lambda abstractions can be applied to relations".into(),
            )),
        },
    }
}

fn check_progref(pr: &ProgRef, env: &Env, locals: &BTreeMap<String, Sort>) -> Result<()> {
    match pr {
        ProgRef::Inline(_) | ProgRef::Value(_) => Ok(()),
        ProgRef::Named(name) => match locals.get(name) {
            Some(Sort::Prog) => Ok(()),
            Some(other) => Err(Error::TypeMismatch(format!(
                "{name} is a {}, not a program",
                other.name()
            ))),
            None => match env.lookup(name) {
                Some(Binding::Prog(_)) => Ok(()),
                Some(Binding::Rel(_)) => Err(Error::TypeMismatch(format!(
                    "{name} is bound to a relation, not a program"
                ))),
                None => Err(Error::Unbound(name.clone())),
            },
        },
    }
}

/// Positivity check for a fixpoint group: the group's names may occur only
/// under union, intersection, application, and projection. An occurrence
/// inside a program reference (as one of its declared relation variables,
/// or as the reference name itself) is rejected, since the fixpoint
/// iteration cannot see through resolution to argue monotonicity
/// syntactically. A *predicate* spelled like a group name is a different
/// symbol and shadows it harmlessly.
pub fn check_positive(names: &BTreeSet<String>, expr: &Expr, env: &Env) -> Result<()> {
    if names.is_empty() {
        return Ok(());
    }
    match expr {
        Expr::Where(_, pr) => check_progref_positive(names, pr, env),
        Expr::Intersect(a, b) | Expr::Union(a, b) => {
            check_positive(names, a, env)?;
            check_positive(names, b, env)
        }
        Expr::Apply(rel, _) => check_positive(names, rel, env),
        Expr::Project(_, tab) => check_positive(names, tab, env),
        Expr::Top | Expr::Bottom | Expr::RelLit(_) | Expr::Var(_) => Ok(()),
        Expr::Mu(_, incs) => {
            // inner bindings shadow outer names of the same spelling
            let shadowed: BTreeSet<String> = names
                .iter()
                .filter(|n| !incs.iter().any(|i| &i.name == *n))
                .cloned()
                .collect();
            for inc in incs {
                check_positive(&shadowed, &inc.rhs, env)?;
            }
            Ok(())
        }
        Expr::Nu(_, pr) | Expr::Lam(_, pr) => check_progref_positive(names, pr, env),
        Expr::App(f, arg) => {
            check_positive(names, f, env)?;
            check_positive(names, arg, env)
        }
    }
}

fn check_progref_positive(
    names: &BTreeSet<String>,
    pr: &ProgRef,
    env: &Env,
) -> Result<()> {
    let ast = match pr {
        ProgRef::Named(name) => {
            if names.contains(name) {
                return Err(Error::NonMonotone { name: name.clone() });
            }
            match env.lookup(name) {
                Some(Binding::Prog(pv)) => pv.ast.clone(),
                _ => return Ok(()), // unbound / wrong sort: the sort checker reports it
            }
        }
        ProgRef::Inline(ast) => ast.clone(),
        ProgRef::Value(pv) => pv.ast.clone(),
    };
    for name in names {
        if ast.is_rel_var(name) {
            return Err(Error::NonMonotone { name: name.clone() });
        }
    }
    Ok(())
}
