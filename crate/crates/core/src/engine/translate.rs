//! Two-way translation between definite clauses and algebraic inclusions.
//!
//! A clause asserts that the head relation includes the projection, on the
//! head's argument tuple, of the intersection of the tables denoted by its
//! body atoms. Abstracted predicates (the ones being turned into relation
//! variables) and declared relation variables become applications `R:(args)`;
//! every other body atom stays a one-goal `where` query against the
//! enclosing program, keeping its predicate local to that expression.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::engine::program::{Atom, Clause, Program, ProgramVal};
use crate::error::{Error, Result};
use crate::lang::{Binding, Env, Expr, Inclusion, ProgRef};
use crate::relation::Relation;

/// Translates one clause. `abstracted` names the predicates that become
/// relation variables of the resulting inclusions.
pub fn clause_to_tra(
    clause: &Clause,
    abstracted: &BTreeSet<String>,
    enclosing: &ProgramVal,
) -> Inclusion {
    let mut conjuncts: Vec<Expr> = Vec::new();
    for atom in &clause.body {
        if abstracted.contains(&atom.pred) || enclosing.ast.is_rel_var(&atom.pred) {
            conjuncts.push(Expr::Apply(
                Box::new(Expr::Var(atom.pred.clone())),
                atom.args.clone(),
            ));
        } else {
            let query = crate::engine::Query::new(vec![atom.clone()]).expect("one goal");
            conjuncts.push(Expr::Where(query, ProgRef::Value(enclosing.clone())));
        }
    }
    let table = match conjuncts.len() {
        0 => Expr::Top,
        _ => {
            let mut it = conjuncts.into_iter();
            let first = it.next().unwrap();
            it.fold(first, |acc, c| Expr::Intersect(Box::new(acc), Box::new(c)))
        }
    };
    Inclusion {
        name: clause.head.pred.clone(),
        rhs: Expr::Project(clause.head.args.clone(), Box::new(table)),
    }
}

/// Translates every clause whose head is in `abstracted`, combining clauses
/// with the same head predicate into one inclusion with a union right-hand
/// side. Inclusions appear in order of first clause occurrence.
pub fn program_to_tra(program: &ProgramVal, abstracted: &BTreeSet<String>) -> Vec<Inclusion> {
    let mut order: Vec<String> = Vec::new();
    let mut grouped: BTreeMap<String, Vec<Expr>> = BTreeMap::new();
    for clause in program.ast.clauses() {
        if !abstracted.contains(&clause.head.pred) {
            continue;
        }
        let inc = clause_to_tra(clause, abstracted, program);
        if !order.contains(&inc.name) {
            order.push(inc.name.clone());
        }
        grouped.entry(inc.name).or_default().push(inc.rhs);
    }
    order
        .into_iter()
        .map(|name| {
            let branches = grouped.remove(&name).expect("grouped");
            let mut it = branches.into_iter();
            let first = it.next().expect("at least one clause");
            let rhs = it.fold(first, |acc, b| Expr::Union(Box::new(acc), Box::new(b)));
            Inclusion { name, rhs }
        })
        .collect()
}

/// Inverse translation: rebuilds a program from a group of inclusions.
///
/// Each relation variable of the group becomes a predicate; each projection
/// branch becomes a clause whose body collects the branch's conjuncts.
/// Programs referenced by `where` conjuncts are inlined with all their
/// defined predicates (and bound relation variables) renamed fresh, so each
/// `where` expression keeps its own namespace. `env` resolves named program
/// references and supplies bindings for free relation variables.
pub fn tra_to_clauses(incs: &[Inclusion], env: &Env) -> Result<ProgramVal> {
    let group: BTreeSet<String> = incs.iter().map(|i| i.name.clone()).collect();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut rel_vars: BTreeMap<String, usize> = BTreeMap::new();
    let mut bindings: BTreeMap<String, Relation> = BTreeMap::new();
    let mut instance = 0usize;

    let note_rel_var = |name: &str,
                            arity: usize,
                            rel_vars: &mut BTreeMap<String, usize>,
                            bindings: &mut BTreeMap<String, Relation>|
     -> Result<()> {
        if let Some(&a) = rel_vars.get(name) {
            if a != arity {
                return Err(Error::ArityMismatch {
                    context: format!("relation variable {name}"),
                    expected: a,
                    found: arity,
                });
            }
            return Ok(());
        }
        rel_vars.insert(name.to_string(), arity);
        if let Some(Binding::Rel(r)) = env.lookup(name) {
            bindings.insert(name.to_string(), r.clone());
        }
        Ok(())
    };

    for inc in incs {
        for branch in flatten(&inc.rhs, as_union) {
            match branch {
                Expr::Project(tuple, table) => {
                    let mut body: Vec<Atom> = Vec::new();
                    for conjunct in flatten(table, as_intersect) {
                        match conjunct {
                            Expr::Top => {}
                            Expr::Apply(rel, args) => match rel.as_ref() {
                                Expr::Var(name) => {
                                    if !group.contains(name) {
                                        note_rel_var(
                                            name,
                                            args.len(),
                                            &mut rel_vars,
                                            &mut bindings,
                                        )?;
                                    }
                                    body.push(Atom::new(name.clone(), args.clone()));
                                }
                                other => {
                                    return Err(Error::UnsupportedExpression(format!(
                                        "cannot translate an application of a {} expression \
                                         to a clause body",
                                        describe(other)
                                    )))
                                }
                            },
                            Expr::Where(query, progref) => {
                                instance += 1;
                                let sub = resolve_static(progref, env)?;
                                inline_where(
                                    &sub,
                                    query,
                                    instance,
                                    &mut clauses,
                                    &mut rel_vars,
                                    &mut bindings,
                                    &mut body,
                                    env,
                                )?;
                            }
                            other => {
                                return Err(Error::UnsupportedExpression(format!(
                                    "cannot translate a {} conjunct to a clause body",
                                    describe(other)
                                )))
                            }
                        }
                    }
                    clauses.push(Clause {
                        head: Atom::new(inc.name.clone(), tuple.clone()),
                        body,
                    });
                }
                Expr::RelLit(tuples) => {
                    for tuple in tuples {
                        clauses.push(Clause::fact(Atom::new(inc.name.clone(), tuple.clone())));
                    }
                }
                other => {
                    return Err(Error::UnsupportedExpression(format!(
                        "cannot translate a {} branch to clauses",
                        describe(other)
                    )))
                }
            }
        }
    }

    let ast = Program::new(clauses, rel_vars, None)?;
    Ok(ProgramVal {
        ast: Arc::new(ast),
        bindings,
    })
}

/// Inlines the program behind a `where` conjunct: defined predicates and
/// bound relation variables get instance-suffixed names (`p#3`), which are
/// not spellable as identifiers; unbound relation variables keep their names
/// and are bound from the ambient environment at evaluation time.
#[allow(clippy::too_many_arguments)]
fn inline_where(
    sub: &ProgramVal,
    query: &crate::engine::Query,
    instance: usize,
    clauses: &mut Vec<Clause>,
    rel_vars: &mut BTreeMap<String, usize>,
    bindings: &mut BTreeMap<String, Relation>,
    body: &mut Vec<Atom>,
    env: &Env,
) -> Result<()> {
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    for (pred, _) in sub.ast.defined_predicates() {
        rename.insert(pred.clone(), format!("{pred}#{instance}"));
    }
    for (rv, arity) in sub.ast.rel_vars() {
        match sub.bindings.get(rv) {
            Some(rel) => {
                let fresh = format!("{rv}#{instance}");
                rel_vars.insert(fresh.clone(), *arity);
                bindings.insert(fresh.clone(), rel.clone());
                rename.insert(rv.clone(), fresh);
            }
            None => {
                if let Some(&a) = rel_vars.get(rv) {
                    if a != *arity {
                        return Err(Error::ArityMismatch {
                            context: format!("relation variable {rv}"),
                            expected: a,
                            found: *arity,
                        });
                    }
                } else {
                    rel_vars.insert(rv.clone(), *arity);
                    if let Some(Binding::Rel(r)) = env.lookup(rv) {
                        bindings.insert(rv.clone(), r.clone());
                    }
                }
            }
        }
    }
    let rename_atom = |a: &Atom| -> Atom {
        match rename.get(&a.pred) {
            Some(fresh) => Atom::new(fresh.clone(), a.args.clone()),
            None => a.clone(),
        }
    };
    for clause in sub.ast.clauses() {
        clauses.push(Clause {
            head: rename_atom(&clause.head),
            body: clause.body.iter().map(rename_atom).collect(),
        });
    }
    body.extend(query.goals().iter().map(rename_atom));
    Ok(())
}

/// Resolves a program reference without evaluating expressions.
fn resolve_static(progref: &ProgRef, env: &Env) -> Result<ProgramVal> {
    match progref {
        ProgRef::Value(pv) => Ok(pv.clone()),
        ProgRef::Inline(ast) => Ok(ProgramVal::new(ast.clone())),
        ProgRef::Named(name) => match env.lookup(name) {
            Some(Binding::Prog(pv)) => Ok(pv.clone()),
            Some(Binding::Rel(_)) => Err(Error::TypeMismatch(format!(
                "{name} is bound to a relation, not a program"
            ))),
            None => Err(Error::Unbound(name.clone())),
        },
    }
}

fn as_union(e: &Expr) -> Option<(&Expr, &Expr)> {
    match e {
        Expr::Union(a, b) => Some((a, b)),
        _ => None,
    }
}

fn as_intersect(e: &Expr) -> Option<(&Expr, &Expr)> {
    match e {
        Expr::Intersect(a, b) => Some((a, b)),
        _ => None,
    }
}

fn flatten(e: &Expr, split: fn(&Expr) -> Option<(&Expr, &Expr)>) -> Vec<&Expr> {
    match split(e) {
        Some((a, b)) => {
            let mut out = flatten(a, split);
            out.extend(flatten(b, split));
            out
        }
        None => vec![e],
    }
}

fn describe(e: &Expr) -> &'static str {
    match e {
        Expr::Where(..) => "where",
        Expr::Intersect(..) => "intersection",
        Expr::Apply(..) => "application",
        Expr::Project(..) => "projection",
        Expr::Union(..) => "union",
        Expr::Top => "top",
        Expr::Bottom => "bot",
        Expr::RelLit(..) => "relation literal",
        Expr::Var(..) => "variable",
        Expr::Mu(..) => "mu",
        Expr::Nu(..) => "nu",
        Expr::Lam(..) => "lambda",
        Expr::App(..) => "lambda application",
    }
}
