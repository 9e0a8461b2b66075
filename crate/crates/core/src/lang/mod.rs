//! The expression language: parser, sort checker, and evaluator.
//!
//! Grammar (ASCII operator spellings):
//!
//! ```text
//! expr     := relexpr | tabexpr ;
//! tabexpr  := "(" query "where" progref ")" | tabexpr "/\" tabexpr
//!           | relexpr ":" tuple | "top" | "bot" | "(" tabexpr ")" ;
//! relexpr  := ident | rel_literal | tuple "/" tabexpr | relexpr "\/" relexpr
//!           | "mu" ident "." inclusions | "nu" ident "." progref
//!           | "(" "lam" ident "." progref ")" "(" relexpr ")" | "(" relexpr ")" ;
//! inclusions := inclusion { ";" inclusion } ;
//! inclusion  := ident ">=" relexpr ;
//! tuple    := "(" term { "," term } ")" ;
//! query    := "?-" atom { "," atom } ;
//! progref  := ident | "{" clauses "}" ;
//! ```

mod ast;
mod check;
mod eval;
mod lexer;
mod parser;

pub use ast::{Binding, Env, Expr, Inclusion, ProgRef, Value};
pub use check::{check, check_positive, Sort};
pub use eval::{check_inclusion, eval, prog_value, resolve_progref, solve_mu, MuStrategy};
pub use parser::{parse_expr, parse_inclusion, parse_program, parse_query, parse_term};
