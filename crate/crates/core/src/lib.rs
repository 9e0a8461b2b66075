//! A logic-programming kernel in which relations are first-class values.
//!
//! The crate provides:
//!
//! - Herbrand terms, solved-form substitutions, and unification ([`term`],
//!   [`subst`]);
//! - tables (sets of solved-form substitutions over a common heading) with
//!   intersection, and their materialization as cylinders over a finite
//!   universe ([`table`], [`cylinder`], [`universe`]);
//! - relation values with application `:` (relation to table) and projection
//!   `/` (table to relation) ([`relation`]);
//! - definite-clause programs evaluated by complete SLD search (`where`) and
//!   by a bottom-up least-model oracle, plus the two-way translation between
//!   clauses and algebraic inclusions ([`engine`]);
//! - a small expression language with `where`, `/\`, `:`, `/`, `\/`,
//!   inclusion fixpoints `mu`, predicate selection `nu`, and `lam`-binding
//!   of relation variables over programs ([`lang`]).

pub mod config;
pub mod cylinder;
pub mod engine;
pub mod error;
pub mod lang;
pub mod oracle;
pub mod relation;
pub mod subst;
pub mod table;
pub mod term;
pub mod universe;

pub use config::{EvalConfig, SearchLimits};
pub use error::{Error, ParseError, Result};
pub use relation::Relation;
pub use table::Table;
pub use term::{Term, Var};
pub use universe::Universe;

#[cfg(test)]
mod shared_value_contract {
    //! Values are immutable after construction and shareable across threads.

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn values_are_send_and_sync() {
        assert_send_sync::<crate::Term>();
        assert_send_sync::<crate::subst::Substitution>();
        assert_send_sync::<crate::Table>();
        assert_send_sync::<crate::Relation>();
        assert_send_sync::<crate::engine::ProgramVal>();
        assert_send_sync::<crate::lang::Env>();
        assert_send_sync::<crate::lang::Expr>();
    }
}
