//! Definite-clause programs, SLD resolution, bottom-up evaluation, and the
//! translation between clauses and algebraic inclusions.

mod bottom_up;
mod program;
mod sld;
mod translate;

pub use bottom_up::least_model;
pub use program::{Atom, Clause, Program, ProgramVal, Query};
pub use sld::{where_query, where_query_with_rule, SelectionRule};
pub use translate::{clause_to_tra, program_to_tra, tra_to_clauses};
