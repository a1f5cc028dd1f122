//! CSP instances with unary and binary constraints ("potato diagrams"):
//! arc consistency, (2,3)-consistency, exhaustive backtracking, solution
//! enumeration, relations realized by free variables, and DOT export.

mod consistency;
mod dot;
mod instance;
mod search;

pub use consistency::{arc_consistency, two_three_consistency, PairFamily, TwoThree};
pub use dot::export_dot;
pub use instance::{Assignment, BinaryConstraint, Instance};
pub use search::{enumerate_solutions, realize_relation, solve_backtracking};
