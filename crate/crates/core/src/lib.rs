//! Analysis of finite conservative relational structures with small-arity
//! relations.
//!
//! The crate colors pairs of domain elements by the behavior of the
//! polymorphisms available on them, derives the CSP complexity verdict for
//! 3-conservative structures, builds explicit weak near-unanimity witnesses,
//! computes relations generated by the polymorphism clone, and solves CSP
//! instances by local consistency with an exhaustive backtracking oracle.
//!
//! ```
//! use concsp::{counterexamples, coloring::{verdict, VerdictKind}};
//!
//! let parity = counterexamples::build_parity_structure();
//! let v = verdict(&parity).unwrap();
//! assert_eq!(v.kind, VerdictKind::BlueAnomaly);
//! ```

pub mod audit;
pub mod coloring;
pub mod corpus;
pub mod counterexamples;
pub mod error;
pub mod operation;
pub mod partition;
pub mod poly_search;
pub mod relational_clone;
pub mod report;
pub mod solver;
pub mod structure;
mod util;

pub use coloring::{Color, Coloring, PairColor, ThreeOperations, Verdict, VerdictKind};
pub use error::{Error, Result};
pub use operation::Operation;
pub use partition::Partition;
pub use poly_search::{BehaviorKind, IndicatorQuery, PairBehavior};
pub use solver::{Assignment, Instance};
pub use structure::{Relation, Structure};

/// Largest supported domain size. Value sets are stored as 64-bit masks.
pub const MAX_DOMAIN: usize = 64;

/// Largest arity of a basic relation of a [`Structure`].
pub const MAX_RELATION_ARITY: usize = 3;

/// Largest arity of an [`Operation`].
pub const MAX_OPERATION_ARITY: usize = 4;
