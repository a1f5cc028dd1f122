//! Polymorphism search over the indicator construction, and term condition
//! checks (WNU, Taylor, pair behaviors).
//!
//! A would-be `k`-ary polymorphism of a structure on `n` elements is encoded
//! as a CSP whose variables are the `n^k` argument tuples (merged into classes
//! by [`IndicatorQuery::identify`]). Every relation of arity at least two
//! contributes one constraint per selection of `k` of its rows; unary
//! relations become domain restrictions. Search is backtracking with
//! generalized arc consistency maintained after every decision.

mod indicator;
mod terms;

pub use indicator::{
    enumerate_images, enumerate_polymorphism_images, find_polymorphism, IndicatorQuery,
};
pub use terms::{behavior_on_pair, check_wnu, is_taylor, same_polymer, BehaviorKind, PairBehavior};
