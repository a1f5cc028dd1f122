//! Two structures that mark the limits of the dichotomy for binary
//! conservative structures, with executable checks of their defining
//! properties.
//!
//! * The parity structure: `{0,1}` with all unary relations and
//!   `S = {(x,y,z) : x + y + z = 0 mod 2}`. Its polymorphisms are the
//!   idempotent affine maps, so it has no quaternary WNU.
//! * The `Z2 x Z2` structure: four elements with all unary relations of size
//!   one and two, plus three equivalences `alpha`, `beta`, `gamma`. It has the
//!   Taylor polymorphism `x + y + z`, yet `alpha`, `beta`, `gamma` violate meet
//!   semidistributivity.
//!
//! Elements of `Z2 x Z2` are encoded as `0 = (0,0)`, `1 = (0,1)`,
//! `2 = (1,0)`, `3 = (1,1)`, so componentwise addition is bitwise xor.

use crate::coloring::{classify_pair, Color};
use crate::error::Result;
use crate::operation::{is_polymorphism, Operation};
use crate::partition::{is_invariant_partition, Partition};
use crate::poly_search::{find_polymorphism, is_taylor, IndicatorQuery};
use crate::relational_clone::{blue_pair_relation, PredictionFlag};
use crate::structure::{Relation, Structure};

pub fn parity_relation() -> Relation {
    Relation::new("S", 3, [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]).expect("parity relation")
}

pub fn build_parity_structure() -> Structure {
    Structure::new(2, vec![parity_relation()])
        .and_then(|s| s.conservative_closure(3))
        .expect("parity structure")
}

/// `alpha`, `beta` and `gamma` on the encoded `Z2 x Z2`.
pub fn z22_partitions() -> [Partition; 3] {
    let p = |blocks: [[usize; 2]; 2]| {
        Partition::from_blocks(4, &blocks.map(|b| b.to_vec())).expect("partition of Z2 x Z2")
    };
    [
        p([[0, 3], [1, 2]]),
        p([[0, 1], [2, 3]]),
        p([[0, 2], [1, 3]]),
    ]
}

/// `p(x,y,z) = x + y + z` computed componentwise mod 2.
pub fn z22_sum() -> Operation {
    Operation::from_fn(4, 3, |t| t[0] ^ t[1] ^ t[2]).expect("sum operation")
}

pub fn build_z22_structure() -> Structure {
    let [alpha, beta, gamma] = z22_partitions();
    let relations = vec![
        alpha.relation("alpha"),
        beta.relation("beta"),
        gamma.relation("gamma"),
    ];
    Structure::new(4, relations)
        .and_then(|s| s.conservative_closure(2))
        .expect("Z2 x Z2 structure")
}

/// A named check with its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// The pair `{0,1}` is blue, the generated relation is the predicted
/// four-element set and no quaternary WNU polymorphism exists.
pub fn verify_parity() -> Result<Vec<Check>> {
    let s = build_parity_structure();
    let color = classify_pair(&s, 0, 1)?.color;
    let blue = blue_pair_relation(&s, 0, 1)?;
    let wnu4 = find_polymorphism(&s, &IndicatorQuery::wnu(2, 4)?)?;
    Ok(vec![
        Check::new(
            "pair-0-1-blue",
            color == Color::Blue,
            format!("pair {{0, 1}} is {color}"),
        ),
        Check::new(
            "generated-relation",
            blue.flag == PredictionFlag::Matches,
            format!("{} tuples, {}", blue.relation.len(), blue.flag),
        ),
        Check::new(
            "no-quaternary-wnu",
            wnu4.is_none(),
            if wnu4.is_none() {
                "search exhausted"
            } else {
                "a quaternary WNU was found"
            },
        ),
    ])
}

/// `p` is a Taylor polymorphism, `alpha`, `beta`, `gamma` are congruences of
/// `p`, and `alpha ^ beta = alpha ^ gamma = 0` while `alpha ^ (beta v gamma) = alpha`.
pub fn verify_z22() -> Result<Vec<Check>> {
    let s = build_z22_structure();
    let p = z22_sum();
    let [alpha, beta, gamma] = z22_partitions();
    let bottom = Partition::singletons(4);
    let ab = alpha.meet(&beta)?;
    let ag = alpha.meet(&gamma)?;
    let a_bg = alpha.meet(&beta.join(&gamma)?)?;
    let congruent = [&alpha, &beta, &gamma]
        .iter()
        .map(|q| is_invariant_partition(q, std::slice::from_ref(&p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        Check::new(
            "p-polymorphism",
            is_polymorphism(&p, &s)?,
            "x + y + z preserves every relation",
        ),
        Check::new(
            "p-taylor",
            is_taylor(&p),
            "x + y + z satisfies Taylor identities",
        ),
        Check::new(
            "congruences",
            congruent.iter().all(|&c| c),
            "alpha, beta, gamma are compatible with p",
        ),
        Check::new(
            "alpha-meet-beta",
            ab == bottom,
            format!("alpha ^ beta = {ab}"),
        ),
        Check::new(
            "alpha-meet-gamma",
            ag == bottom,
            format!("alpha ^ gamma = {ag}"),
        ),
        Check::new(
            "alpha-meet-join",
            a_bg == alpha,
            format!("alpha ^ (beta v gamma) = {a_bg}"),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_shape() {
        let s = build_parity_structure();
        assert_eq!(s.relation("S").unwrap().len(), 4);
        assert_eq!(s.unary_relations().count(), 3);
        assert_eq!(s.effective_conservativity(), 3);
    }

    #[test]
    fn z22_shape() {
        let s = build_z22_structure();
        assert_eq!(s.unary_relations().count(), 10);
        assert_eq!(s.effective_conservativity(), 2);
        let [alpha, ..] = z22_partitions();
        assert_eq!(alpha.blocks(), vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(s.relation("alpha").unwrap(), &alpha.relation("alpha"));
    }

    #[test]
    fn checks_pass() {
        for c in verify_parity()
            .unwrap()
            .into_iter()
            .chain(verify_z22().unwrap())
        {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
