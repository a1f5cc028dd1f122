//! Relations generated by the polymorphism clone.

use std::fmt;

use crate::coloring::{classify_pair, Color};
use crate::error::{Error, Result};
use crate::poly_search::enumerate_polymorphism_images;
use crate::structure::Relation;
use crate::structure::Structure;
use crate::MAX_OPERATION_ARITY;

/// The smallest relation invariant under all polymorphisms of `s` that
/// contains `generators`.
///
/// With `k` generators of length `m` this is the set of tuples
/// `(t(c_1), ..., t(c_m))` where `c_i` is the i-th column of the generators
/// and `t` ranges over the `k`-ary polymorphisms.
pub fn generated_relation(s: &Structure, generators: &[Vec<usize>]) -> Result<Relation> {
    let k = generators.len();
    if !(1..=MAX_OPERATION_ARITY).contains(&k) {
        return Err(Error::UnsupportedArity {
            arity: k,
            context: "generated relations take 1 to 4 generators",
        });
    }
    let m = generators[0].len();
    if m == 0 || generators.iter().any(|g| g.len() != m) {
        return Err(Error::InvalidRelation(
            "generators must be nonempty and of equal length".into(),
        ));
    }
    if generators.iter().flatten().any(|&x| x >= s.domain_size()) {
        return Err(Error::DomainMismatch(
            "generator element outside the domain".into(),
        ));
    }
    let columns: Vec<Vec<usize>> = (0..m)
        .map(|i| generators.iter().map(|g| g[i]).collect())
        .collect();
    let images = enumerate_polymorphism_images(s, k, &columns)?;
    Relation::new("generated", m, images)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredictionFlag {
    /// Exactly `{(b,b,b), (a,a,b), (a,b,a), (b,a,a)}`.
    Matches,
    /// Extra tuples, which would give a majority or semilattice on the pair.
    Differs,
}

impl fmt::Display for PredictionFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredictionFlag::Matches => "matches",
            PredictionFlag::Differs => "differs",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BluePairRelation {
    pub relation: Relation,
    pub predicted: Relation,
    pub flag: PredictionFlag,
}

/// The relation generated by `(a,a,b), (a,b,a), (b,a,a)` for a blue pair,
/// compared against the four-tuple prediction.
pub fn blue_pair_relation(s: &Structure, a: usize, b: usize) -> Result<BluePairRelation> {
    if s.effective_conservativity() < 3 {
        return Err(Error::Precondition(
            "structure is not 3-conservative".into(),
        ));
    }
    let color = classify_pair(s, a, b)?.color;
    if color != Color::Blue {
        return Err(Error::Precondition(format!(
            "pair {{{a}, {b}}} is {color}, not blue"
        )));
    }
    let relation =
        generated_relation(s, &[vec![a, a, b], vec![a, b, a], vec![b, a, a]])?.with_name("R");
    let predicted = predicted_blue_relation(a, b);
    let flag = compare_with_prediction(&relation, a, b);
    Ok(BluePairRelation {
        relation,
        predicted,
        flag,
    })
}

/// `{(b,b,b), (a,a,b), (a,b,a), (b,a,a)}`, named `R`.
pub fn predicted_blue_relation(a: usize, b: usize) -> Relation {
    Relation::new("R", 3, [[b, b, b], [a, a, b], [a, b, a], [b, a, a]]).expect("ternary relation")
}

/// Compares a relation generated from `(a,a,b), (a,b,a), (b,a,a)` with the
/// four-tuple prediction, ignoring names.
pub fn compare_with_prediction(relation: &Relation, a: usize, b: usize) -> PredictionFlag {
    let predicted = predicted_blue_relation(a, b);
    if relation.arity() == 3 && relation.tuples().eq(predicted.tuples()) {
        PredictionFlag::Matches
    } else {
        PredictionFlag::Differs
    }
}

/// If `generators` are `(a,a,b), (a,b,a), (b,a,a)` for some `a != b`,
/// returns `(a, b)`.
pub fn blue_pattern(generators: &[Vec<usize>]) -> Option<(usize, usize)> {
    match generators {
        [g1, g2, g3] if g1.len() == 3 => {
            let (a, b) = (g1[0], g1[2]);
            (a != b && *g1 == [a, a, b] && *g2 == [a, b, a] && *g3 == [b, a, a]).then_some((a, b))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::build_parity_structure;

    #[test]
    fn parity_generated_relation() {
        let s = build_parity_structure();
        let r = generated_relation(&s, &[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]).unwrap();
        let tuples: Vec<&[usize]> = r.tuples().collect();
        assert_eq!(
            tuples,
            vec![&[0, 0, 1][..], &[0, 1, 0], &[1, 0, 0], &[1, 1, 1]]
        );
    }

    #[test]
    fn single_generator_is_contained() {
        let s = build_parity_structure();
        let r = generated_relation(&s, &[vec![1, 0, 1]]).unwrap();
        assert!(r.contains(&[1, 0, 1]));
        // unary polymorphisms of a conservative structure are the identity
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn unconstrained_structure() {
        let s = Structure::new(2, vec![]).unwrap();
        let r = generated_relation(&s, &[vec![0], vec![1]]).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn generator_shape_errors() {
        let s = build_parity_structure();
        assert!(generated_relation(&s, &[]).is_err());
        assert!(generated_relation(&s, &[vec![0, 1], vec![0]]).is_err());
        assert!(generated_relation(&s, &[vec![0, 2]]).is_err());
        assert!(generated_relation(&s, &vec![vec![0]; 5]).is_err());
    }

    #[test]
    fn parity_blue_relation_matches() {
        let s = build_parity_structure();
        let r = blue_pair_relation(&s, 0, 1).unwrap();
        assert_eq!(r.flag, PredictionFlag::Matches);
        assert_eq!(r.relation, r.predicted);
    }

    #[test]
    fn non_blue_pair_is_rejected() {
        let le = Relation::new("le", 2, [[0, 0], [0, 1], [1, 1]]).unwrap();
        let s = Structure::new(2, vec![le])
            .unwrap()
            .conservative_closure(3)
            .unwrap();
        assert!(matches!(
            blue_pair_relation(&s, 0, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pattern_detection() {
        assert_eq!(
            blue_pattern(&[vec![2, 2, 0], vec![2, 0, 2], vec![0, 2, 2]]),
            Some((2, 0))
        );
        assert_eq!(blue_pattern(&[vec![0, 0, 1], vec![0, 1, 0]]), None);
        assert_eq!(
            blue_pattern(&[vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]),
            None
        );
    }
}
