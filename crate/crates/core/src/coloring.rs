//! Red/yellow/blue coloring of pairs, the complexity verdict, the three
//! pair-uniform operations and the WNU witnesses built from them.
//!
//! A pair `{a, b}` is red when some binary polymorphism is a semilattice on
//! it, otherwise yellow when some ternary polymorphism is a majority on it,
//! otherwise blue when some ternary polymorphism is a minority on it. Pairs
//! with none of these are uncolored: every polymorphism restricts to a
//! projection there.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::operation::{is_polymorphism, Operation};
use crate::poly_search::{
    behavior_on_pair, check_wnu, enumerate_images, find_polymorphism, same_polymer, BehaviorKind,
    IndicatorQuery,
};
use crate::relational_clone::{blue_pair_relation, BluePairRelation};
use crate::structure::Structure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Yellow,
    Blue,
    Uncolored,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Yellow => "yellow",
            Color::Blue => "blue",
            Color::Uncolored => "uncolored",
        })
    }
}

/// A pair color together with the polymorphism that establishes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairColor {
    pub color: Color,
    pub witness: Option<Operation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    domain_size: usize,
    pairs: BTreeMap<(usize, usize), PairColor>,
}

impl Coloring {
    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&PairColor> {
        self.pairs.get(&(a.min(b), a.max(b)))
    }

    pub fn color(&self, a: usize, b: usize) -> Option<Color> {
        self.get(a, b).map(|c| c.color)
    }

    /// All pairs, smaller element first, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), &PairColor)> + '_ {
        self.pairs.iter().map(|(&p, c)| (p, c))
    }

    pub fn pairs_with(&self, color: Color) -> Vec<(usize, usize)> {
        self.pairs()
            .filter(|(_, c)| c.color == color)
            .map(|(p, _)| p)
            .collect()
    }

    pub fn count(&self, color: Color) -> usize {
        self.pairs.values().filter(|c| c.color == color).count()
    }

    pub fn all_colored(&self) -> bool {
        self.count(Color::Uncolored) == 0
    }
}

/// Pair classifier that remembers every witness it has found, so later pairs
/// can be settled by an earlier witness without a new search.
pub struct Classifier<'a> {
    structure: &'a Structure,
    binary: Vec<Operation>,
    ternary: Vec<Operation>,
}

impl<'a> Classifier<'a> {
    pub fn new(structure: &'a Structure) -> Result<Self> {
        if structure.effective_conservativity() < 2 {
            return Err(Error::Precondition(
                "pair coloring needs a 2-conservative structure; apply conservative_closure first"
                    .into(),
            ));
        }
        Ok(Classifier {
            structure,
            binary: Vec::new(),
            ternary: Vec::new(),
        })
    }

    fn cached(
        &self,
        arity: usize,
        pair: (usize, usize),
        want: impl Fn(BehaviorKind) -> bool,
    ) -> Option<Operation> {
        let pool = if arity == 2 {
            &self.binary
        } else {
            &self.ternary
        };
        pool.iter()
            .find(|op| {
                behavior_on_pair(op, pair.0, pair.1)
                    .ok()
                    .flatten()
                    .is_some_and(|b| want(b.kind))
            })
            .cloned()
    }

    fn search(
        &mut self,
        arity: usize,
        pair: (usize, usize),
        kind: BehaviorKind,
    ) -> Result<Option<Operation>> {
        let mut q = IndicatorQuery::new(self.structure.domain_size(), arity)?;
        kind.prescribe(&mut q, pair)?;
        let found = find_polymorphism(self.structure, &q)?;
        if let Some(op) = &found {
            let pool = if arity == 2 {
                &mut self.binary
            } else {
                &mut self.ternary
            };
            pool.push(op.clone());
        }
        Ok(found)
    }

    pub fn classify(&mut self, a: usize, b: usize) -> Result<PairColor> {
        let n = self.structure.domain_size();
        if a == b {
            return Err(Error::Precondition(format!(
                "pair ({a}, {b}) is not two distinct elements"
            )));
        }
        if a >= n || b >= n {
            return Err(Error::DomainMismatch(format!(
                "pair ({a}, {b}) outside the domain"
            )));
        }
        let pair = (a.min(b), a.max(b));
        let colored = |color, witness| {
            Ok(PairColor {
                color,
                witness: Some(witness),
            })
        };

        if let Some(w) = self.cached(2, pair, |k| matches!(k, BehaviorKind::Semilattice { .. })) {
            return colored(Color::Red, w);
        }
        for absorbing in [pair.0, pair.1] {
            if let Some(w) = self.search(2, pair, BehaviorKind::Semilattice { absorbing })? {
                return colored(Color::Red, w);
            }
        }
        for (color, kind) in [
            (Color::Yellow, BehaviorKind::Majority),
            (Color::Blue, BehaviorKind::Minority),
        ] {
            if let Some(w) = self.cached(3, pair, |k| k == kind) {
                return colored(color, w);
            }
            if let Some(w) = self.search(3, pair, kind)? {
                return colored(color, w);
            }
        }
        Ok(PairColor {
            color: Color::Uncolored,
            witness: None,
        })
    }
}

/// Colors the pair `{a, b}` of a 2-conservative structure.
pub fn classify_pair(s: &Structure, a: usize, b: usize) -> Result<PairColor> {
    Classifier::new(s)?.classify(a, b)
}

/// Colors every pair of the domain.
pub fn color_all_pairs(s: &Structure) -> Result<Coloring> {
    let mut classifier = Classifier::new(s)?;
    let n = s.domain_size();
    let mut pairs = BTreeMap::new();
    for (a, b) in (0..n).tuple_combinations() {
        pairs.insert((a, b), classifier.classify(a, b)?);
    }
    Ok(Coloring {
        domain_size: n,
        pairs,
    })
}

/// A binary `f` and ternary `g`, `h` whose restrictions to every pair follow
/// the coloring: `f` is a semilattice on red pairs and the first projection
/// elsewhere; `g` is a majority on yellow pairs, the first projection on blue
/// pairs and `f(f(x,y),z)` on red pairs; `h` is a minority on blue pairs, the
/// first projection on yellow pairs and `f(f(x,y),z)` on red pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeOperations {
    pub f: Operation,
    pub g: Operation,
    pub h: Operation,
    /// Absorbing element of `f` on each red pair.
    pub orientation: BTreeMap<(usize, usize), usize>,
}

fn pair_queries(
    s: &Structure,
    coloring: &Coloring,
    orientation: &BTreeMap<(usize, usize), usize>,
) -> Result<(IndicatorQuery, IndicatorQuery)> {
    let n = s.domain_size();
    let mut g = IndicatorQuery::new(n, 3)?.idempotent();
    let mut h = IndicatorQuery::new(n, 3)?.idempotent();
    for (pair, c) in coloring.pairs() {
        let (gk, hk) = match c.color {
            Color::Red => {
                let sl = BehaviorKind::Semilattice {
                    absorbing: orientation[&pair],
                };
                (sl, sl)
            }
            Color::Yellow => (BehaviorKind::Majority, BehaviorKind::Projection(0)),
            Color::Blue => (BehaviorKind::Projection(0), BehaviorKind::Minority),
            Color::Uncolored => unreachable!("checked by the caller"),
        };
        gk.prescribe(&mut g, pair)?;
        hk.prescribe(&mut h, pair)?;
    }
    Ok((g, h))
}

/// Searches for the three pair-uniform operations of a fully colored
/// 3-conservative structure.
///
/// The semilattice orientation on each red pair is left to the search: all
/// feasible orientation vectors of `f` are enumerated and tried in order
/// until `g` and `h` exist for one of them.
pub fn find_three_operations(s: &Structure, coloring: &Coloring) -> Result<ThreeOperations> {
    if s.effective_conservativity() < 3 {
        return Err(Error::Precondition(
            "structure is not 3-conservative".into(),
        ));
    }
    if coloring.domain_size() != s.domain_size() {
        return Err(Error::DomainMismatch(
            "coloring belongs to another domain".into(),
        ));
    }
    if let Some(p) = coloring.pairs_with(Color::Uncolored).first() {
        return Err(Error::Precondition(format!(
            "pair {{{}, {}}} is uncolored; the three operations need every pair colored",
            p.0, p.1
        )));
    }
    let n = s.domain_size();
    let red = coloring.pairs_with(Color::Red);
    let mut fq = IndicatorQuery::new(n, 2)?.idempotent();
    for (pair, c) in coloring.pairs() {
        if c.color == Color::Red {
            fq.identify(&[pair.0, pair.1], &[pair.1, pair.0])?;
        } else {
            BehaviorKind::Projection(0).prescribe(&mut fq, pair)?;
        }
    }
    let watched: Vec<Vec<usize>> = red.iter().map(|&(a, b)| vec![a, b]).collect();
    let orientations = enumerate_images(s, &fq, &watched)?;

    for absorbing in orientations {
        let orientation: BTreeMap<_, _> = red.iter().copied().zip(absorbing).collect();
        let mut fq_fixed = fq.clone();
        for (&(a, b), &c) in &orientation {
            fq_fixed.prescribe(&[a, b], c)?;
        }
        let Some(f) = find_polymorphism(s, &fq_fixed)? else {
            return Err(Error::Internal(
                "enumerated orientation has no witness".into(),
            ));
        };
        let (gq, hq) = pair_queries(s, coloring, &orientation)?;
        let Some(g) = find_polymorphism(s, &gq)? else {
            continue;
        };
        let Some(h) = find_polymorphism(s, &hq)? else {
            continue;
        };
        return Ok(ThreeOperations {
            f,
            g,
            h,
            orientation,
        });
    }
    Err(Error::WitnessNotFound(
        "no orientation of the red pairs admits the three pair-uniform operations".into(),
    ))
}

fn check_shapes(f: &Operation, g: &Operation) -> Result<()> {
    if f.arity() != 2 || g.arity() != 3 {
        return Err(Error::UnsupportedArity {
            arity: if f.arity() != 2 { f.arity() } else { g.arity() },
            context: "WNU construction needs a binary f and a ternary g",
        });
    }
    if f.domain_size() != g.domain_size() {
        return Err(Error::DomainMismatch(
            "f and g act on different domains".into(),
        ));
    }
    Ok(())
}

/// `u(x,y,z) = g(f(f(x,y),z), f(f(y,z),x), f(f(z,x),y))`.
pub fn build_wnu_u(f: &Operation, g: &Operation) -> Result<Operation> {
    check_shapes(f, g)?;
    let ff = |a, b, c| f.apply(&[f.apply(&[a, b]), c]);
    Operation::from_fn(f.domain_size(), 3, |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        g.apply(&[ff(x, y, z), ff(y, z, x), ff(z, x, y)])
    })
}

/// `v(x,y,z,t) = g(f(f(f(x,y),z),t), f(f(f(y,z),x),t), f(f(f(z,x),y),t))`.
pub fn build_wnu_v(f: &Operation, g: &Operation) -> Result<Operation> {
    check_shapes(f, g)?;
    let fff = |a, b, c, d| f.apply(&[f.apply(&[f.apply(&[a, b]), c]), d]);
    Operation::from_fn(f.domain_size(), 4, |t| {
        let (x, y, z, w) = (t[0], t[1], t[2], t[3]);
        g.apply(&[fff(x, y, z, w), fff(y, z, x, w), fff(z, x, y, w)])
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    NpComplete,
    BoundedWidth,
    BlueAnomaly,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::NpComplete => "np_complete",
            VerdictKind::BoundedWidth => "bounded_width",
            VerdictKind::BlueAnomaly => "blue_anomaly",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub coloring: Coloring,
    pub three_operations: Option<ThreeOperations>,
    /// Ternary and quaternary WNU polymorphisms with the same polymer.
    pub wnu: Option<(Operation, Operation)>,
    /// Generated relation of the first blue pair, for blue anomalies.
    pub blue_relation: Option<((usize, usize), BluePairRelation)>,
    /// Whether every basic relation has arity at most two.
    pub binary_scope: bool,
    pub diagnostics: Vec<String>,
}

/// The complexity verdict for a 3-conservative structure.
pub fn verdict(s: &Structure) -> Result<Verdict> {
    if s.effective_conservativity() < 3 {
        return Err(Error::Precondition(
            "verdict needs a 3-conservative structure; apply conservative_closure(3) first".into(),
        ));
    }
    let coloring = color_all_pairs(s)?;
    let binary_scope = s.max_arity() <= 2;
    let mut diagnostics =
        vec!["criterion: Taylor operation present iff every pair is colored".to_owned()];
    if !binary_scope {
        diagnostics.push(
            "outside the binary-relation dichotomy scope (ternary relation present)".to_owned(),
        );
    }

    let uncolored = coloring.pairs_with(Color::Uncolored);
    if let Some(&(a, b)) = uncolored.first() {
        diagnostics.push(format!(
            "pair {{{a}, {b}}} is uncolored: all polymorphisms restrict to projections on it, so no Taylor operation exists"
        ));
        return Ok(Verdict {
            kind: VerdictKind::NpComplete,
            coloring,
            three_operations: None,
            wnu: None,
            blue_relation: None,
            binary_scope,
            diagnostics,
        });
    }

    let blue = coloring.pairs_with(Color::Blue);
    if let Some(&(a, b)) = blue.first() {
        let rel = blue_pair_relation(s, a, b)?;
        diagnostics.push(format!(
            "pair {{{a}, {b}}} is blue; its generated relation has {} tuples ({})",
            rel.relation.len(),
            rel.flag
        ));
        if binary_scope {
            diagnostics.push(
                "ANOMALY: a blue pair in a fully colored 3-conservative structure with binary relations contradicts the dichotomy".to_owned(),
            );
        }
        return Ok(Verdict {
            kind: VerdictKind::BlueAnomaly,
            coloring,
            three_operations: None,
            wnu: None,
            blue_relation: Some(((a, b), rel)),
            binary_scope,
            diagnostics,
        });
    }

    let three = find_three_operations(s, &coloring)?;
    let u = build_wnu_u(&three.f, &three.g)?;
    let v = build_wnu_v(&three.f, &three.g)?;
    if !check_wnu(&u)? || !check_wnu(&v)? || !same_polymer(&u, &v)? {
        return Err(Error::Internal(
            "constructed u, v are not WNUs with the same polymer".into(),
        ));
    }
    if !is_polymorphism(&u, s)? || !is_polymorphism(&v, s)? {
        return Err(Error::Internal(
            "constructed u, v are not polymorphisms".into(),
        ));
    }
    diagnostics.push(format!(
        "all pairs red or yellow ({} red, {} yellow); u and v verified as WNU polymorphisms with the same polymer",
        coloring.count(Color::Red),
        coloring.count(Color::Yellow)
    ));
    Ok(Verdict {
        kind: VerdictKind::BoundedWidth,
        coloring,
        three_operations: Some(three),
        wnu: Some((u, v)),
        blue_relation: None,
        binary_scope,
        diagnostics,
    })
}
