use std::fmt;

use crate::error::{Error, Result};
use crate::operation::{restrict_operation, Operation};
use crate::poly_search::IndicatorQuery;
use crate::util::tuples;

/// How an operation acts on a two-element subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BehaviorKind {
    /// The value is `absorbing` whenever it occurs among the arguments.
    Semilattice {
        absorbing: usize,
    },
    Majority,
    Minority,
    /// Projection onto the given (0-based) coordinate.
    Projection(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairBehavior {
    /// The pair, smaller element first.
    pub pair: (usize, usize),
    pub kind: BehaviorKind,
}

impl BehaviorKind {
    /// The value this behavior prescribes on `args`, all of which lie in `pair`.
    pub fn value(self, pair: (usize, usize), args: &[usize]) -> usize {
        let (a, b) = pair;
        let other = |x: usize| if x == a { b } else { a };
        match self {
            BehaviorKind::Semilattice { absorbing } => {
                if args.contains(&absorbing) {
                    absorbing
                } else {
                    other(absorbing)
                }
            }
            BehaviorKind::Majority => {
                let count_a = args.iter().filter(|&&x| x == a).count();
                if 2 * count_a > args.len() {
                    a
                } else {
                    b
                }
            }
            // for three arguments over two elements exactly one element occurs an odd number of times
            BehaviorKind::Minority => {
                let count_a = args.iter().filter(|&&x| x == a).count();
                if count_a % 2 == 1 {
                    a
                } else {
                    b
                }
            }
            BehaviorKind::Projection(i) => args[i],
        }
    }

    /// Prescribes this behavior on every argument tuple over `pair`.
    pub fn prescribe(self, q: &mut IndicatorQuery, pair: (usize, usize)) -> Result<()> {
        let (a, b) = pair;
        for t in tuples(2, q.arity()) {
            let args: Vec<usize> = t.iter().map(|&i| if i == 0 { a } else { b }).collect();
            q.prescribe(&args, self.value(pair, &args))?;
        }
        Ok(())
    }
}

impl fmt::Display for BehaviorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BehaviorKind::Semilattice { absorbing } => {
                write!(f, "semilattice absorbing {absorbing}")
            }
            BehaviorKind::Majority => write!(f, "majority"),
            BehaviorKind::Minority => write!(f, "minority"),
            BehaviorKind::Projection(i) => write!(f, "projection-{}", i + 1),
        }
    }
}

/// Classifies the restriction of `op` to `{a, b}`.
pub fn behavior_on_pair(op: &Operation, a: usize, b: usize) -> Result<Option<PairBehavior>> {
    if a == b {
        return Err(Error::Precondition(
            "a pair needs two distinct elements".into(),
        ));
    }
    let pair = (a.min(b), a.max(b));
    let restricted = restrict_operation(op, &[pair.0, pair.1])?;
    let k = op.arity();
    let mut candidates: Vec<BehaviorKind> = (0..k).map(BehaviorKind::Projection).collect();
    if k >= 2 {
        candidates.push(BehaviorKind::Semilattice { absorbing: pair.0 });
        candidates.push(BehaviorKind::Semilattice { absorbing: pair.1 });
    }
    if k == 3 {
        candidates.push(BehaviorKind::Majority);
        candidates.push(BehaviorKind::Minority);
    }
    let lift = |i: usize| if i == 0 { pair.0 } else { pair.1 };
    Ok(candidates
        .into_iter()
        .find(|kind| {
            tuples(2, k).all(|t| {
                let args: Vec<usize> = t.iter().map(|&i| lift(i)).collect();
                lift(restricted.apply(&t)) == kind.value(pair, &args)
            })
        })
        .map(|kind| PairBehavior { pair, kind }))
}

fn one_off(arity: usize, x: usize, y: usize, i: usize) -> Vec<usize> {
    let mut t = vec![x; arity];
    t[i] = y;
    t
}

/// Whether `op` (arity 3 or 4) is an idempotent weak near-unanimity
/// operation.
pub fn check_wnu(op: &Operation) -> Result<bool> {
    let k = op.arity();
    if !(3..=4).contains(&k) {
        return Err(Error::UnsupportedArity {
            arity: k,
            context: "WNU checks support arity 3 and 4",
        });
    }
    if !op.is_idempotent() {
        return Ok(false);
    }
    let n = op.domain_size();
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            let first = op.apply(&one_off(k, x, y, 0));
            if (1..k).any(|i| op.apply(&one_off(k, x, y, i)) != first) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the ternary WNU `u` and quaternary WNU `v` agree on their
/// one-off-diagonal values: `u(y,x,x) = v(y,x,x,x)`.
pub fn same_polymer(u: &Operation, v: &Operation) -> Result<bool> {
    if u.arity() != 3 || v.arity() != 4 {
        return Err(Error::Precondition(
            "same_polymer needs a ternary and a quaternary operation".into(),
        ));
    }
    if u.domain_size() != v.domain_size() {
        return Err(Error::DomainMismatch(
            "u and v act on different domains".into(),
        ));
    }
    if !check_wnu(u)? {
        return Err(Error::Precondition("u is not a WNU operation".into()));
    }
    if !check_wnu(v)? {
        return Err(Error::Precondition("v is not a WNU operation".into()));
    }
    let n = u.domain_size();
    Ok((0..n).all(|x| (0..n).all(|y| u.apply(&[y, x, x]) == v.apply(&[y, x, x, x]))))
}

/// Whether `op` is a Taylor operation.
///
/// For every coordinate `k` there must be two patterns over the variables
/// `{x, y}`, the first with `x` and the second with `y` at position `k`, whose
/// instantiations agree for all `x, y`. Identifying all other variables of a
/// general Taylor identity with `x` keeps it valid, so two-variable patterns
/// decide the condition.
pub fn is_taylor(op: &Operation) -> bool {
    let k = op.arity();
    let n = op.domain_size();
    let patterns = 1usize << k;
    let instantiate = |p: usize, x: usize, y: usize| -> Vec<usize> {
        (0..k)
            .map(|i| if p >> (k - 1 - i) & 1 == 1 { y } else { x })
            .collect()
    };
    (0..k).all(|coord| {
        let mask = 1usize << (k - 1 - coord);
        (0..patterns).filter(|p| p & mask == 0).any(|left| {
            (0..patterns).filter(|q| q & mask != 0).any(|right| {
                (0..n).all(|x| {
                    (0..n).all(|y| {
                        op.apply(&instantiate(left, x, y)) == op.apply(&instantiate(right, x, y))
                    })
                })
            })
        })
    })
}
