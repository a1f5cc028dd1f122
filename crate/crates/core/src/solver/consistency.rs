use std::collections::VecDeque;

use crate::solver::Instance;
use crate::util::{bit, mask_values};

/// Removes potato values without support in some binary constraint, until a
/// fixpoint. The solution set is unchanged.
pub fn arc_consistency(inst: &Instance) -> Instance {
    let n = inst.domain_size();
    let mut doms = inst.potato_masks().to_vec();
    if doms.contains(&0) {
        return inst.clone();
    }
    // arcs (var, other, rows): var keeps a iff rows[a] meets the other potato
    let mut arcs = Vec::new();
    for c in inst.constraints() {
        arcs.push((c.x, c.y, c.rows(n, false)));
        arcs.push((c.y, c.x, c.rows(n, true)));
    }
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); inst.var_count()];
    for (i, &(_, other, _)) in arcs.iter().enumerate() {
        incoming[other].push(i);
    }
    let mut queued = vec![true; arcs.len()];
    let mut work: VecDeque<usize> = (0..arcs.len()).collect();
    while let Some(i) = work.pop_front() {
        queued[i] = false;
        let (var, other, ref rows) = arcs[i];
        let kept = mask_values(doms[var])
            .filter(|&a| rows[a] & doms[other] != 0)
            .fold(0, |m, a| m | bit(a));
        if kept == doms[var] {
            continue;
        }
        doms[var] = kept;
        if kept == 0 {
            break;
        }
        // arcs whose support lives in `var` must be revisited
        for &j in &incoming[var] {
            if !queued[j] {
                queued[j] = true;
                work.push_back(j);
            }
        }
    }
    inst.with_potatoes(doms)
}

/// Pair relations produced by (2,3)-consistency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFamily {
    vars: usize,
    domain_size: usize,
    // rows[(i * vars + j) * domain_size + a] = values b with (a, b) allowed for (i, j)
    rows: Vec<u64>,
}

impl PairFamily {
    fn row(&self, i: usize, j: usize, a: usize) -> u64 {
        self.rows[(i * self.vars + j) * self.domain_size + a]
    }

    fn row_mut(&mut self, i: usize, j: usize, a: usize) -> &mut u64 {
        &mut self.rows[(i * self.vars + j) * self.domain_size + a]
    }

    pub fn var_count(&self) -> usize {
        self.vars
    }

    /// Allowed value pairs for variables `i` and `j`.
    pub fn relation(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        (0..self.domain_size)
            .flat_map(|a| mask_values(self.row(i, j, a)).map(move |b| (a, b)))
            .collect()
    }

    /// Remaining values of variable `i`.
    pub fn potato(&self, i: usize) -> Vec<usize> {
        (0..self.domain_size)
            .filter(|&a| self.row(i, i, a) != 0)
            .collect()
    }

    fn is_empty(&self, i: usize, j: usize) -> bool {
        (0..self.domain_size).all(|a| self.row(i, j, a) == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoThree {
    Consistent(PairFamily),
    Unsat,
}

impl TwoThree {
    pub fn is_consistent(&self) -> bool {
        matches!(self, TwoThree::Consistent(_))
    }
}

/// (2,3)-consistency: one relation per pair of variables (the potato on the
/// diagonal), pruned until every allowed pair `(a, b)` for `(i, j)` extends
/// to every third variable `k` by some `c` with `(a, c)` allowed for `(i, k)`
/// and `(b, c)` allowed for `(j, k)`.
///
/// Pairs are processed from a FIFO worklist seeded in lexicographic order.
/// Returns [`TwoThree::Unsat`] iff some pair relation becomes empty.
pub fn two_three_consistency(inst: &Instance) -> TwoThree {
    let v = inst.var_count();
    let n = inst.domain_size();
    if inst.is_trivially_unsat() {
        return TwoThree::Unsat;
    }
    let potatoes = inst.potato_masks();
    let mut fam = PairFamily {
        vars: v,
        domain_size: n,
        rows: vec![0; v * v * n],
    };
    for i in 0..v {
        for j in 0..v {
            for a in mask_values(potatoes[i]) {
                *fam.row_mut(i, j, a) = if i == j { bit(a) } else { potatoes[j] };
            }
        }
    }
    for c in inst.constraints() {
        let fwd = c.rows(n, false);
        let bwd = c.rows(n, true);
        for a in 0..n {
            *fam.row_mut(c.x, c.y, a) &= fwd[a];
            *fam.row_mut(c.y, c.x, a) &= bwd[a];
        }
    }

    let mut queued = vec![false; v * v];
    let mut work = VecDeque::new();
    for i in 0..v {
        for j in i..v {
            queued[i * v + j] = true;
            work.push_back((i, j));
        }
    }
    while let Some((i, j)) = work.pop_front() {
        queued[i * v + j] = false;
        let mut changed = false;
        for a in 0..n {
            for b in mask_values(fam.row(i, j, a)) {
                let extends = (0..v).all(|k| fam.row(i, k, a) & fam.row(j, k, b) != 0);
                if !extends {
                    *fam.row_mut(i, j, a) &= !bit(b);
                    *fam.row_mut(j, i, b) &= !bit(a);
                    changed = true;
                }
            }
        }
        if !changed {
            continue;
        }
        if fam.is_empty(i, j) {
            return TwoThree::Unsat;
        }
        for k in 0..v {
            for p in [i, j] {
                let (x, y) = (p.min(k), p.max(k));
                if !queued[x * v + y] {
                    queued[x * v + y] = true;
                    work.push_back((x, y));
                }
            }
        }
    }
    if (0..v).any(|i| fam.is_empty(i, i)) {
        return TwoThree::Unsat;
    }
    TwoThree::Consistent(fam)
}
