use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::solver::{Assignment, Instance};
use crate::structure::Relation;
use crate::util::{bit, mask_values};

/// Depth-first search with forward checking over a fixed variable order.
struct Backtracker {
    order: Vec<usize>,
    position: Vec<usize>,
    // for each variable: (neighbor, rows) where rows[a] = values of neighbor allowed when var = a
    neighbors: Vec<Vec<(usize, Vec<u64>)>>,
}

impl Backtracker {
    fn new(inst: &Instance, order: Vec<usize>) -> Self {
        let n = inst.domain_size();
        let mut position = vec![0; inst.var_count()];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let mut neighbors = vec![Vec::new(); inst.var_count()];
        for c in inst.constraints() {
            neighbors[c.x].push((c.y, c.rows(n, false)));
            neighbors[c.y].push((c.x, c.rows(n, true)));
        }
        Backtracker {
            order,
            position,
            neighbors,
        }
    }

    /// Extends the assignment from `depth` up to `stop`, calling `visit` at
    /// every consistent assignment of the first `stop` variables of the
    /// order. Returns false once `visit` asks to stop.
    fn run(
        &self,
        depth: usize,
        stop: usize,
        doms: &[u64],
        values: &mut [usize],
        visit: &mut dyn FnMut(&[usize], &[u64]) -> bool,
    ) -> bool {
        if depth == stop {
            return visit(values, doms);
        }
        let var = self.order[depth];
        'values: for a in mask_values(doms[var]) {
            let mut next = doms.to_vec();
            next[var] = bit(a);
            for (w, rows) in &self.neighbors[var] {
                if self.position[*w] > depth {
                    next[*w] &= rows[a];
                    if next[*w] == 0 {
                        continue 'values;
                    }
                } else if next[*w] & rows[a] == 0 {
                    continue 'values;
                }
            }
            values[var] = a;
            if !self.run(depth + 1, stop, &next, values, visit) {
                return false;
            }
        }
        true
    }
}

/// Exhaustive search in ascending variable and value order; returns the
/// lexicographically first solution.
pub fn solve_backtracking(inst: &Instance) -> Option<Assignment> {
    enumerate_solutions(inst, 1).pop()
}

/// Up to `limit` solutions in lexicographic order.
pub fn enumerate_solutions(inst: &Instance, limit: usize) -> Vec<Assignment> {
    let mut out = Vec::new();
    if limit == 0 || inst.is_trivially_unsat() {
        return out;
    }
    let v = inst.var_count();
    let bt = Backtracker::new(inst, (0..v).collect());
    let mut values = vec![0; v];
    bt.run(0, v, inst.potato_masks(), &mut values, &mut |vals, _| {
        out.push(Assignment(vals.to_vec()));
        out.len() < limit
    });
    out
}

/// The projection of the solution set onto the `free` variables.
pub fn realize_relation(inst: &Instance, free: &[usize]) -> Result<Relation> {
    if free.is_empty() {
        return Err(Error::InvalidInstance(
            "at least one free variable is needed".into(),
        ));
    }
    if let Some(&f) = free.iter().find(|&&f| f >= inst.var_count()) {
        return Err(Error::InvalidInstance(format!(
            "unknown variable index {f}"
        )));
    }
    let mut order: Vec<usize> = Vec::new();
    for &f in free {
        if !order.contains(&f) {
            order.push(f);
        }
    }
    let bound = order.len();
    order.extend((0..inst.var_count()).filter(|v| !free.contains(v)));
    let v = inst.var_count();
    let mut tuples = BTreeSet::new();
    if !inst.is_trivially_unsat() {
        let bt = Backtracker::new(inst, order);
        let mut values = vec![0; v];
        bt.run(
            0,
            bound,
            inst.potato_masks(),
            &mut values,
            &mut |vals, doms| {
                let mut rest = vals.to_vec();
                let mut extends = false;
                bt.run(bound, v, doms, &mut rest, &mut |_, _| {
                    extends = true;
                    false
                });
                if extends {
                    tuples.insert(free.iter().map(|&f| vals[f]).collect::<Vec<_>>());
                }
                true
            },
        );
    }
    Relation::new("realized", free.len(), tuples)
}
