//! Finite operations given by complete value tables, preservation of
//! relations and restriction to subsets.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structure::{content_lines, parse_number, parse_tuple, Relation, Structure};
use crate::util::{tuple_at, tuple_index, tuples};
use crate::{MAX_DOMAIN, MAX_OPERATION_ARITY};

/// A total `arity`-ary operation on `0..domain_size`.
///
/// The table is indexed by the mixed-radix encoding of the argument tuple,
/// first argument most significant, so table order is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operation {
    arity: usize,
    domain_size: usize,
    table: Vec<usize>,
}

impl Operation {
    pub fn from_table(domain_size: usize, arity: usize, table: Vec<usize>) -> Result<Self> {
        check_shape(domain_size, arity)?;
        if table.len() != domain_size.pow(arity as u32) {
            return Err(Error::InvalidOperation(format!(
                "table has {} entries, expected {}",
                table.len(),
                domain_size.pow(arity as u32)
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= domain_size) {
            return Err(Error::InvalidOperation(format!(
                "value {v} outside the domain"
            )));
        }
        Ok(Operation {
            arity,
            domain_size,
            table,
        })
    }

    pub fn from_fn(
        domain_size: usize,
        arity: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        check_shape(domain_size, arity)?;
        let table = tuples(domain_size, arity).map(|t| f(&t)).collect();
        Operation::from_table(domain_size, arity, table)
    }

    /// The projection onto coordinate `i` (0-based).
    pub fn projection(domain_size: usize, arity: usize, i: usize) -> Result<Self> {
        if i >= arity {
            return Err(Error::InvalidOperation(format!(
                "projection index {i} for arity {arity}"
            )));
        }
        Operation::from_fn(domain_size, arity, |t| t[i])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        self.table[tuple_index(args, self.domain_size)]
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.domain_size).all(|x| self.apply(&vec![x; self.arity]) == x)
    }

    /// Whether every value lies among its arguments.
    pub fn is_conservative(&self) -> bool {
        tuples(self.domain_size, self.arity).all(|t| t.contains(&self.apply(&t)))
    }

    /// Applies the operation componentwise to `rows`, which must all have the
    /// same length.
    pub fn apply_rows(&self, rows: &[&[usize]]) -> Vec<usize> {
        let width = rows.first().map_or(0, |r| r.len());
        let mut args = vec![0; self.arity];
        (0..width)
            .map(|j| {
                for (a, r) in args.iter_mut().zip(rows) {
                    *a = r[j];
                }
                self.apply(&args)
            })
            .collect()
    }

    pub fn write_table(&self, name: &str, out: &mut String) {
        out.push_str(&format!(
            "op {} {} {}\n",
            name, self.arity, self.domain_size
        ));
        for (i, v) in self.table.iter().enumerate() {
            let t = tuple_at(i, self.domain_size, self.arity);
            out.push_str(&format!("{} -> {}\n", t.iter().join(" "), v));
        }
    }

    pub fn to_text(&self, name: &str) -> String {
        let mut out = String::new();
        self.write_table(name, &mut out);
        out
    }

    /// Parses one `op` block; returns the operation name and the operation.
    pub fn parse(text: &str) -> Result<(String, Operation)> {
        let mut lines = content_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "expected `op`"))?;
        let (name, arity, domain_size) = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["op", name, arity, domain] => (
                name.to_owned(),
                parse_number(arity, ln)?,
                parse_number(domain, ln)?,
            ),
            _ => return Err(Error::parse(ln, "expected `op <name> <arity> <domain>`")),
        };
        check_shape(domain_size, arity).map_err(|e| Error::parse(ln, e.to_string()))?;
        let size = domain_size.pow(arity as u32);
        let mut table = vec![None; size];
        for (ln, line) in lines {
            let (args, value) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(ln, "expected `<args> -> <value>`"))?;
            let args = parse_tuple(args, ln)?;
            let value = parse_number(value.trim(), ln)?;
            if args.len() != arity || args.iter().any(|&a| a >= domain_size) || value >= domain_size
            {
                return Err(Error::parse(ln, "entry does not fit the declared shape"));
            }
            let slot = &mut table[tuple_index(&args, domain_size)];
            if slot.replace(value).is_some() {
                return Err(Error::parse(ln, "duplicate table entry"));
            }
        }
        let table: Option<Vec<usize>> = table.into_iter().collect();
        let table = table.ok_or_else(|| Error::parse(ln, "table is not total"))?;
        Ok((name, Operation::from_table(domain_size, arity, table)?))
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("op"))
    }
}

fn check_shape(domain_size: usize, arity: usize) -> Result<()> {
    if !(1..=MAX_OPERATION_ARITY).contains(&arity) {
        return Err(Error::UnsupportedArity {
            arity,
            context: "operations have arity 1 to 4",
        });
    }
    if domain_size == 0 || domain_size > MAX_DOMAIN {
        return Err(Error::InvalidOperation(format!(
            "domain size {domain_size}"
        )));
    }
    Ok(())
}

/// Whether `op` maps every selection of `op.arity()` rows of `rel` to a row
/// of `rel` when applied componentwise.
pub fn preserves(op: &Operation, rel: &Relation) -> Result<bool> {
    if let Some(m) = rel.max_element() {
        if m >= op.domain_size() {
            return Err(Error::DomainMismatch(format!(
                "relation {} mentions {m}, operation domain has size {}",
                rel.name(),
                op.domain_size()
            )));
        }
    }
    let n = op.domain_size();
    let member = rel.membership(n);
    let rows: Vec<&[usize]> = rel.tuples().collect();
    let k = rows.len();
    if k == 0 {
        return Ok(true);
    }
    let mut pick = vec![0usize; op.arity()];
    let mut args = vec![0usize; op.arity()];
    loop {
        let idx = (0..rel.arity()).fold(0, |idx, j| {
            for (a, &p) in args.iter_mut().zip(&pick) {
                *a = rows[p][j];
            }
            idx * n + op.apply(&args)
        });
        if !member[idx] {
            return Ok(false);
        }
        // advance the row selection odometer
        let mut pos = pick.len();
        loop {
            if pos == 0 {
                return Ok(true);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < k {
                break;
            }
            pick[pos] = 0;
        }
    }
}

/// Whether `op` preserves every relation of `s`.
pub fn is_polymorphism(op: &Operation, s: &Structure) -> Result<bool> {
    if op.domain_size() != s.domain_size() {
        return Err(Error::DomainMismatch(format!(
            "operation on {} elements, structure on {}",
            op.domain_size(),
            s.domain_size()
        )));
    }
    for r in s.relations() {
        if !preserves(op, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restricts `op` to `subset`, reindexing `subset[i]` as `i`.
pub fn restrict_operation(op: &Operation, subset: &[usize]) -> Result<Operation> {
    if subset.is_empty() || !subset.iter().all_unique() {
        return Err(Error::InvalidOperation(
            "subset must be nonempty and duplicate free".into(),
        ));
    }
    if let Some(&e) = subset.iter().find(|&&e| e >= op.domain_size()) {
        return Err(Error::DomainMismatch(format!(
            "element {e} outside the domain"
        )));
    }
    let mut position = vec![None; op.domain_size()];
    for (i, &e) in subset.iter().enumerate() {
        position[e] = Some(i);
    }
    let m = subset.len();
    let mut table = Vec::with_capacity(m.pow(op.arity() as u32));
    for t in tuples(m, op.arity()) {
        let args: Vec<usize> = t.iter().map(|&i| subset[i]).collect();
        let v = op.apply(&args);
        let i = position[v]
            .ok_or_else(|| Error::NotClosed(format!("{args:?} maps to {v}, outside {subset:?}")))?;
        table.push(i);
    }
    Operation::from_table(m, op.arity(), table)
}
