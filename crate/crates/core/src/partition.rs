//! Partitions of a finite domain: meet, join and compatibility with
//! operations.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::operation::Operation;
use crate::structure::{content_lines, parse_tuple, Relation};
use crate::util::tuples;

/// An equivalence relation on `0..len`, stored as a block id per element.
///
/// Block ids are numbered by first occurrence, so equal partitions have
/// equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
}

impl Partition {
    /// Normalizes arbitrary labels into a partition.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut renumber = std::collections::HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = renumber.len();
                *renumber.entry(*l).or_insert(next)
            })
            .collect();
        Partition { block_of }
    }

    pub fn from_blocks(size: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; size];
        for (id, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= size {
                    return Err(Error::DomainMismatch(format!(
                        "element {e} outside 0..{size}"
                    )));
                }
                if labels[e] != usize::MAX {
                    return Err(Error::InvalidRelation(format!(
                        "element {e} is in two blocks"
                    )));
                }
                labels[e] = id;
            }
        }
        if let Some(e) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidRelation(format!(
                "element {e} is in no block"
            )));
        }
        Ok(Partition::from_labels(&labels))
    }

    /// The partition into singletons (the least equivalence).
    pub fn singletons(size: usize) -> Self {
        Partition {
            block_of: (0..size).collect(),
        }
    }

    /// The partition with a single block.
    pub fn total(size: usize) -> Self {
        Partition {
            block_of: vec![0; size],
        }
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_of(&self, e: usize) -> usize {
        self.block_of[e]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn block_count(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (e, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(e);
        }
        blocks
    }

    fn check_same_size(&self, other: &Partition) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DomainMismatch(format!(
                "partitions of {} and {} elements",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_same_size(other)?;
        let pairs: Vec<usize> = self
            .block_of
            .iter()
            .zip(&other.block_of)
            .map(|(&a, &b)| a * other.len() + b)
            .collect();
        Ok(Partition::from_labels(&pairs))
    }

    /// Finest partition coarser than both: the transitive closure of the union.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_same_size(other)?;
        let mut parent: Vec<usize> = (0..self.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for p in [self, other] {
            for block in p.blocks() {
                for (&a, &b) in block.iter().tuple_windows() {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let labels: Vec<usize> = (0..self.len()).map(|i| find(&mut parent, i)).collect();
        Ok(Partition::from_labels(&labels))
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.len() == other.len()
            && (0..self.len())
                .tuple_combinations()
                .all(|(a, b)| !self.related(a, b) || other.related(a, b))
    }

    /// The equivalence relation as a binary relation.
    pub fn relation(&self, name: &str) -> Relation {
        let n = self.len();
        Relation::new(
            name,
            2,
            (0..n)
                .cartesian_product(0..n)
                .filter(|&(a, b)| self.related(a, b))
                .map(|(a, b)| [a, b]),
        )
        .expect("equivalence relation")
    }

    /// `part <name>` followed by one block per line and `end`.
    pub fn to_text(&self, name: &str) -> String {
        let mut out = format!("part {name}\n");
        for block in self.blocks() {
            out.push_str(&block.iter().join(" "));
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str, size: usize) -> Result<(String, Partition)> {
        let mut lines = content_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "expected `part <name>`"))?;
        let name = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["part", name] => name.to_owned(),
            _ => return Err(Error::parse(ln, "expected `part <name>`")),
        };
        let mut blocks = Vec::new();
        for (ln, line) in lines {
            if line == "end" {
                let p = Partition::from_blocks(size, &blocks)
                    .map_err(|e| Error::parse(ln, e.to_string()))?;
                return Ok((name, p));
            }
            blocks.push(parse_tuple(line, ln)?);
        }
        Err(Error::parse(ln, "partition has no `end`"))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self.blocks();
        write!(
            f,
            "{{{}}}",
            blocks
                .iter()
                .map(|b| format!("{{{}}}", b.iter().join(",")))
                .join(", ")
        )
    }
}

/// Whether `p` is a congruence for every operation in `ops`: related
/// arguments in every coordinate give related results.
pub fn is_invariant_partition(p: &Partition, ops: &[Operation]) -> Result<bool> {
    let blocks = p.blocks();
    for op in ops {
        if op.domain_size() != p.len() {
            return Err(Error::DomainMismatch(format!(
                "operation on {} elements, partition of {}",
                op.domain_size(),
                p.len()
            )));
        }
        for u in tuples(p.len(), op.arity()) {
            let value = op.apply(&u);
            let related = u
                .iter()
                .map(|&x| blocks[p.block_of(x)].iter().copied())
                .multi_cartesian_product();
            for w in related {
                if !p.related(value, op.apply(&w)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
