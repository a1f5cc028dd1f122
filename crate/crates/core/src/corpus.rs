//! Seeded generators for structures and instances, and a digraph importer.
//!
//! Randomness comes from ChaCha8 seeded through `SeedableRng::seed_from_u64`
//! and consumed only through raw 64-bit outputs, reduced as follows:
//!
//! * `below(n)`: `(r * n) >> 64` in 128-bit arithmetic;
//! * `chance(num, den)`: `r * den < num << 64` in 128-bit arithmetic.
//!
//! Draw order is part of the format and is pinned by [`GENERATOR_VERSION`].

use std::collections::BTreeSet;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::solver::Instance;
use crate::structure::{content_lines, parse_number, Relation, Structure};

/// Bumped whenever a generator consumes randomness differently.
pub const GENERATOR_VERSION: u32 = 1;

/// Deterministic random source used by every generator of this module.
pub struct CorpusRng(ChaCha8Rng);

impl CorpusRng {
    pub fn new(seed: u64) -> Self {
        CorpusRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform value in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() as u128) * (den as u128) < (num as u128) << 64
    }
}

/// Parameters of [`random_structure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub seed: u64,
    pub domain_size: usize,
    pub relation_count: usize,
    /// Probability `(numerator, denominator)` that a pair enters a relation.
    pub density: (u32, u32),
    pub conservativity: u8,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        let (num, den) = self.density;
        if !(2..=4).contains(&self.domain_size) {
            return Err(Error::Precondition(format!(
                "generator domain size {} not in 2..=4",
                self.domain_size
            )));
        }
        if num == 0 || den == 0 || num > den {
            return Err(Error::Precondition(format!(
                "density {num}/{den} not in (0, 1]"
            )));
        }
        if self.conservativity > 3 {
            return Err(Error::Precondition(format!(
                "conservativity {}",
                self.conservativity
            )));
        }
        if self.relation_count > 16 {
            return Err(Error::Precondition(format!(
                "{} relations requested",
                self.relation_count
            )));
        }
        Ok(())
    }
}

/// Binary relations `E0, E1, ...`; each pair of the square is tested in
/// lexicographic order, relation by relation. The conservative closure at the
/// requested level is applied last.
pub fn random_structure(spec: &GenSpec) -> Result<Structure> {
    spec.validate()?;
    let n = spec.domain_size;
    let (num, den) = spec.density;
    let mut rng = CorpusRng::new(spec.seed);
    let mut relations = Vec::with_capacity(spec.relation_count);
    for r in 0..spec.relation_count {
        let mut tuples = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if rng.chance(num, den) {
                    tuples.push([a, b]);
                }
            }
        }
        relations.push(Relation::new(format!("E{r}"), 2, tuples)?);
    }
    Structure::new(n, relations)?.conservative_closure(spec.conservativity)
}

/// A random instance over `s` with `var_count` variables `x0, x1, ...`.
///
/// Each variable draws its potato from the unary relations of `s`, or the
/// whole domain, uniformly. Each pair of variables `i < j` gets a constraint
/// with probability 1/2: a uniformly chosen binary relation of `s` or
/// equality, placed on `(x_i, x_j)` or `(x_j, x_i)` with equal odds.
pub fn random_instance(s: &Structure, seed: u64, var_count: usize) -> Result<Instance> {
    if var_count > 8 {
        return Err(Error::Precondition(format!(
            "{var_count} variables requested, at most 8 supported"
        )));
    }
    let n = s.domain_size();
    let mut rng = CorpusRng::new(seed);
    let unary: Vec<&Relation> = s.unary_relations().collect();
    let mut binary: Vec<Relation> = s.binary_relations().cloned().collect();
    binary.push(Relation::equality(n));
    let mut inst = Instance::new(n)?;
    for v in 0..var_count {
        let pick = rng.below(unary.len() + 1);
        let x = inst.add_free_variable(format!("x{v}"))?;
        if let Some(rel) = unary.get(pick) {
            inst.add_unary(x, rel)?;
        }
    }
    for i in 0..var_count {
        for j in i + 1..var_count {
            if !rng.chance(1, 2) {
                continue;
            }
            let rel = binary[rng.below(binary.len())].clone();
            if rng.chance(1, 2) {
                inst.add_binary(i, j, rel)?;
            } else {
                inst.add_binary(j, i, rel)?;
            }
        }
    }
    Ok(inst)
}

/// Reads an edge list (`u v` per line, `#` comments) as a structure with a
/// single binary relation `E`.
pub fn import_digraph(text: &str, domain_size: usize) -> Result<Structure> {
    let mut edges = BTreeSet::new();
    for (ln, line) in content_lines(text) {
        let words: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = words[..] else {
            return Err(Error::parse(ln, format!("expected `u v`, found `{line}`")));
        };
        let (u, v) = (parse_number(u, ln)?, parse_number(v, ln)?);
        if u >= domain_size || v >= domain_size {
            return Err(Error::parse(
                ln,
                format!("edge {u} {v} leaves the domain of size {domain_size}"),
            ));
        }
        edges.insert([u, v]);
    }
    Structure::new(domain_size, vec![Relation::new("E", 2, edges)?])
}
