//! Relations, relational structures, conservative closure and the structure
//! text format.
//!
//! The text format is line oriented:
//!
//! ```text
//! domain 3
//! conservative 3
//! rel E 2
//! 0 1
//! 1 2
//! end
//! ```
//!
//! `#` starts a comment. A `conservative <k>` line closes the parsed structure
//! under all unary relations of size at most `k`. Serialization writes every
//! relation explicitly, so parsing the output of [`Structure::to_text`]
//! reproduces the same structure byte for byte.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::util::mask_of;
use crate::{MAX_DOMAIN, MAX_RELATION_ARITY};

/// A finitary relation given by an explicit, deduplicated tuple set.
///
/// Tuples are kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    name: String,
    arity: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl Relation {
    pub fn new<I, T>(name: impl Into<String>, arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let name = name.into();
        if arity == 0 {
            return Err(Error::InvalidRelation(format!(
                "relation {name} has arity 0"
            )));
        }
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::InvalidRelation(format!(
                "bad relation name {name:?}"
            )));
        }
        let mut set = BTreeSet::new();
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(Error::InvalidRelation(format!(
                    "tuple {t:?} of relation {name} does not have arity {arity}"
                )));
            }
            set.insert(t.to_vec());
        }
        Ok(Relation {
            name,
            arity,
            tuples: set,
        })
    }

    /// The unary relation containing exactly `elements`.
    pub fn unary(name: impl Into<String>, elements: impl IntoIterator<Item = usize>) -> Self {
        Relation::new(name, 1, elements.into_iter().map(|e| [e])).expect("unary relation")
    }

    /// Equality on `0..domain_size`.
    pub fn equality(domain_size: usize) -> Self {
        Relation::new("eq", 2, (0..domain_size).map(|a| [a, a])).expect("equality relation")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples.contains(t)
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.tuples.iter().map(Vec::as_slice)
    }

    /// Largest element occurring in some tuple.
    pub fn max_element(&self) -> Option<usize> {
        self.tuples.iter().flatten().copied().max()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// For a unary relation, its elements as a bit mask.
    pub(crate) fn unary_mask(&self) -> Option<u64> {
        (self.arity == 1).then(|| mask_of(self.tuples.iter().map(|t| t[0])))
    }

    /// Membership table indexed by the mixed-radix encoding of a tuple.
    pub(crate) fn membership(&self, domain_size: usize) -> Vec<bool> {
        let mut table = vec![false; domain_size.pow(self.arity as u32)];
        for t in &self.tuples {
            table[crate::util::tuple_index(t, domain_size)] = true;
        }
        table
    }

    /// Writes the `rel` block of the structure text format.
    pub fn write_block(&self, out: &mut String) {
        out.push_str(&format!("rel {} {}\n", self.name, self.arity));
        for t in &self.tuples {
            out.push_str(&t.iter().join(" "));
            out.push('\n');
        }
        out.push_str("end\n");
    }
}

/// A finite relational structure on the domain `0..domain_size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    domain_size: usize,
    relations: Vec<Relation>,
    conservativity: u8,
}

impl Structure {
    pub fn new(domain_size: usize, relations: Vec<Relation>) -> Result<Self> {
        if domain_size == 0 || domain_size > MAX_DOMAIN {
            return Err(Error::InvalidStructure(format!(
                "domain size {domain_size} outside 1..={MAX_DOMAIN}"
            )));
        }
        let mut names = HashSet::new();
        for r in &relations {
            if r.arity() > MAX_RELATION_ARITY {
                return Err(Error::UnsupportedArity {
                    arity: r.arity(),
                    context: "basic relations have arity at most 3",
                });
            }
            if let Some(m) = r.max_element() {
                if m >= domain_size {
                    return Err(Error::DomainMismatch(format!(
                        "relation {} mentions {m} but the domain has size {domain_size}",
                        r.name()
                    )));
                }
            }
            if !names.insert(r.name()) {
                return Err(Error::InvalidStructure(format!(
                    "duplicate relation name {}",
                    r.name()
                )));
            }
        }
        Ok(Structure {
            domain_size,
            relations,
            conservativity: 0,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name() == name)
    }

    pub fn binary_relations(&self) -> impl Iterator<Item = &Relation> + '_ {
        self.relations.iter().filter(|r| r.arity() == 2)
    }

    pub fn unary_relations(&self) -> impl Iterator<Item = &Relation> + '_ {
        self.relations.iter().filter(|r| r.arity() == 1)
    }

    pub fn max_arity(&self) -> usize {
        self.relations
            .iter()
            .map(Relation::arity)
            .max()
            .unwrap_or(0)
    }

    /// Declared conservativity level (set by [`Structure::conservative_closure`]).
    pub fn conservativity(&self) -> u8 {
        self.conservativity
    }

    /// The largest `k <= 3` such that every nonempty subset of the domain of
    /// size at most `k` is present as a unary relation.
    pub fn effective_conservativity(&self) -> u8 {
        let present: HashSet<u64> = self
            .unary_relations()
            .filter_map(Relation::unary_mask)
            .collect();
        let mut level = 0;
        for size in 1..=3u8 {
            let size_us = size as usize;
            if size_us <= self.domain_size
                && !(0..self.domain_size)
                    .combinations(size_us)
                    .all(|c| present.contains(&mask_of(c)))
            {
                break;
            }
            level = size;
        }
        level
    }

    /// Adds every unary relation of size at most `k` that is not already
    /// present and records `k` as the declared level. Level 0 adds nothing.
    pub fn conservative_closure(&self, k: u8) -> Result<Structure> {
        if k > 3 {
            return Err(Error::InvalidStructure(format!(
                "conservativity level {k} outside 0..=3"
            )));
        }
        let mut present: HashSet<u64> = self
            .unary_relations()
            .filter_map(Relation::unary_mask)
            .collect();
        let mut names: HashSet<String> =
            self.relations.iter().map(|r| r.name().to_owned()).collect();
        let mut relations = self.relations.clone();
        for size in 1..=(k as usize).min(self.domain_size) {
            for subset in (0..self.domain_size).combinations(size) {
                if !present.insert(mask_of(subset.iter().copied())) {
                    continue;
                }
                let mut name = format!("u{}", subset.iter().join("_"));
                while names.contains(&name) {
                    name.push('\'');
                }
                names.insert(name.clone());
                relations.push(Relation::unary(name, subset));
            }
        }
        Ok(Structure {
            domain_size: self.domain_size,
            relations,
            conservativity: self.conservativity.max(k),
        })
    }

    /// Whether every nonempty subset of size at most `k` is a unary relation.
    pub fn is_conservative(&self, k: u8) -> bool {
        self.effective_conservativity() >= k
    }

    /// Unary relations as element masks.
    pub(crate) fn unary_masks(&self) -> Vec<u64> {
        self.unary_relations()
            .filter_map(Relation::unary_mask)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("domain {}\n", self.domain_size);
        if self.conservativity > 0 {
            out.push_str(&format!("conservative {}\n", self.conservativity));
        }
        for r in &self.relations {
            r.write_block(&mut out);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Structure> {
        let mut lines = content_lines(text);
        let (ln, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "expected `domain <n>`"))?;
        let domain_size = match first.split_whitespace().collect::<Vec<_>>()[..] {
            ["domain", n] => parse_number(n, ln)?,
            _ => return Err(Error::parse(ln, "expected `domain <n>`")),
        };
        let mut conservative = None;
        let mut relations = Vec::new();
        while let Some((ln, line)) = lines.next() {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[..] {
                ["conservative", k] if relations.is_empty() && conservative.is_none() => {
                    conservative = Some(parse_number(k, ln)? as u8);
                }
                ["rel", name, arity] => {
                    let arity = parse_number(arity, ln)?;
                    let mut tuples = Vec::new();
                    loop {
                        let (tl, tline) = lines.next().ok_or_else(|| {
                            Error::parse(ln, format!("relation {name} has no `end`"))
                        })?;
                        if tline == "end" {
                            break;
                        }
                        let t = parse_tuple(tline, tl)?;
                        if t.len() != arity {
                            return Err(Error::parse(
                                tl,
                                format!("tuple of length {} in relation of arity {arity}", t.len()),
                            ));
                        }
                        if let Some(&m) = t.iter().max() {
                            if m >= domain_size {
                                return Err(Error::parse(
                                    tl,
                                    format!("element {m} outside the domain"),
                                ));
                            }
                        }
                        tuples.push(t);
                    }
                    let rel = Relation::new(name, arity, tuples)
                        .map_err(|e| Error::parse(ln, e.to_string()))?;
                    relations.push(rel);
                }
                _ => return Err(Error::parse(ln, format!("unexpected line `{line}`"))),
            }
        }
        let s =
            Structure::new(domain_size, relations).map_err(|e| Error::parse(1, e.to_string()))?;
        match conservative {
            Some(0) | None => Ok(s),
            Some(k) => s
                .conservative_closure(k)
                .map_err(|e| Error::parse(2, e.to_string())),
        }
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Structure::parse(s)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub(crate) fn parse_number(word: &str, line: usize) -> Result<usize> {
    word.parse()
        .map_err(|_| Error::parse(line, format!("expected a number, found `{word}`")))
}

pub(crate) fn parse_tuple(line: &str, ln: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|w| parse_number(w, ln))
        .collect()
}
