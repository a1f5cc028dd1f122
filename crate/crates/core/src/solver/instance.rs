use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structure::{content_lines, parse_number, Relation};
use crate::util::{bit, mask_of, mask_values};
use crate::MAX_DOMAIN;

/// A binary constraint `(value of x, value of y) in relation`, with `x != y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryConstraint {
    pub x: usize,
    pub y: usize,
    pub relation: Relation,
}

impl BinaryConstraint {
    /// `rows[a]` is the set of values of `y` allowed when `x = a`; with
    /// `transpose` the roles of `x` and `y` are swapped.
    pub(crate) fn rows(&self, domain_size: usize, transpose: bool) -> Vec<u64> {
        let mut rows = vec![0u64; domain_size];
        for t in self.relation.tuples() {
            let (a, b) = if transpose {
                (t[1], t[0])
            } else {
                (t[0], t[1])
            };
            rows[a] |= bit(b);
        }
        rows
    }
}

/// A CSP instance whose unary constraints have been folded into per-variable
/// candidate sets (potatoes).
///
/// An instance with an empty potato is kept as is and reports itself as
/// trivially unsatisfiable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    domain_size: usize,
    names: Vec<String>,
    index: HashMap<String, usize>,
    potatoes: Vec<u64>,
    constraints: Vec<BinaryConstraint>,
}

impl Instance {
    pub fn new(domain_size: usize) -> Result<Self> {
        if domain_size == 0 || domain_size > MAX_DOMAIN {
            return Err(Error::InvalidInstance(format!("domain size {domain_size}")));
        }
        Ok(Instance {
            domain_size,
            names: Vec::new(),
            index: HashMap::new(),
            potatoes: Vec::new(),
            constraints: Vec::new(),
        })
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        potato: impl IntoIterator<Item = usize>,
    ) -> Result<usize> {
        let name = name.into();
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == ':' || c == ',') {
            return Err(Error::InvalidInstance(format!(
                "bad variable name {name:?}"
            )));
        }
        if self.index.contains_key(&name) {
            return Err(Error::InvalidInstance(format!("duplicate variable {name}")));
        }
        let values: Vec<usize> = potato.into_iter().collect();
        if let Some(v) = values.iter().find(|&&v| v >= self.domain_size) {
            return Err(Error::DomainMismatch(format!(
                "value {v} outside the domain"
            )));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.potatoes.push(mask_of(values));
        Ok(id)
    }

    /// Adds a variable whose potato is the whole domain.
    pub fn add_free_variable(&mut self, name: impl Into<String>) -> Result<usize> {
        self.add_variable(name, 0..self.domain_size)
    }

    fn check_var(&self, v: usize) -> Result<()> {
        if v >= self.names.len() {
            return Err(Error::InvalidInstance(format!(
                "unknown variable index {v}"
            )));
        }
        Ok(())
    }

    /// Intersects the potato of `var` with a unary relation.
    pub fn add_unary(&mut self, var: usize, relation: &Relation) -> Result<()> {
        self.check_var(var)?;
        let mask = relation.unary_mask().ok_or_else(|| {
            Error::InvalidInstance(format!("relation {} is not unary", relation.name()))
        })?;
        self.potatoes[var] &= mask;
        Ok(())
    }

    pub fn add_binary(&mut self, x: usize, y: usize, relation: Relation) -> Result<()> {
        self.check_var(x)?;
        self.check_var(y)?;
        if relation.arity() != 2 {
            return Err(Error::InvalidInstance(format!(
                "constraint relation {} has arity {}",
                relation.name(),
                relation.arity()
            )));
        }
        if relation
            .max_element()
            .is_some_and(|m| m >= self.domain_size)
        {
            return Err(Error::DomainMismatch(format!(
                "relation {} leaves the domain",
                relation.name()
            )));
        }
        if x == y {
            // a one-variable scope: keep the diagonal
            let diag = mask_of(relation.tuples().filter(|t| t[0] == t[1]).map(|t| t[0]));
            self.potatoes[x] &= diag;
            return Ok(());
        }
        self.constraints.push(BinaryConstraint { x, y, relation });
        Ok(())
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn potato(&self, var: usize) -> Vec<usize> {
        mask_values(self.potatoes[var]).collect()
    }

    pub(crate) fn potato_mask(&self, var: usize) -> u64 {
        self.potatoes[var]
    }

    pub(crate) fn potato_masks(&self) -> &[u64] {
        &self.potatoes
    }

    pub(crate) fn with_potatoes(&self, potatoes: Vec<u64>) -> Instance {
        debug_assert!(potatoes
            .iter()
            .zip(&self.potatoes)
            .all(|(new, old)| new & !old == 0));
        Instance {
            potatoes,
            ..self.clone()
        }
    }

    pub fn constraints(&self) -> &[BinaryConstraint] {
        &self.constraints
    }

    /// Whether some potato is empty.
    pub fn is_trivially_unsat(&self) -> bool {
        self.potatoes.contains(&0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("instance\n");
        for (i, name) in self.names.iter().enumerate() {
            let values = mask_values(self.potatoes[i]).join(" ");
            out.push_str(format!("var {name} : {values}").trim_end());
            out.push('\n');
        }
        for c in &self.constraints {
            let pairs = c
                .relation
                .tuples()
                .map(|t| format!("{} {}", t[0], t[1]))
                .join(" ");
            out.push_str(
                format!("con {} {} : {pairs}", self.names[c.x], self.names[c.y]).trim_end(),
            );
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }

    /// Parses the instance text format over a domain of the given size.
    pub fn parse(text: &str, domain_size: usize) -> Result<Instance> {
        let mut inst = Instance::new(domain_size)?;
        let mut lines = content_lines(text);
        match lines.next() {
            Some((_, "instance")) => {}
            Some((ln, _)) => return Err(Error::parse(ln, "expected `instance`")),
            None => return Err(Error::parse(1, "expected `instance`")),
        }
        let mut closed = false;
        for (ln, line) in lines.by_ref() {
            if line == "end" {
                closed = true;
                break;
            }
            let (head, values) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln, "expected `:`"))?;
            let values = values
                .split_whitespace()
                .map(|w| parse_number(w, ln))
                .collect::<Result<Vec<_>>>()?;
            if let Some(&v) = values.iter().find(|&&v| v >= domain_size) {
                return Err(Error::parse(ln, format!("value {v} outside the domain")));
            }
            let lookup = |name: &str| {
                inst.var_index(name)
                    .ok_or_else(|| Error::parse(ln, format!("undeclared variable {name}")))
            };
            match head.split_whitespace().collect::<Vec<_>>()[..] {
                ["var", name] => {
                    inst.add_variable(name, values)
                        .map_err(|e| Error::parse(ln, e.to_string()))?;
                }
                ["con", x, y] => {
                    if values.len() % 2 != 0 {
                        return Err(Error::parse(ln, "constraint tuples come in pairs"));
                    }
                    let (x, y) = (lookup(x)?, lookup(y)?);
                    let name = format!("c{}", inst.constraints.len());
                    let rel = Relation::new(name, 2, values.chunks(2))?;
                    inst.add_binary(x, y, rel)
                        .map_err(|e| Error::parse(ln, e.to_string()))?;
                }
                _ => return Err(Error::parse(ln, format!("unexpected line `{line}`"))),
            }
        }
        if !closed {
            return Err(Error::parse(
                text.lines().count().max(1),
                "instance has no `end`",
            ));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "text after `end`"));
        }
        Ok(inst)
    }
}

/// A total map from variables to domain elements, indexed by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, var: usize) -> usize {
        self.0[var]
    }

    /// Whether every potato and every constraint is respected.
    pub fn is_solution(&self, inst: &Instance) -> bool {
        self.0.len() == inst.var_count()
            && self
                .0
                .iter()
                .enumerate()
                .all(|(v, &a)| inst.potato_mask(v) & bit(a) != 0)
            && inst
                .constraints()
                .iter()
                .all(|c| c.relation.contains(&[self.0[c.x], self.0[c.y]]))
    }

    pub fn to_text(&self, inst: &Instance) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(v, a)| format!("{} = {a}\n", inst.name(v)))
            .collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}
