use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::operation::{is_polymorphism, Operation};
use crate::structure::Structure;
use crate::util::{bit, full_mask, mask_of, mask_values, single_value, tuple_at, tuple_index};
use crate::MAX_OPERATION_ARITY;

/// Constraints on a sought polymorphism: which argument tuples must share a
/// value, which tuples have a prescribed value, and whether the operation is
/// idempotent.
#[derive(Clone, Debug)]
pub struct IndicatorQuery {
    domain_size: usize,
    arity: usize,
    parent: Vec<usize>,
    prescribed: Vec<Option<usize>>,
    idempotent: bool,
}

/// A query after class resolution: one search variable per class.
struct Resolved {
    var_of: Vec<usize>,
    fixed: Vec<Option<usize>>,
}

impl IndicatorQuery {
    pub fn new(domain_size: usize, arity: usize) -> Result<Self> {
        if !(1..=MAX_OPERATION_ARITY).contains(&arity) {
            return Err(Error::UnsupportedArity {
                arity,
                context: "polymorphism search supports arity 1 to 4",
            });
        }
        if domain_size == 0 || domain_size > crate::MAX_DOMAIN {
            return Err(Error::InvalidOperation(format!(
                "domain size {domain_size}"
            )));
        }
        let size = domain_size.pow(arity as u32);
        Ok(IndicatorQuery {
            domain_size,
            arity,
            parent: (0..size).collect(),
            prescribed: vec![None; size],
            idempotent: false,
        })
    }

    /// Query for an idempotent weak near-unanimity operation: all tuples with
    /// a single deviating coordinate are identified.
    pub fn wnu(domain_size: usize, arity: usize) -> Result<Self> {
        let mut q = IndicatorQuery::new(domain_size, arity)?.idempotent();
        for x in 0..domain_size {
            for y in (0..domain_size).filter(|&y| y != x) {
                let first = one_off(arity, x, y, 0);
                for i in 1..arity {
                    q.identify(&first, &one_off(arity, x, y, i))?;
                }
            }
        }
        Ok(q)
    }

    pub fn idempotent(mut self) -> Self {
        self.idempotent = true;
        self
    }

    pub fn set_idempotent(&mut self, idempotent: bool) {
        self.idempotent = idempotent;
    }

    pub fn is_idempotent(&self) -> bool {
        self.idempotent
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    fn index(&self, t: &[usize]) -> Result<usize> {
        if t.len() != self.arity || t.iter().any(|&x| x >= self.domain_size) {
            return Err(Error::QueryConflict(format!(
                "tuple {t:?} is not a {}-tuple over {} elements",
                self.arity, self.domain_size
            )));
        }
        Ok(tuple_index(t, self.domain_size))
    }

    fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    /// Forces the operation to take equal values on `a` and `b`.
    pub fn identify(&mut self, a: &[usize], b: &[usize]) -> Result<()> {
        let (ia, ib) = (self.index(a)?, self.index(b)?);
        let (ra, rb) = (self.find(ia), self.find(ib));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
        Ok(())
    }

    /// Prescribes the value of the operation on `t`.
    pub fn prescribe(&mut self, t: &[usize], value: usize) -> Result<()> {
        let i = self.index(t)?;
        if value >= self.domain_size {
            return Err(Error::QueryConflict(format!(
                "value {value} outside the domain"
            )));
        }
        match self.prescribed[i] {
            Some(v) if v != value => Err(Error::QueryConflict(format!(
                "tuple {t:?} prescribed both {v} and {value}"
            ))),
            _ => {
                self.prescribed[i] = Some(value);
                Ok(())
            }
        }
    }

    pub fn prescribed(&self, t: &[usize]) -> Option<usize> {
        self.index(t).ok().and_then(|i| self.prescribed[i])
    }

    /// Class id of every argument tuple, numbered by first occurrence.
    pub fn classes(&self) -> Vec<usize> {
        let mut id_of_root = vec![usize::MAX; self.parent.len()];
        let mut next = 0;
        (0..self.parent.len())
            .map(|i| {
                let r = self.find(i);
                if id_of_root[r] == usize::MAX {
                    id_of_root[r] = next;
                    next += 1;
                }
                id_of_root[r]
            })
            .collect()
    }

    fn resolve(&self) -> Result<Resolved> {
        let var_of = self.classes();
        let count = var_of.iter().max().map_or(0, |m| m + 1);
        let mut fixed: Vec<Option<usize>> = vec![None; count];
        let mut require = |i: usize, v: usize, why: &str| -> Result<()> {
            let slot = &mut fixed[var_of[i]];
            match *slot {
                Some(w) if w != v => Err(Error::QueryConflict(format!(
                    "class of {:?} needs both {w} and {v} ({why})",
                    tuple_at(i, self.domain_size, self.arity)
                ))),
                _ => {
                    *slot = Some(v);
                    Ok(())
                }
            }
        };
        for (i, p) in self.prescribed.iter().enumerate() {
            if let Some(v) = *p {
                require(i, v, "prescription")?;
            }
        }
        if self.idempotent {
            for x in 0..self.domain_size {
                let i = tuple_index(&vec![x; self.arity], self.domain_size);
                require(i, x, "idempotence")?;
            }
        }
        Ok(Resolved { var_of, fixed })
    }
}

fn one_off(arity: usize, x: usize, y: usize, i: usize) -> Vec<usize> {
    let mut t = vec![x; arity];
    t[i] = y;
    t
}

#[derive(Clone, Copy)]
struct Constraint {
    scope: [usize; 3],
    len: usize,
    table: usize,
    repeated: bool,
}

/// The indicator CSP of a query against a structure.
struct Engine {
    n: usize,
    arity: usize,
    var_of: Vec<usize>,
    initial: Vec<u64>,
    tables: Vec<Vec<[usize; 3]>>,
    constraints: Vec<Constraint>,
    watch: Vec<Vec<usize>>,
}

impl Engine {
    fn build(s: &Structure, q: &IndicatorQuery) -> Result<Engine> {
        let n = s.domain_size();
        if q.domain_size != n {
            return Err(Error::DomainMismatch(format!(
                "query over {} elements, structure over {n}",
                q.domain_size
            )));
        }
        let Resolved { var_of, fixed } = q.resolve()?;
        let k = q.arity;
        let mut initial = vec![full_mask(n); fixed.len()];

        // Unary relations restrict the value of every tuple inside them; with
        // enough conservativity this confines each value to the tuple's entries.
        let unary = s.unary_masks();
        for (i, &var) in var_of.iter().enumerate() {
            let entries = mask_of(tuple_at(i, n, k));
            for &u in &unary {
                if entries & !u == 0 {
                    initial[var] &= u;
                }
            }
        }
        for (var, v) in fixed.iter().enumerate() {
            if let Some(v) = *v {
                initial[var] &= bit(v);
            }
        }

        let mut tables = Vec::new();
        let mut constraints = Vec::new();
        let mut seen = HashSet::new();
        for rel in s.relations().iter().filter(|r| r.arity() >= 2) {
            let m = rel.arity();
            if rel.len() == n.pow(m as u32) {
                continue;
            }
            let rows: Vec<&[usize]> = rel.tuples().collect();
            let table_id = tables.len();
            tables.push(
                rows.iter()
                    .map(|r| {
                        let mut t = [0; 3];
                        t[..m].copy_from_slice(r);
                        t
                    })
                    .collect::<Vec<_>>(),
            );
            if rows.is_empty() {
                continue;
            }
            let mut pick = vec![0usize; k];
            'selections: loop {
                let mut scope = [0usize; 3];
                for (j, slot) in scope.iter_mut().enumerate().take(m) {
                    let idx = pick.iter().fold(0, |acc, &p| acc * n + rows[p][j]);
                    *slot = var_of[idx];
                }
                if seen.insert((scope, table_id)) {
                    let repeated = (0..m).any(|a| (a + 1..m).any(|b| scope[a] == scope[b]));
                    constraints.push(Constraint {
                        scope,
                        len: m,
                        table: table_id,
                        repeated,
                    });
                }
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break 'selections;
                    }
                    pos -= 1;
                    pick[pos] += 1;
                    if pick[pos] < rows.len() {
                        break;
                    }
                    pick[pos] = 0;
                }
            }
        }
        let mut watch = vec![Vec::new(); initial.len()];
        for (c, con) in constraints.iter().enumerate() {
            for j in 0..con.len {
                let v = con.scope[j];
                if watch[v].last() != Some(&c) {
                    watch[v].push(c);
                }
            }
        }
        Ok(Engine {
            n,
            arity: k,
            var_of,
            initial,
            tables,
            constraints,
            watch,
        })
    }

    /// Prunes `doms` to generalized arc consistency, starting from `queue`.
    fn propagate(&self, doms: &mut [u64], queue: impl IntoIterator<Item = usize>) -> bool {
        let mut pending = vec![false; self.constraints.len()];
        let mut work = VecDeque::new();
        for c in queue {
            if !pending[c] {
                pending[c] = true;
                work.push_back(c);
            }
        }
        while let Some(c) = work.pop_front() {
            pending[c] = false;
            let con = self.constraints[c];
            let sc = &con.scope[..con.len];
            let mut support = [0u64; 3];
            'rows: for t in &self.tables[con.table] {
                for j in 0..con.len {
                    if doms[sc[j]] & bit(t[j]) == 0 {
                        continue 'rows;
                    }
                }
                if con.repeated {
                    for a in 0..con.len {
                        for b in a + 1..con.len {
                            if sc[a] == sc[b] && t[a] != t[b] {
                                continue 'rows;
                            }
                        }
                    }
                }
                for j in 0..con.len {
                    support[j] |= bit(t[j]);
                }
            }
            for j in 0..con.len {
                let v = sc[j];
                let pruned = doms[v] & support[j];
                if pruned == 0 {
                    return false;
                }
                if pruned != doms[v] {
                    doms[v] = pruned;
                    for &d in &self.watch[v] {
                        if d != c && !pending[d] {
                            pending[d] = true;
                            work.push_back(d);
                        }
                    }
                }
            }
        }
        true
    }

    fn root(&self) -> Option<Vec<u64>> {
        let mut doms = self.initial.clone();
        if doms.contains(&0) {
            return None;
        }
        self.propagate(&mut doms, 0..self.constraints.len())
            .then_some(doms)
    }

    fn assign(&self, doms: &[u64], var: usize, value: usize) -> Option<Vec<u64>> {
        let mut next = doms.to_vec();
        next[var] = bit(value);
        self.propagate(&mut next, self.watch[var].iter().copied())
            .then_some(next)
    }

    /// Most constrained undecided variable among `candidates`, lowest index on ties.
    fn pick(doms: &[u64], candidates: impl Iterator<Item = usize>) -> Option<usize> {
        candidates
            .filter(|&v| doms[v].count_ones() > 1)
            .min_by_key(|&v| (doms[v].count_ones(), v))
    }

    fn solve(&self, doms: Vec<u64>) -> Option<Vec<u64>> {
        let Some(var) = Self::pick(&doms, 0..doms.len()) else {
            return Some(doms);
        };
        for value in mask_values(doms[var]) {
            if let Some(next) = self.assign(&doms, var, value) {
                if let Some(found) = self.solve(next) {
                    return Some(found);
                }
            }
        }
        None
    }

    fn enumerate(&self, doms: Vec<u64>, watched: &[usize], out: &mut BTreeSet<Vec<usize>>) {
        match Self::pick(&doms, watched.iter().copied()) {
            Some(var) => {
                for value in mask_values(doms[var]) {
                    if let Some(next) = self.assign(&doms, var, value) {
                        self.enumerate(next, watched, out);
                    }
                }
            }
            None => {
                let image: Vec<usize> = watched
                    .iter()
                    .map(|&v| single_value(doms[v]).expect("decided"))
                    .collect();
                if !out.contains(&image) && self.solve(doms).is_some() {
                    out.insert(image);
                }
            }
        }
    }

    fn operation(&self, doms: &[u64]) -> Operation {
        let table = self
            .var_of
            .iter()
            .map(|&v| single_value(doms[v]).expect("complete assignment"))
            .collect();
        Operation::from_table(self.n, self.arity, table).expect("well-formed table")
    }
}

fn satisfies_query(op: &Operation, q: &IndicatorQuery) -> bool {
    let classes = q.classes();
    let mut value_of_class = vec![None; classes.len()];
    for (i, &c) in classes.iter().enumerate() {
        let v = op.table()[i];
        if *value_of_class[c].get_or_insert(v) != v {
            return false;
        }
        if q.prescribed[i].is_some_and(|p| p != v) {
            return false;
        }
    }
    !q.idempotent || op.is_idempotent()
}

/// Finds a polymorphism of `s` satisfying `q`, or `None` when none exists.
///
/// The search is complete. A returned operation is re-checked against the
/// structure and the query before it is handed out.
pub fn find_polymorphism(s: &Structure, q: &IndicatorQuery) -> Result<Option<Operation>> {
    let engine = Engine::build(s, q)?;
    let Some(found) = engine.root().and_then(|doms| engine.solve(doms)) else {
        return Ok(None);
    };
    let op = engine.operation(&found);
    if !is_polymorphism(&op, s)? || !satisfies_query(&op, q) {
        return Err(Error::Internal("search returned an invalid witness".into()));
    }
    Ok(Some(op))
}

/// The set of value sequences `(t(w_1), ..., t(w_m))` over all polymorphisms
/// `t` of `s` satisfying `q`.
pub fn enumerate_images(
    s: &Structure,
    q: &IndicatorQuery,
    watched: &[Vec<usize>],
) -> Result<BTreeSet<Vec<usize>>> {
    let engine = Engine::build(s, q)?;
    let vars = watched
        .iter()
        .map(|w| q.index(w).map(|i| engine.var_of[i]))
        .collect::<Result<Vec<_>>>()?;
    let mut out = BTreeSet::new();
    if let Some(doms) = engine.root() {
        engine.enumerate(doms, &vars, &mut out);
    }
    Ok(out)
}

/// Images of the watched tuples under every `arity`-ary polymorphism of `s`.
pub fn enumerate_polymorphism_images(
    s: &Structure,
    arity: usize,
    watched: &[Vec<usize>],
) -> Result<BTreeSet<Vec<usize>>> {
    let q = IndicatorQuery::new(s.domain_size(), arity)?;
    enumerate_images(s, &q, watched)
}
