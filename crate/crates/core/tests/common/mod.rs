//! Brute-force reference implementations, written without the search engine
//! so they can serve as independent oracles.

#![allow(dead_code)]

use concsp::{Instance, Structure};

/// All argument tuples of length `k` over `0..n`, first coordinate most
/// significant.
pub fn arg_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn index_of(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &v| acc * n + v)
}

/// An operation as a bare value table indexed like [`arg_tuples`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub n: usize,
    pub k: usize,
    pub values: Vec<usize>,
}

impl Table {
    pub fn apply(&self, args: &[usize]) -> usize {
        self.values[index_of(args, self.n)]
    }

    pub fn is_projection(&self) -> bool {
        (0..self.k).any(|i| {
            arg_tuples(self.n, self.k)
                .iter()
                .all(|t| self.apply(t) == t[i])
        })
    }
}

/// Every `k`-ary operation on `0..n`.
pub fn all_tables(n: usize, k: usize) -> impl Iterator<Item = Table> {
    let len = n.pow(k as u32);
    let total = n.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut values = vec![0; len];
        for slot in values.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        Table { n, k, values }
    })
}

fn relation_rows(s: &Structure) -> Vec<Vec<Vec<usize>>> {
    s.relations()
        .iter()
        .map(|r| r.tuples().map(<[usize]>::to_vec).collect())
        .collect()
}

/// Whether `op` maps every choice of `k` rows of every relation into the
/// relation, checked by direct enumeration.
pub fn preserves_all(op: &Table, s: &Structure) -> bool {
    s.relations().iter().all(|r| {
        let rows: Vec<&[usize]> = r.tuples().collect();
        let m = r.arity();
        arg_tuples(rows.len(), op.k).iter().all(|pick| {
            let image: Vec<usize> = (0..m)
                .map(|c| op.apply(&pick.iter().map(|&i| rows[i][c]).collect::<Vec<_>>()))
                .collect();
            r.contains(&image)
        })
    })
}

/// Every polymorphism of arity `k`, by enumerating all tables.
pub fn all_polymorphisms(s: &Structure, k: usize) -> Vec<Table> {
    all_tables(s.domain_size(), k)
        .filter(|t| preserves_all(t, s))
        .collect()
}

/// Plain backtracking over conservative tables in index order; each
/// row selection is checked once its last entry is assigned. `fixed` pins
/// table entries. Returns a conservative polymorphism respecting `fixed`.
pub fn conservative_polymorphism(
    s: &Structure,
    k: usize,
    fixed: &[(Vec<usize>, usize)],
) -> Option<Table> {
    let n = s.domain_size();
    let args = arg_tuples(n, k);
    let mut candidates: Vec<Vec<usize>> = args
        .iter()
        .map(|t| {
            let mut c = t.clone();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    for (t, v) in fixed {
        let i = index_of(t, n);
        if !candidates[i].contains(v) {
            return None;
        }
        candidates[i] = vec![*v];
    }
    // checks[i]: (entry indices of an image tuple, relation index) completed at entry i
    let rels = relation_rows(s);
    let mut checks: Vec<Vec<(Vec<usize>, usize)>> = vec![Vec::new(); args.len()];
    for (ri, rows) in rels.iter().enumerate() {
        let m = s.relations()[ri].arity();
        for pick in arg_tuples(rows.len(), k) {
            let entries: Vec<usize> = (0..m)
                .map(|c| index_of(&pick.iter().map(|&i| rows[i][c]).collect::<Vec<_>>(), n))
                .collect();
            let last = *entries.iter().max().unwrap();
            checks[last].push((entries, ri));
        }
    }
    let mut values = vec![0; args.len()];
    fn dfs(
        i: usize,
        values: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        checks: &[Vec<(Vec<usize>, usize)>],
        s: &Structure,
    ) -> bool {
        if i == values.len() {
            return true;
        }
        for &v in &candidates[i] {
            values[i] = v;
            let ok = checks[i].iter().all(|(entries, ri)| {
                let image: Vec<usize> = entries.iter().map(|&e| values[e]).collect();
                s.relations()[*ri].contains(&image)
            });
            if ok && dfs(i + 1, values, candidates, checks, s) {
                return true;
            }
        }
        false
    }
    dfs(0, &mut values, &candidates, &checks, s).then_some(Table { n, k, values })
}

/// `op(x,...,x,y,x,...,x)` is independent of the position of `y`, and `op`
/// is idempotent.
pub fn is_wnu(op: &Table) -> bool {
    let n = op.n;
    (0..n).all(|x| op.apply(&vec![x; op.k]) == x)
        && (0..n).all(|x| {
            (0..n).all(|y| {
                let at = |p: usize| {
                    let mut t = vec![x; op.k];
                    t[p] = y;
                    op.apply(&t)
                };
                (1..op.k).all(|p| at(p) == at(0))
            })
        })
}

/// `u(y,x,x) = v(y,x,x,x)` for all `x`, `y`.
pub fn same_polymer(u: &Table, v: &Table) -> bool {
    let n = u.n;
    (0..n).all(|x| (0..n).all(|y| u.apply(&[y, x, x]) == v.apply(&[y, x, x, x])))
}

/// Whether `values` satisfies every potato and constraint of `inst`.
pub fn satisfies(inst: &Instance, values: &[usize]) -> bool {
    values.len() == inst.var_count()
        && (0..inst.var_count()).all(|v| inst.potato(v).contains(&values[v]))
        && inst
            .constraints()
            .iter()
            .all(|c| c.relation.tuples().any(|t| t == [values[c.x], values[c.y]]))
}

/// Whether `inst` has a solution, by enumerating every assignment.
pub fn has_solution(inst: &Instance) -> bool {
    arg_tuples(inst.domain_size(), inst.var_count())
        .iter()
        .any(|a| satisfies(inst, a))
}

pub fn table_of(op: &concsp::Operation) -> Table {
    Table {
        n: op.domain_size(),
        k: op.arity(),
        values: op.table().to_vec(),
    }
}
