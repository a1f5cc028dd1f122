//! Acceptance criteria, one report line each. Run with `cargo test --test
//! acceptance`; the process exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use concsp::coloring::{
    build_wnu_u, build_wnu_v, find_three_operations, verdict, Color, VerdictKind,
};
use concsp::corpus::{random_instance, random_structure, CorpusRng, GenSpec};
use concsp::counterexamples::{
    build_parity_structure, build_z22_structure, z22_partitions, z22_sum,
};
use concsp::operation::is_polymorphism;
use concsp::partition::Partition;
use concsp::poly_search::{check_wnu, find_polymorphism, is_taylor, same_polymer};
use concsp::relational_clone::blue_pair_relation;
use concsp::solver::{enumerate_solutions, solve_backtracking, two_three_consistency};
use concsp::{Error, IndicatorQuery, Operation, Relation, Structure};

use common::Table;

const LIMIT_PARITY_RELATION: Duration = Duration::from_secs(1);
const LIMIT_PARITY_WNU: Duration = Duration::from_secs(5);
const LIMIT_Z22: Duration = Duration::from_secs(1);
const LIMIT_CORPUS: Duration = Duration::from_secs(600);
const LIMIT_ORACLE: Duration = Duration::from_secs(300);

const MIN_CORPUS_STRUCTURES: usize = 500;
const MIN_SOLVER_INSTANCES: usize = 1000;
const ORACLE_QUERIES_PER_CONFIG: usize = 100;
const CLOSURE_SAMPLES: usize = 50;

const CORPUS_DOMAINS: [usize; 2] = [3, 4];
const CORPUS_DENSITIES: [(u32, u32); 3] = [(3, 10), (1, 2), (4, 5)];
const SEEDS_PER_CELL: u64 = 84;
const INSTANCES_PER_STRUCTURE: usize = 4;

struct Outcome {
    id: u8,
    title: &'static str,
    failures: Vec<String>,
    elapsed: Duration,
    limit: Option<Duration>,
    detail: String,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.failures.is_empty() && self.limit.is_none_or(|l| self.elapsed <= l)
    }

    fn print(&self) {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let limit = self
            .limit
            .map_or(String::new(), |l| format!(", limit {} s", l.as_secs()));
        println!(
            "criterion {} [{status}] {} | {} ({:.3} s{limit})",
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        );
        for f in self.failures.iter().take(10) {
            println!("    {f}");
        }
    }
}

fn timed(
    id: u8,
    title: &'static str,
    limit: Option<Duration>,
    body: impl FnOnce(&mut Vec<String>) -> String,
) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let detail = body(&mut failures);
    Outcome {
        id,
        title,
        failures,
        elapsed: start.elapsed(),
        limit,
        detail,
    }
}

fn parity_relation() -> Outcome {
    timed(
        1,
        "parity blue-pair relation is exactly R",
        Some(LIMIT_PARITY_RELATION),
        |fail| {
            let s = build_parity_structure();
            let expected =
                Relation::new("R", 3, [[1, 1, 1], [0, 0, 1], [0, 1, 0], [1, 0, 0]]).unwrap();
            match blue_pair_relation(&s, 0, 1) {
                Ok(b) => {
                    if !b.relation.tuples().eq(expected.tuples()) {
                        fail.push(format!(
                            "computed {:?}",
                            b.relation.tuples().collect::<Vec<_>>()
                        ));
                    }
                    format!("{} tuples, {}", b.relation.len(), b.flag)
                }
                Err(e) => {
                    fail.push(e.to_string());
                    "error".into()
                }
            }
        },
    )
}

fn parity_wnu() -> Outcome {
    timed(
        2,
        "parity pair is blue and no quaternary WNU exists",
        Some(LIMIT_PARITY_WNU),
        |fail| {
            let s = build_parity_structure();
            let color = concsp::coloring::classify_pair(&s, 0, 1).map(|c| c.color);
            if color != Ok(Color::Blue) {
                fail.push(format!("pair {{0, 1}}: {color:?}"));
            }
            let wnu4 = IndicatorQuery::wnu(2, 4).and_then(|q| find_polymorphism(&s, &q));
            if !matches!(wnu4, Ok(None)) {
                fail.push(format!("quaternary WNU search: {wnu4:?}"));
            }
            // independent cross-check: no table on {0,1} is both a quaternary WNU and a polymorphism
            if common::all_polymorphisms(&s, 4).iter().any(common::is_wnu) {
                fail.push("brute force found a quaternary WNU".into());
            }
            "blue; quaternary WNU search exhausted".into()
        },
    )
}

fn z22() -> Outcome {
    timed(
        3,
        "Z2 x Z2: p is a Taylor polymorphism, congruence identity holds",
        Some(LIMIT_Z22),
        |fail| {
            let s = build_z22_structure();
            let p = z22_sum();
            if !is_polymorphism(&p, &s).unwrap()
                || !common::preserves_all(&common::table_of(&p), &s)
            {
                fail.push("p is not a polymorphism".into());
            }
            if !is_taylor(&p) {
                fail.push("p is not Taylor".into());
            }
            let [alpha, beta, gamma] = z22_partitions();
            let bottom = Partition::singletons(4);
            let ab = alpha.meet(&beta).unwrap();
            let ag = alpha.meet(&gamma).unwrap();
            let a_bg = alpha.meet(&beta.join(&gamma).unwrap()).unwrap();
            if ab != bottom || ag != bottom {
                fail.push(format!("alpha ^ beta = {ab}, alpha ^ gamma = {ag}"));
            }
            if a_bg != alpha {
                fail.push(format!("alpha ^ (beta v gamma) = {a_bg}"));
            }
            format!("alpha ^ beta = {ab}, alpha ^ (beta v gamma) = {a_bg}")
        },
    )
}

#[derive(Default)]
struct CorpusStats {
    structures: usize,
    fully_colored: usize,
    blue_in_colored: usize,
    witnesses_checked: usize,
    instances: usize,
    satisfiable: usize,
    uncolored_pairs: usize,
    closure_samples: usize,
    invariant_failures: Vec<String>,
    witness_failures: Vec<String>,
    solver_failures: Vec<String>,
    projection_failures: Vec<String>,
    closure_failures: Vec<String>,
    elapsed: Duration,
}

/// Non-projection conservative patterns on `{a, b}^k`, as pinned entries.
fn non_projection_patterns(a: usize, b: usize, k: usize) -> Vec<Vec<(Vec<usize>, usize)>> {
    let pair = [a, b];
    let args: Vec<Vec<usize>> = common::arg_tuples(2, k);
    let mixed: Vec<&Vec<usize>> = args
        .iter()
        .filter(|t| t.iter().any(|&x| x != t[0]))
        .collect();
    let mut out = Vec::new();
    for code in 0..1usize << mixed.len() {
        let pick = |i: usize| (code >> i) & 1;
        let is_projection = (0..k).any(|p| mixed.iter().enumerate().all(|(i, t)| pick(i) == t[p]));
        if is_projection {
            continue;
        }
        out.push(
            mixed
                .iter()
                .enumerate()
                .map(|(i, t)| (t.iter().map(|&x| pair[x]).collect(), pair[pick(i)]))
                .collect(),
        );
    }
    out
}

fn check_witnesses(s: &Structure, coloring: &concsp::Coloring) -> Result<(), String> {
    let three = find_three_operations(s, coloring).map_err(|e| e.to_string())?;
    let u = build_wnu_u(&three.f, &three.g).map_err(|e| e.to_string())?;
    let v = build_wnu_v(&three.f, &three.g).map_err(|e| e.to_string())?;
    let library = check_wnu(&u) == Ok(true)
        && check_wnu(&v) == Ok(true)
        && same_polymer(&u, &v) == Ok(true)
        && is_polymorphism(&u, s) == Ok(true)
        && is_polymorphism(&v, s) == Ok(true);
    let (tu, tv) = (common::table_of(&u), common::table_of(&v));
    let oracle = common::is_wnu(&tu)
        && common::is_wnu(&tv)
        && common::same_polymer(&tu, &tv)
        && common::preserves_all(&tu, s)
        && common::preserves_all(&tv, s);
    if library && oracle {
        Ok(())
    } else {
        Err(format!("library checks {library}, oracle checks {oracle}"))
    }
}

fn run_corpus() -> CorpusStats {
    let start = Instant::now();
    let mut st = CorpusStats::default();
    for &domain in &CORPUS_DOMAINS {
        for &density in &CORPUS_DENSITIES {
            for seed in 0..SEEDS_PER_CELL {
                let spec = GenSpec {
                    seed,
                    domain_size: domain,
                    relation_count: 1 + (seed % 2) as usize,
                    density,
                    conservativity: 3,
                };
                let label = format!(
                    "domain {domain} density {}/{} seed {seed}",
                    density.0, density.1
                );
                let s = random_structure(&spec).unwrap();
                st.structures += 1;
                let v = match verdict(&s) {
                    Ok(v) => v,
                    Err(e) => {
                        st.invariant_failures.push(format!("{label}: {e}"));
                        continue;
                    }
                };
                let colored = v.coloring.all_colored();
                let blue = v.coloring.count(Color::Blue);
                st.fully_colored += usize::from(colored);
                if colored && blue > 0 {
                    st.blue_in_colored += 1;
                    st.invariant_failures
                        .push(format!("{label}: {blue} blue pair(s)"));
                }
                if colored && blue == 0 {
                    st.witnesses_checked += 1;
                    if let Err(e) = check_witnesses(&s, &v.coloring) {
                        st.witness_failures.push(format!("{label}: {e}"));
                    }
                }
                if domain <= 3 {
                    for (a, b) in v.coloring.pairs_with(Color::Uncolored) {
                        st.uncolored_pairs += 1;
                        for k in [2, 3] {
                            for pattern in non_projection_patterns(a, b, k) {
                                if let Some(t) = common::conservative_polymorphism(&s, k, &pattern)
                                {
                                    st.projection_failures.push(format!(
                                        "{label}: pair {{{a}, {b}}} has {:?}",
                                        t.values
                                    ));
                                }
                            }
                        }
                    }
                }
                if v.kind != VerdictKind::BoundedWidth {
                    continue;
                }
                let (u, _) = v.wnu.as_ref().unwrap();
                let three = v.three_operations.as_ref().unwrap();
                let ternary: [&Operation; 3] = [u, &three.g, &three.h];
                let mut rng =
                    CorpusRng::new(seed ^ (domain as u64) << 32 ^ (density.0 as u64) << 40);
                for i in 0..INSTANCES_PER_STRUCTURE {
                    let vars = 1 + rng.below(8);
                    let inst = random_instance(&s, rng.next_u64(), vars).unwrap();
                    st.instances += 1;
                    let consistent = two_three_consistency(&inst).is_consistent();
                    let solution = solve_backtracking(&inst);
                    let exists = common::has_solution(&inst);
                    st.satisfiable += usize::from(exists);
                    if consistent != solution.is_some() || exists != solution.is_some() {
                        st.solver_failures.push(format!(
                            "{label} instance {i}: w23 {consistent}, bt {}, brute force {exists}",
                            solution.is_some()
                        ));
                    }
                    if st.closure_samples >= CLOSURE_SAMPLES || !exists {
                        continue;
                    }
                    let sols = enumerate_solutions(&inst, 64);
                    let op = ternary[st.closure_samples % 3];
                    let picked: Vec<&[usize]> = (0..3)
                        .map(|_| sols[rng.below(sols.len())].values())
                        .collect();
                    let image: Vec<usize> = (0..vars)
                        .map(|x| op.apply(&[picked[0][x], picked[1][x], picked[2][x]]))
                        .collect();
                    st.closure_samples += 1;
                    if !common::satisfies(&inst, &image) {
                        st.closure_failures
                            .push(format!("{label} instance {i}: image {image:?}"));
                    }
                }
            }
        }
    }
    st.elapsed = start.elapsed();
    st
}

fn corpus_outcomes(st: CorpusStats) -> Vec<Outcome> {
    let mk = |id, title, failures: Vec<String>, limit, detail| Outcome {
        id,
        title,
        failures,
        elapsed: st.elapsed,
        limit,
        detail,
    };
    let mut invariant = st.invariant_failures.clone();
    if st.structures < MIN_CORPUS_STRUCTURES {
        invariant.push(format!("only {} structures", st.structures));
    }
    let mut solver = st.solver_failures.clone();
    if st.instances < MIN_SOLVER_INSTANCES {
        solver.push(format!("only {} instances", st.instances));
    }
    let mut closure = st.closure_failures.clone();
    if st.closure_samples < CLOSURE_SAMPLES {
        closure.push(format!("only {} samples", st.closure_samples));
    }
    vec![
        mk(
            4,
            "fully colored binary 3-conservative structures have no blue pair",
            invariant,
            Some(LIMIT_CORPUS),
            format!(
                "{} structures, {} fully colored, {} violations",
                st.structures, st.fully_colored, st.blue_in_colored
            ),
        ),
        mk(
            5,
            "three operations and u, v witnesses on red/yellow structures",
            st.witness_failures.clone(),
            Some(LIMIT_CORPUS),
            format!(
                "{} structures checked, {} failures",
                st.witnesses_checked,
                st.witness_failures.len()
            ),
        ),
        mk(
            6,
            "(2,3)-consistency agrees with backtracking on bounded-width structures",
            solver,
            Some(LIMIT_CORPUS),
            format!(
                "{} instances, {} satisfiable, {} disagreements",
                st.instances,
                st.satisfiable,
                st.solver_failures.len()
            ),
        ),
        mk(
            8,
            "uncolored pairs admit only projections (arities 2 and 3)",
            st.projection_failures.clone(),
            Some(LIMIT_CORPUS),
            format!(
                "{} uncolored pairs on domain 3, {} violations",
                st.uncolored_pairs,
                st.projection_failures.len()
            ),
        ),
        mk(
            9,
            "polymorphisms map solution triples to solutions",
            closure,
            None,
            format!(
                "{} samples, {} failures",
                st.closure_samples,
                st.closure_failures.len()
            ),
        ),
    ]
}

/// A random structure for the oracle comparison: domain 2 mixes arities 1 to
/// 3, domain 3 uses binary relations and at most one unary relation.
fn oracle_structure(rng: &mut CorpusRng, n: usize) -> Structure {
    let mut rels = Vec::new();
    for r in 0..1 + rng.below(2) {
        let arity = if n == 2 { 1 + rng.below(3) } else { 2 };
        let tuples: Vec<Vec<usize>> = common::arg_tuples(n, arity)
            .into_iter()
            .filter(|_| rng.chance(1, 2))
            .collect();
        rels.push(Relation::new(format!("R{r}"), arity, tuples).unwrap());
    }
    if n == 3 && rng.chance(1, 2) {
        rels.push(Relation::unary("U", (0..n).filter(|_| rng.chance(2, 3))));
    }
    Structure::new(n, rels).unwrap()
}

struct Query {
    idempotent: bool,
    prescribed: Vec<(Vec<usize>, usize)>,
    identified: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Query {
    fn satisfied_by(&self, t: &Table) -> bool {
        (!self.idempotent || (0..t.n).all(|x| t.apply(&vec![x; t.k]) == x))
            && self.prescribed.iter().all(|(a, v)| t.apply(a) == *v)
            && self
                .identified
                .iter()
                .all(|(a, b)| t.apply(a) == t.apply(b))
    }
}

fn random_query(rng: &mut CorpusRng, n: usize, k: usize) -> (IndicatorQuery, Query) {
    let mut iq = IndicatorQuery::new(n, k).unwrap();
    let mut q = Query {
        idempotent: rng.chance(1, 2),
        prescribed: Vec::new(),
        identified: Vec::new(),
    };
    iq.set_idempotent(q.idempotent);
    let tuple = |rng: &mut CorpusRng| (0..k).map(|_| rng.below(n)).collect::<Vec<usize>>();
    for _ in 0..rng.below(3) {
        let (t, v) = (tuple(rng), rng.below(n));
        if iq.prescribe(&t, v).is_ok() {
            q.prescribed.push((t, v));
        }
    }
    if k > 1 && rng.chance(1, 2) {
        let (a, b) = (tuple(rng), tuple(rng));
        if iq.identify(&a, &b).is_ok() {
            q.identified.push((a, b));
        }
    }
    (iq, q)
}

fn oracle_equivalence() -> Outcome {
    timed(
        7,
        "search engine agrees with brute-force table enumeration",
        Some(LIMIT_ORACLE),
        |fail| {
            let mut rng = CorpusRng::new(0x0AC1E);
            let mut counts = Vec::new();
            for (n, k) in [(2, 1), (2, 2), (2, 3), (3, 2)] {
                let mut found = 0;
                let mut structure = oracle_structure(&mut rng, n);
                let mut polys = common::all_polymorphisms(&structure, k);
                for i in 0..ORACLE_QUERIES_PER_CONFIG {
                    if i % 10 == 0 && i > 0 {
                        structure = oracle_structure(&mut rng, n);
                        polys = common::all_polymorphisms(&structure, k);
                    }
                    let (iq, q) = random_query(&mut rng, n, k);
                    let expected = polys.iter().any(|t| q.satisfied_by(t));
                    match find_polymorphism(&structure, &iq) {
                        Ok(Some(op)) => {
                            let t = common::table_of(&op);
                            found += 1;
                            if !expected || !q.satisfied_by(&t) || !polys.contains(&t) {
                                fail.push(format!(
                                    "n={n} k={k} query {i}: bad witness {:?}",
                                    t.values
                                ));
                            }
                        }
                        Ok(None) | Err(Error::QueryConflict(_)) => {
                            if expected {
                                fail.push(format!(
                                    "n={n} k={k} query {i}: engine missed a polymorphism"
                                ));
                            }
                        }
                        Err(e) => fail.push(format!("n={n} k={k} query {i}: {e}")),
                    }
                }
                counts.push(format!(
                    "n={n} k={k}: {found}/{ORACLE_QUERIES_PER_CONFIG} satisfiable"
                ));
            }
            counts.join(", ")
        },
    )
}

fn main() -> ExitCode {
    let mut outcomes = vec![parity_relation(), parity_wnu(), z22()];
    outcomes.extend(corpus_outcomes(run_corpus()));
    outcomes.push(oracle_equivalence());
    outcomes.sort_by_key(|o| o.id);
    for o in &outcomes {
        o.print();
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
    if passed == outcomes.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
