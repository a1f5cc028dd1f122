//! Invariant audit of a single structure: the coloring dichotomy, the WNU
//! witnesses, agreement of (2,3)-consistency with exhaustive search, the
//! projection-only behavior of uncolored pairs, and closure of solution sets
//! under polymorphisms.
//!
//! Every failed check is reported as a violation string; errors from the
//! underlying searches are reported the same way so a corpus run never stops
//! early.

use crate::coloring::{verdict, Color, VerdictKind};
use crate::corpus::{random_instance, CorpusRng};
use crate::error::Result;
use crate::operation::{is_polymorphism, Operation};
use crate::poly_search::{check_wnu, enumerate_polymorphism_images, same_polymer};
use crate::solver::{enumerate_solutions, solve_backtracking, two_three_consistency, Assignment};
use crate::structure::Structure;
use crate::util::tuples;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditOptions {
    /// Random instances per bounded-width structure.
    pub instances: usize,
    /// Solution triples pushed through `u` per bounded-width structure.
    pub closure_samples: usize,
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            instances: 4,
            closure_samples: 1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub verdict: Option<VerdictKind>,
    pub all_colored: bool,
    pub blue_pairs: usize,
    pub wnu_checked: bool,
    pub uncolored_checked: usize,
    pub instances_checked: usize,
    pub satisfiable: usize,
    pub closure_checked: usize,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether every binary and ternary polymorphism of `s` restricts to a
/// projection on `{a, b}`. Requires `s` to be 2-conservative so that the
/// restrictions stay inside the pair.
pub fn pair_is_projective(s: &Structure, a: usize, b: usize) -> Result<bool> {
    let pair = [a, b];
    for arity in [2, 3] {
        let args: Vec<Vec<usize>> = tuples(2, arity)
            .map(|t| t.iter().map(|&i| pair[i]).collect())
            .collect();
        let images = enumerate_polymorphism_images(s, arity, &args)?;
        for image in images {
            let projection = (0..arity).any(|i| args.iter().zip(&image).all(|(t, &v)| t[i] == v));
            if !projection {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `op` applied coordinatewise to `solutions`.
pub fn apply_to_solutions(op: &Operation, solutions: &[&Assignment]) -> Assignment {
    let vars = solutions.first().map_or(0, |s| s.values().len());
    Assignment(
        (0..vars)
            .map(|v| op.apply(&solutions.iter().map(|s| s.get(v)).collect::<Vec<_>>()))
            .collect(),
    )
}

/// Runs every check that applies to `s`.
pub fn audit_structure(s: &Structure, options: &AuditOptions) -> AuditReport {
    let mut report = AuditReport::default();
    let v = match verdict(s) {
        Ok(v) => v,
        Err(e) => {
            report.violations.push(format!("verdict failed: {e}"));
            return report;
        }
    };
    report.verdict = Some(v.kind);
    report.all_colored = v.coloring.all_colored();
    report.blue_pairs = v.coloring.count(Color::Blue);
    let binary = s.max_arity() <= 2;

    if binary && report.all_colored && report.blue_pairs > 0 {
        report.violations.push(format!(
            "{} blue pair(s) in a fully colored binary structure",
            report.blue_pairs
        ));
    }

    for (a, b) in v.coloring.pairs_with(Color::Uncolored) {
        report.uncolored_checked += 1;
        match pair_is_projective(s, a, b) {
            Ok(true) => {}
            Ok(false) => report.violations.push(format!(
                "uncolored pair {{{a}, {b}}} has a non-projection polymorphism"
            )),
            Err(e) => report
                .violations
                .push(format!("projection check on {{{a}, {b}}} failed: {e}")),
        }
    }

    let Some((u, w)) = &v.wnu else {
        return report;
    };
    let wnu_ok = check_wnu(u).unwrap_or(false)
        && check_wnu(w).unwrap_or(false)
        && same_polymer(u, w).unwrap_or(false)
        && is_polymorphism(u, s).unwrap_or(false)
        && is_polymorphism(w, s).unwrap_or(false);
    report.wnu_checked = true;
    if !wnu_ok {
        report
            .violations
            .push("u, v fail the WNU, polymer or polymorphism checks".into());
    }

    let mut rng = CorpusRng::new(options.seed);
    for i in 0..options.instances {
        let vars = 1 + rng.below(8);
        let inst = match random_instance(s, rng.next_u64(), vars) {
            Ok(inst) => inst,
            Err(e) => {
                report.violations.push(format!("instance {i}: {e}"));
                continue;
            }
        };
        report.instances_checked += 1;
        let consistent = two_three_consistency(&inst).is_consistent();
        let solution = solve_backtracking(&inst);
        if solution.is_some() {
            report.satisfiable += 1;
        }
        if consistent != solution.is_some() {
            report.violations.push(format!(
                "instance {i}: (2,3)-consistency says {consistent}, search says {}\n{}",
                solution.is_some(),
                inst.to_text()
            ));
        }
        if report.closure_checked >= options.closure_samples {
            continue;
        }
        let solutions = enumerate_solutions(&inst, 64);
        if solutions.is_empty() {
            continue;
        }
        let picked: Vec<&Assignment> = (0..3)
            .map(|_| &solutions[rng.below(solutions.len())])
            .collect();
        let image = apply_to_solutions(u, &picked);
        report.closure_checked += 1;
        if !image.is_solution(&inst) {
            report.violations.push(format!(
                "instance {i}: u maps solutions to a non-solution {image}"
            ));
        }
    }
    report
}
