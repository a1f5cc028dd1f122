use rayon::prelude::*;

use concsp::audit::{audit_structure, AuditOptions, AuditReport};
use concsp::corpus::{random_structure, GenSpec};

use crate::{Failure, Outcome};

/// Densities cycled through by seed.
const DENSITIES: [(u32, u32); 3] = [(3, 10), (1, 2), (4, 5)];

pub fn spec_for(seed: u64, domain: usize) -> GenSpec {
    GenSpec {
        seed,
        domain_size: domain,
        relation_count: 1 + (seed % 2) as usize,
        density: DENSITIES[(seed % 3) as usize],
        conservativity: 3,
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var("CONCSP_THREADS")
        .ok()?
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

pub fn run((start, end): (u64, u64), domain: usize, instances: usize) -> Outcome {
    spec_for(start, domain).validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure {
        code: 1,
        message: format!("thread pool: {e}"),
    })?;
    let audit = |seed: u64| -> (u64, Result<AuditReport, concsp::Error>) {
        let report = random_structure(&spec_for(seed, domain)).map(|s| {
            let options = AuditOptions {
                instances,
                closure_samples: 1,
                seed,
            };
            audit_structure(&s, &options)
        });
        (seed, report)
    };
    let results: Vec<_> = pool.install(|| (start..end).into_par_iter().map(audit).collect());

    let mut violations = 0;
    let (mut colored, mut bounded, mut instances_checked) = (0, 0, 0);
    for (seed, result) in results {
        let report = result?;
        colored += usize::from(report.all_colored);
        bounded += usize::from(report.wnu_checked);
        instances_checked += report.instances_checked;
        let verdict = report.verdict.map_or("error".to_owned(), |v| v.to_string());
        if report.passed() {
            println!("seed {seed}: {verdict} ok");
        } else {
            violations += report.violations.len();
            for v in &report.violations {
                println!("seed {seed}: {verdict} VIOLATION {v}");
            }
        }
    }
    println!(
        "structures: {} | fully colored: {colored} | bounded width: {bounded} | instances: {instances_checked} | violations: {violations}",
        end - start
    );
    Ok(if violations == 0 { 0 } else { 1 })
}
