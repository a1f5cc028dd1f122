use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use concsp::coloring::verdict;
use concsp::counterexamples::{
    build_parity_structure, build_z22_structure, verify_parity, verify_z22, Check,
};
use concsp::relational_clone::{blue_pattern, compare_with_prediction, generated_relation};
use concsp::report::{human_report, machine_report};
use concsp::solver::{
    arc_consistency, export_dot, realize_relation, solve_backtracking, two_three_consistency,
};
use concsp::{Error, Instance, Structure, VerdictKind};

mod randtest;

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_NP_COMPLETE: u8 = 10;
const EXIT_BLUE_ANOMALY: u8 = 11;
const EXIT_UNSAT: u8 = 20;

#[derive(Parser)]
#[command(
    name = "concsp",
    version,
    about = "Classify conservative relational structures and solve their CSPs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color all pairs and print the complexity verdict.
    Classify {
        structure: PathBuf,
        /// Print the versioned key-value document instead of the summary.
        #[arg(long)]
        machine: bool,
        /// Apply the 3-conservative closure before classifying.
        #[arg(long)]
        close: bool,
    },
    /// Decide an instance over the domain of a structure.
    Solve {
        structure: PathBuf,
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Bt)]
        method: Method,
    },
    /// Print the relation defined by an instance on its free variables.
    Realize {
        structure: PathBuf,
        instance: PathBuf,
        /// Comma-separated variable names.
        #[arg(long, value_delimiter = ',', required = true)]
        free: Vec<String>,
    },
    /// Print the relation generated by tuples under the polymorphisms.
    Genrel {
        structure: PathBuf,
        /// File with one generator tuple per line.
        #[arg(long)]
        generators: PathBuf,
    },
    /// Print a built-in counterexample structure with its verification report.
    Counterexample {
        #[arg(value_enum)]
        which: Counterexample,
        /// Write to this file instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Audit random 3-conservative structures for the module invariants.
    Randtest {
        /// Seed range `a..b` (end exclusive).
        #[arg(long, value_parser = parse_range)]
        seeds: (u64, u64),
        #[arg(long, default_value_t = 3)]
        domain: usize,
        /// Random instances per bounded-width structure.
        #[arg(long, default_value_t = 4)]
        instances: usize,
    },
    /// Render the potato diagram of an instance as Graphviz DOT.
    ExportDot {
        structure: PathBuf,
        instance: PathBuf,
        /// Emphasize the first solution found by backtracking.
        #[arg(long)]
        solve: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Arc consistency.
    Ac,
    /// (2,3)-consistency.
    W23,
    /// Exhaustive backtracking.
    Bt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Counterexample {
    Parity,
    Z22,
}

/// A failure with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::DomainMismatch(_)
            | Error::InvalidRelation(_)
            | Error::InvalidStructure(_)
            | Error::InvalidOperation(_)
            | Error::InvalidInstance(_) => EXIT_PARSE,
            Error::Precondition(_)
            | Error::UnsupportedArity { .. }
            | Error::NotClosed(_)
            | Error::QueryConflict(_) => EXIT_PRECONDITION,
            Error::WitnessNotFound(_) | Error::Internal(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: u64 = a.parse().map_err(|e| format!("{a}: {e}"))?;
    let b: u64 = b.parse().map_err(|e| format!("{b}: {e}"))?;
    if a >= b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })
}

fn in_file<T>(path: &Path, r: concsp::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_structure(path: &Path) -> Result<Structure, Failure> {
    in_file(path, Structure::parse(&read(path)?))
}

fn load_instance(path: &Path, s: &Structure) -> Result<Instance, Failure> {
    in_file(path, Instance::parse(&read(path)?, s.domain_size()))
}

fn classify(path: &Path, machine: bool, close: bool) -> Outcome {
    let mut s = load_structure(path)?;
    if close {
        s = s.conservative_closure(3)?;
    }
    let v = verdict(&s)?;
    print!(
        "{}",
        if machine {
            machine_report(&s, &v)
        } else {
            human_report(&s, &v)
        }
    );
    Ok(match v.kind {
        VerdictKind::BoundedWidth => 0,
        VerdictKind::NpComplete => EXIT_NP_COMPLETE,
        VerdictKind::BlueAnomaly => EXIT_BLUE_ANOMALY,
    })
}

fn solve(structure: &Path, instance: &Path, method: Method) -> Outcome {
    let s = load_structure(structure)?;
    let inst = load_instance(instance, &s)?;
    let sat = match method {
        Method::Ac => {
            let sat = !arc_consistency(&inst).is_trivially_unsat();
            println!("{}", if sat { "SAT" } else { "UNSAT" });
            println!(
                "# method ac: {}",
                if sat { "arc consistent" } else { "refuted" }
            );
            sat
        }
        Method::W23 => {
            let sat = two_three_consistency(&inst).is_consistent();
            println!("{}", if sat { "SAT" } else { "UNSAT" });
            println!(
                "# method w23: {}",
                if sat { "(2,3)-consistent" } else { "refuted" }
            );
            sat
        }
        Method::Bt => match solve_backtracking(&inst) {
            Some(a) => {
                println!("SAT");
                print!("{}", a.to_text(&inst));
                true
            }
            None => {
                println!("UNSAT");
                false
            }
        },
    };
    Ok(if sat { 0 } else { EXIT_UNSAT })
}

fn realize(structure: &Path, instance: &Path, free: &[String]) -> Outcome {
    let s = load_structure(structure)?;
    let inst = load_instance(instance, &s)?;
    let vars = free
        .iter()
        .map(|name| {
            inst.var_index(name).ok_or_else(|| Failure {
                code: EXIT_PARSE,
                message: format!("unknown variable {name}"),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::new();
    realize_relation(&inst, &vars)?.write_block(&mut out);
    print!("{out}");
    Ok(0)
}

fn genrel(structure: &Path, generators: &Path) -> Outcome {
    let s = load_structure(structure)?;
    let text = read(generators)?;
    let mut gens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tuple = line
            .split_whitespace()
            .map(|w| w.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure {
                code: EXIT_PARSE,
                message: format!(
                    "{}: parse error on line {}: {e}",
                    generators.display(),
                    i + 1
                ),
            })?;
        gens.push(tuple);
    }
    let rel = generated_relation(&s, &gens)?;
    let mut out = String::new();
    rel.write_block(&mut out);
    print!("{out}");
    if let Some((a, b)) = blue_pattern(&gens) {
        println!(
            "# prediction for pair {{{a}, {b}}}: {}",
            compare_with_prediction(&rel, a, b)
        );
    }
    Ok(0)
}

fn counterexample(which: Counterexample, output: Option<&Path>) -> Outcome {
    let (s, checks): (Structure, Vec<Check>) = match which {
        Counterexample::Parity => (build_parity_structure(), verify_parity()?),
        Counterexample::Z22 => (build_z22_structure(), verify_z22()?),
    };
    let mut out = s.to_text();
    for c in &checks {
        out.push_str(&format!(
            "# {} {}: {}\n",
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    match output {
        Some(path) => fs::write(path, out).map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", path.display()),
        })?,
        None => print!("{out}"),
    }
    Ok(if checks.iter().all(|c| c.passed) {
        0
    } else {
        1
    })
}

fn export(structure: &Path, instance: &Path, with_solution: bool) -> Outcome {
    let s = load_structure(structure)?;
    let inst = load_instance(instance, &s)?;
    let solution = if with_solution {
        solve_backtracking(&inst)
    } else {
        None
    };
    print!("{}", export_dot(&inst, solution.as_ref()));
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify {
            structure,
            machine,
            close,
        } => classify(&structure, machine, close),
        Command::Solve {
            structure,
            instance,
            method,
        } => solve(&structure, &instance, method),
        Command::Realize {
            structure,
            instance,
            free,
        } => realize(&structure, &instance, &free),
        Command::Genrel {
            structure,
            generators,
        } => genrel(&structure, &generators),
        Command::Counterexample { which, output } => counterexample(which, output.as_deref()),
        Command::Randtest {
            seeds,
            domain,
            instances,
        } => randtest::run(seeds, domain, instances),
        Command::ExportDot {
            structure,
            instance,
            solve,
        } => export(&structure, &instance, solve),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
