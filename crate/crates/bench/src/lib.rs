//! Fixed workloads shared by the benchmarks.

use concsp::corpus::{random_instance, random_structure, GenSpec};
use concsp::{Instance, Structure};

/// A 3-conservative random structure on `domain` elements with two binary
/// relations of density one half.
pub fn corpus_structure(seed: u64, domain: usize) -> Structure {
    random_structure(&GenSpec {
        seed,
        domain_size: domain,
        relation_count: 2,
        density: (1, 2),
        conservativity: 3,
    })
    .expect("valid generator spec")
}

/// Eight-variable instances over `s`, one per seed.
pub fn instances(s: &Structure, seeds: std::ops::Range<u64>) -> Vec<Instance> {
    seeds
        .map(|seed| random_instance(s, seed, 8).expect("at most eight variables"))
        .collect()
}
