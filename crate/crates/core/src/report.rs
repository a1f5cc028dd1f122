//! Verdict reports: a human-readable summary and a versioned line-oriented
//! `key: value` document for regression baselines.

use std::fmt::Write;

use itertools::Itertools;
use sha2::{Digest, Sha256};

use crate::coloring::Verdict;
use crate::operation::Operation;
use crate::structure::{Relation, Structure};

/// First line of every machine-readable verdict document.
pub const VERDICT_FORMAT: &str = "concsp-verdict/1";

/// SHA-256 of the canonical text of a structure, lowercase hex.
pub fn structure_hash(s: &Structure) -> String {
    Sha256::digest(s.to_text().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn table(op: &Operation) -> String {
    op.table().iter().join(" ")
}

fn tuples(r: &Relation) -> String {
    r.tuples().map(|t| t.iter().join(" ")).join(", ")
}

/// Multi-line summary for people.
pub fn human_report(s: &Structure, v: &Verdict) -> String {
    let mut out = String::new();
    let relations = s
        .relations()
        .iter()
        .filter(|r| r.arity() > 1)
        .map(|r| format!("{}/{}", r.name(), r.arity()))
        .join(", ");
    let _ = writeln!(
        out,
        "structure: domain {} | relations: {}",
        s.domain_size(),
        if relations.is_empty() {
            "none".into()
        } else {
            relations
        }
    );
    let _ = writeln!(out, "verdict: {}", v.kind);
    out.push_str("pairs:\n");
    for ((a, b), c) in v.coloring.pairs() {
        let witness = c
            .witness
            .as_ref()
            .map(|w| format!(" (witness of arity {})", w.arity()))
            .unwrap_or_default();
        let _ = writeln!(out, "  {{{a}, {b}}}: {}{witness}", c.color);
    }
    if let Some(three) = &v.three_operations {
        for ((a, b), c) in &three.orientation {
            let _ = writeln!(out, "  f absorbs to {c} on {{{a}, {b}}}");
        }
    }
    if let Some(((a, b), blue)) = &v.blue_relation {
        let _ = writeln!(
            out,
            "generated relation for {{{a}, {b}}}: {{{}}} [{}]",
            tuples(&blue.relation),
            blue.flag
        );
    }
    for d in &v.diagnostics {
        let _ = writeln!(out, "note: {d}");
    }
    if let Some((u, w)) = &v.wnu {
        out.push_str("witnesses:\n");
        out.push_str(&u.to_text("u"));
        out.push_str(&w.to_text("v"));
    }
    out
}

/// The machine-readable verdict document. Identical inputs give
/// byte-identical output.
pub fn machine_report(s: &Structure, v: &Verdict) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, val: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{k}: {val}");
    };
    kv("format", &VERDICT_FORMAT);
    kv("structure_sha256", &structure_hash(s));
    kv("domain_size", &s.domain_size());
    kv("binary_scope", &v.binary_scope);
    kv("verdict", &v.kind);
    for ((a, b), c) in v.coloring.pairs() {
        kv(&format!("pair.{a}.{b}.color"), &c.color);
        if let Some(w) = &c.witness {
            kv(&format!("pair.{a}.{b}.witness.arity"), &w.arity());
            kv(&format!("pair.{a}.{b}.witness.table"), &table(w));
        }
    }
    if let Some(three) = &v.three_operations {
        for ((a, b), c) in &three.orientation {
            kv(&format!("orientation.{a}.{b}"), c);
        }
        kv("f.table", &table(&three.f));
        kv("g.table", &table(&three.g));
        kv("h.table", &table(&three.h));
    }
    if let Some(((a, b), blue)) = &v.blue_relation {
        kv(
            &format!("blue_relation.{a}.{b}.tuples"),
            &tuples(&blue.relation),
        );
        kv(&format!("blue_relation.{a}.{b}.flag"), &blue.flag);
    }
    for (i, d) in v.diagnostics.iter().enumerate() {
        kv(&format!("diagnostic.{i}"), d);
    }
    if let Some((u, w)) = &v.wnu {
        kv("u.table", &table(u));
        kv("v.table", &table(w));
    }
    out
}
