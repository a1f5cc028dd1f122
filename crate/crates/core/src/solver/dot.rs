use std::fmt::Write;

use crate::solver::{Assignment, Instance};
use crate::util::mask_values;

const EMPHASIS: &str = "style=bold, penwidth=3";

/// Renders the potato diagram of an instance in Graphviz DOT: one cluster per
/// variable holding its candidate values, one edge per allowed constraint
/// pair between values in the potatoes. Nodes and edges used by `solution`
/// are drawn bold.
pub fn export_dot(inst: &Instance, solution: Option<&Assignment>) -> String {
    let chosen = |v: usize, a: usize| solution.is_some_and(|s| s.values().get(v) == Some(&a));
    let mut out = String::from("graph potatoes {\n");
    out.push_str("  node [shape=circle, fontsize=10];\n");
    for v in 0..inst.var_count() {
        let _ = writeln!(out, "  subgraph cluster_{v} {{");
        let _ = writeln!(out, "    label=\"{}\";", inst.name(v).replace('"', "\\\""));
        out.push_str("    style=rounded;\n");
        for a in mask_values(inst.potato_mask(v)) {
            let extra = if chosen(v, a) {
                format!(", {EMPHASIS}")
            } else {
                String::new()
            };
            let _ = writeln!(out, "    v{v}_{a} [label=\"{a}\"{extra}];");
        }
        out.push_str("  }\n");
    }
    for c in inst.constraints() {
        let (px, py) = (inst.potato_mask(c.x), inst.potato_mask(c.y));
        for t in c.relation.tuples() {
            let (a, b) = (t[0], t[1]);
            if px >> a & 1 == 0 || py >> b & 1 == 0 {
                continue;
            }
            let extra = if chosen(c.x, a) && chosen(c.y, b) {
                format!(" [{EMPHASIS}]")
            } else {
                String::new()
            };
            let _ = writeln!(out, "  v{}_{a} -- v{}_{b}{extra};", c.x, c.y);
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_backtracking;

    #[test]
    fn empty_instance() {
        let inst = Instance::new(2).unwrap();
        let dot = export_dot(&inst, None);
        assert!(dot.starts_with("graph potatoes {\n"));
        assert!(dot.ends_with("}\n"));
        assert!(!dot.contains("--"));
    }

    #[test]
    fn nodes_edges_and_emphasis() {
        let text = "instance\nvar x : 0 1\nvar y : 0 1 2\ncon x y : 0 1 1 2 0 2 1 0 2 2\nend\n";
        let inst = Instance::parse(text, 3).unwrap();
        let plain = export_dot(&inst, None);
        assert_eq!(plain.matches("[label=").count(), 5);
        // (2, 2) leaves the potato of x
        assert_eq!(plain.matches(" -- ").count(), 4);
        assert!(!plain.contains("penwidth"));

        let sol = solve_backtracking(&inst).unwrap();
        let dot = export_dot(&inst, Some(&sol));
        assert_eq!(
            dot.matches("penwidth=3").count(),
            inst.var_count() + inst.constraints().len()
        );
        assert!(dot.contains("v0_0 -- v1_1 [style=bold, penwidth=3];"));
    }
}
