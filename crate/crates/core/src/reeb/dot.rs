use std::collections::BTreeSet;
use std::fmt::Write;

use super::ReebGraph;

/// Graphviz rendering; nodes are labelled `kind@level` and listed by level,
/// circuit edges are drawn bold.
pub fn to_dot(graph: &ReebGraph) -> String {
    let circuit: BTreeSet<usize> = graph.circuit_edges().into_iter().collect();
    let mut order: Vec<usize> = (0..graph.vertices.len()).collect();
    order.sort_by(|&a, &b| {
        graph.vertices[a]
            .level
            .total_cmp(&graph.vertices[b].level)
            .then(a.cmp(&b))
    });
    let mut out = String::from("graph reeb {\n  rankdir=BT;\n");
    for v in order {
        let vx = &graph.vertices[v];
        let level = if vx.level.abs() < 5e-7 { 0.0 } else { vx.level };
        let _ = writeln!(out, "  v{v} [label=\"{}@{level:.4}\"];", vx.kind.short_name());
    }
    for e in &graph.edges {
        let style = if circuit.contains(&e.id) { " [style=bold]" } else { "" };
        let _ = writeln!(out, "  v{} -- v{}{style};", e.endpoints.0, e.endpoints.1);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{find_critical_points, TrigFieldSpec, TrigTerm};
    use crate::reeb::build_reeb_graph;

    #[test]
    fn circuit_edges_are_bold() {
        let spec = TrigFieldSpec::new(vec![TrigTerm::new(1.0, 1, 0, 0.0), TrigTerm::new(0.5, 0, 1, 0.0)]).unwrap();
        let cps = find_critical_points(&spec, 128, 1e-9).unwrap();
        let dot = to_dot(&build_reeb_graph(&spec, &cps, 128).unwrap());
        assert_eq!(dot.matches("style=bold").count(), 2);
        assert!(dot.contains("min@-1.5000"));
        let first = dot.find("min@").unwrap();
        assert!(first < dot.find("max@").unwrap());
    }
}
