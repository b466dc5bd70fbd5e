use std::fmt::Write;

use super::{DerivationGraph, Schedule};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: one small junction vertex per hyperedge, parameters
/// filled gray, pending nodes lime with an asterisk, and schedule positions
/// in the labels when a schedule is given.
pub fn to_dot(g: &DerivationGraph, schedule: Option<&Schedule>) -> String {
    if g.node_count() == 0 {
        return "digraph g {}\n".to_string();
    }
    let pending = g.pending();
    let mut out = String::from("digraph g {\n  rankdir=LR;\n  node [shape=box, fontname=\"Helvetica\"];\n");
    for d in g.nodes() {
        let name = d.to_string();
        let mut label = name.clone();
        let mut attrs = Vec::new();
        if g.is_param(d) {
            attrs.push("style=filled, fillcolor=gray".to_string());
        } else if pending.contains(&d) {
            label.push('*');
            attrs.push("style=filled, fillcolor=lime".to_string());
        }
        if g.is_goal(d) {
            attrs.push("peripheries=2".to_string());
        }
        if let Some(pos) = schedule.and_then(|s| s.position(d)) {
            label = format!("{}. {label}", pos + 1);
        }
        attrs.insert(0, format!("label={}", quote(&label)));
        writeln!(out, "  {} [{}];", quote(&name), attrs.join(", ")).unwrap();
    }
    let chosen: Vec<u32> = schedule.map(|s| s.steps.iter().filter_map(|st| st.edge).collect()).unwrap_or_default();
    for e in g.edges() {
        let j = format!("e{}", e.group);
        let bold = if chosen.contains(&e.group) { ", penwidth=2" } else { "" };
        writeln!(
            out,
            "  {j} [shape=circle, width=0.25, fixedsize=true, label=\"{}\", tooltip={}{bold}];",
            e.group,
            quote(e.rule.name())
        )
        .unwrap();
        for s in &e.sources {
            writeln!(out, "  {} -> {j} [arrowhead=none{bold}];", quote(&s.to_string())).unwrap();
        }
        writeln!(out, "  {j} -> {}{};", quote(&e.target.to_string()), if bold.is_empty() { "" } else { " [penwidth=2]" })
            .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dim::Dim;
    use crate::graph::topo_order;
    use crate::rules::{Formula, Hyperedge, Rule};

    #[test]
    fn empty_graph() {
        assert_eq!(to_dot(&DerivationGraph::new(), None), "digraph g {}\n");
    }

    #[test]
    fn styles_and_step_labels() {
        let mut g = DerivationGraph::new();
        g.add_param(Dim::len("O", "A"));
        g.add_goal(Dim::len("C", "D"));
        g.add_node(Dim::len("A", "G"));
        g.add_edge(Hyperedge::new(
            Dim::len("C", "D"),
            Rule::SegmentChain,
            "t",
            Formula::Linear(vec![(1, Dim::len("O", "A"))]),
        ))
        .unwrap();
        let s = topo_order(&g).unwrap();
        let dot = to_dot(&g, Some(&s));
        assert!(dot.starts_with("digraph g {"));
        assert!(dot.contains("\"AO\" [label=\"1. AO\", style=filled, fillcolor=gray]"));
        assert!(dot.contains("\"AG\" [label=\"AG*\", style=filled, fillcolor=lime]"));
        assert!(dot.contains("\"CD\" [label=\"2. CD\""));
        assert!(dot.contains("e1 -> \"CD\""));
    }
}
