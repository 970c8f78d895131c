//! Graphviz export of label relations.

use std::fmt::Write;

use crate::morse::LabelRelation;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One `digraph` listing every label as a vertex, then one edge per pair in
/// the relation's order. Loops are kept unless `loops` is false.
pub fn to_dot(name: &str, relation: &LabelRelation, loops: bool) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    for label in relation.labels() {
        writeln!(out, "  {};", quote(label)).unwrap();
    }
    for (p, q) in relation.pairs() {
        if p == q && !loops {
            continue;
        }
        let labels = relation.labels();
        writeln!(out, "  {} -> {};", quote(&labels[p]), quote(&labels[q])).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_vertices_edges_and_loops() {
        let mut r = LabelRelation::new(vec!["M1".into(), "a\"b".into()]);
        r.insert(0, 1);
        r.insert(1, 1);
        let dot = to_dot("conley", &r, true);
        assert_eq!(
            dot,
            "digraph \"conley\" {\n  \"M1\";\n  \"a\\\"b\";\n  \"M1\" -> \"a\\\"b\";\n  \"a\\\"b\" -> \"a\\\"b\";\n}\n"
        );
        assert!(!to_dot("conley", &r, false).contains("\"a\\\"b\" -> \"a\\\"b\""));
    }
}
