//! Graphviz rendering of a `<_k` tree.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::ordinal::Ordinal;
use crate::stability::{landmarks, StabilityError, StabilitySystem};

/// Displayed nodes: exception keys, limits up to the top and the marks.
///
/// Below `ω²` every limit is listed; above it the limit landmarks stand in.
pub fn dot_nodes(p: &StabilitySystem, marks: &[Ordinal]) -> Result<Vec<Ordinal>, StabilityError> {
    for m in marks {
        p.check_bounds(m)?;
    }
    let mut nodes: BTreeSet<Ordinal> = p
        .all_exceptions()
        .map(|(_, key, _)| key.clone())
        .filter(|key| key < p.bound())
        .collect();
    let top = p.top().unwrap_or_default();
    if top < Ordinal::omega_pow(2, 1) {
        let m = top.terms().iter().find(|t| t.exponent == 1).map_or(0, |t| t.coefficient);
        nodes.extend((1..=m).map(|c| Ordinal::omega_pow(1, c)));
    } else {
        nodes.extend(landmarks(p).into_iter().filter(Ordinal::is_limit));
    }
    nodes.extend(marks.iter().cloned());
    Ok(nodes.into_iter().collect())
}

/// Each displayed node gets an edge from its largest displayed
/// `<_k`-predecessor, so the drawing is a forest.
pub fn export_dot(p: &StabilitySystem, k: u32, marks: &[Ordinal]) -> Result<String, StabilityError> {
    let nodes = dot_nodes(p, marks)?;
    let marked: BTreeSet<&Ordinal> = marks.iter().collect();
    let mut out = String::new();
    writeln!(out, "digraph lt{k} {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for n in &nodes {
        let style = if marked.contains(n) { ", style=filled, fillcolor=lightblue" } else { "" };
        writeln!(out, "  \"{n}\" [label=\"{n}\"{style}];").unwrap();
    }
    for b in &nodes {
        let preds = p.pred_set(k, b)?;
        if let Some(a) = nodes.iter().rfind(|a| *a < b && preds.member(a)) {
            writeln!(out, "  \"{a}\" -> \"{b}\";").unwrap();
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;

    fn p_star() -> StabilitySystem {
        let mut p = StabilitySystem::new(ord("w*3+1"), 1);
        p.insert_exception(1, ord("w*2"), ord("5")).unwrap();
        p
    }

    #[test]
    fn p_star_tree() {
        let dot = export_dot(&p_star(), 1, &[ord("5")]).unwrap();
        assert!(dot.starts_with("digraph lt1 {"));
        assert!(dot.contains("\"5\" -> \"w*2\";"));
        assert!(dot.contains("\"w*2\" -> \"w*3\";"));
        assert!(!dot.contains("\"w\" -> \"w*2\""));
        assert!(dot.contains("\"5\" [label=\"5\", style=filled"));
    }

    #[test]
    fn level_zero_is_a_path() {
        let dot = export_dot(&p_star(), 0, &[]).unwrap();
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn tall_systems_use_landmarks() {
        let mut p = StabilitySystem::new(ord("w^2*2+1"), 1);
        p.insert_exception(1, ord("w^2+w"), ord("w^2")).unwrap();
        let nodes = dot_nodes(&p, &[]).unwrap();
        assert_eq!(nodes, vec![ord("w^2"), ord("w^2+w"), ord("w^2*2")]);
    }

    #[test]
    fn marks_outside_are_rejected() {
        assert!(export_dot(&p_star(), 1, &[ord("w*4")]).is_err());
    }
}
