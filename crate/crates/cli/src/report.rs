//! JSON renderings. Object keys come out sorted, arrays keep the library's
//! deterministic order.

use serde_json::{json, Value};

use mvf_core::{Complex, LabelRelation, MorseFamily, Violation};

pub fn family_json(complex: &Complex, family: &MorseFamily) -> Value {
    family
        .iter()
        .map(|(label, set)| json!({ "label": label, "cells": complex.names(set) }))
        .collect()
}

/// Pairs `[p, q]` meaning flow from `p` to `q`, diagonal included.
pub fn relation_json(relation: &LabelRelation) -> Value {
    relation
        .label_pairs()
        .into_iter()
        .map(|(p, q)| json!([p, q]))
        .collect()
}

pub fn violations_json(complex: &Complex, violations: &[Violation]) -> Value {
    let ids = |cells: &[usize]| cells.iter().map(|&x| complex.id(x).to_string()).collect::<Vec<_>>();
    violations
        .iter()
        .map(|v| {
            let mut out = json!({ "kind": v.kind(), "message": v.describe(complex) });
            let witness = match v {
                Violation::Overlap { cell, .. } | Violation::NotVCompatible { cell, .. } | Violation::NotInvariant { cell, .. } => {
                    json!({ "cell": complex.id(*cell) })
                }
                Violation::CriticalNotCovered { multivector } => json!({ "multivector": format!("V{}", multivector + 1) }),
                Violation::UncoveredCycle { cycle, hull } => {
                    json!({ "cycle": ids(cycle.cells()), "hull": complex.names(hull) })
                }
                Violation::Unsaturated { path, .. } => json!({ "path": ids(path.cells()) }),
                Violation::NotLocallyClosed { .. } | Violation::NotAntisymmetric { .. } => Value::Null,
            };
            if !witness.is_null() {
                out["witness"] = witness;
            }
            out
        })
        .collect()
}
