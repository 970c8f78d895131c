//! JSON analysis documents.
//!
//! ```json
//! {
//!   "complex": {"simplices": [["A","C","D"], ["B","C","E"]]},
//!   "multivectors": [["A","AC"], ...],
//!   "families": {"pre": [{"label": "M1", "cells": ["ACD"]}]},
//!   "partition": [["M1"], ["M2","M3"]],
//!   "preorder": [["M1","M2"]]
//! }
//! ```
//!
//! `complex` holds exactly one of `cells` (objects with `id`, `dim` and an
//! optional `boundary`) or `simplices`. A bare complex object is accepted
//! as a whole document. Without `multivectors` every cell is its own
//! multivector. Errors carry a JSON pointer to the offending value.

use std::sync::Arc;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::complex::{Cell, Complex, ComplexError};
use crate::morse::{LabelRelation, MorseError, MorseFamily};
use crate::mvf::{FieldError, MultivectorField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{}: {message}", if pointer.is_empty() { "/" } else { pointer.as_str() })]
pub struct DocumentError {
    /// JSON pointer, empty for the document root.
    pub pointer: String,
    pub message: String,
}

fn err(pointer: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

#[derive(Clone, Debug)]
pub struct AnalysisDocument {
    field: MultivectorField,
    multivector_ids: Vec<Vec<String>>,
    families: Vec<(String, MorseFamily)>,
    partition: Option<Vec<Vec<String>>>,
    preorder: Option<Vec<(String, String)>>,
}

impl AnalysisDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| err("", format!("invalid JSON at line {} column {}: {e}", e.line(), e.column())))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self, DocumentError> {
        let root = value.as_object().ok_or_else(|| err("", "expected an object"))?;
        if root.contains_key("cells") || root.contains_key("simplices") {
            let complex = Arc::new(parse_complex(root, "")?);
            let field = MultivectorField::singletons(complex.clone());
            let multivector_ids = complex.ids().iter().map(|id| vec![id.clone()]).collect();
            return Ok(Self {
                field,
                multivector_ids,
                families: Vec::new(),
                partition: None,
                preorder: None,
            });
        }
        for key in root.keys() {
            if !matches!(key.as_str(), "complex" | "multivectors" | "families" | "partition" | "preorder") {
                return Err(err(format!("/{}", escape(key)), "unknown key"));
            }
        }
        let complex_obj = root
            .get("complex")
            .ok_or_else(|| err("", "missing key `complex`"))?
            .as_object()
            .ok_or_else(|| err("/complex", "expected an object"))?;
        let complex = Arc::new(parse_complex(complex_obj, "/complex")?);

        let multivector_ids = match root.get("multivectors") {
            Some(v) => string_lists(v, "/multivectors")?,
            None => complex.ids().iter().map(|id| vec![id.clone()]).collect(),
        };
        let field = build_field(complex.clone(), &multivector_ids)?;

        let mut families = Vec::new();
        if let Some(v) = root.get("families") {
            let obj = v.as_object().ok_or_else(|| err("/families", "expected an object"))?;
            for (name, entries) in obj {
                let base = format!("/families/{}", escape(name));
                families.push((name.clone(), parse_family(&complex, entries, &base)?));
            }
        }

        let partition = root.get("partition").map(|v| string_lists(v, "/partition")).transpose()?;
        let preorder = root
            .get("preorder")
            .map(|v| {
                let rows = string_lists(v, "/preorder")?;
                rows.into_iter()
                    .enumerate()
                    .map(|(i, row)| match <[String; 2]>::try_from(row) {
                        Ok([p, q]) => Ok((p, q)),
                        Err(_) => Err(err(format!("/preorder/{i}"), "expected a pair of labels")),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;

        Ok(Self {
            field,
            multivector_ids,
            families,
            partition,
            preorder,
        })
    }

    pub fn complex(&self) -> &Complex {
        self.field.complex()
    }

    pub fn complex_arc(&self) -> &Arc<Complex> {
        self.field.complex_arc()
    }

    pub fn field(&self) -> &MultivectorField {
        &self.field
    }

    /// Multivectors as listed in the document.
    pub fn multivector_ids(&self) -> Vec<Vec<String>> {
        self.multivector_ids.clone()
    }

    /// Named families, sorted by name.
    pub fn families(&self) -> &[(String, MorseFamily)] {
        &self.families
    }

    pub fn family(&self, name: &str) -> Option<&MorseFamily> {
        self.families.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn partition(&self) -> Option<&[Vec<String>]> {
        self.partition.as_deref()
    }

    pub fn preorder_pairs(&self) -> Option<&[(String, String)]> {
        self.preorder.as_deref()
    }

    /// The document's preorder over the labels of `family`.
    pub fn preorder_for(&self, family: &MorseFamily) -> Option<Result<LabelRelation, MorseError>> {
        self.preorder
            .as_ref()
            .map(|pairs| LabelRelation::from_label_pairs(family.labels().to_vec(), pairs))
    }
}

fn string_lists(v: &Value, base: &str) -> Result<Vec<Vec<String>>, DocumentError> {
    let outer = v.as_array().ok_or_else(|| err(base, "expected an array"))?;
    outer
        .iter()
        .enumerate()
        .map(|(i, inner)| string_list(inner, &format!("{base}/{i}")))
        .collect()
}

fn string_list(v: &Value, base: &str) -> Result<Vec<String>, DocumentError> {
    let arr = v.as_array().ok_or_else(|| err(base, "expected an array of strings"))?;
    arr.iter()
        .enumerate()
        .map(|(j, s)| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| err(format!("{base}/{j}"), "expected a string"))
        })
        .collect()
}

fn parse_complex(obj: &Map<String, Value>, base: &str) -> Result<Complex, DocumentError> {
    for key in obj.keys() {
        if key != "cells" && key != "simplices" {
            return Err(err(format!("{base}/{}", escape(key)), "unknown key"));
        }
    }
    match (obj.get("cells"), obj.get("simplices")) {
        (Some(_), Some(_)) => Err(err(base, "give exactly one of `cells` and `simplices`")),
        (None, None) => Err(err(base, "missing `cells` or `simplices`")),
        (None, Some(s)) => {
            let base = format!("{base}/simplices");
            let simplices = string_lists(s, &base)?;
            Complex::from_simplices(&simplices).map_err(|e| match e {
                ComplexError::EmptySimplex { index } | ComplexError::SimplexTooLarge { index, .. } => {
                    err(format!("{base}/{index}"), e.to_string())
                }
                other => err(base.clone(), other.to_string()),
            })
        }
        (Some(c), None) => {
            let base = format!("{base}/cells");
            let arr = c.as_array().ok_or_else(|| err(&base, "expected an array"))?;
            let cells = arr
                .iter()
                .enumerate()
                .map(|(i, v)| parse_cell(v, &format!("{base}/{i}")))
                .collect::<Result<Vec<_>, _>>()?;
            Complex::from_cells(cells.clone()).map_err(|e| locate_cell_error(&cells, &base, e))
        }
    }
}

fn parse_cell(v: &Value, base: &str) -> Result<Cell, DocumentError> {
    let obj = v.as_object().ok_or_else(|| err(base, "expected a cell object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "id" | "dim" | "boundary") {
            return Err(err(format!("{base}/{}", escape(key)), "unknown key"));
        }
    }
    let id = obj
        .get("id")
        .ok_or_else(|| err(base, "missing `id`"))?
        .as_str()
        .ok_or_else(|| err(format!("{base}/id"), "expected a string"))?
        .to_string();
    let dim = obj
        .get("dim")
        .ok_or_else(|| err(base, "missing `dim`"))?
        .as_u64()
        .ok_or_else(|| err(format!("{base}/dim"), "expected a non-negative integer"))?;
    let dim = usize::try_from(dim).map_err(|_| err(format!("{base}/dim"), "dimension too large"))?;
    let boundary = match obj.get("boundary") {
        Some(b) => string_list(b, &format!("{base}/boundary"))?,
        None => Vec::new(),
    };
    Ok(Cell { id, dim, boundary })
}

fn locate_cell_error(cells: &[Cell], base: &str, e: ComplexError) -> DocumentError {
    let first = |id: &str| cells.iter().position(|c| c.id == id).unwrap_or(0);
    let entry = |i: usize, face: &str, nth: usize| {
        cells[i]
            .boundary
            .iter()
            .enumerate()
            .filter(|(_, f)| *f == face)
            .nth(nth)
            .map(|(j, _)| format!("{base}/{i}/boundary/{j}"))
            .unwrap_or_else(|| format!("{base}/{i}/boundary"))
    };
    let pointer = match &e {
        ComplexError::DuplicateId(id) => {
            let i = cells.iter().enumerate().filter(|(_, c)| &c.id == id).nth(1).map(|(i, _)| i).unwrap_or(0);
            format!("{base}/{i}/id")
        }
        ComplexError::DanglingBoundaryRef { cell, missing } => entry(first(cell), missing, 0),
        ComplexError::DuplicateBoundaryEntry { cell, face } => entry(first(cell), face, 1),
        ComplexError::BoundaryDimensionMismatch { cell, face, .. } => entry(first(cell), face, 0),
        ComplexError::BoundarySquareNonzero { cell } => format!("{base}/{}/boundary", first(cell)),
        _ => base.to_string(),
    };
    err(pointer, e.to_string())
}

fn build_field(complex: Arc<Complex>, ids: &[Vec<String>]) -> Result<MultivectorField, DocumentError> {
    for (i, mv) in ids.iter().enumerate() {
        for (j, id) in mv.iter().enumerate() {
            if complex.index_of(id).is_none() {
                return Err(err(format!("/multivectors/{i}/{j}"), format!("unknown cell id `{id}`")));
            }
        }
    }
    MultivectorField::build(complex, ids).map_err(|e| {
        let pointer = match &e {
            FieldError::DuplicatedCell { second, .. } => format!("/multivectors/{second}"),
            FieldError::EmptyMultivector(i) => format!("/multivectors/{i}"),
            FieldError::MultivectorNotLocallyClosed { index, .. } => format!("/multivectors/{index}"),
            _ => "/multivectors".to_string(),
        };
        err(pointer, e.to_string())
    })
}

fn parse_family(complex: &Complex, v: &Value, base: &str) -> Result<MorseFamily, DocumentError> {
    let arr = v.as_array().ok_or_else(|| err(base, "expected an array of members"))?;
    let mut family = MorseFamily::new(complex.len());
    for (i, entry) in arr.iter().enumerate() {
        let here = format!("{base}/{i}");
        let obj = entry.as_object().ok_or_else(|| err(&here, "expected a member object"))?;
        for key in obj.keys() {
            if key != "label" && key != "cells" {
                return Err(err(format!("{here}/{}", escape(key)), "unknown key"));
            }
        }
        let label = obj
            .get("label")
            .ok_or_else(|| err(&here, "missing `label`"))?
            .as_str()
            .ok_or_else(|| err(format!("{here}/label"), "expected a string"))?;
        let ids = string_list(obj.get("cells").ok_or_else(|| err(&here, "missing `cells`"))?, &format!("{here}/cells"))?;
        let mut set = complex.empty_set();
        for (j, id) in ids.iter().enumerate() {
            let x = complex
                .index_of(id)
                .ok_or_else(|| err(format!("{here}/cells/{j}"), format!("unknown cell id `{id}`")))?;
            set.insert(x);
        }
        family
            .push(label, set)
            .map_err(|e| err(format!("{here}/label"), e.to_string()))?;
    }
    Ok(family)
}
