//! Combinatorial multivector fields.
//!
//! A multivector field partitions the cells of a complex into locally closed
//! multivectors. A multivector `V` is critical when the relative homology
//! `H(cl V, mo V)` is nontrivial, regular otherwise.

use std::sync::Arc;

use thiserror::Error;

use crate::cellset::CellSet;
use crate::complex::{Cell, Complex, ComplexError};
use crate::dynamics::Dynamics;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("cell `{0}` is not covered by any multivector")]
    MissingCell(String),
    #[error("cell `{cell}` appears in multivectors #{first} and #{second}")]
    DuplicatedCell {
        cell: String,
        first: usize,
        second: usize,
    },
    #[error("multivector #{0} is empty")]
    EmptyMultivector(usize),
    #[error("multivector #{index} {cells:?} is not locally closed")]
    MultivectorNotLocallyClosed { index: usize, cells: Vec<String> },
    #[error("set is not an isolated invariant set")]
    NotIsolatedInvariant,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl FieldError {
    /// `NotAPartition` covers both the missing and the duplicated case.
    pub fn is_not_a_partition(&self) -> bool {
        matches!(
            self,
            FieldError::MissingCell(_) | FieldError::DuplicatedCell { .. } | FieldError::EmptyMultivector(_)
        )
    }
}

#[derive(Clone, Debug)]
pub struct MultivectorField {
    complex: Arc<Complex>,
    mv_of: Vec<usize>,
    multivectors: Vec<CellSet>,
    betti: Vec<Vec<usize>>,
    critical: Vec<bool>,
}

impl MultivectorField {
    /// Validates a partition given by cell ids and computes criticality.
    pub fn build<S: AsRef<str>>(complex: Arc<Complex>, partition: &[Vec<S>]) -> Result<Self, FieldError> {
        let sets = partition
            .iter()
            .map(|ids| complex.cell_set(ids))
            .collect::<Result<Vec<_>, _>>()?;
        // duplicates inside one id list are collapsed by cell_set; still a
        // partition error if the same cell is listed by two multivectors
        Self::from_sets(complex, sets)
    }

    pub fn from_sets(complex: Arc<Complex>, multivectors: Vec<CellSet>) -> Result<Self, FieldError> {
        let n = complex.len();
        let mut mv_of = vec![usize::MAX; n];
        for (i, v) in multivectors.iter().enumerate() {
            if v.is_empty() {
                return Err(FieldError::EmptyMultivector(i));
            }
            for x in v {
                if mv_of[x] != usize::MAX {
                    return Err(FieldError::DuplicatedCell {
                        cell: complex.id(x).to_string(),
                        first: mv_of[x],
                        second: i,
                    });
                }
                mv_of[x] = i;
            }
        }
        if let Some(x) = mv_of.iter().position(|&m| m == usize::MAX) {
            return Err(FieldError::MissingCell(complex.id(x).to_string()));
        }
        let mut betti = Vec::with_capacity(multivectors.len());
        for (index, v) in multivectors.iter().enumerate() {
            match complex.relative_betti(v) {
                Ok(b) => betti.push(b),
                Err(ComplexError::NotLocallyClosed) => {
                    return Err(FieldError::MultivectorNotLocallyClosed {
                        index,
                        cells: complex.names(v),
                    })
                }
                Err(e) => return Err(e.into()),
            }
        }
        let critical = betti.iter().map(|b| b.iter().any(|&x| x != 0)).collect();
        Ok(Self {
            complex,
            mv_of,
            multivectors,
            betti,
            critical,
        })
    }

    /// The field in which every cell is its own multivector.
    pub fn singletons(complex: Arc<Complex>) -> Self {
        let sets = (0..complex.len())
            .map(|x| CellSet::singleton(complex.len(), x))
            .collect();
        Self::from_sets(complex, sets).expect("singletons are always a valid field")
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn complex_arc(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn len(&self) -> usize {
        self.multivectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multivectors.is_empty()
    }

    pub fn multivectors(&self) -> &[CellSet] {
        &self.multivectors
    }

    pub fn multivector(&self, index: usize) -> &CellSet {
        &self.multivectors[index]
    }

    /// Index of the multivector containing `cell`.
    pub fn mv_of(&self, cell: usize) -> usize {
        self.mv_of[cell]
    }

    pub fn is_critical(&self, index: usize) -> bool {
        self.critical[index]
    }

    pub fn betti(&self, index: usize) -> &[usize] {
        &self.betti[index]
    }

    /// Display label of a multivector, 1-based in input order.
    pub fn label(&self, index: usize) -> String {
        format!("V{}", index + 1)
    }

    /// `[A]_V`: union of the multivectors meeting `set`.
    pub fn v_saturate(&self, set: &CellSet) -> CellSet {
        let mut out = self.complex.empty_set();
        let mut seen = vec![false; self.multivectors.len()];
        for x in set {
            let m = self.mv_of[x];
            if !seen[m] {
                seen[m] = true;
                out.union_with(&self.multivectors[m]);
            }
        }
        out
    }

    /// Indices of the multivectors meeting `set`, ascending.
    pub fn multivectors_meeting(&self, set: &CellSet) -> Vec<usize> {
        let mut idx: Vec<usize> = set.iter().map(|x| self.mv_of[x]).collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }

    pub fn is_v_compatible(&self, set: &CellSet) -> bool {
        set.iter().all(|x| self.multivectors[self.mv_of[x]].is_subset(set))
    }

    /// Smallest locally closed, V-compatible superset of `set`.
    ///
    /// Alternates saturation and convexification until neither adds cells.
    pub fn v_hull(&self, set: &CellSet) -> CellSet {
        let mut cur = set.clone();
        loop {
            let next = self.complex.convexify(&self.v_saturate(&cur));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Whether `set` lies inside one regular multivector.
    pub fn inside_regular_multivector(&self, set: &CellSet) -> bool {
        match self.multivectors_meeting(set).as_slice() {
            [m] => !self.critical[*m],
            _ => false,
        }
    }

    /// The field `{ V : V ⊂ S }` on the subcomplex spanned by an isolated
    /// invariant set `S`, with boundary lists intersected with `S`.
    pub fn induced_field(&self, s: &CellSet) -> Result<MultivectorField, FieldError> {
        if !Dynamics::new(self).is_isolated_invariant(s) {
            return Err(FieldError::NotIsolatedInvariant);
        }
        let c = &self.complex;
        let cells: Vec<Cell> = s
            .iter()
            .map(|x| Cell {
                id: c.id(x).to_string(),
                dim: c.dim(x),
                boundary: c
                    .boundary(x)
                    .iter()
                    .filter(|&&f| s.contains(f))
                    .map(|&f| c.id(f).to_string())
                    .collect(),
            })
            .collect();
        let sub = Arc::new(Complex::from_cells(cells)?);
        let partition: Vec<Vec<String>> = self
            .multivectors
            .iter()
            .filter(|v| v.is_subset(s))
            .map(|v| c.names(v))
            .collect();
        Self::build(sub, &partition)
    }
}
