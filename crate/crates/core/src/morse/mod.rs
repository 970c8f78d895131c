//! Morse decompositions and predecompositions of a multivector field.
//!
//! # Verifying a predecomposition without enumerating solutions
//!
//! A family `M` is a predecomposition when its members are disjoint isolated
//! invariant sets and every essential solution is a link between members,
//! i.e. both limit sets of every essential solution meet `∪M`. Limit sets are
//! hulls of strongly connected sets, so the condition reads: every strongly
//! connected `C` with an essential hull has `v_hull(C) ∩ ∪M ≠ ∅`.
//!
//! Such a `C` either lies in one critical multivector `V`, and then its hull
//! is `V`, or it meets two multivectors and therefore contains an edge
//! between different multivectors. A closed walk through that edge
//! decomposes into simple cycles, one of which still uses the edge. Its
//! image `C'` is a subset of `C`, so `v_hull(C') ⊂ v_hull(C)`. Hence it is
//! enough to check each critical multivector and each simple cycle meeting
//! two or more multivectors. Cycles touching `∪M` pass trivially, so only
//! cycles in `X \ ∪M` are enumerated.

mod consolidate;
mod decomposition;
mod enumerate;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cellset::CellSet;
use crate::complex::Complex;
use crate::cycles::CycleBudgetExceeded;
use crate::dynamics::SolutionPath;

pub use consolidate::{connection_set, consolidate, consolidate_by_scc};
pub use decomposition::{
    flow_preorder, induced_digraph, is_morse_decomposition, is_saturated, minimal_morse_decomposition,
    saturation_witness, verify_predecomposition,
};
pub use enumerate::{enumerate_predecompositions, pool_candidates, EnumerateOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    InvalidLabels(String),
    #[error("member `{0}` is not an isolated invariant set")]
    InvalidFamily(String),
    #[error("Morse set `{0}` failed validation")]
    MorseSetValidationFailed(String),
    #[error("connection set of {0:?} failed validation")]
    ConnectionSetValidationFailed(Vec<String>),
    #[error("family is not a Morse predecomposition")]
    NotAPredecomposition,
    #[error("label `{0}` is missing from the partition or listed twice")]
    NotAPartition(String),
    #[error("partition part #{0} is empty")]
    EmptyPart(usize),
    #[error("preorder is not admissible: link `{from}` -> `{to}` without `{to}` <= `{from}`")]
    NotAdmissible { from: String, to: String },
    #[error("part #{part} is not convex: it misses `{label}`")]
    PartNotConvex { part: usize, label: String },
    #[error("induced relation on parts is not antisymmetric: #{first} and #{second}")]
    InducedRelationNotAntisymmetric { first: usize, second: usize },
    #[error("consolidated family is not a Morse decomposition")]
    ConsolidationFailed,
    #[error("search explored more than {0} nodes")]
    SearchBudgetExceeded(usize),
    #[error(transparent)]
    CycleBudgetExceeded(#[from] CycleBudgetExceeded),
}

/// Indexed family of labeled cell sets. Empty members are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseFamily {
    universe: usize,
    labels: Vec<String>,
    sets: Vec<CellSet>,
}

impl MorseFamily {
    pub fn new(universe: usize) -> Self {
        Self {
            universe,
            labels: Vec::new(),
            sets: Vec::new(),
        }
    }

    pub fn from_entries<I, S>(universe: usize, entries: I) -> Result<Self, MorseError>
    where
        I: IntoIterator<Item = (S, CellSet)>,
        S: Into<String>,
    {
        let mut fam = Self::new(universe);
        for (label, set) in entries {
            fam.push(label, set)?;
        }
        Ok(fam)
    }

    pub fn push(&mut self, label: impl Into<String>, set: CellSet) -> Result<(), MorseError> {
        let label = label.into();
        assert_eq!(set.universe(), self.universe, "cell sets over different complexes");
        if self.labels.contains(&label) {
            return Err(MorseError::DuplicateLabel(label));
        }
        self.labels.push(label);
        self.sets.push(set);
        Ok(())
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn sets(&self) -> &[CellSet] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &CellSet {
        &self.sets[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn get(&self, label: &str) -> Option<&CellSet> {
        self.index_of(label).map(|i| &self.sets[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CellSet)> {
        self.labels.iter().map(String::as_str).zip(&self.sets)
    }

    /// `∪M`.
    pub fn union(&self) -> CellSet {
        let mut u = CellSet::empty(self.universe);
        for s in &self.sets {
            u.union_with(s);
        }
        u
    }

    /// Members as a set of cell sets, ignoring labels and order.
    pub fn member_sets(&self) -> BTreeSet<CellSet> {
        self.sets.iter().cloned().collect()
    }

    /// Every member of `self` lies inside some member of `other`.
    pub fn is_inscribed_in(&self, other: &MorseFamily) -> bool {
        self.sets
            .iter()
            .all(|a| a.is_empty() || other.sets.iter().any(|b| a.is_subset(b)))
    }

    /// Inscribed in `other`, and not the same collection of nonempty sets.
    pub fn refines(&self, other: &MorseFamily) -> bool {
        let nonempty = |f: &MorseFamily| f.sets.iter().filter(|s| !s.is_empty()).cloned().collect::<BTreeSet<_>>();
        self.is_inscribed_in(other) && nonempty(self) != nonempty(other)
    }
}

/// A binary relation on the labels of a family. In an order, the pair
/// `(p, q)` records `q ≤ p`, matching the direction of flow `p → q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelRelation {
    labels: Vec<String>,
    pairs: BTreeSet<(usize, usize)>,
}

impl LabelRelation {
    pub fn new(labels: Vec<String>) -> Self {
        Self {
            labels,
            pairs: BTreeSet::new(),
        }
    }

    pub fn from_label_pairs<S: AsRef<str>>(labels: Vec<String>, pairs: &[(S, S)]) -> Result<Self, MorseError> {
        let mut rel = Self::new(labels);
        for (p, q) in pairs {
            let find = |l: &str| {
                rel.labels
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| MorseError::InvalidLabels(l.to_string()))
            };
            let (i, j) = (find(p.as_ref())?, find(q.as_ref())?);
            rel.insert(i, j);
        }
        Ok(rel)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn insert(&mut self, p: usize, q: usize) {
        assert!(p < self.labels.len() && q < self.labels.len());
        self.pairs.insert((p, q));
    }

    pub fn contains(&self, p: usize, q: usize) -> bool {
        self.pairs.contains(&(p, q))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Pairs with `p ≠ q`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs().filter(|(p, q)| p != q)
    }

    pub fn label_pairs(&self) -> Vec<(String, String)> {
        self.pairs()
            .map(|(p, q)| (self.labels[p].clone(), self.labels[q].clone()))
            .collect()
    }

    /// Reflexive-transitive closure.
    pub fn closure(&self) -> LabelRelation {
        let n = self.labels.len();
        let mut m = vec![vec![false; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(p, q) in &self.pairs {
            m[p][q] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if m[i][k] {
                    let row_k = m[k].clone();
                    for (cell, reach) in m[i].iter_mut().zip(row_k) {
                        *cell |= reach;
                    }
                }
            }
        }
        let mut out = LabelRelation::new(self.labels.clone());
        for (i, row) in m.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                if b {
                    out.pairs.insert((i, j));
                }
            }
        }
        out
    }

    /// First pair `p ≠ q` related both ways, if any.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        self.strict_pairs().find(|&(p, q)| p < q && self.contains(q, p))
    }

    /// Antisymmetric after closure. The relation itself need not be
    /// transitive.
    pub fn is_partial_order(&self) -> bool {
        self.closure().antisymmetry_violation().is_none()
    }

    /// Strongly connected classes of labels, ordered by smallest member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let c = self.closure();
        let n = self.labels.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let class: Vec<usize> = (0..n).filter(|&j| c.contains(i, j) && c.contains(j, i)).collect();
            for &j in &class {
                seen[j] = true;
            }
            out.push(class);
        }
        out
    }
}

/// One failed condition of a verification, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Overlap { first: String, second: String, cell: usize },
    NotLocallyClosed { label: String },
    NotVCompatible { label: String, cell: usize },
    NotInvariant { label: String, cell: usize },
    CriticalNotCovered { multivector: usize },
    UncoveredCycle { cycle: SolutionPath, hull: CellSet },
    Unsaturated { label: String, path: SolutionPath },
    NotAntisymmetric { first: String, second: String },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Overlap { .. } => "overlap",
            Violation::NotLocallyClosed { .. } => "not locally closed",
            Violation::NotVCompatible { .. } => "not V-compatible",
            Violation::NotInvariant { .. } => "not invariant",
            Violation::CriticalNotCovered { .. } => "critical multivector not covered",
            Violation::UncoveredCycle { .. } => "cycle hull not covered",
            Violation::Unsaturated { .. } => "not saturated",
            Violation::NotAntisymmetric { .. } => "preorder not antisymmetric",
        }
    }

    /// One-line human-readable description using cell ids.
    pub fn describe(&self, complex: &Complex) -> String {
        let ids = |cells: &[usize]| cells.iter().map(|&x| complex.id(x)).collect::<Vec<_>>().join(" ");
        match self {
            Violation::Overlap { first, second, cell } => {
                format!("{}: {first} and {second} share {}", self.kind(), complex.id(*cell))
            }
            Violation::NotLocallyClosed { label } => format!("{}: {label}", self.kind()),
            Violation::NotVCompatible { label, cell } => {
                format!("{}: {label} splits the multivector of {}", self.kind(), complex.id(*cell))
            }
            Violation::NotInvariant { label, cell } => {
                format!("{}: {label} contains {} outside its invariant part", self.kind(), complex.id(*cell))
            }
            Violation::CriticalNotCovered { multivector } => format!("{}: V{}", self.kind(), multivector + 1),
            Violation::UncoveredCycle { cycle, .. } => format!("{}: {}", self.kind(), ids(cycle.cells())),
            Violation::Unsaturated { label, path } => format!("{}: {label} via {}", self.kind(), ids(path.cells())),
            Violation::NotAntisymmetric { first, second } => format!("{}: {first} and {second}", self.kind()),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("L{i}")).collect()
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let mut f = MorseFamily::new(3);
        f.push("a", CellSet::empty(3)).unwrap();
        assert_eq!(f.push("a", CellSet::full(3)), Err(MorseError::DuplicateLabel("a".into())));
    }

    #[test]
    fn closure_and_antisymmetry() {
        let mut r = LabelRelation::new(labels(3));
        r.insert(0, 1);
        r.insert(1, 2);
        let c = r.closure();
        assert!(c.contains(0, 2) && c.contains(1, 1));
        assert!(c.is_partial_order());
        r.insert(2, 0);
        assert!(!r.is_partial_order());
        assert_eq!(r.closure().antisymmetry_violation(), Some((0, 1)));
        assert_eq!(r.classes(), vec![vec![0, 1, 2]]);
        assert!(LabelRelation::new(labels(2)).is_partial_order());
    }

    #[test]
    fn label_pairs_resolve() {
        let r = LabelRelation::from_label_pairs(labels(2), &[("L0", "L1")]).unwrap();
        assert_eq!(r.label_pairs(), vec![("L0".to_string(), "L1".to_string())]);
        assert_eq!(
            LabelRelation::from_label_pairs(labels(2), &[("L0", "X")]),
            Err(MorseError::InvalidLabels("X".into()))
        );
    }

    #[test]
    fn inscription() {
        let a = MorseFamily::from_entries(4, [("x", CellSet::from_cells(4, [0]))]).unwrap();
        let b = MorseFamily::from_entries(4, [("y", CellSet::from_cells(4, [0, 1]))]).unwrap();
        assert!(a.is_inscribed_in(&b));
        assert!(a.refines(&b));
        assert!(!b.is_inscribed_in(&a));
        assert!(!a.refines(&a));
    }
}
