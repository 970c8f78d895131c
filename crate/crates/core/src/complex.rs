//! Finite cell complexes, their face poset, and Z/2 relative homology.
//!
//! A complex is given by explicit boundary lists. The face relation
//! `x <= y` (x is a face of y) is the reflexive-transitive closure of the
//! boundary relation; its down-sets are the closed sets of the Alexandrov
//! topology, so closure, mouth and local closedness are all computed on the
//! poset.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cellset::CellSet;
use crate::gf2::BitMatrix;

/// Largest simplex accepted by [`Complex::from_simplices`]; a simplex on `k`
/// vertices has `2^k - 1` faces.
pub const MAX_SIMPLEX_VERTICES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("duplicate cell id `{0}`")]
    DuplicateId(String),
    #[error("cell `{cell}` lists unknown boundary cell `{missing}`")]
    DanglingBoundaryRef { cell: String, missing: String },
    #[error("cell `{cell}` lists `{face}` twice in its boundary")]
    DuplicateBoundaryEntry { cell: String, face: String },
    #[error("cell `{cell}` of dimension {dim} lists `{face}` of dimension {face_dim} as a boundary cell")]
    BoundaryDimensionMismatch {
        cell: String,
        dim: usize,
        face: String,
        face_dim: usize,
    },
    #[error("boundary of the boundary of cell `{cell}` is nonzero over Z/2")]
    BoundarySquareNonzero { cell: String },
    #[error("simplex #{index} has no vertices")]
    EmptySimplex { index: usize },
    #[error("simplex #{index} has {len} vertices, more than the supported {max}")]
    SimplexTooLarge { index: usize, len: usize, max: usize },
    #[error("unknown cell id `{0}`")]
    UnknownCell(String),
    #[error("set is not locally closed")]
    NotLocallyClosed,
}

/// One cell of the input description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    /// Codimension-one faces with odd incidence.
    #[serde(default)]
    pub boundary: Vec<String>,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize, boundary: &[&str]) -> Self {
        Self {
            id: id.into(),
            dim,
            boundary: boundary.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// An immutable finite cell complex.
#[derive(Clone, Debug)]
pub struct Complex {
    ids: Vec<String>,
    dims: Vec<usize>,
    boundary: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    /// `down[x]` = closure of `{x}`.
    down: Vec<CellSet>,
    /// `up[x]` = `{ y : x <= y }`.
    up: Vec<CellSet>,
}

impl Complex {
    /// Builds a complex from explicit cells. Cell indices follow input order.
    pub fn from_cells(cells: Vec<Cell>) -> Result<Self, ComplexError> {
        let n = cells.len();
        let mut index = HashMap::with_capacity(n);
        for (i, c) in cells.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(ComplexError::DuplicateId(c.id.clone()));
            }
        }

        let mut boundary = Vec::with_capacity(n);
        for c in &cells {
            let mut faces = Vec::with_capacity(c.boundary.len());
            let mut seen = BTreeSet::new();
            for f in &c.boundary {
                let Some(&fi) = index.get(f) else {
                    return Err(ComplexError::DanglingBoundaryRef {
                        cell: c.id.clone(),
                        missing: f.clone(),
                    });
                };
                if !seen.insert(fi) {
                    return Err(ComplexError::DuplicateBoundaryEntry {
                        cell: c.id.clone(),
                        face: f.clone(),
                    });
                }
                let face_dim = cells[fi].dim;
                if c.dim == 0 || face_dim + 1 != c.dim {
                    return Err(ComplexError::BoundaryDimensionMismatch {
                        cell: c.id.clone(),
                        dim: c.dim,
                        face: f.clone(),
                        face_dim,
                    });
                }
                faces.push(fi);
            }
            boundary.push(faces);
        }

        let dims: Vec<usize> = cells.iter().map(|c| c.dim).collect();
        let ids: Vec<String> = cells.into_iter().map(|c| c.id).collect();

        // dd = 0 over Z/2
        for x in 0..n {
            if dims[x] < 2 {
                continue;
            }
            let mut acc = CellSet::empty(n);
            for &f in &boundary[x] {
                for &g in &boundary[f] {
                    if !acc.insert(g) {
                        acc.remove(g);
                    }
                }
            }
            if !acc.is_empty() {
                return Err(ComplexError::BoundarySquareNonzero {
                    cell: ids[x].clone(),
                });
            }
        }

        // closures, processed by increasing dimension
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| dims[x]);
        let mut down: Vec<CellSet> = vec![CellSet::empty(n); n];
        for &x in &order {
            let mut d = CellSet::singleton(n, x);
            for &f in &boundary[x] {
                d.union_with(&down[f]);
            }
            down[x] = d;
        }
        let mut up: Vec<CellSet> = vec![CellSet::empty(n); n];
        for (y, d) in down.iter().enumerate() {
            for x in d {
                up[x].insert(y);
            }
        }

        Ok(Self {
            ids,
            dims,
            boundary,
            index,
            down,
            up,
        })
    }

    /// Builds a simplicial complex from its (maximal) simplices.
    ///
    /// Every face is generated; a face's id is its vertex ids sorted and
    /// concatenated without a separator. Cells are ordered by dimension,
    /// then by id.
    pub fn from_simplices(simplices: &[Vec<String>]) -> Result<Self, ComplexError> {
        let mut faces: BTreeSet<Vec<String>> = BTreeSet::new();
        for (index, s) in simplices.iter().enumerate() {
            let verts: BTreeSet<&String> = s.iter().collect();
            if verts.is_empty() {
                return Err(ComplexError::EmptySimplex { index });
            }
            if verts.len() > MAX_SIMPLEX_VERTICES {
                return Err(ComplexError::SimplexTooLarge {
                    index,
                    len: verts.len(),
                    max: MAX_SIMPLEX_VERTICES,
                });
            }
            let verts: Vec<&String> = verts.into_iter().collect();
            for mask in 1u32..(1 << verts.len()) {
                let face: Vec<String> = verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| (*v).clone())
                    .collect();
                faces.insert(face);
            }
        }
        let mut faces: Vec<Vec<String>> = faces.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.concat().cmp(&b.concat())));

        let cells = faces
            .iter()
            .map(|f| Cell {
                id: f.concat(),
                dim: f.len() - 1,
                boundary: if f.len() == 1 {
                    Vec::new()
                } else {
                    (0..f.len())
                        .map(|skip| {
                            f.iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, v)| v.as_str())
                                .collect::<String>()
                        })
                        .collect()
                },
            })
            .collect();
        Self::from_cells(cells)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, cell: usize) -> &str {
        &self.ids[cell]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn dim(&self, cell: usize) -> usize {
        self.dims[cell]
    }

    /// Maximal cell dimension, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.dims.iter().copied().max()
    }

    pub fn boundary(&self, cell: usize) -> &[usize] {
        &self.boundary[cell]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Resolves a list of ids into a cell set.
    pub fn cell_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<CellSet, ComplexError> {
        let mut set = self.empty_set();
        for id in ids {
            let id = id.as_ref();
            let i = self
                .index_of(id)
                .ok_or_else(|| ComplexError::UnknownCell(id.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    /// Cell ids of a set, in cell-index order.
    pub fn names(&self, set: &CellSet) -> Vec<String> {
        set.iter().map(|c| self.ids[c].clone()).collect()
    }

    pub fn empty_set(&self) -> CellSet {
        CellSet::empty(self.len())
    }

    pub fn full_set(&self) -> CellSet {
        CellSet::full(self.len())
    }

    /// `x <= y` in the face poset.
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    /// Closure of a single cell.
    pub fn cell_closure(&self, cell: usize) -> &CellSet {
        &self.down[cell]
    }

    /// All cells having `cell` as a face (including itself).
    pub fn cell_star(&self, cell: usize) -> &CellSet {
        &self.up[cell]
    }

    pub fn closure(&self, set: &CellSet) -> CellSet {
        let mut out = self.empty_set();
        for x in set {
            out.union_with(&self.down[x]);
        }
        out
    }

    /// Upward closure: every cell having a member of `set` as a face.
    pub fn star(&self, set: &CellSet) -> CellSet {
        let mut out = self.empty_set();
        for x in set {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn mouth(&self, set: &CellSet) -> CellSet {
        let mut cl = self.closure(set);
        cl.difference_with(set);
        cl
    }

    pub fn is_closed(&self, set: &CellSet) -> bool {
        set.iter().all(|x| self.down[x].is_subset(set))
    }

    pub fn is_open(&self, set: &CellSet) -> bool {
        set.iter().all(|x| self.up[x].is_subset(set))
    }

    /// Local closedness through the mouth: `cl A \ A` is closed.
    pub fn is_locally_closed(&self, set: &CellSet) -> bool {
        self.is_closed(&self.mouth(set))
    }

    /// Local closedness through poset convexity: `x <= y <= z` with
    /// `x, z` in the set forces `y` into the set.
    pub fn is_convex(&self, set: &CellSet) -> bool {
        for z in set {
            for y in &self.down[z] {
                if set.contains(y) {
                    continue;
                }
                if self.down[y].intersects(set) {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest convex superset: `cl A ∩ st A`.
    pub fn convexify(&self, set: &CellSet) -> CellSet {
        let mut out = self.closure(set);
        out.intersect_with(&self.star(set));
        out
    }

    /// Restricted Z/2 boundary matrix `∂_d` on the cells of `set`: one row
    /// per `d`-cell of the set, one column per `(d-1)`-cell of the set.
    pub fn boundary_matrix(&self, set: &CellSet, d: usize) -> BitMatrix {
        let lower: Vec<usize> = if d == 0 {
            Vec::new()
        } else {
            set.iter().filter(|&c| self.dims[c] + 1 == d).collect()
        };
        let col_of: HashMap<usize, usize> = lower.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = BitMatrix::new(lower.len());
        for sigma in set.iter().filter(|&c| self.dims[c] == d) {
            m.push_row(self.boundary[sigma].iter().filter_map(|f| col_of.get(f).copied()));
        }
        m
    }

    /// Z/2 Betti numbers of the relative chain complex spanned by the cells
    /// of a locally closed set, i.e. `H(cl A, mo A)`. The vector has one
    /// entry per dimension up to the top dimension present in `set`.
    pub fn relative_betti(&self, set: &CellSet) -> Result<Vec<usize>, ComplexError> {
        if !self.is_locally_closed(set) {
            return Err(ComplexError::NotLocallyClosed);
        }
        let Some(top) = set.iter().map(|c| self.dims[c]).max() else {
            return Ok(Vec::new());
        };
        let counts: Vec<usize> = (0..=top)
            .map(|d| set.iter().filter(|&c| self.dims[c] == d).count())
            .collect();
        // ranks[d] = rank of ∂_d : C_d -> C_{d-1}; ranks[0] = ranks[top+1] = 0
        let mut ranks = vec![0usize; top + 2];
        for (d, r) in ranks.iter_mut().enumerate().take(top + 1).skip(1) {
            *r = self.boundary_matrix(set, d).rank();
        }
        Ok((0..=top)
            .map(|d| counts[d] - ranks[d] - ranks[d + 1])
            .collect())
    }

    /// Re-emits the complex as a list of cells (ids, dims, boundary lists).
    pub fn to_cells(&self) -> Vec<Cell> {
        (0..self.len())
            .map(|i| Cell {
                id: self.ids[i].clone(),
                dim: self.dims[i],
                boundary: self.boundary[i].iter().map(|&f| self.ids[f].clone()).collect(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn k() -> Complex {
        fixtures::example1().complex().clone()
    }

    fn set(c: &Complex, ids: &[&str]) -> CellSet {
        c.cell_set(ids).unwrap()
    }

    #[test]
    fn example1_complex_has_fifteen_cells() {
        let c = k();
        assert_eq!(c.len(), 15);
        assert_eq!(c.dimension(), Some(2));
        for v in ["A", "B", "C", "D", "E"] {
            assert_eq!(c.dim(c.index_of(v).unwrap()), 0);
        }
        for t in ["ACD", "BCE"] {
            assert_eq!(c.dim(c.index_of(t).unwrap()), 2);
        }
    }

    #[test]
    fn empty_complex() {
        let c = Complex::from_cells(Vec::new()).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.dimension(), None);
        assert_eq!(c.relative_betti(&c.empty_set()).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn dangling_boundary_is_rejected() {
        let err = Complex::from_cells(vec![Cell::new("A", 0, &[]), Cell::new("AB", 1, &["A", "B"])]).unwrap_err();
        assert_eq!(
            err,
            ComplexError::DanglingBoundaryRef {
                cell: "AB".into(),
                missing: "B".into()
            }
        );
    }

    #[test]
    fn duplicate_ids_and_bad_dimensions_are_rejected() {
        let err = Complex::from_cells(vec![Cell::new("A", 0, &[]), Cell::new("A", 0, &[])]).unwrap_err();
        assert_eq!(err, ComplexError::DuplicateId("A".into()));
        let err = Complex::from_cells(vec![Cell::new("A", 0, &[]), Cell::new("T", 2, &["A"])]).unwrap_err();
        assert!(matches!(err, ComplexError::BoundaryDimensionMismatch { .. }));
        let err = Complex::from_cells(vec![Cell::new("A", 0, &[]), Cell::new("e", 1, &["A", "A"])]).unwrap_err();
        assert!(matches!(err, ComplexError::DuplicateBoundaryEntry { .. }));
    }

    #[test]
    fn nonzero_boundary_square_is_rejected() {
        // a 2-cell bounded by a single edge whose endpoints do not cancel
        let err = Complex::from_cells(vec![
            Cell::new("A", 0, &[]),
            Cell::new("B", 0, &[]),
            Cell::new("AB", 1, &["A", "B"]),
            Cell::new("F", 2, &["AB"]),
        ])
        .unwrap_err();
        assert_eq!(err, ComplexError::BoundarySquareNonzero { cell: "F".into() });
    }

    #[test]
    fn from_simplices_single_triangle() {
        let c = Complex::from_simplices(&[vec!["A".into(), "B".into(), "C".into()]]).unwrap();
        assert_eq!(c.len(), 7);
        let abc = c.index_of("ABC").unwrap();
        let mut b: Vec<&str> = c.boundary(abc).iter().map(|&f| c.id(f)).collect();
        b.sort();
        assert_eq!(b, vec!["AB", "AC", "BC"]);
        let single = Complex::from_simplices(&[vec!["A".into()]]).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(
            Complex::from_simplices(&[vec![]]).unwrap_err(),
            ComplexError::EmptySimplex { index: 0 }
        );
    }

    #[test]
    fn from_simplices_detects_id_collisions() {
        let err = Complex::from_simplices(&[
            vec!["A".into(), "B".into()],
            vec!["AB".into()],
        ])
        .unwrap_err();
        assert_eq!(err, ComplexError::DuplicateId("AB".into()));
    }

    #[test]
    fn closure_and_mouth_on_example1() {
        let c = k();
        assert_eq!(
            c.closure(&set(&c, &["ACD"])),
            set(&c, &["ACD", "AC", "AD", "CD", "A", "C", "D"])
        );
        assert!(c.closure(&c.empty_set()).is_empty());
        assert_eq!(c.mouth(&set(&c, &["B", "BC"])), set(&c, &["C"]));
        assert_eq!(
            c.mouth(&set(&c, &["ACD"])),
            set(&c, &["AC", "AD", "CD", "A", "C", "D"])
        );
        let closed = c.closure(&set(&c, &["BCE"]));
        assert!(c.mouth(&closed).is_empty());
    }

    #[test]
    fn local_closedness_and_convexify_on_example1() {
        let c = k();
        assert!(c.is_locally_closed(&set(&c, &["A", "AB", "AD"])));
        let bad = set(&c, &["A", "ACD"]);
        assert!(!c.is_locally_closed(&bad));
        assert!(!c.is_convex(&bad));
        assert_eq!(c.convexify(&bad), set(&c, &["A", "AC", "AD", "ACD"]));
        assert!(c.is_locally_closed(&c.empty_set()));
        assert!(c.convexify(&c.empty_set()).is_empty());
    }

    #[test]
    fn relative_betti_on_example1() {
        let c = k();
        assert_eq!(c.relative_betti(&set(&c, &["ACD"])).unwrap(), vec![0, 0, 1]);
        assert_eq!(c.relative_betti(&set(&c, &["B", "BC"])).unwrap(), vec![0, 0]);
        assert_eq!(c.relative_betti(&set(&c, &["C", "AC", "CE"])).unwrap(), vec![0, 1]);
        assert_eq!(
            c.relative_betti(&set(&c, &["A", "ACD"])),
            Err(ComplexError::NotLocallyClosed)
        );
        let point = Complex::from_simplices(&[vec!["A".into()]]).unwrap();
        assert_eq!(point.relative_betti(&point.full_set()).unwrap(), vec![1]);
    }

    #[test]
    fn whole_complex_homology_of_example1() {
        // K is a connected graph-with-two-triangles: 5 - 8 + 2 = -1, b0 = 1, b1 = 2
        let c = k();
        assert_eq!(c.relative_betti(&c.full_set()).unwrap(), vec![1, 2, 0]);
    }
}
