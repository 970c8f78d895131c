//! The combinatorial dynamical system `Π_V(x) = cl x ∪ [x]_V` of a field.
//!
//! # Invariant parts through strongly connected components
//!
//! `Inv S` is the set of cells of `S` admitting an essential solution that
//! stays in `S`. In a finite space the α- and ω-limit behaviour of any full
//! solution is captured by a strongly connected set `C` (the cells visited
//! infinitely often), and the limit set is `v_hull(C)`. Such a hull lies in a
//! single multivector exactly when `C` does, so whether a limit behaviour is
//! essential depends only on which multivectors `C` meets: `C` is essential
//! iff it meets two or more multivectors or sits inside a critical one.
//!
//! Consequently `x ∈ Inv S` iff, inside the subgraph induced on `S`, some
//! essential strongly connected component reaches `x` and `x` reaches some
//! essential component. The brute-force referee for this criterion lives in
//! [`crate::oracle`].
//!
//! Solutions are handled in lasso form only: a backward cycle, a bridge and
//! a forward cycle. In a finite space every limit behaviour is realised by
//! such eventually periodic solutions.

use thiserror::Error;

use crate::cellset::CellSet;
use crate::complex::Complex;
use crate::mvf::MultivectorField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("set is empty or not strongly connected")]
    NotStronglyConnected,
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Reflexive digraph `G_V` on the cells.
#[derive(Clone, Debug)]
pub struct Digraph {
    succ: Vec<CellSet>,
    pred: Vec<CellSet>,
}

impl Digraph {
    pub fn from_successors(succ: Vec<CellSet>) -> Self {
        let n = succ.len();
        let mut pred = vec![CellSet::empty(n); n];
        for (x, s) in succ.iter().enumerate() {
            for y in s {
                pred[y].insert(x);
            }
        }
        Self { succ, pred }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self, x: usize) -> &CellSet {
        &self.succ[x]
    }

    pub fn predecessors(&self, x: usize) -> &CellSet {
        &self.pred[x]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.succ[x].contains(y)
    }

    /// Number of edges, loops included.
    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(CellSet::len).sum()
    }

    /// Every consecutive pair of `path` is an edge. Empty paths are invalid.
    pub fn validate_path(&self, path: &[usize]) -> bool {
        !path.is_empty()
            && path.iter().all(|&x| x < self.len())
            && path.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    /// A valid path whose last cell steps back to its first.
    pub fn is_closed_walk(&self, walk: &[usize]) -> bool {
        self.validate_path(walk) && self.has_edge(walk[walk.len() - 1], walk[0])
    }

    /// Cells of `within` reachable from `seeds` (or co-reachable, going
    /// backward) along edges of the subgraph induced on `within`.
    pub fn reach(&self, seeds: &CellSet, direction: Direction, within: &CellSet) -> CellSet {
        let adj = match direction {
            Direction::Forward => &self.succ,
            Direction::Backward => &self.pred,
        };
        let mut seen = seeds.intersection(within);
        let mut stack: Vec<usize> = seen.iter().collect();
        while let Some(x) = stack.pop() {
            for y in &adj[x] {
                if within.contains(y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Shortest path inside `within` from a cell of `from` to a cell of `to`.
    pub fn shortest_path(&self, from: &CellSet, to: &CellSet, within: &CellSet) -> Option<Vec<usize>> {
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for s in from.intersection(within).iter() {
            parent[s] = s;
            queue.push_back(s);
        }
        while let Some(x) = queue.pop_front() {
            if to.contains(x) {
                let mut path = vec![x];
                let mut cur = x;
                while parent[cur] != cur {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for y in &self.succ[x] {
                if within.contains(y) && parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Strongly connected components of the subgraph induced on `within`,
    /// sorted by their smallest cell.
    pub fn sccs(&self, within: &CellSet) -> Vec<CellSet> {
        let n = self.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0usize;

        for root in within {
            if index[root] != usize::MAX {
                continue;
            }
            // explicit call stack of (vertex, successor list, position)
            let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            call.push((root, self.succ[root].intersection(within).iter().collect(), 0));

            while let Some((v, succs, pos)) = call.last_mut() {
                let v = *v;
                if *pos < succs.len() {
                    let w = succs[*pos];
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, self.succ[w].intersection(within).iter().collect(), 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = CellSet::empty(n);
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.insert(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
        comps.sort_by_key(|c| c.first());
        comps
    }
}

/// A finite path of cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionPath(pub Vec<usize>);

impl SolutionPath {
    pub fn cells(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, universe: usize) -> CellSet {
        CellSet::from_cells(universe, self.0.iter().copied())
    }
}

/// An eventually periodic full solution: `backward^∞ · bridge · forward^∞`.
///
/// Both cycles are closed walks listed without repeating the first cell. The
/// bridge may be empty, in which case the last cell of `backward` steps
/// directly to the first cell of `forward`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub backward: SolutionPath,
    pub bridge: SolutionPath,
    pub forward: SolutionPath,
}

impl Lasso {
    /// The periodic solution running around `cycle` forever.
    pub fn periodic(cycle: Vec<usize>) -> Self {
        Self {
            backward: SolutionPath(cycle.clone()),
            bridge: SolutionPath(Vec::new()),
            forward: SolutionPath(cycle),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitSets {
    pub alpha: CellSet,
    pub omega: CellSet,
    /// Neither limit set lies in a single regular multivector.
    pub essential: bool,
}

/// A field together with its digraph.
#[derive(Clone, Debug)]
pub struct Dynamics<'f> {
    field: &'f MultivectorField,
    graph: Digraph,
}

impl<'f> Dynamics<'f> {
    pub fn new(field: &'f MultivectorField) -> Self {
        let n = field.complex().len();
        let succ = (0..n).map(|x| pi_v(field, x)).collect();
        Self {
            field,
            graph: Digraph::from_successors(succ),
        }
    }

    pub fn field(&self) -> &'f MultivectorField {
        self.field
    }

    pub fn complex(&self) -> &'f Complex {
        self.field.complex()
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn all(&self) -> CellSet {
        self.complex().full_set()
    }

    pub fn pi_v(&self, x: usize) -> &CellSet {
        self.graph.successors(x)
    }

    pub fn sccs(&self, within: &CellSet) -> Vec<CellSet> {
        self.graph.sccs(within)
    }

    pub fn reach(&self, seeds: &CellSet, direction: Direction, within: &CellSet) -> CellSet {
        self.graph.reach(seeds, direction, within)
    }

    pub fn is_strongly_connected(&self, set: &CellSet) -> bool {
        let Some(x) = set.first() else {
            return false;
        };
        let seed = CellSet::singleton(set.universe(), x);
        self.reach(&seed, Direction::Forward, set) == *set && self.reach(&seed, Direction::Backward, set) == *set
    }

    /// Essentiality of a strongly connected set: it meets at least two
    /// multivectors, or its single multivector is critical.
    pub fn is_essential_scs(&self, set: &CellSet) -> Result<bool, DynamicsError> {
        if !self.is_strongly_connected(set) {
            return Err(DynamicsError::NotStronglyConnected);
        }
        Ok(self.scc_is_essential(set))
    }

    fn scc_is_essential(&self, set: &CellSet) -> bool {
        !self.field.inside_regular_multivector(set)
    }

    /// Maximal invariant subset of `s`.
    pub fn inv(&self, s: &CellSet) -> CellSet {
        let mut essential = self.complex().empty_set();
        for comp in self.sccs(s) {
            if self.scc_is_essential(&comp) {
                essential.union_with(&comp);
            }
        }
        let fwd = self.reach(&essential, Direction::Forward, s);
        let bwd = self.reach(&essential, Direction::Backward, s);
        fwd.intersection(&bwd)
    }

    pub fn is_invariant(&self, s: &CellSet) -> bool {
        self.inv(s) == *s
    }

    /// Invariant, locally closed and V-compatible.
    pub fn is_isolated_invariant(&self, s: &CellSet) -> bool {
        self.complex().is_locally_closed(s) && self.field.is_v_compatible(s) && self.is_invariant(s)
    }

    /// A closed walk visiting every cell of a strongly connected set.
    pub fn covering_cycle(&self, set: &CellSet) -> Result<SolutionPath, DynamicsError> {
        if !self.is_strongly_connected(set) {
            return Err(DynamicsError::NotStronglyConnected);
        }
        let n = set.universe();
        let start = set.first().expect("nonempty");
        let mut walk = vec![start];
        let mut pending = set.clone();
        pending.remove(start);
        let mut cur = start;
        while let Some(target) = pending.first() {
            let path = self
                .graph
                .shortest_path(&CellSet::singleton(n, cur), &CellSet::singleton(n, target), set)
                .expect("strongly connected");
            for &x in &path[1..] {
                pending.remove(x);
                walk.push(x);
            }
            cur = target;
        }
        if cur != start {
            let back = self
                .graph
                .shortest_path(&CellSet::singleton(n, cur), &CellSet::singleton(n, start), set)
                .expect("strongly connected");
            // drop the final `start`; the walk closes implicitly
            walk.extend_from_slice(&back[1..back.len() - 1]);
        }
        Ok(SolutionPath(walk))
    }

    /// Limit sets of a lasso solution: the V-hulls of its two cycles.
    pub fn lasso_limits(&self, lasso: &Lasso) -> Result<LimitSets, DynamicsError> {
        let g = &self.graph;
        let back = lasso.backward.cells();
        let fwd = lasso.forward.cells();
        let bridge = lasso.bridge.cells();
        if !g.is_closed_walk(back) {
            return Err(DynamicsError::InvalidWalk("backward cycle is not a closed walk".into()));
        }
        if !g.is_closed_walk(fwd) {
            return Err(DynamicsError::InvalidWalk("forward cycle is not a closed walk".into()));
        }
        let mut spine = vec![back[back.len() - 1]];
        spine.extend_from_slice(bridge);
        spine.push(fwd[0]);
        if !g.validate_path(&spine) {
            return Err(DynamicsError::InvalidWalk("bridge does not connect the cycles".into()));
        }
        let n = self.complex().len();
        let alpha = self.field.v_hull(&lasso.backward.image(n));
        let omega = self.field.v_hull(&lasso.forward.image(n));
        let essential = !self.field.inside_regular_multivector(&alpha) && !self.field.inside_regular_multivector(&omega);
        Ok(LimitSets { alpha, omega, essential })
    }
}

/// `Π_V(x) = cl x ∪ [x]_V`.
pub fn pi_v(field: &MultivectorField, x: usize) -> CellSet {
    let mut out = field.complex().cell_closure(x).clone();
    out.union_with(field.multivector(field.mv_of(x)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(c: &Complex, names: &[&str]) -> Vec<usize> {
        names.iter().map(|s| c.index_of(s).unwrap()).collect()
    }

    #[test]
    fn generator_on_example1() {
        let fx = fixtures::example1();
        let f = fx.field();
        let c = f.complex();
        let d = Dynamics::new(f);
        let b = c.index_of("B").unwrap();
        assert_eq!(*d.pi_v(b), c.cell_set(&["B", "BC"]).unwrap());
        let acd = c.index_of("ACD").unwrap();
        assert_eq!(
            *d.pi_v(acd),
            c.cell_set(&["ACD", "AC", "AD", "CD", "A", "C", "D"]).unwrap()
        );
        for x in 0..c.len() {
            assert!(d.pi_v(x).contains(x));
        }
        let total: usize = (0..c.len()).map(|x| d.pi_v(x).len()).sum();
        assert_eq!(d.graph().edge_count(), total);
        assert_eq!(d.graph().len(), 15);
    }

    #[test]
    fn single_vertex_graph_has_a_loop() {
        let c = std::sync::Arc::new(Complex::from_simplices(&[vec!["A".into()]]).unwrap());
        let f = MultivectorField::singletons(c);
        let d = Dynamics::new(&f);
        assert!(d.graph().has_edge(0, 0));
        assert_eq!(d.graph().edge_count(), 1);
    }

    #[test]
    fn path_validation() {
        let fx = fixtures::example1();
        let d = Dynamics::new(fx.field());
        let c = d.complex();
        assert!(d.graph().validate_path(&ids(c, &["A", "AB", "B", "BC", "C"])));
        assert!(!d.graph().validate_path(&ids(c, &["B", "D"])));
        assert!(d.graph().validate_path(&ids(c, &["E"])));
        assert!(!d.graph().validate_path(&[]));
    }

    #[test]
    fn sccs_on_example1() {
        let fx = fixtures::example1();
        let d = Dynamics::new(fx.field());
        let c = d.complex();
        let comps = d.sccs(&c.full_set());
        assert_eq!(comps.len(), 3);
        let mut sizes: Vec<usize> = comps.iter().map(CellSet::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 13]);
        assert!(comps.contains(&c.cell_set(&["ACD"]).unwrap()));
        assert!(comps.contains(&c.cell_set(&["BCE"]).unwrap()));

        let s = c.cell_set(&["B", "BC", "C", "AC", "CE"]).unwrap();
        assert_eq!(
            d.sccs(&s),
            vec![c.cell_set(&["B", "BC"]).unwrap(), c.cell_set(&["C", "AC", "CE"]).unwrap()]
        );
        assert!(d.sccs(&c.empty_set()).is_empty());
    }

    #[test]
    fn essentiality_of_strongly_connected_sets() {
        let fx = fixtures::example1();
        let d = Dynamics::new(fx.field());
        let c = d.complex();
        assert_eq!(d.is_essential_scs(&c.cell_set(&["ACD"]).unwrap()), Ok(true));
        assert_eq!(d.is_essential_scs(&c.cell_set(&["B", "BC"]).unwrap()), Ok(false));
        // BC -> C -> AC -> A -> AB -> B -> BC crosses V1, V2, V3
        let cross = c.cell_set(&["B", "BC", "C", "AC", "A", "AB"]).unwrap();
        assert_eq!(d.is_essential_scs(&cross), Ok(true));
        assert_eq!(
            d.is_essential_scs(&c.cell_set(&["B", "D"]).unwrap()),
            Err(DynamicsError::NotStronglyConnected)
        );
    }

    #[test]
    fn invariant_parts_on_example1() {
        let fx = fixtures::example1();
        let d = Dynamics::new(fx.field());
        let c = d.complex();
        let s = c.cell_set(&["B", "BC", "C", "AC", "CE"]).unwrap();
        assert_eq!(d.inv(&s), c.cell_set(&["C", "AC", "CE"]).unwrap());
        assert_eq!(d.inv(&c.full_set()), c.full_set());
        assert!(d.inv(&c.empty_set()).is_empty());

        assert!(d.is_isolated_invariant(&c.cell_set(&["ACD"]).unwrap()));
        let v2 = c.cell_set(&["B", "BC"]).unwrap();
        assert!(d.inv(&v2).is_empty());
        assert!(!d.is_invariant(&v2));
        assert!(d.is_isolated_invariant(&c.empty_set()));
    }

    #[test]
    fn reachability_on_example1() {
        let fx = fixtures::example1();
        let d = Dynamics::new(fx.field());
        let c = d.complex();
        let all = c.full_set();
        let from_acd = d.reach(&c.cell_set(&["ACD"]).unwrap(), Direction::Forward, &all);
        let expected = all.difference(&c.cell_set(&["BCE"]).unwrap());
        assert_eq!(from_acd, expected);
        assert!(d.reach(&c.empty_set(), Direction::Forward, &all).is_empty());
        let e = c.cell_set(&["E"]).unwrap();
        assert_eq!(d.reach(&e, Direction::Forward, &e), e);
    }

    #[test]
    fn covering_cycles_are_closed_walks() {
        let fx = fixtures::example1();
        let d = Dynamics::new(fx.field());
        let c = d.complex();
        for comp in d.sccs(&c.full_set()) {
            let w = d.covering_cycle(&comp).unwrap();
            assert!(d.graph().is_closed_walk(w.cells()));
            assert_eq!(w.image(c.len()), comp);
        }
    }

    #[test]
    fn lasso_limits_on_example1() {
        let fx = fixtures::example1();
        let f = fx.field();
        let d = Dynamics::new(f);
        let c = d.complex();
        let lim = d.lasso_limits(&Lasso::periodic(ids(c, &["C", "AC"]))).unwrap();
        assert_eq!(lim.omega, c.cell_set(&["C", "AC", "CE"]).unwrap());
        assert!(lim.essential);

        let lim = d.lasso_limits(&Lasso::periodic(ids(c, &["ACD"]))).unwrap();
        assert_eq!(lim.omega, c.cell_set(&["ACD"]).unwrap());
        assert!(lim.essential);

        let lim = d.lasso_limits(&Lasso::periodic(ids(c, &["B", "BC"]))).unwrap();
        assert_eq!(lim.omega, c.cell_set(&["B", "BC"]).unwrap());
        assert!(!lim.essential);

        // ACD^∞ · AC · C^∞ is a heteroclinic lasso
        let lasso = Lasso {
            backward: SolutionPath(ids(c, &["ACD"])),
            bridge: SolutionPath(ids(c, &["AC"])),
            forward: SolutionPath(ids(c, &["C", "CE"])),
        };
        let lim = d.lasso_limits(&lasso).unwrap();
        assert_eq!(lim.alpha, c.cell_set(&["ACD"]).unwrap());
        assert_eq!(lim.omega, c.cell_set(&["C", "AC", "CE"]).unwrap());

        let bad = Lasso::periodic(ids(c, &["B", "D"]));
        assert!(matches!(d.lasso_limits(&bad), Err(DynamicsError::InvalidWalk(_))));
    }
}
