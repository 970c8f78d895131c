//! Brute-force reference implementations.
//!
//! Everything here works on `u64` bit masks straight from the definitions:
//! closures and orders are recomputed from boundary lists, reachability is a
//! Warshall transitive closure, hulls are intersections over all locally
//! closed V-compatible candidates, and invariance quantifies over every
//! strongly connected subset. None of it shares code with the fast paths
//! beyond reading the input complex and field.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use std::sync::Arc;
use thiserror::Error;

use crate::cellset::CellSet;
use crate::complex::Complex;
use crate::morse::MorseFamily;
use crate::mvf::MultivectorField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle budget exceeded: {what} needs {needed}, limit {limit}")]
    BudgetExceeded { what: &'static str, needed: u128, limit: u128 },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_cells: usize,
    pub max_subsets: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_cells: 15,
            max_subsets: 1 << 18,
        }
    }
}

impl OracleBudget {
    /// Larger cell cap for the bundled fixtures, whose strongly connected
    /// pieces stay small.
    pub fn fixtures() -> Self {
        Self {
            max_cells: 64,
            max_subsets: 1 << 20,
        }
    }
}

type Mask = u64;

fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// Nonempty submasks of `m`.
fn submasks(m: Mask) -> impl Iterator<Item = Mask> {
    let mut s = m;
    let mut done = m == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = s;
        if s == 0 {
            done = true;
            return None;
        }
        s = (s - 1) & m;
        if s == 0 {
            done = true;
        }
        Some(out)
    })
}

struct Brute {
    n: usize,
    budget: OracleBudget,
    /// `down[x]`: cells `y ≤ x`.
    down: Vec<Mask>,
    mvs: Vec<Mask>,
    mv_of: Vec<usize>,
    critical: Vec<bool>,
    succ: Vec<Mask>,
    pred: Vec<Mask>,
}

impl Brute {
    fn new(field: &MultivectorField, budget: OracleBudget) -> Result<Self, OracleError> {
        let c = field.complex();
        let n = c.len();
        if n > budget.max_cells.min(64) {
            return Err(OracleError::BudgetExceeded {
                what: "cells",
                needed: n as u128,
                limit: budget.max_cells.min(64) as u128,
            });
        }
        // face order by repeated relaxation over boundary lists
        let mut down: Vec<Mask> = (0..n).map(|x| 1 << x).collect();
        loop {
            let mut changed = false;
            for x in 0..n {
                let mut m = down[x];
                for &f in c.boundary(x) {
                    m |= down[f];
                }
                if m != down[x] {
                    down[x] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mvs: Vec<Mask> = field.multivectors().iter().map(|v| v.iter().fold(0, |m, x| m | 1 << x)).collect();
        let mut mv_of = vec![0; n];
        for (i, &m) in mvs.iter().enumerate() {
            for x in bits(m) {
                mv_of[x] = i;
            }
        }
        let critical = (0..mvs.len()).map(|i| field.is_critical(i)).collect();
        let succ: Vec<Mask> = (0..n).map(|x| down[x] | mvs[mv_of[x]]).collect();
        let mut pred = vec![0; n];
        for (x, &s) in succ.iter().enumerate() {
            for y in bits(s) {
                pred[y] |= 1 << x;
            }
        }
        Ok(Self {
            n,
            budget,
            down,
            mvs,
            mv_of,
            critical,
            succ,
            pred,
        })
    }

    fn mask(&self, s: &CellSet) -> Mask {
        s.iter().fold(0, |m, x| m | 1 << x)
    }

    fn set(&self, m: Mask) -> CellSet {
        CellSet::from_cells(self.n, bits(m))
    }

    fn closure(&self, m: Mask) -> Mask {
        bits(m).fold(0, |acc, x| acc | self.down[x])
    }

    fn saturate(&self, m: Mask) -> Mask {
        bits(m).fold(0, |acc, x| acc | self.mvs[self.mv_of[x]])
    }

    fn compatible(&self, m: Mask) -> bool {
        self.saturate(m) == m
    }

    /// No `x ≤ y ≤ z` with `x, z` inside and `y` outside.
    fn convex(&self, m: Mask) -> bool {
        bits(m).all(|z| bits(self.down[z] & !m).all(|y| self.down[y] & m == 0))
    }

    fn check_subsets(&self, what: &'static str, needed: u128) -> Result<(), OracleError> {
        if needed > self.budget.max_subsets as u128 {
            return Err(OracleError::BudgetExceeded {
                what,
                needed,
                limit: self.budget.max_subsets as u128,
            });
        }
        Ok(())
    }

    /// All locally closed V-compatible supersets of `a`, as masks.
    fn lc_compatible_supersets(&self, a: Mask) -> Result<Vec<Mask>, OracleError> {
        let forced: Vec<usize> = (0..self.mvs.len()).filter(|&i| self.mvs[i] & a != 0).collect();
        let free: Vec<usize> = (0..self.mvs.len()).filter(|&i| self.mvs[i] & a == 0).collect();
        self.check_subsets("multivector unions", 1u128 << free.len())?;
        let base = forced.iter().fold(0, |m, &i| m | self.mvs[i]);
        let mut out = Vec::new();
        for pick in 0u64..(1u64 << free.len()) {
            let u = bits(pick).fold(base, |m, j| m | self.mvs[free[j]]);
            if self.convex(u) {
                out.push(u);
            }
        }
        Ok(out)
    }

    /// Intersection of all locally closed V-compatible supersets of `a`
    /// inside its closed V-compatible envelope.
    fn hull(&self, a: Mask) -> Result<Mask, OracleError> {
        let mut env = a;
        loop {
            let next = self.closure(self.saturate(env));
            if next == env {
                break;
            }
            env = next;
        }
        let inside: Vec<usize> = (0..self.mvs.len()).filter(|&i| self.mvs[i] & env == self.mvs[i]).collect();
        let forced: Vec<usize> = inside.iter().copied().filter(|&i| self.mvs[i] & a != 0).collect();
        let free: Vec<usize> = inside.iter().copied().filter(|&i| self.mvs[i] & a == 0).collect();
        self.check_subsets("hull candidates", 1u128 << free.len())?;
        let base = forced.iter().fold(0, |m, &i| m | self.mvs[i]);
        let mut best = env;
        for pick in 0u64..(1u64 << free.len()) {
            let u = bits(pick).fold(base, |m, j| m | self.mvs[free[j]]);
            if self.convex(u) {
                best &= u;
            }
        }
        Ok(best)
    }

    fn essential_hull(&self, c: Mask) -> Result<bool, OracleError> {
        let h = self.hull(c)?;
        Ok(!(0..self.mvs.len()).any(|i| !self.critical[i] && h & !self.mvs[i] == 0))
    }

    /// `reach[x]`: cells reachable from `x` inside `w` (reflexive).
    fn reach_within(&self, w: Mask) -> Vec<Mask> {
        let mut r: Vec<Mask> = (0..self.n)
            .map(|x| if w >> x & 1 == 1 { self.succ[x] & w | 1 << x } else { 0 })
            .collect();
        for k in bits(w) {
            for i in bits(w) {
                if r[i] >> k & 1 == 1 {
                    r[i] |= r[k];
                }
            }
        }
        r
    }

    fn strongly_connected(&self, c: Mask) -> bool {
        if c == 0 {
            return false;
        }
        let start: Mask = c & c.wrapping_neg();
        let grow = |adj: &Vec<Mask>| {
            let mut r = start;
            loop {
                let next = bits(r).fold(r, |m, x| m | adj[x] & c);
                if next == r {
                    return r;
                }
                r = next;
            }
        };
        grow(&self.succ) == c && grow(&self.pred) == c
    }

    /// Every strongly connected subset of `w` with an essential hull.
    fn essential_sc_subsets(&self, w: Mask) -> Result<Vec<Mask>, OracleError> {
        let r = self.reach_within(w);
        let mut comps: Vec<Mask> = Vec::new();
        let mut seen: Mask = 0;
        for x in bits(w) {
            if seen >> x & 1 == 1 {
                continue;
            }
            let comp = bits(w).filter(|&y| r[x] >> y & 1 == 1 && r[y] >> x & 1 == 1).fold(0, |m, y| m | 1 << y);
            seen |= comp;
            comps.push(comp);
        }
        let total: u128 = comps.iter().map(|c| 1u128 << c.count_ones()).sum();
        self.check_subsets("strongly connected subsets", total)?;
        let mut out = Vec::new();
        for comp in comps {
            for c in submasks(comp) {
                if self.strongly_connected(c) && self.essential_hull(c)? {
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    /// Cells of `s` on a solution inside `s` that runs from an essential
    /// strongly connected subset to another one.
    fn inv(&self, s: Mask) -> Result<Mask, OracleError> {
        let ess = self.essential_sc_subsets(s)?;
        let r = self.reach_within(s);
        let mut out = 0;
        for x in bits(s) {
            let from = ess.iter().any(|&c| bits(c).any(|y| r[y] >> x & 1 == 1));
            let to = ess.iter().any(|&c| r[x] & c != 0);
            if from && to {
                out |= 1 << x;
            }
        }
        Ok(out)
    }

    fn isolated_invariant(&self, s: Mask) -> Result<bool, OracleError> {
        Ok(self.convex(s) && self.compatible(s) && self.inv(s)? == s)
    }
}

/// Every locally closed, V-compatible superset of `a`.
pub fn all_locally_closed_vcompatible_supersets(
    field: &MultivectorField,
    a: &CellSet,
    budget: OracleBudget,
) -> Result<Vec<CellSet>, OracleError> {
    let b = Brute::new(field, budget)?;
    Ok(b.lc_compatible_supersets(b.mask(a))?.into_iter().map(|m| b.set(m)).collect())
}

/// Minimum of [`all_locally_closed_vcompatible_supersets`] by size.
pub fn brute_hull_by_enumeration(field: &MultivectorField, a: &CellSet, budget: OracleBudget) -> Result<CellSet, OracleError> {
    let all = all_locally_closed_vcompatible_supersets(field, a, budget)?;
    Ok(all.into_iter().min_by_key(CellSet::len).expect("the whole space qualifies"))
}

/// Hull by intersecting candidates inside the closed envelope.
pub fn brute_hull(field: &MultivectorField, a: &CellSet, budget: OracleBudget) -> Result<CellSet, OracleError> {
    let b = Brute::new(field, budget)?;
    Ok(b.set(b.hull(b.mask(a))?))
}

pub fn brute_inv(field: &MultivectorField, s: &CellSet, budget: OracleBudget) -> Result<CellSet, OracleError> {
    let b = Brute::new(field, budget)?;
    Ok(b.set(b.inv(b.mask(s))?))
}

pub fn brute_is_isolated_invariant(field: &MultivectorField, s: &CellSet, budget: OracleBudget) -> Result<bool, OracleError> {
    let b = Brute::new(field, budget)?;
    b.isolated_invariant(b.mask(s))
}

/// Predecomposition check straight from the definition: disjoint isolated
/// invariant members, and both limit sets of every essential solution meet
/// the union. Limit sets range over hulls of essential strongly connected
/// subsets of the whole space.
pub fn brute_verify_predecomposition(
    field: &MultivectorField,
    family: &MorseFamily,
    budget: OracleBudget,
) -> Result<bool, OracleError> {
    let b = Brute::new(field, budget)?;
    let members: Vec<Mask> = family.sets().iter().map(|s| b.mask(s)).collect();
    for (i, &m) in members.iter().enumerate() {
        if members[i + 1..].iter().any(|&o| o & m != 0) {
            return Ok(false);
        }
        if m != 0 && !b.isolated_invariant(m)? {
            return Ok(false);
        }
    }
    let union = members.iter().fold(0, |acc, &m| acc | m);
    let all = if b.n == 64 { u64::MAX } else { (1u64 << b.n) - 1 };
    for c in b.essential_sc_subsets(all)? {
        if b.hull(c)? & union == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Saturation from the definition: no essential solution leaves `M_p`,
/// avoids the other members, and comes back. Such a solution is an
/// essential strongly connected subset of `M_p` reaching a cell outside
/// `M_p` that reaches an essential strongly connected subset of `M_p`.
pub fn brute_is_saturated(
    field: &MultivectorField,
    family: &MorseFamily,
    label: &str,
    budget: OracleBudget,
) -> Result<bool, OracleError> {
    let b = Brute::new(field, budget)?;
    let p = family.index_of(label).ok_or_else(|| OracleError::UnknownLabel(label.to_string()))?;
    let mp = b.mask(family.set(p));
    if mp == 0 {
        return Ok(true);
    }
    let union = family.sets().iter().fold(0, |acc, s| acc | b.mask(s));
    let all = if b.n == 64 { u64::MAX } else { (1u64 << b.n) - 1 };
    let w = (all & !union) | mp;
    let r = b.reach_within(w);
    let ess = b.essential_sc_subsets(mp)?;
    for x in bits(w & !mp) {
        let from = ess.iter().any(|&c| bits(c).any(|y| r[y] >> x & 1 == 1));
        let to = ess.iter().any(|&c| r[x] & c != 0);
        if from && to {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Union of the images of essential solutions whose limit sets meet members
/// labeled in `labels`: cells between an essential strongly connected subset
/// of such a member and another one.
pub fn brute_connection_set<S: AsRef<str>>(
    field: &MultivectorField,
    family: &MorseFamily,
    labels: &[S],
    budget: OracleBudget,
) -> Result<CellSet, OracleError> {
    let b = Brute::new(field, budget)?;
    let mut ess = Vec::new();
    for l in labels {
        let l = l.as_ref();
        let p = family.index_of(l).ok_or_else(|| OracleError::UnknownLabel(l.to_string()))?;
        ess.extend(b.essential_sc_subsets(b.mask(family.set(p)))?);
    }
    let all = if b.n == 64 { u64::MAX } else { (1u64 << b.n) - 1 };
    let r = b.reach_within(all);
    let mut out = 0;
    for x in 0..b.n {
        let from = ess.iter().any(|&c| bits(c).any(|y| r[y] >> x & 1 == 1));
        let to = ess.iter().any(|&c| r[x] & c != 0);
        if from && to {
            out |= 1 << x;
        }
    }
    Ok(b.set(out))
}

/// Random abstract simplicial complex on at most `max_vertices` vertices with
/// at most `max_cells` cells, and a random field on it obtained by merging
/// adjacent cells while every multivector stays convex.
pub fn random_fixture<R: Rng>(rng: &mut R, max_vertices: usize, max_cells: usize) -> MultivectorField {
    let names: Vec<String> = (0..max_vertices).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let complex = loop {
        let nv = rng.gen_range(1..=max_vertices);
        let mut facets: Vec<Vec<String>> = (0..nv).map(|i| vec![names[i].clone()]).collect();
        let extra = rng.gen_range(0..=nv + 2);
        for _ in 0..extra {
            let k = rng.gen_range(2..=3.min(nv).max(2));
            if k > nv {
                break;
            }
            let mut vs: Vec<String> = names[..nv].choose_multiple(rng, k).cloned().collect();
            vs.sort();
            facets.push(vs);
        }
        let c = Complex::from_simplices(&facets).expect("generated simplices are valid");
        if c.len() <= max_cells {
            break Arc::new(c);
        }
    };
    let n = complex.len();
    let mut parts: Vec<CellSet> = (0..n).map(|x| CellSet::singleton(n, x)).collect();
    let merges = rng.gen_range(0..=n);
    for _ in 0..merges * 3 {
        if parts.len() < 2 {
            break;
        }
        let i = rng.gen_range(0..parts.len());
        // merge with a part containing a face or coface of some cell of part i
        let mut neighbours = CellSet::empty(n);
        for x in &parts[i] {
            neighbours.union_with(complex.cell_closure(x));
            neighbours.union_with(complex.cell_star(x));
        }
        let candidates: Vec<usize> = (0..parts.len())
            .filter(|&j| j != i && parts[j].intersects(&neighbours))
            .collect();
        let Some(&j) = candidates.choose(rng) else {
            continue;
        };
        let merged = parts[i].union(&parts[j]);
        if complex.is_convex(&merged) {
            let (lo, hi) = (i.min(j), i.max(j));
            parts.remove(hi);
            parts[lo] = merged;
        }
        if rng.gen_bool(0.15) {
            break;
        }
    }
    MultivectorField::from_sets(complex, parts).expect("convex merges keep a valid field")
}

/// [`random_fixture`] driven by a ChaCha8 stream, so a seed pins the field.
pub fn random_fixture_seeded(seed: u64, max_vertices: usize, max_cells: usize) -> MultivectorField {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    random_fixture(&mut rng, max_vertices, max_cells)
}
