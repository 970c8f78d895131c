//! Enumeration of pool-minimal Morse predecompositions.
//!
//! The pool holds `Inv(v_hull(C))` for every simple cycle or loop `C` of
//! `G_V` whose hull is essential. Each pool candidate is isolated invariant:
//! the hull is locally closed and V-compatible, and any cell lying between
//! invariant cells, or sharing a multivector with one, can be spliced into
//! the essential solution through it.
//!
//! A family of disjoint pool candidates is a predecomposition exactly when it
//! meets every critical multivector and every hull of a multivector-crossing
//! simple cycle. Only the inclusion-minimal such sets ("requirements")
//! matter. The search repeatedly picks the first unmet requirement and
//! branches on the disjoint candidates meeting it, so every family it emits
//! consists of members each chosen for some requirement. Any verifying
//! family that is minimal under inscription is reached this way, and a
//! family is kept when no other emitted family is strictly inscribed in it.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::cellset::CellSet;
use crate::cycles::{for_each_simple_cycle, DEFAULT_CYCLE_BUDGET};
use crate::dynamics::Dynamics;

use super::decomposition::{is_saturated, verify_with_budget};
use super::{MorseError, MorseFamily};

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Keep only families whose members are all saturated.
    pub require_saturated: bool,
    pub max_families: usize,
    pub cycle_budget: usize,
    /// Cap on search-tree nodes.
    pub search_budget: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            require_saturated: false,
            max_families: 1000,
            cycle_budget: DEFAULT_CYCLE_BUDGET,
            search_budget: 1_000_000,
        }
    }
}

struct Analysis {
    pool: Vec<CellSet>,
    requirements: Vec<CellSet>,
}

fn analyse(dynamics: &Dynamics, cycle_budget: usize) -> Result<Analysis, MorseError> {
    let field = dynamics.field();
    let n = dynamics.complex().len();
    // the hull of a cycle only depends on the multivectors it meets
    let mut footprints: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut seen = vec![false; field.len()];
    for_each_simple_cycle(dynamics.graph(), &dynamics.all(), cycle_budget, |c| {
        let mut fp: Vec<usize> = Vec::new();
        for &x in c {
            let m = field.mv_of(x);
            if !seen[m] {
                seen[m] = true;
                fp.push(m);
            }
        }
        for &m in &fp {
            seen[m] = false;
        }
        fp.sort_unstable();
        footprints.insert(fp);
        ControlFlow::Continue(())
    })?;

    // (hull, crosses two multivectors)
    let hulls: Vec<(CellSet, bool)> = footprints
        .par_iter()
        .map(|fp| {
            let mut image = CellSet::empty(n);
            for &m in fp {
                image.union_with(field.multivector(m));
            }
            (field.v_hull(&image), fp.len() >= 2)
        })
        .collect();

    let mut essential_hulls: BTreeSet<CellSet> = BTreeSet::new();
    let mut raw_requirements: BTreeSet<CellSet> = BTreeSet::new();
    for (m, v) in field.multivectors().iter().enumerate() {
        if field.is_critical(m) {
            essential_hulls.insert(v.clone());
            raw_requirements.insert(v.clone());
        }
    }
    for (hull, crossing) in hulls {
        if crossing {
            raw_requirements.insert(hull.clone());
            essential_hulls.insert(hull);
        } else if !field.inside_regular_multivector(&hull) {
            essential_hulls.insert(hull);
        }
    }

    let hull_list: Vec<CellSet> = essential_hulls.into_iter().collect();
    let invs: BTreeSet<CellSet> = hull_list
        .par_iter()
        .map(|h| dynamics.inv(h))
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    let mut pool: Vec<CellSet> = invs.into_iter().collect();
    pool.sort_by(|a, b| (a.len(), a.first(), a).cmp(&(b.len(), b.first(), b)));

    let raw: Vec<CellSet> = raw_requirements.into_iter().collect();
    let mut requirements: Vec<CellSet> = raw
        .iter()
        .filter(|r| !raw.iter().any(|s| s != *r && s.is_subset(r)))
        .cloned()
        .collect();
    requirements.sort_by(|a, b| (a.len(), a.first(), a).cmp(&(b.len(), b.first(), b)));
    Ok(Analysis { pool, requirements })
}

/// The deduplicated candidate pool, smallest candidates first.
pub fn pool_candidates(dynamics: &Dynamics, cycle_budget: usize) -> Result<Vec<CellSet>, MorseError> {
    Ok(analyse(dynamics, cycle_budget)?.pool)
}

struct Search<'a> {
    pool: &'a [CellSet],
    requirements: &'a [CellSet],
    nodes: usize,
    budget: usize,
    found: BTreeSet<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, chosen: &mut Vec<usize>, covered: &CellSet) -> Result<(), MorseError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(MorseError::SearchBudgetExceeded(self.budget));
        }
        let Some(req) = self.requirements.iter().find(|r| !r.intersects(covered)) else {
            let mut key = chosen.clone();
            key.sort_unstable();
            self.found.insert(key);
            return Ok(());
        };
        for (i, cand) in self.pool.iter().enumerate() {
            if cand.intersects(req) && cand.is_disjoint(covered) {
                chosen.push(i);
                self.run(chosen, &covered.union(cand))?;
                chosen.pop();
            }
        }
        Ok(())
    }
}

/// Pool-minimal predecompositions in a deterministic order.
pub fn enumerate_predecompositions(dynamics: &Dynamics, opts: &EnumerateOptions) -> Result<Vec<MorseFamily>, MorseError> {
    let Analysis { pool, requirements } = analyse(dynamics, opts.cycle_budget)?;
    let mut search = Search {
        pool: &pool,
        requirements: &requirements,
        nodes: 0,
        budget: opts.search_budget,
        found: BTreeSet::new(),
    };
    search.run(&mut Vec::new(), &dynamics.complex().empty_set())?;

    let found: Vec<Vec<usize>> = search.found.into_iter().collect();
    let inscribed = |a: &[usize], b: &[usize]| a.iter().all(|&x| b.iter().any(|&y| pool[x].is_subset(&pool[y])));
    let minimal: Vec<&Vec<usize>> = found
        .iter()
        .filter(|f| !found.iter().any(|g| g != *f && inscribed(g, f)))
        .collect();

    let complex = dynamics.complex();
    let mut families: Vec<(Vec<CellSet>, MorseFamily)> = Vec::new();
    for members in minimal {
        let mut sets: Vec<CellSet> = members.iter().map(|&i| pool[i].clone()).collect();
        sets.sort_by_key(|s| s.first());
        let family = MorseFamily::from_entries(
            complex.len(),
            sets.iter().map(|s| (complex.id(s.first().expect("nonempty")).to_string(), s.clone())),
        )?;
        if !verify_with_budget(dynamics, &family, opts.cycle_budget)?.passed() {
            return Err(MorseError::MorseSetValidationFailed(family.labels().join(",")));
        }
        if opts.require_saturated {
            let mut all_saturated = true;
            for label in family.labels() {
                all_saturated &= is_saturated(dynamics, &family, label)?;
            }
            if !all_saturated {
                continue;
            }
        }
        let mut key = sets;
        key.sort();
        families.push((key, family));
    }
    families.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(families
        .into_iter()
        .take(opts.max_families)
        .map(|(_, f)| f)
        .collect())
}
