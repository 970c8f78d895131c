use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::cellset::CellSet;
use crate::cycles::{for_each_simple_cycle, DEFAULT_CYCLE_BUDGET};
use crate::dynamics::{Digraph, Direction, Dynamics, SolutionPath};

use super::{LabelRelation, MorseError, MorseFamily, VerificationReport, Violation};

/// Essential strongly connected components of `G_V` on `Inv X`, labeled
/// `M0, M1, …` by smallest cell, with the reflexive partial order in which
/// `(p, q)` means a path runs from `M_p` to `M_q`.
pub fn minimal_morse_decomposition(dynamics: &Dynamics) -> Result<(MorseFamily, LabelRelation), MorseError> {
    let n = dynamics.complex().len();
    let inv_x = dynamics.inv(&dynamics.all());
    let mut family = MorseFamily::new(n);
    for comp in dynamics.sccs(&inv_x) {
        if dynamics.field().inside_regular_multivector(&comp) {
            continue;
        }
        let label = format!("M{}", family.len());
        if !dynamics.is_isolated_invariant(&comp) {
            return Err(MorseError::MorseSetValidationFailed(label));
        }
        family.push(label, comp)?;
    }
    let all = dynamics.all();
    let mut order = LabelRelation::new(family.labels().to_vec());
    for p in 0..family.len() {
        let fwd = dynamics.reach(family.set(p), Direction::Forward, &all);
        for q in 0..family.len() {
            if fwd.intersects(family.set(q)) {
                order.insert(p, q);
            }
        }
    }
    Ok((family, order))
}

fn require_isolated(dynamics: &Dynamics, family: &MorseFamily, i: usize) -> Result<(), MorseError> {
    let s = family.set(i);
    if !s.is_empty() && !dynamics.is_isolated_invariant(s) {
        return Err(MorseError::InvalidFamily(family.label(i).to_string()));
    }
    Ok(())
}

/// Edges `p → q` (p ≠ q) when a path runs from `M_p` to `M_q`, and a loop at
/// `p` when some path leaves `M_p` and comes back.
pub fn induced_digraph(dynamics: &Dynamics, family: &MorseFamily) -> Result<LabelRelation, MorseError> {
    for i in 0..family.len() {
        require_isolated(dynamics, family, i)?;
    }
    let all = dynamics.all();
    let mut rel = LabelRelation::new(family.labels().to_vec());
    for p in 0..family.len() {
        let mp = family.set(p);
        if mp.is_empty() {
            continue;
        }
        let fwd = dynamics.reach(mp, Direction::Forward, &all);
        for q in 0..family.len() {
            if q != p && fwd.intersects(family.set(q)) {
                rel.insert(p, q);
            }
        }
        let bwd = dynamics.reach(mp, Direction::Backward, &all);
        if !fwd.intersection(&bwd).difference(mp).is_empty() {
            rel.insert(p, p);
        }
    }
    Ok(rel)
}

/// The smallest preorder containing every link, i.e. the
/// reflexive-transitive closure of the induced digraph.
pub fn flow_preorder(family: &MorseFamily, links: &LabelRelation) -> LabelRelation {
    assert_eq!(family.labels(), links.labels(), "relation over a different family");
    links.closure()
}

/// Checks disjointness, isolation of members, coverage of critical
/// multivectors and coverage of every multivector-crossing simple cycle.
///
/// Uncovered-cycle witnesses are simple cycles of `G_V` meeting each of their
/// multivectors in one contiguous stretch.
pub fn verify_predecomposition(dynamics: &Dynamics, family: &MorseFamily) -> Result<VerificationReport, MorseError> {
    verify_with_budget(dynamics, family, DEFAULT_CYCLE_BUDGET)
}

pub(crate) fn verify_with_budget(
    dynamics: &Dynamics,
    family: &MorseFamily,
    budget: usize,
) -> Result<VerificationReport, MorseError> {
    let field = dynamics.field();
    let complex = dynamics.complex();
    let mut violations = Vec::new();

    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if let Some(cell) = family.set(i).intersection(family.set(j)).first() {
                violations.push(Violation::Overlap {
                    first: family.label(i).to_string(),
                    second: family.label(j).to_string(),
                    cell,
                });
            }
        }
    }

    for (label, s) in family.iter() {
        if s.is_empty() {
            continue;
        }
        let label = label.to_string();
        if !complex.is_locally_closed(s) {
            violations.push(Violation::NotLocallyClosed { label: label.clone() });
        }
        if let Some(cell) = s.iter().find(|&x| !field.multivector(field.mv_of(x)).is_subset(s)) {
            violations.push(Violation::NotVCompatible { label: label.clone(), cell });
        }
        if let Some(cell) = s.difference(&dynamics.inv(s)).first() {
            violations.push(Violation::NotInvariant { label, cell });
        }
    }

    let covered = family.union();
    for (m, v) in field.multivectors().iter().enumerate() {
        if field.is_critical(m) && !v.intersects(&covered) {
            violations.push(Violation::CriticalNotCovered { multivector: m });
        }
    }

    // A crossing simple cycle of G_V outside ∪M contains, by splicing out
    // repeated multivectors, one whose multivectors are pairwise distinct,
    // and hulls grow with the multivectors met. So it suffices to look at
    // simple cycles of the quotient digraph on multivectors.
    let outside = covered.complement();
    let (quotient, parts) = quotient_outside(dynamics, &outside);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let all_mvs = CellSet::full(field.len());
    for_each_simple_cycle(&quotient, &all_mvs, budget, |cycle| {
        let mut key = cycle.to_vec();
        key.sort_unstable();
        if !seen.insert(key) {
            return ControlFlow::Continue(());
        }
        let mut image = CellSet::empty(complex.len());
        for &m in cycle {
            image.union_with(field.multivector(m));
        }
        let hull = field.v_hull(&image);
        if !hull.intersects(&covered) {
            violations.push(Violation::UncoveredCycle {
                cycle: lift_cycle(dynamics, &parts, cycle),
                hull,
            });
        }
        ControlFlow::Continue(())
    })?;

    Ok(VerificationReport { violations })
}

/// Digraph on multivector indices with an edge `m → m'` (m ≠ m') when a cell
/// of `m` inside `within` has a `G_V` edge to a cell of `m'` inside `within`,
/// plus the cells of each multivector inside `within`.
fn quotient_outside(dynamics: &Dynamics, within: &CellSet) -> (Digraph, Vec<CellSet>) {
    let field = dynamics.field();
    let k = field.len();
    let parts: Vec<CellSet> = field.multivectors().iter().map(|v| v.intersection(within)).collect();
    let mut succ = vec![CellSet::empty(k); k];
    for x in within {
        let m = field.mv_of(x);
        for y in dynamics.graph().successors(x).intersection(within).iter() {
            let m2 = field.mv_of(y);
            if m2 != m {
                succ[m].insert(m2);
            }
        }
    }
    (Digraph::from_successors(succ), parts)
}

/// A simple cycle of `G_V` through the given multivectors, in order. Inside
/// one multivector every cell reaches every other in one step, so entry and
/// exit cells can be joined directly.
fn lift_cycle(dynamics: &Dynamics, parts: &[CellSet], mvs: &[usize]) -> SolutionPath {
    let g = dynamics.graph();
    let k = mvs.len();
    // hops[i] = (exit of mvs[i], entry of mvs[i + 1])
    let hops: Vec<(usize, usize)> = (0..k)
        .map(|i| {
            let (a, b) = (&parts[mvs[i]], &parts[mvs[(i + 1) % k]]);
            a.iter()
                .find_map(|x| g.successors(x).intersection(b).first().map(|y| (x, y)))
                .expect("quotient edge has a witness")
        })
        .collect();
    let mut cells = Vec::with_capacity(2 * k);
    for i in 0..k {
        let entry = hops[(i + k - 1) % k].1;
        let exit = hops[i].0;
        cells.push(entry);
        if exit != entry {
            cells.push(exit);
        }
    }
    SolutionPath(cells)
}

/// A path that leaves `M_p`, avoids the other members, and returns to `M_p`.
/// `None` means the member is saturated.
pub fn saturation_witness(dynamics: &Dynamics, family: &MorseFamily, label: &str) -> Result<Option<SolutionPath>, MorseError> {
    let p = family
        .index_of(label)
        .ok_or_else(|| MorseError::InvalidLabels(label.to_string()))?;
    require_isolated(dynamics, family, p)?;
    let mp = family.set(p);
    if mp.is_empty() {
        return Ok(None);
    }
    let mut within = family.union().complement();
    within.union_with(mp);
    let fwd = dynamics.reach(mp, Direction::Forward, &within);
    let bwd = dynamics.reach(mp, Direction::Backward, &within);
    let escape = fwd.intersection(&bwd).difference(mp);
    let Some(x) = escape.first() else {
        return Ok(None);
    };
    let g = dynamics.graph();
    let target = CellSet::singleton(mp.universe(), x);
    let mut out = g.shortest_path(mp, &target, &within).expect("x is forward reachable");
    let back = g.shortest_path(&target, mp, &within).expect("x is backward reachable");
    out.extend_from_slice(&back[1..]);
    Ok(Some(SolutionPath(out)))
}

pub fn is_saturated(dynamics: &Dynamics, family: &MorseFamily, label: &str) -> Result<bool, MorseError> {
    Ok(saturation_witness(dynamics, family, label)?.is_none())
}

/// Predecomposition, every member saturated, and an antisymmetric flow
/// preorder.
pub fn is_morse_decomposition(dynamics: &Dynamics, family: &MorseFamily) -> Result<VerificationReport, MorseError> {
    let mut report = verify_predecomposition(dynamics, family)?;
    let members_ok = (0..family.len()).all(|i| require_isolated(dynamics, family, i).is_ok());
    if !members_ok {
        return Ok(report);
    }
    for label in family.labels() {
        if let Some(path) = saturation_witness(dynamics, family, label)? {
            report.violations.push(Violation::Unsaturated {
                label: label.clone(),
                path,
            });
        }
    }
    let links = induced_digraph(dynamics, family)?;
    let order = flow_preorder(family, &links);
    for (p, q) in order.strict_pairs() {
        if p < q && order.contains(q, p) {
            report.violations.push(Violation::NotAntisymmetric {
                first: family.label(p).to_string(),
                second: family.label(q).to_string(),
            });
        }
    }
    Ok(report)
}
