use crate::cellset::CellSet;
use crate::dynamics::{Direction, Dynamics};

use super::decomposition::{flow_preorder, induced_digraph, is_morse_decomposition, saturation_witness, verify_predecomposition};
use super::{LabelRelation, MorseError, MorseFamily};

/// Cells on a path from some nonempty `M_p` to some nonempty `M_q`, with
/// `p, q ∈ labels`. Validated saturated and isolated invariant.
pub fn connection_set<S: AsRef<str>>(
    dynamics: &Dynamics,
    family: &MorseFamily,
    labels: &[S],
) -> Result<CellSet, MorseError> {
    let mut seeds = CellSet::empty(family.universe());
    for l in labels {
        let l = l.as_ref();
        let i = family.index_of(l).ok_or_else(|| MorseError::InvalidLabels(l.to_string()))?;
        let s = family.set(i);
        if !s.is_empty() && !dynamics.is_isolated_invariant(s) {
            return Err(MorseError::InvalidFamily(l.to_string()));
        }
        seeds.union_with(s);
    }
    let all = dynamics.all();
    let fwd = dynamics.reach(&seeds, Direction::Forward, &all);
    let bwd = dynamics.reach(&seeds, Direction::Backward, &all);
    let set = fwd.intersection(&bwd);

    let fail = || MorseError::ConnectionSetValidationFailed(labels.iter().map(|l| l.as_ref().to_string()).collect());
    if !dynamics.is_isolated_invariant(&set) {
        return Err(fail());
    }
    let alone = MorseFamily::from_entries(family.universe(), [("Q", set.clone())])?;
    if saturation_witness(dynamics, &alone, "Q")?.is_some() {
        return Err(fail());
    }
    Ok(set)
}

/// Replaces each part of a convex partition of the labels by its connection
/// set. `preorder` must be admissible; the result carries the induced
/// partial order on parts and is checked to be a Morse decomposition.
pub fn consolidate<S: AsRef<str>>(
    dynamics: &Dynamics,
    family: &MorseFamily,
    partition: &[Vec<S>],
    preorder: &LabelRelation,
) -> Result<(MorseFamily, LabelRelation), MorseError> {
    if !verify_predecomposition(dynamics, family)?.passed() {
        return Err(MorseError::NotAPredecomposition);
    }
    assert_eq!(family.labels(), preorder.labels(), "preorder over a different family");

    let n = family.len();
    let mut part_of = vec![usize::MAX; n];
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(partition.len());
    for (k, part) in partition.iter().enumerate() {
        if part.is_empty() {
            return Err(MorseError::EmptyPart(k));
        }
        let mut idx = Vec::with_capacity(part.len());
        for l in part {
            let l = l.as_ref();
            let i = family.index_of(l).ok_or_else(|| MorseError::InvalidLabels(l.to_string()))?;
            if part_of[i] != usize::MAX {
                return Err(MorseError::NotAPartition(l.to_string()));
            }
            part_of[i] = k;
            idx.push(i);
        }
        parts.push(idx);
    }
    if let Some(i) = part_of.iter().position(|&k| k == usize::MAX) {
        return Err(MorseError::NotAPartition(family.label(i).to_string()));
    }

    let order = preorder.closure();
    let links = induced_digraph(dynamics, family)?;
    for (p, q) in links.pairs() {
        if !order.contains(p, q) {
            return Err(MorseError::NotAdmissible {
                from: family.label(p).to_string(),
                to: family.label(q).to_string(),
            });
        }
    }

    // q ≤ r ≤ p with p, q in a part forces r into that part
    for (k, part) in parts.iter().enumerate() {
        for &p in part {
            for &q in part {
                for (r, &part_r) in part_of.iter().enumerate() {
                    if part_r != k && order.contains(p, r) && order.contains(r, q) {
                        return Err(MorseError::PartNotConvex {
                            part: k,
                            label: family.label(r).to_string(),
                        });
                    }
                }
            }
        }
    }

    let part_labels: Vec<String> = partition
        .iter()
        .map(|part| part.iter().map(|l| l.as_ref()).collect::<Vec<_>>().join("+"))
        .collect();
    let mut induced = LabelRelation::new(part_labels.clone());
    for (p, q) in order.pairs() {
        induced.insert(part_of[p], part_of[q]);
    }
    let induced = induced.closure();
    if let Some((a, b)) = induced.antisymmetry_violation() {
        return Err(MorseError::InducedRelationNotAntisymmetric { first: a, second: b });
    }

    let mut out = MorseFamily::new(family.universe());
    for (label, part) in part_labels.iter().zip(partition) {
        out.push(label.clone(), connection_set(dynamics, family, part)?)?;
    }
    if !is_morse_decomposition(dynamics, &out)?.passed() {
        return Err(MorseError::ConsolidationFailed);
    }
    Ok((out, induced))
}

/// Consolidates over the strongly connected classes of the induced digraph,
/// using the flow preorder.
pub fn consolidate_by_scc(dynamics: &Dynamics, family: &MorseFamily) -> Result<(MorseFamily, LabelRelation), MorseError> {
    let links = induced_digraph(dynamics, family)?;
    let preorder = flow_preorder(family, &links);
    let partition: Vec<Vec<String>> = preorder
        .classes()
        .into_iter()
        .map(|class| class.into_iter().map(|i| family.label(i).to_string()).collect())
        .collect();
    consolidate(dynamics, family, &partition, &preorder)
}
