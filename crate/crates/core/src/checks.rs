//! Self-checks over one field: fast paths against the oracles, and the
//! structural guarantees the Morse machinery is supposed to deliver.
//!
//! Both entry points return human-readable findings; an empty list means
//! everything agreed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cellset::CellSet;
use crate::dynamics::Dynamics;
use crate::morse::{self, EnumerateOptions, MorseFamily};
use crate::mvf::MultivectorField;
use crate::oracle::{self, OracleBudget, OracleError};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    /// Number of individual comparisons made.
    pub checks: usize,
    pub findings: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.findings.push(what());
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checks += other.checks;
        self.findings.extend(other.findings);
    }
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> CellSet {
    let p = rng.gen_range(0.1..0.7);
    CellSet::from_cells(n, (0..n).filter(|_| rng.gen_bool(p)))
}

/// Sets worth probing: the empty set, everything, single cells,
/// multivectors, and random subsets together with their hulls.
pub fn sample_sets(field: &MultivectorField, seed: u64, random: usize) -> Vec<CellSet> {
    let c = field.complex();
    let n = c.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![c.empty_set(), c.full_set()];
    out.extend((0..n).map(|x| CellSet::singleton(n, x)));
    out.extend(field.multivectors().iter().cloned());
    for _ in 0..random {
        let s = random_subset(&mut rng, n);
        out.push(field.v_hull(&s));
        out.push(s);
    }
    out.sort();
    out.dedup();
    out
}

/// Families to test a field against: decompositions, enumerated
/// predecompositions, and deliberately doubtful ones.
pub fn sample_families(field: &MultivectorField, seed: u64) -> Result<Vec<MorseFamily>, morse::MorseError> {
    let d = Dynamics::new(field);
    let c = field.complex();
    let n = c.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    out.push(morse::minimal_morse_decomposition(&d)?.0);
    out.push(MorseFamily::from_entries(n, [("X", d.inv(&d.all()))])?);

    let critical = (0..field.len())
        .filter(|&i| field.is_critical(i))
        .map(|i| (field.label(i), field.multivector(i).clone()));
    out.push(MorseFamily::from_entries(n, critical)?);

    // Enumeration walks every simple cycle of G_V; past the cycle budget the
    // field is simply not sampled this way.
    let opts = EnumerateOptions {
        max_families: 4,
        cycle_budget: 200_000,
        ..EnumerateOptions::default()
    };
    match morse::enumerate_predecompositions(&d, &opts) {
        Ok(found) => out.extend(found),
        Err(morse::MorseError::CycleBudgetExceeded(_)) => {}
        Err(e) => return Err(e),
    }

    // random disjoint pool candidates, typically not a predecomposition
    let mut pool = match morse::pool_candidates(&d, opts.cycle_budget) {
        Ok(pool) => pool,
        Err(morse::MorseError::CycleBudgetExceeded(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    pool.shuffle(&mut rng);
    let mut fam = MorseFamily::new(n);
    let mut used = c.empty_set();
    for cand in pool {
        if cand.is_disjoint(&used) && rng.gen_bool(0.5) {
            used.union_with(&cand);
            fam.push(format!("P{}", fam.len()), cand)?;
        }
    }
    out.push(fam);

    // random, usually invalid, members
    let mut junk = MorseFamily::new(n);
    junk.push("J0", random_subset(&mut rng, n))?;
    junk.push("J1", random_subset(&mut rng, n))?;
    junk.push("J2", c.empty_set())?;
    out.push(junk);
    Ok(out)
}

/// Compares hulls, invariant parts, predecomposition checks, saturation and
/// connection sets with the brute-force oracles.
pub fn cross_check(field: &MultivectorField, seed: u64, budget: OracleBudget) -> Result<CheckReport, CheckError> {
    let d = Dynamics::new(field);
    let c = field.complex();
    let mut report = CheckReport::default();
    let names = |s: &CellSet| format!("{{{}}}", c.names(s).join(","));

    for s in sample_sets(field, seed, 12) {
        let hull = field.v_hull(&s);
        let brute = oracle::brute_hull(field, &s, budget)?;
        report.expect(hull == brute, || format!("v_hull{} = {} but oracle gives {}", names(&s), names(&hull), names(&brute)));
        let inv = d.inv(&s);
        let brute = oracle::brute_inv(field, &s, budget)?;
        report.expect(inv == brute, || format!("inv{} = {} but oracle gives {}", names(&s), names(&inv), names(&brute)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for fam in sample_families(field, seed)? {
        let fast = morse::verify_predecomposition(&d, &fam)?.passed();
        let brute = oracle::brute_verify_predecomposition(field, &fam, budget)?;
        let labels = fam.labels().join(",");
        report.expect(fast == brute, || format!("verify [{labels}]: fast {fast}, oracle {brute}"));

        let isolated = fam.sets().iter().all(|s| s.is_empty() || d.is_isolated_invariant(s));
        if !isolated {
            continue;
        }
        for label in fam.labels() {
            let fast = morse::is_saturated(&d, &fam, label)?;
            let brute = oracle::brute_is_saturated(field, &fam, label, budget)?;
            report.expect(fast == brute, || format!("saturated {label} in [{labels}]: fast {fast}, oracle {brute}"));
        }
        if !fast {
            continue;
        }
        let mut subsets: Vec<Vec<String>> = vec![fam.labels().to_vec()];
        subsets.extend(fam.labels().iter().map(|l| vec![l.clone()]));
        for _ in 0..3 {
            subsets.push(fam.labels().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect());
        }
        for q in subsets {
            let brute = oracle::brute_connection_set(field, &fam, &q, budget)?;
            match morse::connection_set(&d, &fam, &q) {
                Ok(set) => report.expect(set == brute, || {
                    format!("connection set {q:?} of [{labels}] = {} but oracle gives {}", names(&set), names(&brute))
                }),
                Err(e) => report.expect(false, || format!("connection set {q:?} of [{labels}] failed: {e}")),
            }
        }
    }
    Ok(report)
}

/// Structural guarantees: consolidation yields Morse decompositions, Morse
/// decompositions are predecompositions, connection sets are saturated
/// isolated invariant sets, `inv` is idempotent, monotone and contained in
/// its argument, and `v_hull` is extensive, monotone and idempotent.
pub fn round_trips(field: &MultivectorField, seed: u64) -> Result<CheckReport, CheckError> {
    let d = Dynamics::new(field);
    let c = field.complex();
    let mut report = CheckReport::default();
    let names = |s: &CellSet| format!("{{{}}}", c.names(s).join(","));

    let sets = sample_sets(field, seed, 12);
    for (i, a) in sets.iter().enumerate() {
        let hull = field.v_hull(a);
        report.expect(a.is_subset(&hull), || format!("v_hull{} is not extensive", names(a)));
        report.expect(field.v_hull(&hull) == hull, || format!("v_hull{} is not idempotent", names(a)));
        report.expect(
            c.is_locally_closed(&hull) && field.is_v_compatible(&hull),
            || format!("v_hull{} is not locally closed and V-compatible", names(a)),
        );
        let inv = d.inv(a);
        report.expect(inv.is_subset(a), || format!("inv{} is not contained in its argument", names(a)));
        report.expect(d.inv(&inv) == inv, || format!("inv{} is not idempotent", names(a)));
        let b = &sets[(i * 7 + 3) % sets.len()];
        let ab = a.union(b);
        report.expect(hull.is_subset(&field.v_hull(&ab)), || format!("v_hull not monotone at {}", names(a)));
        report.expect(inv.is_subset(&d.inv(&ab)), || format!("inv not monotone at {}", names(a)));
    }

    for fam in sample_families(field, seed)? {
        let labels = fam.labels().join(",");
        let decomposition = morse::is_morse_decomposition(&d, &fam)?.passed();
        if decomposition {
            report.expect(morse::verify_predecomposition(&d, &fam)?.passed(), || {
                format!("[{labels}] is a Morse decomposition but not a predecomposition")
            });
        }
        if !morse::verify_predecomposition(&d, &fam)?.passed() {
            continue;
        }
        match morse::consolidate_by_scc(&d, &fam) {
            Ok((out, order)) => {
                let ok = morse::is_morse_decomposition(&d, &out)?.passed() && order.is_partial_order();
                report.expect(ok, || format!("consolidating [{labels}] did not give a Morse decomposition"));
            }
            Err(e) => report.expect(false, || format!("consolidating [{labels}] failed: {e}")),
        }
        for label in fam.labels() {
            match morse::connection_set(&d, &fam, std::slice::from_ref(label)) {
                Ok(set) => {
                    let alone = MorseFamily::from_entries(c.len(), [("Q", set.clone())])?;
                    let ok = d.is_isolated_invariant(&set) && morse::is_saturated(&d, &alone, "Q")?;
                    report.expect(ok, || format!("connection set of {label} is not a saturated isolated invariant set"));
                }
                Err(e) => report.expect(false, || format!("connection set of {label} in [{labels}] failed: {e}")),
            }
        }
    }
    Ok(report)
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Morse(#[from] morse::MorseError),
}
