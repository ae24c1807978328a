//! BCI verification: BCI-subsets, the m-BCI property, FIF and the
//! structural checks built on them.
//!
//! The m-BCI sweep works on orbits. Two connection sets of the same size lie
//! in one orbit exactly when `T = g·S^α`; they are isomorphic when their
//! graphs are. The group is m-BCI iff, for every size `k ≤ m`, no
//! isomorphism class of graphs contains two orbits. Since every set can be
//! translated to contain `1`, only normalized sets are enumerated.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bicayley::{BiCayleyGraph, ConnectionSet};
use crate::error::{Error, Result};
use crate::group::{are_fused, FusionKind, GqParams, GroupElement};
use crate::iso::{graphs_isomorphic, graphs_isomorphic_with, AutomorphismCatalogue, IsoOptions, IsoResult};
use crate::spectra::{bipartite_charpoly, IntPoly};

/// Largest `m` for which `is_m_bci` is defined here.
pub const MAX_M: usize = 3;
/// Default largest `n` accepted by the exhaustive sweeps.
pub const DEFAULT_N_GUARD: u32 = 7;

#[derive(Clone, Copy, Debug)]
pub struct BciOptions {
    pub n_guard: u32,
    pub node_limit: u64,
    /// Sweep every `k`-subset instead of only those containing `1`.
    pub unnormalized: bool,
}

impl Default for BciOptions {
    fn default() -> Self {
        BciOptions {
            n_guard: DEFAULT_N_GUARD,
            node_limit: crate::iso::DEFAULT_NODE_LIMIT,
            unnormalized: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

/// Isomorphic graphs whose connection sets are not BCI-equivalent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BciWitness {
    #[serde(rename = "S")]
    pub s: ConnectionSet,
    #[serde(rename = "T")]
    pub t: ConnectionSet,
    pub iso: IsoResult,
    /// Every `(g, α)` was tried and none maps `S` onto `T`.
    pub equivalence_search_exhausted: bool,
    pub candidates: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepStats {
    /// Unordered pairs of distinct orbits of equal size.
    pub pairs: u64,
    /// Pairs separated by their characteristic polynomials.
    pub spectral_rejects: u64,
    /// Backtracking isomorphism searches run.
    pub iso_calls: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl SweepStats {
    fn absorb(&mut self, other: &SweepStats) {
        self.pairs += other.pairs;
        self.spectral_rejects += other.spectral_rejects;
        self.iso_calls += other.iso_calls;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BciReport {
    pub n: u32,
    pub m: usize,
    pub verdict: Verdict,
    pub witnesses: Vec<BciWitness>,
    pub stats: SweepStats,
}

impl BciReport {
    pub fn without_timing(mut self) -> Self {
        self.stats.seconds = None;
        self
    }
}

/// Outcome of the sweep at one set size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeSweep {
    pub k: usize,
    pub sets: usize,
    pub orbits: usize,
    pub iso_classes: usize,
    pub witness: Option<BciWitness>,
    pub stats: SweepStats,
}

/// Index-level arithmetic shared by the sweeps.
struct Arena {
    params: GqParams,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    catalogue: AutomorphismCatalogue,
}

impl Arena {
    fn new(p: GqParams) -> Self {
        let order = p.order();
        let mul = (0..order)
            .map(|i| {
                (0..order)
                    .map(|j| p.index(p.multiply(p.from_index(i), p.from_index(j))))
                    .collect()
            })
            .collect();
        let inv = (0..order).map(|i| p.index(p.inverse(p.from_index(i)))).collect();
        Arena {
            params: p,
            mul,
            inv,
            catalogue: AutomorphismCatalogue::new(p),
        }
    }

    fn to_set(&self, idx: &[usize]) -> ConnectionSet {
        let p = self.params;
        ConnectionSet::in_group(p, idx.iter().map(|&i| p.from_index(i))).expect("valid subset")
    }

    fn image(&self, set: &[usize], g: usize, table: usize, out: &mut Vec<usize>) {
        let t = &self.catalogue.tables()[table];
        out.clear();
        out.extend(set.iter().map(|&x| self.mul[g][t.apply_index(x)]));
        out.sort_unstable();
    }
}

/// `k`-subsets of `0..order` in lexicographic order; when `normalized`,
/// only those containing `0` (the identity).
fn subsets(order: usize, k: usize, normalized: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, order: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..order {
            if order - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, order, k, cur, out);
            cur.pop();
        }
    }
    if normalized {
        if k == 0 {
            return out;
        }
        cur.push(0);
        rec(1, order, k, &mut cur, &mut out);
    } else {
        rec(0, order, k, &mut cur, &mut out);
    }
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        // the lexicographically least set stays the root
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

fn check_guard(p: GqParams, opts: &BciOptions) -> Result<()> {
    if p.n() > opts.n_guard {
        return Err(Error::TooLarge {
            what: "n for an exhaustive BCI sweep",
            limit: opts.n_guard as usize,
            actual: p.n() as usize,
        });
    }
    Ok(())
}

fn sweep_size(arena: &Arena, k: usize, opts: &BciOptions) -> Result<SizeSweep> {
    let p = arena.params;
    let order = p.order();
    let sets = subsets(order, k, !opts.unnormalized);
    let position: HashMap<&[usize], usize> =
        sets.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mut parent: Vec<usize> = (0..sets.len()).collect();
    let mut img = Vec::with_capacity(k);
    for (i, set) in sets.iter().enumerate() {
        for t in 0..arena.catalogue.len() {
            if opts.unnormalized {
                for g in 0..order {
                    arena.image(set, g, t, &mut img);
                    union(&mut parent, i, position[img.as_slice()]);
                }
            } else {
                // g·α(S) contains 1 exactly when g = α(s)⁻¹ for some s ∈ S
                let table = &arena.catalogue.tables()[t];
                for &s in set {
                    let g = arena.inv[table.apply_index(s)];
                    arena.image(set, g, t, &mut img);
                    union(&mut parent, i, position[img.as_slice()]);
                }
            }
        }
    }
    let reps: Vec<usize> = (0..sets.len()).filter(|&i| find(&mut parent, i) == i).collect();

    let graphs: Vec<(BiCayleyGraph, IntPoly)> = reps
        .par_iter()
        .map(|&r| {
            let g = BiCayleyGraph::build(&arena.to_set(&sets[r]))?;
            let c = bipartite_charpoly(&g)?;
            Ok((g, c))
        })
        .collect::<Result<_>>()?;

    // orbits sharing a characteristic polynomial, in order of first orbit
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut by_key: HashMap<&IntPoly, usize> = HashMap::new();
    for (o, (_, c)) in graphs.iter().enumerate() {
        let slot = *by_key.entry(c).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(o);
    }

    let iso_opts = IsoOptions {
        audit: true,
        node_limit: opts.node_limit,
    };
    // each group splits into isomorphism classes of orbits
    let split: Vec<(Vec<Vec<usize>>, u64)> = groups
        .par_iter()
        .map(|members| {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            let mut calls = 0u64;
            for &o in members {
                let mut placed = false;
                for class in classes.iter_mut() {
                    calls += 1;
                    if graphs_isomorphic_with(&graphs[class[0]].0, &graphs[o].0, iso_opts)?.is_isomorphic() {
                        class.push(o);
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    classes.push(vec![o]);
                }
            }
            Ok((classes, calls))
        })
        .collect::<Result<_>>()?;

    let orbits = reps.len() as u64;
    let mut stats = SweepStats {
        pairs: orbits * orbits.saturating_sub(1) / 2,
        ..Default::default()
    };
    let same_key: u64 = groups.iter().map(|g| (g.len() * (g.len() - 1) / 2) as u64).sum();
    stats.spectral_rejects = stats.pairs - same_key;
    stats.iso_calls = split.iter().map(|(_, c)| c).sum();

    // least S whose class holds another orbit, then the least such T
    let failing = split
        .iter()
        .flat_map(|(classes, _)| classes.iter())
        .filter(|c| c.len() > 1)
        .min_by_key(|c| reps[c[0]]);
    let witness = match failing {
        None => None,
        Some(class) => {
            let s = arena.to_set(&sets[reps[class[0]]]);
            let t = arena.to_set(&sets[reps[class[1]]]);
            Some(verify_witness(&arena.catalogue, s, t)?)
        }
    };
    Ok(SizeSweep {
        k,
        sets: sets.len(),
        orbits: reps.len(),
        iso_classes: split.iter().map(|(c, _)| c.len()).sum(),
        witness,
        stats,
    })
}

/// Re-derives a failure witness from scratch: a verified isomorphism and an
/// exhaustive, unsuccessful `(g, α)` search.
fn verify_witness(catalogue: &AutomorphismCatalogue, s: ConnectionSet, t: ConnectionSet) -> Result<BciWitness> {
    let iso = graphs_isomorphic(&BiCayleyGraph::build(&s)?, &BiCayleyGraph::build(&t)?)?;
    if !iso.is_isomorphic() {
        return Err(Error::Consistency(format!("witness graphs for {s} and {t} are not isomorphic")));
    }
    if let Some(w) = catalogue.find(&s, &t) {
        return Err(Error::Consistency(format!(
            "witness {s}, {t} is BCI-equivalent via g = {}",
            w.g
        )));
    }
    Ok(BciWitness {
        s,
        t,
        iso,
        equivalence_search_exhausted: true,
        candidates: catalogue.params().order() * catalogue.len(),
    })
}

/// Sweeps every size `1..=m` and returns the per-size outcomes.
pub fn sweep(p: GqParams, m: usize, opts: &BciOptions) -> Result<Vec<SizeSweep>> {
    if m == 0 || m > MAX_M {
        return Err(Error::InvalidParameter(format!(
            "m = {m} is out of scope; 1 ≤ m ≤ {MAX_M}"
        )));
    }
    check_guard(p, opts)?;
    let arena = Arena::new(p);
    (1..=m).map(|k| sweep_size(&arena, k, opts)).collect()
}

fn report_from(p: GqParams, m: usize, sizes: &[SizeSweep], seconds: f64) -> BciReport {
    let mut stats = SweepStats::default();
    let mut witnesses = Vec::new();
    for s in sizes.iter().filter(|s| s.k <= m) {
        stats.absorb(&s.stats);
        witnesses.extend(s.witness.clone());
    }
    stats.seconds = Some(seconds);
    BciReport {
        n: p.n(),
        m,
        verdict: Verdict::from_bool(witnesses.is_empty()),
        witnesses,
        stats,
    }
}

/// Whether every bi-Cayley graph of valency at most `m` is a BCI-graph.
pub fn is_m_bci(p: GqParams, m: usize) -> Result<BciReport> {
    is_m_bci_with(p, m, &BciOptions::default())
}

pub fn is_m_bci_with(p: GqParams, m: usize, opts: &BciOptions) -> Result<BciReport> {
    let start = Instant::now();
    let sizes = sweep(p, m, opts)?;
    Ok(report_from(p, m, &sizes, start.elapsed().as_secs_f64()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BciSubsetResult {
    pub holds: bool,
    /// The least `T` with an isomorphic graph but no `(g, α)`.
    pub witness: Option<ConnectionSet>,
    pub candidates_examined: usize,
}

/// Largest `|S|` accepted by [`is_bci_subset`].
pub const SUBSET_SIZE_GUARD: usize = 3;

/// Whether `S` is a BCI-subset, by comparing its graph with that of every
/// `T` of the same size containing `1`.
pub fn is_bci_subset(set: &ConnectionSet) -> Result<BciSubsetResult> {
    is_bci_subset_with(set, &BciOptions::default())
}

pub fn is_bci_subset_with(set: &ConnectionSet, opts: &BciOptions) -> Result<BciSubsetResult> {
    let p = set.params();
    check_guard(p, opts)?;
    if set.len() > SUBSET_SIZE_GUARD {
        return Err(Error::TooLarge {
            what: "connection set size for a BCI-subset test",
            limit: SUBSET_SIZE_GUARD,
            actual: set.len(),
        });
    }
    let s = set.in_full_group().normalized();
    let catalogue = AutomorphismCatalogue::new(p);
    let gs = BiCayleyGraph::build(&s)?;
    let cs = bipartite_charpoly(&gs)?;
    let iso_opts = IsoOptions {
        audit: true,
        node_limit: opts.node_limit,
    };
    let candidates = subsets(p.order(), s.len(), true);
    for idx in &candidates {
        let t = ConnectionSet::in_group(p, idx.iter().map(|&i| p.from_index(i)))?;
        let gt = BiCayleyGraph::build(&t)?;
        if bipartite_charpoly(&gt)? != cs {
            continue;
        }
        if graphs_isomorphic_with(&gs, &gt, iso_opts)?.is_isomorphic() && catalogue.find(&s, &t).is_none() {
            return Ok(BciSubsetResult {
                holds: false,
                witness: Some(t),
                candidates_examined: candidates.len(),
            });
        }
    }
    Ok(BciSubsetResult {
        holds: true,
        witness: None,
        candidates_examined: candidates.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FifReport {
    pub n: u32,
    pub verdict: Verdict,
    /// Least pair of equal-order elements that are neither fused nor
    /// inverse-fused.
    pub witness: Option<(GroupElement, GroupElement)>,
    pub pairs_checked: usize,
}

/// Whether any two elements of equal order are fused or inverse-fused.
pub fn is_fif(p: GqParams) -> FifReport {
    let elems: Vec<GroupElement> = p.elements().collect();
    let orders: Vec<u32> = elems.iter().map(|&x| p.element_order(x)).collect();
    let mut checked = 0;
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            if orders[i] != orders[j] {
                continue;
            }
            checked += 1;
            if are_fused(elems[i], elems[j], p).kind == FusionKind::Neither {
                return FifReport {
                    n: p.n(),
                    verdict: Verdict::Fails,
                    witness: Some((elems[i], elems[j])),
                    pairs_checked: checked,
                };
            }
        }
    }
    FifReport {
        n: p.n(),
        verdict: Verdict::Holds,
        witness: None,
        pairs_checked: checked,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FifCrossCheck {
    pub n: u32,
    pub fif: Verdict,
    pub bci2: Verdict,
    pub agree: bool,
}

/// FIF and 2-BCI must coincide.
pub fn crosscheck_fif_2bci(p: GqParams) -> Result<FifCrossCheck> {
    let fif = is_fif(p).verdict;
    let bci2 = is_m_bci(p, 2)?.verdict;
    Ok(FifCrossCheck {
        n: p.n(),
        fif,
        bci2,
        agree: fif == bci2,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderDoublingCheck {
    pub i: u32,
    pub j: u32,
    pub order_i: u32,
    pub order_j: u32,
    pub reduced_isomorphic: bool,
    pub ambient_isomorphic: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderDoublingReport {
    pub n: u32,
    pub verdict: Verdict,
    pub checks: Vec<OrderDoublingCheck>,
}

/// For odd `n`: whenever `2|a^i| = |a^j|`, the graphs of `{1, a^i, b}` and
/// `{1, a^j, b}` are non-isomorphic, both over the generated subgroup and
/// over `Q_4n`. `i = 0` is skipped since `{1, a^0, b}` is not a 3-set.
pub fn verify_lemma_3_3(p: GqParams) -> Result<OrderDoublingReport> {
    let n = p.n();
    if n % 2 == 0 || n < 3 {
        return Err(Error::InvalidParameter(format!(
            "the order-doubling check needs odd n ≥ 3, got n = {n}"
        )));
    }
    let mut checks = Vec::new();
    for i in 1..2 * n {
        for j in 1..2 * n {
            let (oi, oj) = (p.element_order(p.a_pow(i as i64)), p.element_order(p.a_pow(j as i64)));
            if 2 * oi != oj {
                continue;
            }
            let s = ConnectionSet::in_group(p, [p.identity(), p.a_pow(i as i64), p.b()])?;
            let t = ConnectionSet::in_group(p, [p.identity(), p.a_pow(j as i64), p.b()])?;
            let reduced = crate::iso::reduced_iso_check(&s, &t)?;
            let ambient = graphs_isomorphic(&BiCayleyGraph::build(&s)?, &BiCayleyGraph::build(&t)?)?.is_isomorphic();
            checks.push(OrderDoublingCheck {
                i,
                j,
                order_i: oi,
                order_j: oj,
                reduced_isomorphic: reduced,
                ambient_isomorphic: ambient,
            });
        }
    }
    let holds = checks.iter().all(|c| !c.reduced_isomorphic && !c.ambient_isomorphic);
    Ok(OrderDoublingReport {
        n,
        verdict: Verdict::from_bool(holds),
        checks,
    })
}

/// Expected verdict of the 2- and 3-BCI properties for `Q_4n`.
pub fn predicted_bci(n: u32) -> bool {
    n == 2 || n % 2 == 1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationRow {
    pub n: u32,
    pub predicted: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bci2: Option<BciReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bci3: Option<BciReport>,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationSummary {
    pub rows: Vec<ClassificationRow>,
    pub all_agree: bool,
}

impl ClassificationSummary {
    pub fn without_timing(mut self) -> Self {
        for row in &mut self.rows {
            for r in [&mut row.bci2, &mut row.bci3].into_iter().flatten() {
                r.stats.seconds = None;
            }
        }
        self
    }
}

/// For each `n`: the 2-BCI and 3-BCI verdicts, which must both equal
/// `n = 2 or n odd`. Both reports come from one sweep over sizes `1..=3`.
/// A guard error for one `n` is recorded and the others continue.
pub fn verify_theorem_1(ns: &[u32], opts: &BciOptions) -> Result<ClassificationSummary> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let p = GqParams::new(n)?;
        let predicted = predicted_bci(n);
        let start = Instant::now();
        let row = match sweep(p, 3, opts) {
            Ok(sizes) => {
                let secs = start.elapsed().as_secs_f64();
                let r2 = report_from(p, 2, &sizes, secs);
                let r3 = report_from(p, 3, &sizes, secs);
                let agrees = r2.verdict.holds() == predicted && r3.verdict.holds() == predicted;
                ClassificationRow {
                    n,
                    predicted: Verdict::from_bool(predicted),
                    bci2: Some(r2),
                    bci3: Some(r3),
                    agrees,
                    error: None,
                }
            }
            Err(e) if e.is_resource() => ClassificationRow {
                n,
                predicted: Verdict::from_bool(predicted),
                bci2: None,
                bci3: None,
                agrees: false,
                error: Some(e.to_string()),
            },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    let all_agree = rows.iter().all(|r| r.agrees);
    Ok(ClassificationSummary { rows, all_agree })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizationCheck {
    pub n: u32,
    pub k: usize,
    pub normalized_sets: usize,
    pub all_sets: usize,
    pub orbits: usize,
    pub agree: bool,
}

/// Runs the sweep over sets containing `1` and over all sets and compares
/// orbit counts, class counts and witnesses per size.
pub fn normalization_soundness(p: GqParams, m: usize) -> Result<Vec<NormalizationCheck>> {
    let normalized = sweep(p, m, &BciOptions::default())?;
    let full = sweep(
        p,
        m,
        &BciOptions {
            unnormalized: true,
            ..Default::default()
        },
    )?;
    Ok(normalized
        .iter()
        .zip(&full)
        .map(|(a, b)| NormalizationCheck {
            n: p.n(),
            k: a.k,
            normalized_sets: a.sets,
            all_sets: b.sets,
            orbits: a.orbits,
            agree: a.orbits == b.orbits
                && a.iso_classes == b.iso_classes
                && a.witness.as_ref().map(|w| (&w.s, &w.t)) == b.witness.as_ref().map(|w| (&w.s, &w.t)),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> GqParams {
        GqParams::new(n).unwrap()
    }

    fn set(n: u32, expr: &str) -> ConnectionSet {
        ConnectionSet::parse(p(n), expr).unwrap()
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(12, 3, true).len(), 55);
        assert_eq!(subsets(12, 3, false).len(), 220);
        assert_eq!(subsets(28, 3, true).len(), 351);
        let s = subsets(6, 2, true);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn subset_examples() {
        assert!(is_bci_subset(&set(4, "b")).unwrap().holds);
        let r = is_bci_subset(&set(4, "1, a^2")).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap(), set(4, "1, b"));
        assert!(is_bci_subset(&set(3, "1, a, b")).unwrap().holds);
    }

    #[test]
    fn m_bci_examples() {
        assert!(is_m_bci(p(2), 3).unwrap().verdict.holds());
        let r = is_m_bci(p(4), 2).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = &r.witnesses[0];
        assert_eq!(w.s, set(4, "1, a^2"));
        assert!(w.iso.is_isomorphic());
        assert!(matches!(is_m_bci(p(3), 4), Err(Error::InvalidParameter(_))));
        assert!(matches!(is_m_bci(p(8), 2), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn fif_examples() {
        let r = is_fif(p(4));
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witness, Some((p(4).a_pow(2), p(4).b())));
        assert!(is_fif(p(3)).verdict.holds());
        assert!(is_fif(p(2)).verdict.holds());
    }

    #[test]
    fn order_doubling_small() {
        let r = verify_lemma_3_3(p(3)).unwrap();
        assert!(r.verdict.holds());
        assert!(r.checks.iter().any(|c| (c.i, c.j) == (2, 1)));
        assert!(!r.checks.iter().any(|c| (c.i, c.j) == (2, 2)));
        assert!(verify_lemma_3_3(p(4)).is_err());
    }

    #[test]
    fn naive_and_orbit_sweeps_agree() {
        for n in 2..=4 {
            for k in 1..=3 {
                let sizes = sweep(p(n), k, &BciOptions::default()).unwrap();
                let sweep_holds = sizes[k - 1].witness.is_none();
                let naive_holds = subsets(p(n).order(), k, true).iter().all(|idx| {
                    let s = ConnectionSet::in_group(p(n), idx.iter().map(|&i| p(n).from_index(i))).unwrap();
                    is_bci_subset(&s).unwrap().holds
                });
                assert_eq!(sweep_holds, naive_holds, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn normalization_is_sound_small() {
        for c in normalization_soundness(p(2), 3).unwrap() {
            assert!(c.agree, "{c:?}");
        }
    }
}
