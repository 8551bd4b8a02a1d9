//! Comparison of barriers under end-extension and the double-arrow relation.
//!
//! A double-arrow witness is a finite-to-one nondecreasing collapse given by
//! interval breakpoints: `f(n) = i` on `[k_i, k_{i+1})` and `f = 0` below
//! `k_0`. Synthesis follows the alternating two-phase rank construction; the
//! verifier replays the definition on thinned sets, one point per interval
//! of one parity class.

use crate::barrier::{BarrierCode, BarrierError};
use crate::ordinal::Ordinal;
use crate::ramsey::{ColorRule, Coloring};
use crate::sets::{FiniteSet, Window};
use crate::verify::{elements_in_pool, elements_in_window, is_uniform_window, Verdict};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Rank extended with a value below zero for sets outside the tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtRank {
    BelowZero,
    Rank { value: Ordinal },
}

impl PartialOrd for ExtRank {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRank {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use ExtRank::*;
        match (self, other) {
            (BelowZero, BelowZero) => std::cmp::Ordering::Equal,
            (BelowZero, Rank { .. }) => std::cmp::Ordering::Less,
            (Rank { .. }, BelowZero) => std::cmp::Ordering::Greater,
            (Rank { value: a }, Rank { value: b }) => a.cmp(b),
        }
    }
}

/// `ρ(s)` in the tree of the code, or the below-zero value when `s` is not
/// in the tree.
pub fn ext_rank(code: &BarrierCode, s: &FiniteSet) -> Result<ExtRank, BarrierError> {
    if !code.tree_contains(s) {
        return Ok(ExtRank::BelowZero);
    }
    Ok(ExtRank::Rank {
        value: code.node_rank(s)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("source rank must be at least the target rank")]
    RankOrderViolated,
    #[error("source barrier is not uniform at window scale")]
    NotUniform,
    #[error("rank search exhausted fuel {0}")]
    FuelExhausted(u64),
    #[error("operation requires a rank-omega source")]
    RankMismatch,
    #[error(transparent)]
    Barrier(#[from] BarrierError),
}

/// One certified inequality from the synthesis: the rank of `b_node` in the
/// source dominates the rank of `c_node` in the target (or a literal rank
/// when no target node is recorded).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseStep {
    pub phase: String,
    pub step: u64,
    pub b_node: FiniteSet,
    pub c_node: Option<FiniteSet>,
    pub lhs: ExtRank,
    pub rhs: ExtRank,
}

/// Witness for the double-arrow relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleArrowWitness {
    pub breakpoints: Vec<u64>,
    pub phase_log: Vec<PhaseStep>,
}

impl DoubleArrowWitness {
    /// The collapse `f` determined by the breakpoints.
    pub fn collapse(&self, n: u64) -> u64 {
        let ks = &self.breakpoints;
        if ks.is_empty() || n < ks[0] {
            return 0;
        }
        (ks.partition_point(|&k| k <= n) - 1) as u64
    }

    /// Image of a set under the collapse.
    pub fn image(&self, s: &FiniteSet) -> FiniteSet {
        FiniteSet::from_unsorted(s.elements().iter().map(|&x| self.collapse(x)).collect())
    }
}

/// Result of the window-bounded end-extension comparison of two barriers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum EmbedComparison {
    BLeqC { witness: FiniteSet },
    CLeqB { witness: FiniteSet },
    Undecided,
}

/// Searches the window for a set on which one barrier end-extends into the
/// other: colors each source element by whether some target element contains
/// it, extracts a monochromatic set, and checks the two-sided relation
/// there. Tried in both directions before giving up.
pub fn compare_embedding(code_b: &BarrierCode, code_c: &BarrierCode, w: Window) -> EmbedComparison {
    if let Some(m) = embed_direction(code_b, code_c, w) {
        return EmbedComparison::BLeqC { witness: m };
    }
    if let Some(m) = embed_direction(code_c, code_b, w) {
        return EmbedComparison::CLeqB { witness: m };
    }
    EmbedComparison::Undecided
}

fn embed_direction(code_b: &BarrierCode, code_c: &BarrierCode, w: Window) -> Option<FiniteSet> {
    let c_elems = elements_in_window(code_c, w.bound);
    let b_elems = elements_in_window(code_b, w.bound);
    let mut entries = BTreeMap::new();
    for b in &b_elems {
        let covered = c_elems.iter().any(|c| b.is_subset_of(c));
        entries.insert(b.clone(), u64::from(covered));
    }
    let coloring = Coloring {
        arity: 2,
        rule: ColorRule::Table {
            entries,
            default: 0,
        },
    };
    let witness = crate::ramsey::nash_williams_search(code_b, &coloring, w, w.depth).ok()?;
    if witness.color != 1 {
        return None;
    }
    let m = witness.set;
    if check_sqsubseteq(code_b, code_c, &m) {
        Some(m)
    } else {
        None
    }
}

/// The two clauses of `B|M ⊑ C|M` at window scale.
///
/// The forward clause walks each source element along the tail of `m` until
/// it hits a target element; finding one that is a proper initial segment of
/// the source is a genuine violation, while exhausting the window is
/// inconclusive and counts as a pass. The reverse clause is exact: a source
/// element below a target element must be one of its initial segments.
fn check_sqsubseteq(code_b: &BarrierCode, code_c: &BarrierCode, m: &FiniteSet) -> bool {
    let b_elems = elements_in_pool(code_b, m.elements());
    let c_elems = elements_in_pool(code_c, m.elements());
    if b_elems.is_empty() || c_elems.is_empty() {
        return false;
    }
    for b in &b_elems {
        let mut probe = FiniteSet::empty();
        let tail = m
            .elements()
            .iter()
            .copied()
            .filter(|&x| x > b.max_elem().unwrap_or(0) && !b.contains(x));
        for x in b.elements().iter().copied().chain(tail) {
            probe = probe.extended(x).expect("ascending walk");
            if code_c.contains(&probe) {
                if !b.is_initial_segment_of(&probe) {
                    return false;
                }
                break;
            }
        }
    }
    c_elems.iter().all(|c| {
        (1..=c.len()).any(|len| {
            let prefix = c.prefix(len);
            code_b.contains(&prefix)
        })
    })
}

/// Synthesizes a double-arrow witness by the alternating two-phase
/// construction: in each round, for every admissible partial set `s`, an
/// ascending search finds the least `m` whose extension keeps the source
/// rank above the target rank of the collapsed image extended by the next
/// even (resp. odd) value. The maxima become the next breakpoints.
pub fn double_arrow_witness(
    code_b: &BarrierCode,
    code_c: &BarrierCode,
    steps: u64,
    fuel: u64,
    w: Window,
) -> Result<DoubleArrowWitness, EmbedError> {
    let rank_b = code_b.rank()?;
    let rank_c = code_c.rank()?;
    if rank_b < rank_c {
        return Err(EmbedError::RankOrderViolated);
    }
    if !is_uniform_window(code_b, w)?.uniform {
        return Err(EmbedError::NotUniform);
    }

    let mut log: Vec<PhaseStep> = Vec::new();
    let target_rank = |s: &FiniteSet| ext_rank(code_c, s);

    // Step 0: seed a_0 < b_0 from the ranks of the first two target columns.
    let c0 = FiniteSet::new(vec![0]).unwrap();
    let c1 = FiniteSet::new(vec![1]).unwrap();
    let a0 = ascend(code_b, &FiniteSet::empty(), 0, &target_rank(&c0)?, fuel)?;
    log.push(seed_step("seed-a", a0, &c0, code_b, code_c)?);
    let b0 = ascend(
        code_b,
        &FiniteSet::empty(),
        a0 + 1,
        &target_rank(&c1)?,
        fuel,
    )?;
    log.push(seed_step("seed-b", b0, &c1, code_b, code_c)?);

    let mut a: Vec<u64> = vec![a0];
    let mut b: Vec<u64> = vec![b0];

    for n in 0..steps {
        // a-phase: next a_{n+1} past b_n.
        let intervals_a: Vec<(u64, u64)> = (0..=n as usize).map(|i| (a[i], b[i])).collect();
        let witness_now = DoubleArrowWitness {
            breakpoints: interleave(&a, &b),
            phase_log: Vec::new(),
        };
        let mut next_a = b[n as usize] + 1;
        for s in admissible_sets(code_b, &intervals_a) {
            let image = witness_now.image(&s);
            let target_set = image
                .extended(2 * n + 2)
                .expect("even collapse values stay below the new index");
            let target = target_rank(&target_set)?;
            let m = ascend(code_b, &s, b[n as usize] + 1, &target, fuel)?;
            let b_node = s.extended(m).expect("m exceeds the last interval");
            log.push(PhaseStep {
                phase: "a".into(),
                step: n,
                b_node: b_node.clone(),
                c_node: Some(target_set.clone()),
                lhs: ext_rank(code_b, &b_node)?,
                rhs: target,
            });
            next_a = next_a.max(m);
        }
        a.push(next_a);

        // b-phase: next b_{n+1} past a_{n+1}.
        let intervals_b: Vec<(u64, u64)> = (0..=n as usize).map(|i| (b[i], a[i + 1])).collect();
        let mut next_b = next_a + 1;
        for s in admissible_sets(code_b, &intervals_b) {
            let image = witness_now.image(&s);
            let target_set = image
                .extended(2 * n + 3)
                .expect("odd collapse values stay below the new index");
            let target = target_rank(&target_set)?;
            let m = ascend(code_b, &s, next_a + 1, &target, fuel)?;
            let b_node = s.extended(m).expect("m exceeds the last interval");
            log.push(PhaseStep {
                phase: "b".into(),
                step: n,
                b_node: b_node.clone(),
                c_node: Some(target_set.clone()),
                lhs: ext_rank(code_b, &b_node)?,
                rhs: target,
            });
            next_b = next_b.max(m);
        }
        b.push(next_b);
    }

    Ok(DoubleArrowWitness {
        breakpoints: interleave(&a, &b),
        phase_log: log,
    })
}

fn seed_step(
    phase: &str,
    m: u64,
    c_node: &FiniteSet,
    code_b: &BarrierCode,
    code_c: &BarrierCode,
) -> Result<PhaseStep, EmbedError> {
    let b_node = FiniteSet::new(vec![m]).unwrap();
    Ok(PhaseStep {
        phase: phase.into(),
        step: 0,
        b_node: b_node.clone(),
        c_node: Some(c_node.clone()),
        lhs: ext_rank(code_b, &b_node)?,
        rhs: ext_rank(code_c, c_node)?,
    })
}

fn interleave(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    for i in 0..a.len().max(b.len()) {
        if let Some(&x) = a.get(i) {
            out.push(x);
        }
        if let Some(&x) = b.get(i) {
            out.push(x);
        }
    }
    out
}

/// Unit-stride ascent: the least `m >= start` with
/// `ρ_B(s ∪ {m}) >= target`. Uniformity of the source makes the predicate
/// upward closed in `m`, so the least hit certifies every larger one.
fn ascend(
    code_b: &BarrierCode,
    s: &FiniteSet,
    start: u64,
    target: &ExtRank,
    fuel: u64,
) -> Result<u64, EmbedError> {
    for m in start..start + fuel {
        if let Some(cand) = s.extended(m) {
            if &ext_rank(code_b, &cand)? >= target {
                return Ok(m);
            }
        }
    }
    Err(EmbedError::FuelExhausted(fuel))
}

/// All sets in the source tree picking at most one point from each interval.
fn admissible_sets(code_b: &BarrierCode, intervals: &[(u64, u64)]) -> Vec<FiniteSet> {
    let mut out = vec![FiniteSet::empty()];
    for &(lo, hi) in intervals {
        let mut next = Vec::new();
        for s in &out {
            next.push(s.clone());
            for x in lo..hi {
                if let Some(cand) = s.extended(x) {
                    if code_b.tree_contains(&cand) {
                        next.push(cand);
                    }
                }
            }
        }
        out = next;
    }
    out
}

/// Witness for a rank-omega source against the Schreier barrier: breakpoint
/// `m_i` is the least index from which every singleton has source rank at
/// least `i + 1` across the window, pushed past the previous branch's
/// stabilization point.
pub fn double_arrow_witness_rank_omega(
    code_b: &BarrierCode,
    w: Window,
) -> Result<DoubleArrowWitness, EmbedError> {
    let rank_b = code_b.rank()?;
    if rank_b != Ordinal::omega() {
        return Err(EmbedError::RankMismatch);
    }
    let ranks: Vec<Option<Ordinal>> = (0..w.bound)
        .map(|n| {
            let s = FiniteSet::new(vec![n]).unwrap();
            if code_b.tree_contains(&s) {
                code_b.node_rank(&s).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_, _>>()?;
    let mut breakpoints = Vec::new();
    let mut log = Vec::new();
    let mut floor = 0u64;
    for i in 0.. {
        let want = Ordinal::finite(i + 1);
        // Least n past the floor from which all window ranks stay >= i+1.
        let mut hit = None;
        'scan: for n in floor..w.bound {
            for m in n..w.bound {
                match &ranks[m as usize] {
                    Some(r) if *r >= want => {}
                    Some(_) => continue 'scan,
                    None => {}
                }
            }
            if ranks[n as usize].is_some() {
                hit = Some(n);
            }
            break;
        }
        let Some(n) = hit else { break };
        if breakpoints.last().is_some_and(|&last| n <= last) {
            break;
        }
        let b_node = FiniteSet::new(vec![n]).unwrap();
        log.push(PhaseStep {
            phase: "omega".into(),
            step: i,
            b_node: b_node.clone(),
            c_node: None,
            lhs: ext_rank(code_b, &b_node)?,
            rhs: ExtRank::Rank { value: want },
        });
        // Clear the stabilization point of the branch entered at n.
        if !code_b.contains(&b_node) {
            let sub = code_b.sub_barrier(&b_node)?;
            if let Ok(r) = sub.rank() {
                if let Some(k) = r.as_finite() {
                    if let Some(stab) = crate::verify::stabilization_point(&sub, k, w.bound) {
                        floor = floor.max(stab);
                    }
                }
            }
        }
        floor = floor.max(n + 1);
        breakpoints.push(n);
        if breakpoints.len() as u64 >= w.depth || floor >= w.bound {
            break;
        }
    }
    if breakpoints.is_empty() {
        return Err(EmbedError::FuelExhausted(w.bound));
    }
    Ok(DoubleArrowWitness {
        breakpoints,
        phase_log: log,
    })
}

/// Replays every logged inequality with fresh rank computations: the stored
/// ranks must reproduce and the source side must dominate.
pub fn verify_phase_log(
    witness: &DoubleArrowWitness,
    code_b: &BarrierCode,
    code_c: &BarrierCode,
) -> Result<bool, EmbedError> {
    for step in &witness.phase_log {
        let lhs = ext_rank(code_b, &step.b_node)?;
        if lhs != step.lhs {
            return Ok(false);
        }
        let rhs = match &step.c_node {
            Some(c) => {
                let r = ext_rank(code_c, c)?;
                if r != step.rhs {
                    return Ok(false);
                }
                r
            }
            None => step.rhs.clone(),
        };
        if lhs < rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The thinned sets admissible for verification: at most one point per
/// interval of one parity class, nothing from the other class or below the
/// first breakpoint.
fn thinned_sets(witness: &DoubleArrowWitness, bound: u64, parity: u64) -> Vec<FiniteSet> {
    let ks = &witness.breakpoints;
    let mut intervals = Vec::new();
    for (i, &lo) in ks.iter().enumerate() {
        if i as u64 % 2 != parity {
            continue;
        }
        let hi = ks.get(i + 1).copied().unwrap_or(bound).min(bound);
        if lo < hi {
            intervals.push((lo, hi));
        }
    }
    let mut out = vec![FiniteSet::empty()];
    for (lo, hi) in intervals {
        let mut next = Vec::new();
        for s in &out {
            next.push(s.clone());
            for x in lo..hi {
                if let Some(cand) = s.extended(x) {
                    next.push(cand);
                }
            }
        }
        out = next;
    }
    out.retain(|s| !s.is_empty());
    out
}

/// Checks the double-arrow definition on thinned sets: the collapse must be
/// injective on the set and every source element supported on it must
/// collapse onto a superset of some target element (as an initial segment).
/// `samples = None` checks every admissible thinned set of both parities;
/// `Some((count, seed))` checks a seeded random selection.
pub fn verify_double_arrow(
    witness: &DoubleArrowWitness,
    code_b: &BarrierCode,
    code_c: &BarrierCode,
    w: Window,
    samples: Option<(u64, u64)>,
) -> Verdict<(FiniteSet, FiniteSet)> {
    let mut all: Vec<FiniteSet> = Vec::new();
    for parity in 0..2u64 {
        all.extend(thinned_sets(witness, w.bound, parity));
    }
    let chosen: Vec<FiniteSet> = match samples {
        None => all,
        Some((count, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = Vec::new();
            for _ in 0..count.min(all.len() as u64) {
                let idx = rng.gen_range(0..all.len());
                picked.push(all[idx].clone());
            }
            picked
        }
    };
    for n_set in &chosen {
        // Injectivity of the collapse on the thinned set.
        let image_all: Vec<u64> = n_set
            .elements()
            .iter()
            .map(|&x| witness.collapse(x))
            .collect();
        let mut dedup = image_all.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() != image_all.len() {
            return Verdict::Fail {
                witness: (n_set.clone(), FiniteSet::from_unsorted(image_all)),
            };
        }
        for b in elements_in_pool(code_b, n_set.elements()) {
            let fb = witness.image(&b);
            let mut has_prefix = false;
            for len in 1..=fb.len() {
                if code_c.contains(&fb.prefix(len)) {
                    has_prefix = true;
                    break;
                }
            }
            if !has_prefix {
                return Verdict::Fail { witness: (b, fb) };
            }
        }
    }
    Verdict::Pass
}

/// Interval structure of `g ∘ f`: the composed collapse is nondecreasing and
/// finite-to-one, and its jump points are the composed breakpoints. The
/// phase log does not compose; the result carries an empty log.
pub fn compose_witnesses(
    f: &DoubleArrowWitness,
    g: &DoubleArrowWitness,
    bound: u64,
) -> DoubleArrowWitness {
    // The region below f's first breakpoint stays outside every interval;
    // the composed intervals start where f's do.
    let start = f.breakpoints.first().copied().unwrap_or(0);
    let mut breakpoints = vec![start];
    let mut prev = g.collapse(f.collapse(start));
    for n in start + 1..bound {
        let h = g.collapse(f.collapse(n));
        if h > prev {
            breakpoints.push(n);
        }
        prev = h;
    }
    DoubleArrowWitness {
        breakpoints,
        phase_log: Vec::new(),
    }
}
