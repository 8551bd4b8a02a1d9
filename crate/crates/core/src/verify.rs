//! Window-bounded structural verification of barrier codes.
//!
//! The grammar denotes Nash-Williams families by construction (two members
//! of one branch are never end-extensions of each other), so enumerating the
//! elements supported on a window is a tree walk that stops at each element.
//! The Sperner and cover checks are exhaustive over that window.

use crate::barrier::{BarrierCode, BarrierError};
use crate::ordinal::Ordinal;
use crate::sets::{FiniteSet, SetDescriptor, Tail, Window};
use serde::{Deserialize, Serialize};

/// All elements of the barrier whose support lies in `pool`, in
/// lexicographic order. `pool` must be strictly increasing.
pub fn elements_in_pool(code: &BarrierCode, pool: &[u64]) -> Vec<FiniteSet> {
    let mut out = Vec::new();
    let mut path = FiniteSet::empty();
    walk(code, pool, 0, &mut path, &mut out);
    out
}

fn walk(
    code: &BarrierCode,
    pool: &[u64],
    from: usize,
    path: &mut FiniteSet,
    out: &mut Vec<FiniteSet>,
) {
    if code.contains(path) {
        out.push(path.clone());
        // Nash-Williams: no element end-extends another, so stop here.
        return;
    }
    for (i, &x) in pool.iter().enumerate().skip(from) {
        if let Some(next) = path.extended(x) {
            if code.tree_contains(&next) {
                *path = next;
                walk(code, pool, i + 1, path, out);
                *path = path.prefix(path.len() - 1);
            }
        }
    }
}

/// Elements supported below `bound`.
pub fn elements_in_window(code: &BarrierCode, bound: u64) -> Vec<FiniteSet> {
    let pool: Vec<u64> = (0..bound).collect();
    elements_in_pool(code, &pool)
}

/// Outcome of an exhaustive window check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict<W> {
    Pass,
    Fail { witness: W },
}

impl<W> Verdict<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Checks that no two distinct elements supported on the window are
/// comparable under inclusion. The first violating pair in lexicographic
/// element order is reported as `(subset, superset)`.
pub fn verify_sperner(code: &BarrierCode, w: Window) -> Verdict<(FiniteSet, FiniteSet)> {
    let elems = elements_in_window(code, w.bound);
    for i in 0..elems.len() {
        for j in (i + 1)..elems.len() {
            if elems[i].is_proper_subset_of(&elems[j]) {
                return Verdict::Fail {
                    witness: (elems[i].clone(), elems[j].clone()),
                };
            }
            if elems[j].is_proper_subset_of(&elems[i]) {
                return Verdict::Fail {
                    witness: (elems[j].clone(), elems[i].clone()),
                };
            }
        }
    }
    Verdict::Pass
}

/// Checks the front property at window scale: every strictly increasing
/// sequence of length `depth` inside the window either has a prefix in the
/// barrier or lies in its tree. A failure reports the lexicographically
/// first stuck sequence.
pub fn verify_cover(code: &BarrierCode, w: Window) -> Verdict<FiniteSet> {
    let len = w.depth.min(w.bound) as usize;
    let mut path = FiniteSet::empty();
    if code.contains(&path) {
        // The empty set is a prefix of every sequence.
        return Verdict::Pass;
    }
    if !code.tree_contains(&path) {
        // Empty family: the very first sequence is stuck.
        return match lex_first_extension(&path, w.bound, len) {
            Some(seq) => Verdict::Fail { witness: seq },
            None => Verdict::Pass,
        };
    }
    cover_walk(code, w.bound, len, &mut path)
}

fn cover_walk(
    code: &BarrierCode,
    bound: u64,
    len: usize,
    path: &mut FiniteSet,
) -> Verdict<FiniteSet> {
    if path.len() == len {
        return Verdict::Pass;
    }
    let start = path.max_elem().map(|m| m + 1).unwrap_or(0);
    for x in start..bound {
        let next = path.extended(x).expect("ascending extension");
        if code.contains(&next) {
            continue; // every sequence through `next` has a prefix in B
        }
        if code.tree_contains(&next) {
            *path = next;
            let verdict = cover_walk(code, bound, len, path);
            *path = path.prefix(path.len() - 1);
            if !verdict.is_pass() {
                return verdict;
            }
        } else if let Some(seq) = lex_first_extension(&next, bound, len) {
            // `next` is not in the tree and no prefix of it is an element,
            // so any full-length extension is a stuck sequence.
            return Verdict::Fail { witness: seq };
        }
    }
    Verdict::Pass
}

fn lex_first_extension(s: &FiniteSet, bound: u64, len: usize) -> Option<FiniteSet> {
    let mut v = s.elements().to_vec();
    let mut next = s.max_elem().map(|m| m + 1).unwrap_or(0);
    while v.len() < len {
        if next >= bound {
            return None; // no room: this stub quantifies over nothing
        }
        v.push(next);
        next += 1;
    }
    Some(FiniteSet::new(v).expect("ascending by construction"))
}

/// Report of the window-scale uniformity check: successor ranks must be
/// constant (successor rank) or nondecreasing with the rank as limit
/// (limit rank), hereditarily. Nondecreasing counts as a pass; strictness
/// is reported separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub uniform: bool,
    pub strictly_increasing: bool,
}

/// Checks uniformity on successors drawn from the window. Falls back to the
/// exact symbolic classification when the grammar already proves it.
pub fn is_uniform_window(code: &BarrierCode, w: Window) -> Result<UniformityReport, BarrierError> {
    if code.is_uniform_symbolic() {
        return Ok(UniformityReport {
            uniform: true,
            strictly_increasing: successor_ranks(code, w.bound)?
                .windows(2)
                .all(|p| p[0] < p[1]),
        });
    }
    let rank = code.rank()?;
    uniform_rec(code, &rank, w.bound, 0)
}

fn successor_ranks(code: &BarrierCode, bound: u64) -> Result<Vec<Ordinal>, BarrierError> {
    let mut ranks = Vec::new();
    for n in 0..bound {
        let singleton = FiniteSet::new(vec![n]).unwrap();
        if code.tree_contains(&singleton) {
            ranks.push(code.node_rank(&singleton)?);
        }
    }
    Ok(ranks)
}

fn uniform_rec(
    code: &BarrierCode,
    rank: &Ordinal,
    bound: u64,
    depth: u32,
) -> Result<UniformityReport, BarrierError> {
    if rank <= &Ordinal::finite(1) || depth > 4 || code.is_uniform_symbolic() {
        return Ok(UniformityReport {
            uniform: true,
            strictly_increasing: true,
        });
    }
    let ranks = successor_ranks(code, bound)?;
    if ranks.is_empty() {
        return Ok(UniformityReport {
            uniform: false,
            strictly_increasing: false,
        });
    }
    let strictly = ranks.windows(2).all(|p| p[0] < p[1]);
    let pattern_ok = if rank.is_limit() {
        ranks.windows(2).all(|p| p[0] <= p[1]) && ranks.iter().all(|r| r < rank)
    } else {
        let pred = ranks.last().unwrap();
        ranks.iter().all(|r| r == pred) && &pred.succ() == rank
    };
    if !pattern_ok {
        return Ok(UniformityReport {
            uniform: false,
            strictly_increasing: strictly,
        });
    }
    // Hereditary clause on the window's successors.
    for n in 0..bound {
        let singleton = FiniteSet::new(vec![n]).unwrap();
        if code.tree_contains(&singleton) && !code.contains(&singleton) {
            let sub = code.sub_barrier(&singleton)?;
            let sub_rank = sub.rank()?;
            let report = uniform_rec(&sub, &sub_rank, bound, depth + 1)?;
            if !report.uniform {
                return Ok(UniformityReport {
                    uniform: false,
                    strictly_increasing: strictly,
                });
            }
        }
    }
    Ok(UniformityReport {
        uniform: true,
        strictly_increasing: strictly,
    })
}

/// Smallest `m` such that within the window every increasing set above `m`
/// is an element exactly when it has `k` elements. Zero for branches that
/// are uniform everywhere.
pub fn stabilization_point(code: &BarrierCode, k: u64, bound: u64) -> Option<u64> {
    // Structural fast paths; the subset walk below is exponential in the
    // window.
    match code {
        BarrierCode::UniformK { k: kk } if *kk == k => return Some(0),
        BarrierCode::Shift { inner, offset } => {
            if matches!(**inner, BarrierCode::UniformK { k: kk } if kk == k) {
                return Some((*offset).min(bound));
            }
        }
        _ => {}
    }
    'outer: for m in 0..bound {
        let pool: Vec<u64> = (m..bound).collect();
        // Subset walk capped at size k: extensions stop once an element-size
        // set is reached.
        let mut stack = vec![(FiniteSet::empty(), 0usize)];
        while let Some((s, from)) = stack.pop() {
            let is_elem = code.contains(&s);
            if is_elem != (s.len() as u64 == k) {
                continue 'outer;
            }
            if s.len() as u64 == k {
                continue;
            }
            for (i, &x) in pool.iter().enumerate().skip(from) {
                if let Some(next) = s.extended(x) {
                    stack.push((next, i + 1));
                }
            }
        }
        return Some(m);
    }
    None
}

/// Extracts a set on which a rank-omega barrier restricts to a uniform one,
/// following the greedy threshold construction: the i-th pick is the first
/// index of node rank at least `i` past the previous pick's stabilization
/// point.
pub fn uniformize_rank_omega(code: &BarrierCode, w: Window) -> Result<SetDescriptor, BarrierError> {
    let rank = code.rank()?;
    if rank != Ordinal::omega() {
        return Err(BarrierError::RankMismatch {
            expected: Ordinal::omega(),
            actual: rank,
        });
    }
    let mut picks: Vec<u64> = Vec::new();
    let mut floor = 0u64;
    loop {
        let i = picks.len() as u64;
        let start = picks.last().map(|m| m + 1).unwrap_or(0).max(floor);
        let mut found = None;
        for n in start..w.bound {
            let singleton = FiniteSet::new(vec![n]).unwrap();
            if !code.tree_contains(&singleton) {
                continue;
            }
            let r = code.node_rank(&singleton)?;
            if r >= Ordinal::finite(i) {
                found = Some((n, r));
                break;
            }
        }
        let Some((n, r)) = found else { break };
        picks.push(n);
        // Move past the point where this branch is uniformly of its rank.
        if let Some(k) = r.as_finite() {
            let singleton = FiniteSet::new(vec![n]).unwrap();
            if !code.contains(&singleton) {
                let sub = code.sub_barrier(&singleton)?;
                if let Some(stab) = stabilization_point(&sub, k, w.bound) {
                    floor = floor.max(stab);
                }
            }
        }
    }
    if (picks.len() as u64) < w.depth {
        return Err(BarrierError::FuelExhausted(w.bound));
    }
    Ok(synthesize_descriptor(&picks, w.bound))
}

/// Canonical descriptor for a finite selection: a cofinite or arithmetic
/// tail when the trailing picks form one, otherwise the bare finite set.
fn synthesize_descriptor(picks: &[u64], bound: u64) -> SetDescriptor {
    if picks.is_empty() {
        return SetDescriptor::new(Vec::new(), Tail::Empty).unwrap();
    }
    // Trailing run of consecutive integers reaching the window edge.
    let last = *picks.last().unwrap();
    if last + 1 >= bound {
        let mut run_start = picks.len() - 1;
        while run_start > 0 && picks[run_start - 1] + 1 == picks[run_start] {
            run_start -= 1;
        }
        if last - picks[run_start] + 1 >= 3 {
            let prefix = picks[..run_start].to_vec();
            let from = picks[run_start];
            return SetDescriptor::new(prefix, Tail::Cofinite { from }).unwrap();
        }
        // Trailing arithmetic progression reaching the window edge.
        if picks.len() >= 3 {
            let mut run_start = picks.len() - 2;
            let step = picks[picks.len() - 1] - picks[picks.len() - 2];
            while run_start > 0 && picks[run_start] - picks[run_start - 1] == step {
                run_start -= 1;
            }
            if step > 0 && picks.len() - run_start >= 3 && last + step >= bound {
                let prefix = picks[..run_start].to_vec();
                return SetDescriptor::new(
                    prefix,
                    Tail::Arithmetic {
                        start: picks[run_start],
                        step,
                    },
                )
                .unwrap();
            }
        }
    }
    SetDescriptor::new(picks.to_vec(), Tail::Empty).unwrap()
}

/// Heuristic estimate of the uniform rank `min(spec(B))`: the least
/// window-truncated rank over a family of canonical arithmetic restrictions.
/// Truncation only undershoots each term, and restrictions with no elements
/// inside the window carry no evidence and are skipped, so this is a
/// lower-bound style estimate and not a certificate.
pub fn floor_rank_estimate(code: &BarrierCode, w: Window) -> Ordinal {
    let candidates = [
        SetDescriptor::omega(),
        SetDescriptor::evens(),
        SetDescriptor::odds(),
        SetDescriptor::new(vec![], Tail::Arithmetic { start: 0, step: 3 }).unwrap(),
        SetDescriptor::new(vec![], Tail::Arithmetic { start: 1, step: 3 }).unwrap(),
        SetDescriptor::new(vec![], Tail::Arithmetic { start: 2, step: 3 }).unwrap(),
    ];
    let mut best: Option<Ordinal> = None;
    for base in candidates {
        let restricted = code.clone().restrict(base);
        let rank = match restricted.rank() {
            Ok(r) => r,
            Err(_) => {
                if elements_in_window(&restricted, w.bound).is_empty() {
                    continue;
                }
                Ordinal::finite(crate::oracle::truncated_rank(&restricted, w.bound))
            }
        };
        best = Some(match best {
            None => rank,
            Some(b) => {
                if rank < b {
                    rank
                } else {
                    b
                }
            }
        });
    }
    best.unwrap_or_else(Ordinal::zero)
}
