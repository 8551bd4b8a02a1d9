//! Colorings on barriers and window-bounded partition searches.
//!
//! Searches return the lexicographically minimal seed of the requested size
//! and then extend it greedily upward, so identical inputs always produce
//! identical witnesses. Every witness can be re-verified by an exhaustive
//! pass that iterates the barrier elements supported on the witness set.

use crate::barrier::{BarrierCode, BarrierError};
use crate::sets::{FiniteSet, Window};
use crate::verify::elements_in_pool;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub const MAX_ARITY: u64 = 16;

/// How a coloring assigns colors to barrier elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColorRule {
    Constant {
        color: u64,
    },
    /// Sum of the elements modulo 2.
    ParityOfSum,
    /// Minimum element modulo `modulus`.
    MinMod {
        modulus: u64,
    },
    /// Deterministic FNV-based hash of the element, seeded.
    SeededHash {
        seed: u64,
    },
    /// Evaluate the inner coloring on the two least elements.
    Lift {
        inner: Box<Coloring>,
    },
    /// Explicit table with a default for unlisted elements.
    Table {
        #[serde(with = "crate::sets::set_keyed_map")]
        entries: BTreeMap<FiniteSet, u64>,
        default: u64,
    },
}

/// A coloring of barrier elements with `arity` colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub arity: u64,
    pub rule: ColorRule,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RamseyError {
    #[error("arity must be between 2 and {MAX_ARITY}")]
    BadArity,
    #[error("lifted coloring applied to an element with fewer than two points")]
    ShortElement,
    #[error("no witness of the requested size in the window")]
    NotFoundInWindow,
    #[error("malformed coloring: {0}")]
    Parse(String),
    #[error(transparent)]
    Barrier(#[from] BarrierError),
}

impl Coloring {
    pub fn new(arity: u64, rule: ColorRule) -> Result<Self, RamseyError> {
        if !(2..=MAX_ARITY).contains(&arity) {
            return Err(RamseyError::BadArity);
        }
        Ok(Coloring { arity, rule })
    }

    pub fn constant(color: u64) -> Self {
        Coloring {
            arity: 2.max(color + 1),
            rule: ColorRule::Constant { color },
        }
    }

    pub fn eval(&self, s: &FiniteSet) -> Result<u64, RamseyError> {
        let raw = match &self.rule {
            ColorRule::Constant { color } => *color,
            ColorRule::ParityOfSum => s.elements().iter().sum::<u64>() % 2,
            ColorRule::MinMod { modulus } => s.min_elem().unwrap_or(0) % (*modulus).max(1),
            ColorRule::SeededHash { seed } => fnv_hash(*seed, s),
            ColorRule::Lift { inner } => {
                if s.len() < 2 {
                    return Err(RamseyError::ShortElement);
                }
                return inner.eval(&s.prefix(2));
            }
            ColorRule::Table { entries, default } => entries.get(s).copied().unwrap_or(*default),
        };
        Ok(raw % self.arity)
    }
}

/// FNV-1a over the element values, mixed with the seed. Deliberately not the
/// standard library hasher, which is randomized per process.
fn fnv_hash(seed: u64, s: &FiniteSet) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325 ^ seed.wrapping_mul(0x9e3779b97f4a7c15);
    for &x in s.elements() {
        for byte in x.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

impl fmt::Display for ColorRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorRule::Constant { color } => write!(f, "constant({color})"),
            ColorRule::ParityOfSum => write!(f, "parity-of-sum"),
            ColorRule::MinMod { modulus } => write!(f, "min-mod({modulus})"),
            ColorRule::SeededHash { seed } => write!(f, "hash({seed})"),
            ColorRule::Lift { inner } => write!(f, "lift({})", inner.rule),
            ColorRule::Table { .. } => write!(f, "table(...)"),
        }
    }
}

impl FromStr for ColorRule {
    type Err = RamseyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "parity-of-sum" {
            return Ok(ColorRule::ParityOfSum);
        }
        let arg = |prefix: &str| -> Option<&str> { s.strip_prefix(prefix)?.strip_suffix(')') };
        if let Some(v) = arg("constant(") {
            let color = v.trim().parse().map_err(|_| RamseyError::Parse(s.into()))?;
            return Ok(ColorRule::Constant { color });
        }
        if let Some(v) = arg("min-mod(") {
            let modulus = v.trim().parse().map_err(|_| RamseyError::Parse(s.into()))?;
            return Ok(ColorRule::MinMod { modulus });
        }
        if let Some(v) = arg("hash(") {
            let seed = v.trim().parse().map_err(|_| RamseyError::Parse(s.into()))?;
            return Ok(ColorRule::SeededHash { seed });
        }
        if let Some(v) = arg("lift(") {
            let inner: ColorRule = v.parse()?;
            return Ok(ColorRule::Lift {
                inner: Box::new(Coloring {
                    arity: 2,
                    rule: inner,
                }),
            });
        }
        Err(RamseyError::Parse(s.into()))
    }
}

/// Certificate that a coloring is constant on the barrier restricted to
/// `set`, once the first `discarded_prefix` elements of `set` are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonochromeWitness {
    pub set: FiniteSet,
    pub color: u64,
    pub discarded_prefix: u64,
}

/// Exhaustive re-verification of a witness, independent of any search path:
/// iterate every barrier element supported on the active part of the set.
pub fn verify_witness(
    code: &BarrierCode,
    col: &Coloring,
    witness: &MonochromeWitness,
) -> Result<bool, RamseyError> {
    let active = witness.set.suffix(witness.discarded_prefix as usize);
    for b in elements_in_pool(code, active.elements()) {
        if col.eval(&b)? != witness.color {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The color of the barrier restricted to `pool`, if constant. Vacuously
/// monochromatic pools report color 0.
fn restriction_color(
    code: &BarrierCode,
    col: &Coloring,
    pool: &[u64],
) -> Result<Option<u64>, RamseyError> {
    let mut seen: Option<u64> = None;
    for b in elements_in_pool(code, pool) {
        let c = col.eval(&b)?;
        match seen {
            None => seen = Some(c),
            Some(prev) if prev != c => return Ok(None),
            _ => {}
        }
    }
    Ok(Some(seen.unwrap_or(0)))
}

/// Iterates the size-`k` subsets of `pool` in lexicographic order.
pub(crate) fn for_each_subset<F>(pool: &[u64], k: usize, mut f: F) -> Result<(), RamseyError>
where
    F: FnMut(&[u64]) -> Result<bool, RamseyError>,
{
    if k > pool.len() {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<u64> = idx.iter().map(|&i| pool[i]).collect();
    loop {
        if f(&buf)? {
            return Ok(());
        }
        // Advance the combination.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idx[i] != i + pool.len() - k {
                break;
            }
            if i == 0 {
                return Ok(());
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = pool[idx[j]];
        }
    }
}

/// Exhaustive Nash-Williams style search: the lexicographically least
/// size-`target` subset of the window on which the coloring is constant,
/// greedily extended to a maximal witness.
pub fn nash_williams_search(
    code: &BarrierCode,
    col: &Coloring,
    w: Window,
    target: u64,
) -> Result<MonochromeWitness, RamseyError> {
    let pool: Vec<u64> = (0..w.bound).collect();
    search_in_pool(code, col, &pool, target, SearchStrategy::BruteForce)
}

/// Same contract as [`nash_williams_search`] but prunes the combination tree
/// as soon as a partial set already carries two colors. Results must agree
/// with the brute-force strategy; the acceptance suite checks they do.
pub fn nash_williams_search_recursive(
    code: &BarrierCode,
    col: &Coloring,
    w: Window,
    target: u64,
) -> Result<MonochromeWitness, RamseyError> {
    let pool: Vec<u64> = (0..w.bound).collect();
    search_in_pool(code, col, &pool, target, SearchStrategy::Pruned)
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum SearchStrategy {
    BruteForce,
    Pruned,
}

pub(crate) fn search_in_pool(
    code: &BarrierCode,
    col: &Coloring,
    pool: &[u64],
    target: u64,
    strategy: SearchStrategy,
) -> Result<MonochromeWitness, RamseyError> {
    let target = target as usize;
    let seed = match strategy {
        SearchStrategy::BruteForce => {
            let mut found: Option<Vec<u64>> = None;
            for_each_subset(pool, target, |cand| {
                if restriction_color(code, col, cand)?.is_some() {
                    found = Some(cand.to_vec());
                    Ok(true)
                } else {
                    Ok(false)
                }
            })?;
            found
        }
        SearchStrategy::Pruned => {
            let mut path: Vec<u64> = Vec::new();
            pruned_seed(code, col, pool, 0, target, &mut path)?
        }
    };
    let Some(seed) = seed else {
        return Err(RamseyError::NotFoundInWindow);
    };
    // Greedy maximal extension keeping the restriction monochromatic.
    let mut set = seed.clone();
    for &x in pool {
        if set.contains(&x) {
            continue;
        }
        let mut cand = set.clone();
        cand.push(x);
        cand.sort_unstable();
        if restriction_color(code, col, &cand)?.is_some() {
            set = cand;
        }
    }
    let color = restriction_color(code, col, &set)?.expect("extension kept constancy");
    Ok(MonochromeWitness {
        set: FiniteSet::new(set).expect("sorted distinct"),
        color,
        discarded_prefix: 0,
    })
}

fn pruned_seed(
    code: &BarrierCode,
    col: &Coloring,
    pool: &[u64],
    from: usize,
    target: usize,
    path: &mut Vec<u64>,
) -> Result<Option<Vec<u64>>, RamseyError> {
    if path.len() == target {
        return Ok(Some(path.clone()));
    }
    // Not enough pool left to finish.
    if pool.len() - from < target - path.len() {
        return Ok(None);
    }
    for i in from..pool.len() {
        path.push(pool[i]);
        // Constancy of the partial restriction is monotone, so a clash here
        // rules out every completion through this branch.
        if restriction_color(code, col, path)?.is_some() {
            if let Some(hit) = pruned_seed(code, col, pool, i + 1, target, path)? {
                path.pop();
                return Ok(Some(hit));
            }
        }
        path.pop();
    }
    Ok(None)
}

/// The two-coloring that separates the inclusion-minimal elements of the
/// barrier (color 0) from the rest, over the given window.
pub fn minimal_part_partition(code: &BarrierCode, w: Window) -> Coloring {
    let elems = crate::verify::elements_in_window(code, w.bound);
    let mut entries = BTreeMap::new();
    for s in &elems {
        let minimal = !elems.iter().any(|t| t.is_proper_subset_of(s));
        entries.insert(s.clone(), if minimal { 0 } else { 1 });
    }
    Coloring {
        arity: 2,
        rule: ColorRule::Table {
            entries,
            default: 0,
        },
    }
}

/// Lifts a pair coloring to a barrier whose elements have size at least two:
/// the value on `t` is the value of `col2` on the two least points of `t`.
pub fn lift_coloring(col2: Coloring) -> Coloring {
    Coloring {
        arity: col2.arity,
        rule: ColorRule::Lift {
            inner: Box::new(col2),
        },
    }
}

/// A common witness set for a family of colorings: each coloring is constant
/// on the restriction once its own discarded prefix is dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostMonoWitness {
    pub set: FiniteSet,
    pub per_coloring: Vec<MonochromeWitness>,
}

/// Minimal discarded prefix making the restriction monochromatic; `None`
/// when even the last proper suffix still carries two colors. A single
/// enumeration suffices: an element lies in the suffix after `dp` exactly
/// when its minimum is at least the `dp`-th point of the set.
fn minimal_prefix(
    code: &BarrierCode,
    col: &Coloring,
    set: &[u64],
) -> Result<Option<(u64, u64)>, RamseyError> {
    let mut colored: Vec<(u64, u64)> = Vec::new();
    for b in elements_in_pool(code, set) {
        colored.push((b.min_elem().unwrap_or(0), col.eval(&b)?));
    }
    colored.sort_unstable();
    for (dp, &cutoff) in set.iter().enumerate() {
        let start = colored.partition_point(|&(m, _)| m < cutoff);
        let suffix = &colored[start..];
        if suffix.windows(2).all(|p| p[0].1 == p[1].1) {
            let color = suffix.first().map(|&(_, c)| c).unwrap_or(0);
            return Ok(Some((dp as u64, color)));
        }
    }
    Ok(None)
}

/// Searches for a common almost-monochromatic set: lexicographically least
/// seed of the target size admitting a discarded prefix for every coloring,
/// extended greedily while no coloring's minimal prefix grows.
pub fn almost_monochromatic_search(
    code: &BarrierCode,
    cols: &[Coloring],
    w: Window,
    target: u64,
) -> Result<AlmostMonoWitness, RamseyError> {
    let pool: Vec<u64> = (0..w.bound).collect();
    almost_mono_in_pool(code, cols, &pool, target)
}

pub(crate) fn almost_mono_in_pool(
    code: &BarrierCode,
    cols: &[Coloring],
    pool: &[u64],
    target: u64,
) -> Result<AlmostMonoWitness, RamseyError> {
    assert!(!cols.is_empty(), "coloring family must be nonempty");
    let target = target as usize;
    type SeedState = (Vec<u64>, Vec<(u64, u64)>);
    let mut seed: Option<SeedState> = None;
    for_each_subset(pool, target, |cand| {
        let mut dps = Vec::with_capacity(cols.len());
        for col in cols {
            match minimal_prefix(code, col, cand)? {
                Some(dp) => dps.push(dp),
                None => return Ok(false),
            }
        }
        seed = Some((cand.to_vec(), dps));
        Ok(true)
    })?;
    let Some((mut set, mut dps)) = seed else {
        return Err(RamseyError::NotFoundInWindow);
    };
    for &x in pool {
        if set.contains(&x) {
            continue;
        }
        let mut cand = set.clone();
        cand.push(x);
        cand.sort_unstable();
        let mut cand_dps = Vec::with_capacity(cols.len());
        let mut ok = true;
        for (col, (dp, _)) in cols.iter().zip(dps.iter()) {
            match minimal_prefix(code, col, &cand)? {
                Some((new_dp, color)) if new_dp <= *dp => cand_dps.push((new_dp, color)),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            set = cand;
            dps = cand_dps;
        }
    }
    let set = FiniteSet::new(set).expect("sorted distinct");
    let per_coloring = dps
        .into_iter()
        .map(|(dp, color)| MonochromeWitness {
            set: set.clone(),
            color,
            discarded_prefix: dp,
        })
        .collect();
    Ok(AlmostMonoWitness { set, per_coloring })
}

/// One step of the diagonal construction: the spine index, the almost
/// monochromatic witness for the derived colorings on the sub-barrier, and
/// the per-coloring colors and threshold values recorded there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpineStep {
    pub n: u64,
    pub colors: Vec<u64>,
    pub thresholds: Vec<u64>,
    pub pool_after: Vec<u64>,
}

/// Witness produced by [`diagonal_monochromatic`]: a spaced set `J` that is
/// exactly monochromatic for every coloring in the family, with the
/// construction trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalWitness {
    pub set: FiniteSet,
    pub per_coloring: Vec<MonochromeWitness>,
    pub spine: Vec<SpineStep>,
}

/// Runs the diagonal monochromatization at window scale: for each spine
/// index `n`, finds a common almost-monochromatic set for the colorings
/// `s ↦ col({n} ∪ s)` on the sub-barrier at `n`, always recursing into the
/// usable residue of the previous witness. The spine indices whose realized
/// color vector matches the most frequent one, spaced past the recorded
/// thresholds, form `J`.
pub fn diagonal_monochromatic(
    code: &BarrierCode,
    cols: &[Coloring],
    w: Window,
) -> Result<DiagonalWitness, RamseyError> {
    assert!(!cols.is_empty(), "coloring family must be nonempty");
    let mut pool: Vec<u64> = (0..w.bound).collect();
    let mut spine: Vec<SpineStep> = Vec::new();

    while let Some((pos, &n)) = pool
        .iter()
        .enumerate()
        .find(|(_, &n)| code.tree_contains(&FiniteSet::new(vec![n]).unwrap()))
    {
        let singleton = FiniteSet::new(vec![n]).unwrap();
        let rest: Vec<u64> = pool[pos + 1..].to_vec();
        if code.contains(&singleton) {
            // Terminal branch: the colors are realized directly on {n}.
            let mut colors = Vec::with_capacity(cols.len());
            for col in cols {
                colors.push(col.eval(&singleton)?);
            }
            spine.push(SpineStep {
                n,
                colors,
                thresholds: vec![0; cols.len()],
                pool_after: rest.clone(),
            });
            pool = rest;
            continue;
        }
        let sub = code.sub_barrier(&singleton)?;
        let target = 2u64.min(rest.len() as u64);
        if target == 0 {
            break;
        }
        // Derived colorings evaluate the originals with the root put back.
        let derived_cols: Vec<Coloring> = cols
            .iter()
            .map(|col| derived_coloring(col, n, &sub, &rest))
            .collect::<Result<_, _>>()?;
        let witness = match almost_mono_in_pool(&sub, &derived_cols, &rest, target) {
            Ok(wit) => wit,
            Err(RamseyError::NotFoundInWindow) => break,
            Err(e) => return Err(e),
        };
        let mut colors = Vec::with_capacity(cols.len());
        let mut thresholds = Vec::with_capacity(cols.len());
        let mut usable: Option<FiniteSet> = None;
        for mw in &witness.per_coloring {
            colors.push(mw.color);
            let residual = mw.set.suffix(mw.discarded_prefix as usize);
            thresholds.push(residual.min_elem().unwrap_or(0));
            usable = Some(match usable {
                None => residual,
                Some(u) => intersect_sets(&u, &residual),
            });
        }
        let usable = usable.expect("nonempty family");
        spine.push(SpineStep {
            n,
            colors,
            thresholds,
            pool_after: usable.elements().to_vec(),
        });
        if usable.is_empty() {
            break;
        }
        pool = usable.elements().to_vec();
    }

    if spine.is_empty() {
        return Err(RamseyError::NotFoundInWindow);
    }

    // Split by realized color vector and keep the most frequent class.
    let mut counts: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    for step in &spine {
        *counts.entry(step.colors.clone()).or_default() += 1;
    }
    let best_vector = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(v, _)| v.clone())
        .expect("spine nonempty");

    // Space the selected spine: each next point must clear the previous
    // point's recorded thresholds (exact maximum + 1 over the finite family).
    let mut selected: Vec<u64> = Vec::new();
    let mut floor = 0u64;
    for step in &spine {
        if step.colors != best_vector {
            continue;
        }
        if step.n >= floor {
            selected.push(step.n);
            let t = step.thresholds.iter().copied().max().unwrap_or(0);
            floor = t.max(step.n) + 1;
        }
    }
    if selected.is_empty() {
        return Err(RamseyError::NotFoundInWindow);
    }
    let set = FiniteSet::new(selected).expect("increasing by construction");
    let per_coloring = best_vector
        .iter()
        .map(|&color| MonochromeWitness {
            set: set.clone(),
            color,
            discarded_prefix: 0,
        })
        .collect();
    Ok(DiagonalWitness {
        set,
        per_coloring,
        spine,
    })
}

/// Materializes `s ↦ col({n} ∪ s)` as a table over the sub-barrier elements
/// supported on the pool.
fn derived_coloring(
    col: &Coloring,
    n: u64,
    sub: &BarrierCode,
    pool: &[u64],
) -> Result<Coloring, RamseyError> {
    let mut entries = BTreeMap::new();
    let root = FiniteSet::new(vec![n]).unwrap();
    for t in elements_in_pool(sub, pool) {
        let full = root.union(&t);
        entries.insert(t, col.eval(&full)?);
    }
    Ok(Coloring {
        arity: col.arity,
        rule: ColorRule::Table {
            entries,
            default: 0,
        },
    })
}

fn intersect_sets(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    FiniteSet::from_unsorted(
        a.elements()
            .iter()
            .copied()
            .filter(|x| b.contains(*x))
            .collect(),
    )
}
