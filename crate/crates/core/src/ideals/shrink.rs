//! The Katětov shrinking machinery: given a map from one barrier into
//! another of strictly larger rank, produce a restriction whose image is
//! certifiably small — either confined to finitely many columns or disjoint
//! from a Hechler tree.

use super::{hechler_avoiding, FinDescriptor, HechlerTree, IdealsError};
use crate::barrier::BarrierCode;
use crate::ordinal::Ordinal;
use crate::ramsey::{for_each_subset, Coloring};
use crate::sets::{FiniteSet, SetDescriptor, Window};
use crate::verify::{elements_in_pool, elements_in_window};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A finite map from barrier elements to target-barrier elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapTable {
    #[serde(with = "crate::sets::set_keyed_map")]
    pub entries: BTreeMap<FiniteSet, FiniteSet>,
}

impl MapTable {
    pub fn get(&self, b: &FiniteSet) -> Result<&FiniteSet, IdealsError> {
        self.entries
            .get(b)
            .ok_or_else(|| IdealsError::MapIncomplete(b.clone()))
    }
}

/// Seeded uniform map: every source element supported on the window is sent
/// to some target element supported on the window.
pub fn random_map(
    code_b: &BarrierCode,
    code_c: &BarrierCode,
    w: Window,
    seed: u64,
) -> Result<MapTable, IdealsError> {
    let targets = elements_in_window(code_c, w.bound);
    if targets.is_empty() {
        return Err(IdealsError::EmptyTarget);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = BTreeMap::new();
    for b in elements_in_window(code_b, w.bound) {
        let pick = rng.gen_range(0..targets.len());
        entries.insert(b, targets[pick].clone());
    }
    Ok(MapTable { entries })
}

/// What a shrink certificate claims about the image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShrinkKind {
    /// Every image element lies in a column with index at most `n`.
    ColumnBounded { n: u64 },
    /// The image misses the Hechler tree entirely (within the window).
    HechlerDisjoint { tree: HechlerTree },
}

/// Which branch of the construction produced the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum ShrinkBranch {
    LowColumns,
    RankOneThin,
    Recursive { patched_points: u64 },
    BruteForce,
}

/// Certificate that the image of the barrier restricted to `x` is small in
/// the target ideal, in the window-relative sense recorded here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkCertificate {
    pub x: FiniteSet,
    pub kind: ShrinkKind,
    pub image: Vec<FiniteSet>,
    pub checked_window: Window,
    pub branch: ShrinkBranch,
}

/// Independent re-verification: recompute the image of the restriction and
/// replay the claim of the certificate kind.
pub fn verify_shrink(
    cert: &ShrinkCertificate,
    code_b: &BarrierCode,
    f: &MapTable,
) -> Result<bool, IdealsError> {
    let mut image = BTreeSet::new();
    for b in elements_in_pool(code_b, cert.x.elements()) {
        image.insert(f.get(&b)?.clone());
    }
    let stored: BTreeSet<FiniteSet> = cert.image.iter().cloned().collect();
    if image != stored {
        return Ok(false);
    }
    Ok(match &cert.kind {
        ShrinkKind::ColumnBounded { n } => {
            image.iter().all(|c| c.min_elem().is_some_and(|m| m <= *n))
        }
        ShrinkKind::HechlerDisjoint { tree } => image.iter().all(|c| !tree.contains_node(c)),
    })
}

/// Positivity for the ideal of subsets of the barrier missing a full
/// restriction: searches for a window set all of whose barrier elements lie
/// in the given subset (characteristic coloring with value 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum GcOutcome {
    Positive { x: FiniteSet },
    NegativeInWindow,
}

pub fn gc_positive(
    code_b: &BarrierCode,
    subset: &Coloring,
    w: Window,
    target: u64,
) -> Result<GcOutcome, IdealsError> {
    let pool: Vec<u64> = (0..w.bound).collect();
    let eval = |b: &FiniteSet| -> Result<bool, IdealsError> {
        Ok(subset.eval(b).map_err(IdealsError::Ramsey)? == 1)
    };
    match greedy_filtered_set(code_b, &pool, target, false, &eval)? {
        Some(x) => Ok(GcOutcome::Positive {
            x: FiniteSet::new(x).expect("sorted"),
        }),
        None => Ok(GcOutcome::NegativeInWindow),
    }
}

/// Lexicographically least seed of size `target` whose barrier restriction
/// satisfies the predicate on every element, greedily extended. With
/// `require_nonempty` the seed must support at least one element.
fn greedy_filtered_set(
    code: &BarrierCode,
    pool: &[u64],
    target: u64,
    require_nonempty: bool,
    good: &dyn Fn(&FiniteSet) -> Result<bool, IdealsError>,
) -> Result<Option<Vec<u64>>, IdealsError> {
    let all_good = |support: &[u64]| -> Result<Option<bool>, IdealsError> {
        let elems = elements_in_pool(code, support);
        if require_nonempty && elems.is_empty() {
            return Ok(None);
        }
        for b in elems {
            if !good(&b)? {
                return Ok(Some(false));
            }
        }
        Ok(Some(true))
    };
    let mut seed: Option<Vec<u64>> = None;
    let mut failure: Option<IdealsError> = None;
    for_each_subset(pool, target as usize, |cand| match all_good(cand) {
        Ok(Some(true)) => {
            seed = Some(cand.to_vec());
            Ok(true)
        }
        Ok(_) => Ok(false),
        Err(e) => {
            failure = Some(e);
            Ok(true)
        }
    })
    .map_err(IdealsError::Ramsey)?;
    if let Some(e) = failure {
        return Err(e);
    }
    let Some(mut set) = seed else {
        return Ok(None);
    };
    for &x in pool {
        if set.contains(&x) {
            continue;
        }
        let mut cand = set.clone();
        cand.push(x);
        cand.sort_unstable();
        if matches!(all_good(&cand)?, Some(true)) {
            set = cand;
        }
    }
    Ok(Some(set))
}

/// Exhaustive oracle for the shrinking problem: prefer the smallest column
/// bound that admits a witness set, and otherwise certify the lex-least
/// witness set by an avoiding tree built from its finite image.
pub fn katetov_shrink_bruteforce(
    code_b: &BarrierCode,
    code_c: &BarrierCode,
    f: &MapTable,
    w: Window,
    target: u64,
) -> Result<ShrinkCertificate, IdealsError> {
    check_rank_order(code_b, code_c)?;
    let pool: Vec<u64> = (0..w.bound).collect();
    for n in 0..w.bound.saturating_sub(1) {
        let low = |b: &FiniteSet| -> Result<bool, IdealsError> {
            Ok(f.get(b)?.min_elem().is_some_and(|m| m <= n))
        };
        if let Some(x) = greedy_filtered_set(code_b, &pool, target, true, &low)? {
            if (x.len() as u64) < (pool.len() as u64).min(target + n + 1) {
                continue; // witness too small to stand in for an infinite set
            }
            let x = FiniteSet::new(x).expect("sorted");
            let image = image_of(code_b, f, &x)?;
            return Ok(ShrinkCertificate {
                x,
                kind: ShrinkKind::ColumnBounded { n },
                image,
                checked_window: w,
                branch: ShrinkBranch::BruteForce,
            });
        }
    }
    // Any witness set works for the tree kind: its image is finite, so an
    // avoiding tree exists. Certify the lex-least one, extended greedily.
    let always = |_: &FiniteSet| -> Result<bool, IdealsError> { Ok(true) };
    let Some(x) = greedy_filtered_set(code_b, &pool, target, false, &always)? else {
        return Err(IdealsError::NotFoundInWindow);
    };
    let x = FiniteSet::new(x).expect("sorted");
    let image = image_of(code_b, f, &x)?;
    let tree = hechler_avoiding(code_c, &FinDescriptor::from_elements(image.clone()), w)?;
    Ok(ShrinkCertificate {
        x,
        kind: ShrinkKind::HechlerDisjoint { tree },
        image,
        checked_window: w,
        branch: ShrinkBranch::BruteForce,
    })
}

fn image_of(
    code_b: &BarrierCode,
    f: &MapTable,
    x: &FiniteSet,
) -> Result<Vec<FiniteSet>, IdealsError> {
    let mut image = BTreeSet::new();
    for b in elements_in_pool(code_b, x.elements()) {
        image.insert(f.get(&b)?.clone());
    }
    Ok(image.into_iter().collect())
}

/// The shrinking recursion of the rank-comparison theorem, at window scale.
///
/// First the low-column case is tried: a monochromatic set for the coloring
/// "image lands in columns up to n". Failing that, rank-one sources thin to
/// one image per column, and higher ranks run the double induction: a spine
/// of minima is extracted column by column, each column receiving a tree
/// from the recursive calls on the sub-barriers at the spine subsets, all
/// assembled into one Hechler tree disjoint from the image.
pub fn katetov_shrink_recursive(
    code_b: &BarrierCode,
    code_c: &BarrierCode,
    f: &MapTable,
    w: Window,
) -> Result<ShrinkCertificate, IdealsError> {
    check_rank_order(code_b, code_c)?;
    let pool: Vec<u64> = (0..w.bound).collect();
    let lookup = |b: &FiniteSet| -> Result<FiniteSet, IdealsError> { Ok(f.get(b)?.clone()) };
    let (x, kind, branch) = shrink_in_pool(code_b, code_c, &lookup, w, &pool)?;
    let image = image_of(code_b, f, &x)?;
    Ok(ShrinkCertificate {
        x,
        kind,
        image,
        checked_window: w,
        branch,
    })
}

fn check_rank_order(code_b: &BarrierCode, code_c: &BarrierCode) -> Result<(), IdealsError> {
    let rb = code_b.rank()?;
    let rc = code_c.rank()?;
    if rb >= rc {
        return Err(IdealsError::RankOrderViolated);
    }
    Ok(())
}

type MapFn<'a> = dyn Fn(&FiniteSet) -> Result<FiniteSet, IdealsError> + 'a;

fn shrink_in_pool(
    code_b: &BarrierCode,
    code_c: &BarrierCode,
    f: &MapFn,
    w: Window,
    pool: &[u64],
) -> Result<(FiniteSet, ShrinkKind, ShrinkBranch), IdealsError> {
    let target = w.depth.min(pool.len() as u64).max(1);

    // Low-column case: the coloring by "image in columns <= n" has a
    // 0-monochromatic set for some n whose columns do not blanket the
    // window. A finite witness stands in for the infinite monochromatic set
    // only when it outgrows the columns it names (or exhausts the pool), so
    // small ones are passed over.
    for n in 0..w.bound.saturating_sub(1) {
        let low = |b: &FiniteSet| -> Result<bool, IdealsError> {
            Ok(f(b)?.min_elem().is_some_and(|m| m <= n))
        };
        if let Some(x) = greedy_filtered_set(code_b, pool, target, true, &low)? {
            if (x.len() as u64) < (pool.len() as u64).min(target + n + 1) {
                continue;
            }
            return Ok((
                FiniteSet::new(x).expect("sorted"),
                ShrinkKind::ColumnBounded { n },
                ShrinkBranch::LowColumns,
            ));
        }
    }

    let rank_b = code_b.rank()?;
    if rank_b <= Ordinal::finite(1) {
        rank_one_branch(code_b, code_c, f, w, pool)
    } else {
        recursive_branch(code_b, code_c, f, w, pool)
    }
}

/// Rank at most one: all elements are singletons (or the empty set). Thin to
/// one image per column and avoid the finite image pointwise.
fn rank_one_branch(
    code_b: &BarrierCode,
    code_c: &BarrierCode,
    f: &MapFn,
    w: Window,
    pool: &[u64],
) -> Result<(FiniteSet, ShrinkKind, ShrinkBranch), IdealsError> {
    let elems = elements_in_pool(code_b, pool);
    let mut picked: Vec<u64> = Vec::new();
    let mut used_columns: BTreeSet<u64> = BTreeSet::new();
    let mut image: Vec<FiniteSet> = Vec::new();
    for e in &elems {
        if e.is_empty() {
            // The degenerate rank-zero element contributes its image but
            // constrains no points.
            image.push(f(e)?);
            continue;
        }
        let c = f(e)?;
        let col = c.min_elem().unwrap_or(0);
        if used_columns.insert(col) {
            picked.extend(e.elements());
            image.push(c);
        }
    }
    if picked.is_empty() && !elems.iter().any(|e| e.is_empty()) {
        return Err(IdealsError::WindowExhausted);
    }
    let x = if picked.is_empty() {
        FiniteSet::new(pool.to_vec()).expect("pool is increasing")
    } else {
        FiniteSet::from_unsorted(picked)
    };
    let tree = hechler_avoiding(code_c, &FinDescriptor::from_elements(image), w)?;
    Ok((
        x,
        ShrinkKind::HechlerDisjoint { tree },
        ShrinkBranch::RankOneThin,
    ))
}

/// The double induction: extract a spine of minima while building, for each
/// column of the target, the intersection of the trees returned by the
/// recursive calls at the spine subsets.
fn recursive_branch(
    code_b: &BarrierCode,
    code_c: &BarrierCode,
    f: &MapFn,
    w: Window,
    pool: &[u64],
) -> Result<(FiniteSet, ShrinkKind, ShrinkBranch), IdealsError> {
    let mut pool: Vec<u64> = pool.to_vec();
    let mut spine: Vec<u64> = Vec::new();
    // Per-column explicit thresholds of the final tree, keyed by full nodes.
    let mut explicit: BTreeMap<FiniteSet, u64> = BTreeMap::new();

    let mut columns_built = 0u64;
    for n in 0..w.bound {
        if spine.len() as u64 >= w.depth || pool.is_empty() {
            break;
        }
        // Shrink the pool to a set whose elements all map above column n.
        let high = |b: &FiniteSet| -> Result<bool, IdealsError> {
            Ok(f(b)?.min_elem().is_none_or(|m| m > n))
        };
        let shrink_target = 2u64.min(pool.len() as u64);
        let Some(shrunk) = greedy_filtered_set(code_b, &pool, shrink_target, false, &high)? else {
            return Err(IdealsError::WindowExhausted);
        };
        pool = shrunk;

        // Recursive calls for the nonempty spine subsets, chained so each
        // call shrinks the pool for the next.
        build_column(code_b, code_c, f, w, n, &spine, &mut pool, &mut explicit)?;
        columns_built = n + 1;

        // Extend the spine by the minimum of the surviving pool.
        let m = pool[0];
        spine.push(m);
        pool.retain(|&x| x > m);
    }

    if spine.len() < 2 {
        return Err(IdealsError::WindowExhausted);
    }
    let x = FiniteSet::new(spine.clone()).expect("increasing spine");

    // Columns past the spine loop only receive images of full elements of
    // the restriction (anything with a nonempty tail was covered by the
    // recursive call at its image column); avoid those points directly.
    for b in elements_in_pool(code_b, x.elements()) {
        let c = f(&b)?;
        if c.min_elem().is_some_and(|m| m >= columns_built) {
            avoid_point(&mut explicit, &c);
        }
    }

    let mut patched = 0u64;
    let mut tree = HechlerTree {
        base: SetDescriptor::omega(),
        explicit,
        default: 0,
    };
    for b in elements_in_pool(code_b, x.elements()) {
        let c = f(&b)?;
        if tree.contains_node(&c) {
            avoid_point(&mut tree.explicit, &c);
            patched += 1;
        }
    }
    let tree = tree.canonicalized();
    Ok((
        x,
        ShrinkKind::HechlerDisjoint { tree },
        ShrinkBranch::Recursive {
            patched_points: patched,
        },
    ))
}

/// Handles one target column: for every nonempty subset of the spine, either
/// record its terminal image as a point to avoid or recurse on the
/// sub-barrier against the column, intersecting the returned trees into the
/// column's thresholds.
#[allow(clippy::too_many_arguments)]
fn build_column(
    code_b: &BarrierCode,
    code_c: &BarrierCode,
    f: &MapFn,
    w: Window,
    n: u64,
    spine: &[u64],
    pool: &mut Vec<u64>,
    explicit: &mut BTreeMap<FiniteSet, u64>,
) -> Result<(), IdealsError> {
    let column_root = FiniteSet::new(vec![n]).unwrap();
    let column_usable = code_c.tree_contains(&column_root) && !code_c.contains(&column_root);
    let code_cn = if column_usable {
        Some(code_c.sub_barrier(&column_root)?)
    } else {
        None
    };
    // Lex-least column element, the fallback image for the redirected maps.
    let default_cn = code_cn
        .as_ref()
        .and_then(|cn| elements_in_window(cn, w.bound).into_iter().next());

    for s_mask in 1u64..(1 << spine.len()) {
        let s = FiniteSet::new(
            spine
                .iter()
                .enumerate()
                .filter(|(i, _)| s_mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect(),
        )
        .expect("spine is increasing");
        if !code_b.tree_contains(&s) {
            continue;
        }
        if code_b.contains(&s) {
            // Terminal: its image is a single point; avoid it when it sits
            // in this column.
            let c = f(&s)?;
            if c.min_elem() == Some(n) {
                avoid_point(explicit, &c);
            }
            continue;
        }
        let sub_b = code_b.sub_barrier(&s)?;
        let usable = match (&code_cn, &default_cn) {
            (Some(cn), Some(_)) => sub_b.rank()? < cn.rank()?,
            _ => false,
        };
        if !usable {
            // The induction is unavailable for this column (terminal or
            // too-small target branch): avoid the finitely many images that
            // land here pointwise.
            for t in elements_in_pool(&sub_b, pool) {
                let c = f(&s.union(&t))?;
                if c.min_elem() == Some(n) {
                    avoid_point(explicit, &c);
                }
            }
            continue;
        }
        let (cn, default) = (code_cn.as_ref().unwrap(), default_cn.as_ref().unwrap());
        // Redirected map into the column, with the root stripped.
        let g = |t: &FiniteSet| -> Result<FiniteSet, IdealsError> {
            let full = s.union(t);
            let c = f(&full)?;
            if c.min_elem() == Some(n) {
                Ok(c.without_min())
            } else {
                Ok(default.clone())
            }
        };
        if pool.is_empty() {
            continue;
        }
        let (x_sub, kind, _) = shrink_in_pool(&sub_b, cn, &g, w, pool)?;
        // Chain the shrink and rebase the returned tree into this column.
        *pool = x_sub.elements().to_vec();
        let sub_tree = match kind {
            ShrinkKind::ColumnBounded { n: j } => HechlerTree::root_threshold(j + 1),
            ShrinkKind::HechlerDisjoint { tree } => tree,
        };
        merge_rebased(explicit, &column_root, &sub_tree);
    }
    Ok(())
}

/// Excludes a single point from the tree by raising the threshold at its
/// parent node past its last entry. Collateral exclusion is sound: a smaller
/// tree stays disjoint.
fn avoid_point(explicit: &mut BTreeMap<FiniteSet, u64>, point: &FiniteSet) {
    if point.is_empty() {
        return;
    }
    let parent = point.prefix(point.len() - 1);
    let needed = point.max_elem().unwrap() + 1;
    let entry = explicit.entry(parent).or_insert(0);
    *entry = (*entry).max(needed);
}

/// Folds a subtree's thresholds into the column rooted at `root`, taking
/// maxima where nodes collide (tree intersection).
fn merge_rebased(
    explicit: &mut BTreeMap<FiniteSet, u64>,
    root: &FiniteSet,
    sub_tree: &HechlerTree,
) {
    // The subtree's root threshold governs the column root itself.
    let entries: Vec<(FiniteSet, u64)> = sub_tree
        .explicit
        .iter()
        .map(|(key, &v)| (root.union(key), v))
        .collect();
    for (key, v) in entries {
        let entry = explicit.entry(key).or_insert(0);
        *entry = (*entry).max(v);
    }
    if sub_tree.default > 0 {
        // A nonzero default cannot be rebased exactly with finite data.
        // Raising the column root covers the first level; anything slipping
        // through deeper levels is caught by the final disjointness pass.
        // Trees built inside this construction always carry default 0.
        let entry = explicit.entry(root.clone()).or_insert(0);
        *entry = (*entry).max(sub_tree.default);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramsey::ColorRule;

    fn fs(v: &[u64]) -> FiniteSet {
        FiniteSet::new(v.to_vec()).unwrap()
    }

    fn win(bound: u64, depth: u64) -> Window {
        Window::new(bound, depth).unwrap()
    }

    fn diagonal_map(w: Window) -> MapTable {
        // f({n}) = {n, n+1} from singletons into pairs.
        let mut entries = BTreeMap::new();
        for n in 0..w.bound {
            entries.insert(fs(&[n]), fs(&[n, n + 1]));
        }
        MapTable { entries }
    }

    #[test]
    fn constant_map_is_column_bounded() {
        let w = win(12, 4);
        let mut entries = BTreeMap::new();
        for n in 0..w.bound {
            entries.insert(fs(&[n]), fs(&[2, 5]));
        }
        let f = MapTable { entries };
        let cert =
            katetov_shrink_recursive(&BarrierCode::uniform(1), &BarrierCode::uniform(2), &f, w)
                .unwrap();
        assert_eq!(cert.kind, ShrinkKind::ColumnBounded { n: 2 });
        assert!(verify_shrink(&cert, &BarrierCode::uniform(1), &f).unwrap());
    }

    #[test]
    fn low_column_map_reports_zero() {
        let w = win(12, 4);
        let mut entries = BTreeMap::new();
        for n in 0..w.bound {
            entries.insert(fs(&[n]), fs(&[0, n + 1]));
        }
        let f = MapTable { entries };
        let cert =
            katetov_shrink_recursive(&BarrierCode::uniform(1), &BarrierCode::uniform(2), &f, w)
                .unwrap();
        assert_eq!(cert.kind, ShrinkKind::ColumnBounded { n: 0 });
        assert!(verify_shrink(&cert, &BarrierCode::uniform(1), &f).unwrap());
    }

    #[test]
    fn diagonal_map_gets_hechler_certificate() {
        let w = win(20, 4);
        let f = diagonal_map(w);
        let cert =
            katetov_shrink_recursive(&BarrierCode::uniform(1), &BarrierCode::uniform(2), &f, w)
                .unwrap();
        assert!(matches!(cert.kind, ShrinkKind::HechlerDisjoint { .. }));
        assert!(matches!(cert.branch, ShrinkBranch::RankOneThin));
        assert!(verify_shrink(&cert, &BarrierCode::uniform(1), &f).unwrap());
    }

    #[test]
    fn bruteforce_agrees_on_diagonal_map() {
        let w = win(20, 4);
        let f = diagonal_map(w);
        let cert =
            katetov_shrink_bruteforce(&BarrierCode::uniform(1), &BarrierCode::uniform(2), &f, w, 4)
                .unwrap();
        assert!(verify_shrink(&cert, &BarrierCode::uniform(1), &f).unwrap());
    }

    #[test]
    fn rank_order_is_enforced() {
        let w = win(10, 3);
        let f = MapTable::default();
        assert!(matches!(
            katetov_shrink_recursive(&BarrierCode::uniform(2), &BarrierCode::uniform(2), &f, w),
            Err(IdealsError::RankOrderViolated)
        ));
    }

    #[test]
    fn pairs_into_triples_recursive() {
        let w = win(12, 3);
        let f = random_map(&BarrierCode::uniform(2), &BarrierCode::uniform(3), w, 7).unwrap();
        let cert =
            katetov_shrink_recursive(&BarrierCode::uniform(2), &BarrierCode::uniform(3), &f, w)
                .unwrap();
        assert!(verify_shrink(&cert, &BarrierCode::uniform(2), &f).unwrap());
        if let ShrinkBranch::Recursive { patched_points } = cert.branch {
            assert_eq!(patched_points, 0, "construction should not need patching");
        }
    }

    #[test]
    fn deep_nesting_scales_with_the_window() {
        // Triples into 4-sets exercise a doubly nested recursion; the
        // redirected inner maps are near-constant, so the inner calls must
        // resolve through the column case instead of consuming the pool.
        for bound in [14u64, 20] {
            let w = win(bound, 3);
            for seed in 0..10u64 {
                let f = random_map(&BarrierCode::uniform(3), &BarrierCode::uniform(4), w, seed)
                    .unwrap();
                let cert = katetov_shrink_recursive(
                    &BarrierCode::uniform(3),
                    &BarrierCode::uniform(4),
                    &f,
                    w,
                )
                .unwrap();
                assert!(verify_shrink(&cert, &BarrierCode::uniform(3), &f).unwrap());
                if let ShrinkBranch::Recursive { patched_points } = cert.branch {
                    assert_eq!(patched_points, 0, "bound {bound} seed {seed}");
                }
            }
        }
    }

    #[test]
    fn pairs_into_schreier_covers_unusable_columns_pointwise() {
        // Low target columns cannot carry the induction (the branch ranks
        // are too small), so their images are excluded pointwise.
        let w = win(12, 3);
        let code_c = BarrierCode::schreier(1).unwrap();
        for seed in [5u64, 6, 7] {
            let f = random_map(&BarrierCode::uniform(2), &code_c, w, seed).unwrap();
            let cert = katetov_shrink_recursive(&BarrierCode::uniform(2), &code_c, &f, w).unwrap();
            assert!(verify_shrink(&cert, &BarrierCode::uniform(2), &f).unwrap());
            if let ShrinkBranch::Recursive { patched_points } = cert.branch {
                assert_eq!(patched_points, 0, "seed {seed} needed patching");
            }
        }
    }

    #[test]
    fn singletons_into_schreier_recursive() {
        let w = win(12, 3);
        for seed in [1u64, 2, 3] {
            let code_c = BarrierCode::schreier(1).unwrap();
            let f = random_map(&BarrierCode::uniform(1), &code_c, w, seed).unwrap();
            let cert = katetov_shrink_recursive(&BarrierCode::uniform(1), &code_c, &f, w).unwrap();
            assert!(verify_shrink(&cert, &BarrierCode::uniform(1), &f).unwrap());
        }
    }

    #[test]
    fn gc_positive_examples() {
        let w = win(12, 3);
        let all = Coloring::constant(1);
        match gc_positive(&BarrierCode::uniform(2), &all, w, 3).unwrap() {
            GcOutcome::Positive { x } => assert_eq!(x.len() as u64, w.bound),
            other => panic!("expected positive, got {other:?}"),
        }

        // Complement of column 0: drop the point 0 and everything works.
        let mut entries = BTreeMap::new();
        for b in elements_in_window(&BarrierCode::uniform(2), w.bound) {
            entries.insert(b.clone(), u64::from(b.min_elem() != Some(0)));
        }
        let subset = Coloring {
            arity: 2,
            rule: ColorRule::Table {
                entries,
                default: 0,
            },
        };
        match gc_positive(&BarrierCode::uniform(2), &subset, w, 3).unwrap() {
            GcOutcome::Positive { x } => {
                assert!(!x.contains(0));
                assert_eq!(x.len() as u64, w.bound - 1);
            }
            other => panic!("expected positive, got {other:?}"),
        }

        // Parity subset: positivity via a monochromatic clique.
        let w = win(18, 4);
        let mut entries = BTreeMap::new();
        for b in elements_in_window(&BarrierCode::uniform(2), w.bound) {
            let sum: u64 = b.elements().iter().sum();
            entries.insert(b.clone(), u64::from(sum.is_multiple_of(2)));
        }
        let subset = Coloring {
            arity: 2,
            rule: ColorRule::Table {
                entries,
                default: 0,
            },
        };
        match gc_positive(&BarrierCode::uniform(2), &subset, w, 4).unwrap() {
            GcOutcome::Positive { x } => assert!(x.len() >= 4),
            other => panic!("expected positive, got {other:?}"),
        }
    }
}
