//! Hechler trees, the barrier ideals, and their window-scale machinery.
//!
//! A Hechler tree here is a tree of increasing sequences in which the
//! successors of a node form a final segment of the base above the node.
//! The tree is presented by finitely many explicit thresholds plus a
//! default, so the correspondence with threshold functions is finite data.

mod shrink;
mod stage;

pub use shrink::{
    gc_positive, katetov_shrink_bruteforce, katetov_shrink_recursive, random_map, verify_shrink,
    GcOutcome, MapTable, ShrinkBranch, ShrinkCertificate, ShrinkKind,
};
pub use stage::{
    ad_stage, e_up_contains, e_up_richness, verify_no_c_seq, AdStageCertificate, ClauseCheck,
    NoCseqVerdict,
};

use crate::barrier::{BarrierCode, BarrierError};
use crate::ramsey::RamseyError;
use crate::sets::{FiniteSet, SetDescriptor, Window};
use crate::verify::elements_in_window;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealsError {
    #[error("window too small to complete the construction")]
    WindowExhausted,
    #[error("source rank must be strictly below the target rank")]
    RankOrderViolated,
    #[error("descriptor is not a valid ideal presentation: {0}")]
    NotInIdeal(String),
    #[error("no witness of the requested size in the window")]
    NotFoundInWindow,
    #[error("map has no value for barrier element {0}")]
    MapIncomplete(FiniteSet),
    #[error("trees in a family must share a base")]
    BaseMismatch,
    #[error("target barrier has no elements in the window")]
    EmptyTarget,
    #[error(transparent)]
    Barrier(#[from] BarrierError),
    #[error(transparent)]
    Ramsey(#[from] RamseyError),
}

/// The fixed enumeration of all finite sequences of naturals. Sequences are
/// bucketed by `max(max element, length - 1)` and ordered inside a bucket by
/// maximum element, then length, then lexicographically, with the empty
/// sequence first overall. This extends the usual tree order: initial
/// segments precede their extensions and siblings are ordered by last entry.
pub fn canonical_enumeration(count: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = Vec::with_capacity(count);
    out.push(Vec::new());
    let mut h: u64 = 0;
    while out.len() < count {
        let mut bucket: Vec<Vec<u64>> = Vec::new();
        let mut seq = Vec::new();
        gen_bucket(h, &mut seq, &mut bucket);
        bucket.sort_by(|x, y| {
            let kx = (x.iter().max().copied().unwrap_or(0), x.len());
            let ky = (y.iter().max().copied().unwrap_or(0), y.len());
            kx.cmp(&ky).then_with(|| x.cmp(y))
        });
        out.extend(bucket);
        h += 1;
    }
    out.truncate(count);
    out
}

fn gen_bucket(h: u64, seq: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if !seq.is_empty() {
        let max = seq.iter().max().copied().unwrap();
        let len = seq.len() as u64;
        if max.max(len - 1) == h {
            out.push(seq.clone());
        }
    }
    if (seq.len() as u64) < h + 1 {
        for x in 0..=h {
            seq.push(x);
            gen_bucket(h, seq, out);
            seq.pop();
        }
    }
}

/// Index of a sequence in the canonical enumeration.
pub fn enumeration_index(target: &[u64]) -> usize {
    let h = target
        .iter()
        .max()
        .copied()
        .unwrap_or(0)
        .max(target.len().saturating_sub(1) as u64);
    // Everything in the target's bucket or earlier fits in this prefix.
    let upper = enumeration_len_through_bucket(h);
    canonical_enumeration(upper)
        .iter()
        .position(|s| s == target)
        .expect("every sequence appears in its bucket")
}

fn enumeration_len_through_bucket(h: u64) -> usize {
    // 1 for the empty sequence plus all sequences over {0..=k} of length
    // <= k+1 for k = h, which is a geometric sum.
    let base = h + 2;
    let mut total: u64 = 1;
    let mut pow: u64 = 1;
    for _ in 0..=h {
        pow *= base - 1;
        total += pow;
    }
    total as usize
}

/// A threshold function presented as a finite table over the canonical
/// enumeration plus a default value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnTable {
    pub values: Vec<u64>,
    pub default: u64,
}

/// A Hechler tree on a base set: nodes are increasing sequences inside the
/// base and the successors of a node are the base elements above it that
/// clear the node's threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HechlerTree {
    pub base: SetDescriptor,
    /// Explicit node thresholds, serialized as an entry list because JSON
    /// map keys must be strings.
    #[serde(with = "crate::sets::set_keyed_map")]
    pub explicit: BTreeMap<FiniteSet, u64>,
    pub default: u64,
}

impl HechlerTree {
    pub fn full() -> Self {
        HechlerTree {
            base: SetDescriptor::omega(),
            explicit: BTreeMap::new(),
            default: 0,
        }
    }

    /// The full tree above a root threshold.
    pub fn root_threshold(k: u64) -> Self {
        let mut explicit = BTreeMap::new();
        if k > 0 {
            explicit.insert(FiniteSet::empty(), k);
        }
        HechlerTree {
            base: SetDescriptor::omega(),
            explicit,
            default: 0,
        }
    }

    pub fn threshold(&self, s: &FiniteSet) -> u64 {
        self.explicit.get(s).copied().unwrap_or(self.default)
    }

    /// Node membership: every step of the sequence lies in the base and
    /// clears the threshold of the prefix before it.
    pub fn contains_node(&self, s: &FiniteSet) -> bool {
        let mut prefix = FiniteSet::empty();
        for &x in s.elements() {
            if !self.base.contains(x) || x < self.threshold(&prefix) {
                return false;
            }
            prefix = prefix.extended(x).expect("input is increasing");
        }
        true
    }

    /// Drops unreachable explicit entries and entries equal to the default.
    pub fn canonicalized(mut self) -> Self {
        let keep: Vec<FiniteSet> = self
            .explicit
            .keys()
            .filter(|s| self.contains_node(s) && self.threshold(s) != self.default)
            .cloned()
            .collect();
        let mut explicit = BTreeMap::new();
        for key in keep {
            let v = self.threshold(&key);
            explicit.insert(key, v);
        }
        self.explicit = explicit;
        self
    }

    /// Node-wise intersection with another tree on the same base: thresholds
    /// are the pointwise maximum.
    pub fn intersect(&self, other: &HechlerTree) -> Result<HechlerTree, IdealsError> {
        if self.base != other.base {
            return Err(IdealsError::BaseMismatch);
        }
        let mut explicit = BTreeMap::new();
        for key in self.explicit.keys().chain(other.explicit.keys()) {
            let v = self.threshold(key).max(other.threshold(key));
            explicit.insert(key.clone(), v);
        }
        Ok(HechlerTree {
            base: self.base.clone(),
            explicit,
            default: self.default.max(other.default),
        }
        .canonicalized())
    }
}

/// The tree `T_f` of a threshold table: a sequence is a node when every step
/// clears the table value at its prefix's index. Only increasing sequences
/// are materialized; the rest of the table is ignored, matching the
/// canonical representatives.
pub fn tree_from_fn(f: &FnTable) -> HechlerTree {
    let seqs = canonical_enumeration(f.values.len().max(1));
    let mut thresholds: BTreeMap<FiniteSet, u64> = BTreeMap::new();
    thresholds.insert(
        FiniteSet::empty(),
        f.values.first().copied().unwrap_or(f.default),
    );
    let mut explicit = BTreeMap::new();
    if let Some(&root) = f.values.first() {
        if root != f.default {
            explicit.insert(FiniteSet::empty(), root);
        }
    }
    for (i, seq) in seqs.iter().enumerate().skip(1) {
        let Ok(node) = FiniteSet::new(seq.clone()) else {
            continue; // not increasing: never a node of these trees
        };
        let parent = node.prefix(node.len() - 1);
        let Some(&parent_thr) = thresholds.get(&parent) else {
            continue; // parent not in the tree
        };
        if node.max_elem().unwrap() < parent_thr {
            continue; // the step does not clear the parent threshold
        }
        let value = f.values.get(i).copied().unwrap_or(f.default);
        thresholds.insert(node.clone(), value);
        if value != f.default {
            explicit.insert(node, value);
        }
    }
    HechlerTree {
        base: SetDescriptor::omega(),
        explicit,
        default: f.default,
    }
    .canonicalized()
}

/// The threshold table of a tree over the first `len` sequences: tree nodes
/// report their threshold, everything else reports zero.
pub fn fn_from_tree(t: &HechlerTree, len: usize) -> FnTable {
    let seqs = canonical_enumeration(len);
    let values = seqs
        .iter()
        .map(|seq| match FiniteSet::new(seq.clone()) {
            Ok(node) if t.contains_node(&node) => t.threshold(&node),
            _ => 0,
        })
        .collect();
    FnTable {
        values,
        default: t.default,
    }
}

/// Table length needed to cover every explicit node of a tree.
pub fn required_table_len(t: &HechlerTree) -> usize {
    t.explicit
        .keys()
        .map(|s| enumeration_index(s.elements()) + 1)
        .max()
        .unwrap_or(1)
}

/// A closed presentation of a member of the recursively defined barrier
/// ideal: finitely many explicit elements, finitely many full columns, and
/// per-column presentations one level down.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinDescriptor {
    pub explicit: Vec<FiniteSet>,
    pub full_columns: Vec<u64>,
    pub per_column: BTreeMap<u64, FinDescriptor>,
}

impl FinDescriptor {
    pub fn from_elements(explicit: Vec<FiniteSet>) -> Self {
        FinDescriptor {
            explicit,
            ..Default::default()
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.explicit.is_empty() && self.full_columns.is_empty() && self.per_column.is_empty()
    }

    /// Membership of a barrier element in the described set.
    pub fn member(&self, s: &FiniteSet) -> bool {
        if self.explicit.contains(s) {
            return true;
        }
        let Some(min) = s.min_elem() else {
            return false;
        };
        if self.full_columns.contains(&min) {
            return true;
        }
        match self.per_column.get(&min) {
            Some(sub) => sub.member(&s.without_min()),
            None => false,
        }
    }
}

/// Builds a Hechler tree disjoint from the described ideal member on the
/// barrier: the root threshold clears the full columns and the terminal
/// explicit elements, and each remaining content column receives a
/// recursively built subtree.
pub fn hechler_avoiding(
    code_b: &BarrierCode,
    x: &FinDescriptor,
    w: Window,
) -> Result<HechlerTree, IdealsError> {
    let explicit = avoid_rec(code_b, x)?;
    let tree = HechlerTree {
        base: SetDescriptor::omega(),
        explicit,
        default: 0,
    }
    .canonicalized();
    // The construction guarantees disjointness; check it on the window
    // anyway so a defective descriptor cannot slip through.
    for b in elements_in_window(code_b, w.bound) {
        if x.member(&b) && tree.contains_node(&b) {
            return Err(IdealsError::NotInIdeal(format!(
                "element {b} remains in the tree"
            )));
        }
    }
    Ok(tree)
}

fn avoid_rec(
    code_b: &BarrierCode,
    x: &FinDescriptor,
) -> Result<BTreeMap<FiniteSet, u64>, IdealsError> {
    let mut root_threshold = x.full_columns.iter().map(|n| n + 1).max().unwrap_or(0);

    // Columns with recursive or explicit content.
    let mut content: BTreeMap<u64, FinDescriptor> = x.per_column.clone();
    for e in &x.explicit {
        let Some(min) = e.min_elem() else {
            // The empty set as an element: only the degenerate barrier has
            // it, and no Hechler tree avoids its own root.
            return Err(IdealsError::NotInIdeal(
                "descriptor lists the empty element".into(),
            ));
        };
        content
            .entry(min)
            .or_default()
            .explicit
            .push(e.without_min());
    }

    // Terminal columns ({n} itself an element) can only be cleared by the
    // root threshold; deeper structure there is a presentation error.
    let mut subtree_columns: Vec<(u64, FinDescriptor, BarrierCode)> = Vec::new();
    for (n, sub) in content {
        let singleton = FiniteSet::new(vec![n]).unwrap();
        if !code_b.tree_contains(&singleton) {
            continue; // empty column: nothing of the barrier to avoid
        }
        if code_b.contains(&singleton) {
            let has_point = sub.explicit.iter().any(|e| e.is_empty());
            if !sub.full_columns.is_empty()
                || !sub.per_column.is_empty()
                || sub.explicit.iter().any(|e| !e.is_empty())
            {
                return Err(IdealsError::NotInIdeal(format!(
                    "column {n} is terminal but carries deeper structure"
                )));
            }
            if has_point {
                root_threshold = root_threshold.max(n + 1);
            }
            continue;
        }
        let branch = code_b.sub_barrier(&singleton)?;
        subtree_columns.push((n, sub, branch));
    }

    let mut explicit = BTreeMap::new();
    if root_threshold > 0 {
        explicit.insert(FiniteSet::empty(), root_threshold);
    }
    for (n, sub, branch) in subtree_columns {
        if n < root_threshold {
            continue; // already cleared wholesale
        }
        let sub_map = avoid_rec(&branch, &sub)?;
        let root = FiniteSet::new(vec![n]).unwrap();
        for (key, value) in sub_map {
            explicit.insert(root.union(&key), value);
        }
    }
    Ok(explicit)
}

/// Dominates a finite family of trees exactly: thresholds are the node-wise
/// maximum plus one. With exact domination the result is a subtree of every
/// input, so the reported per-tree column bounds are zero unless the window
/// exposes a discrepancy.
pub fn hechler_dominating(
    trees: &[HechlerTree],
    code_b: &BarrierCode,
    w: Window,
) -> Result<(HechlerTree, Vec<u64>), IdealsError> {
    let base = trees
        .first()
        .map(|t| t.base.clone())
        .unwrap_or_else(SetDescriptor::omega);
    if trees.iter().any(|t| t.base != base) {
        return Err(IdealsError::BaseMismatch);
    }
    let mut explicit: BTreeMap<FiniteSet, u64> = BTreeMap::new();
    for tree in trees {
        for key in tree.explicit.keys() {
            let v = trees.iter().map(|t| t.threshold(key)).max().unwrap_or(0) + 1;
            explicit.insert(key.clone(), v);
        }
    }
    let default = trees.iter().map(|t| t.default).max().unwrap_or(0) + 1;
    let dominating = HechlerTree {
        base,
        explicit,
        default: if trees.is_empty() { 0 } else { default },
    }
    .canonicalized();

    let elems = elements_in_window(code_b, w.bound);
    let bounds = trees
        .iter()
        .map(|t| {
            elems
                .iter()
                .filter(|b| dominating.contains_node(b) && !t.contains_node(b))
                .filter_map(|b| b.min_elem())
                .max()
                .unwrap_or(0)
        })
        .collect();
    Ok((dominating, bounds))
}

/// Greedy selection of a set every increasing sequence from which is a node
/// of the tree: each next point must clear the thresholds of all nodes over
/// the points already chosen.
pub fn selective_branch_set(t: &HechlerTree, w: Window) -> Result<FiniteSet, IdealsError> {
    const NODE_BUDGET: usize = 1 << 16;
    let mut nodes: Vec<FiniteSet> = vec![FiniteSet::empty()];
    let mut picked: Vec<u64> = Vec::new();
    for x in t.base.elements_below(w.bound) {
        if nodes.len() > NODE_BUDGET {
            break;
        }
        if nodes.iter().all(|s| x >= t.threshold(s)) {
            let extensions: Vec<FiniteSet> = nodes.iter().filter_map(|s| s.extended(x)).collect();
            nodes.extend(extensions);
            picked.push(x);
        }
    }
    if picked.is_empty() {
        return Err(IdealsError::WindowExhausted);
    }
    Ok(FiniteSet::new(picked).expect("ascending selection"))
}

/// Exhaustive check that every increasing subsequence of `a` of length at
/// most `depth` is a node of the tree.
pub fn verify_selective(t: &HechlerTree, a: &FiniteSet, depth: u64) -> bool {
    fn rec(t: &HechlerTree, pool: &[u64], from: usize, path: &mut FiniteSet, depth: u64) -> bool {
        if !t.contains_node(path) {
            return false;
        }
        if path.len() as u64 == depth {
            return true;
        }
        for i in from..pool.len() {
            if let Some(next) = path.extended(pool[i]) {
                *path = next;
                let ok = rec(t, pool, i + 1, path, depth);
                *path = path.prefix(path.len() - 1);
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    rec(t, a.elements(), 0, &mut FiniteSet::empty(), depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fs(v: &[u64]) -> FiniteSet {
        FiniteSet::new(v.to_vec()).unwrap()
    }

    fn win(bound: u64, depth: u64) -> Window {
        Window::new(bound, depth).unwrap()
    }

    #[test]
    fn enumeration_prefix_is_pinned() {
        let got = canonical_enumeration(7);
        let want: Vec<Vec<u64>> = vec![
            vec![],
            vec![0],
            vec![0, 0],
            vec![1],
            vec![0, 1],
            vec![1, 0],
            vec![1, 1],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn enumeration_extends_tree_order() {
        let seqs = canonical_enumeration(400);
        let index = |s: &[u64]| seqs.iter().position(|t| t == s);
        for (i, s) in seqs.iter().enumerate() {
            // Initial segments come earlier.
            if !s.is_empty() {
                let parent = &s[..s.len() - 1];
                assert!(index(parent).unwrap() < i);
            }
            // Smaller siblings come earlier.
            if let Some((last, rest)) = s.split_last() {
                if *last > 0 {
                    let mut sib = rest.to_vec();
                    sib.push(last - 1);
                    if let Some(j) = index(&sib) {
                        assert!(j < i, "sibling order violated at {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_index_round_trip() {
        let seqs = canonical_enumeration(100);
        for (i, s) in seqs.iter().enumerate() {
            assert_eq!(enumeration_index(s), i);
        }
    }

    #[test]
    fn tree_from_fn_examples() {
        // Zero table: the full tree.
        let full = tree_from_fn(&FnTable {
            values: vec![0; 10],
            default: 0,
        });
        assert!(full.explicit.is_empty());
        assert!(full.contains_node(&fs(&[0, 1, 2])));

        // Threshold 3 at the root only.
        let mut values = vec![0; 10];
        values[0] = 3;
        let t = tree_from_fn(&FnTable { values, default: 0 });
        assert!(!t.contains_node(&fs(&[2])));
        assert!(t.contains_node(&fs(&[3, 4])));
        let back = fn_from_tree(&t, 10);
        assert_eq!(back.values[0], 3);
        assert!(back.values[1..].iter().all(|&v| v == 0));
    }

    #[test]
    fn explicit_tree_exports_thresholds_at_their_indices() {
        let mut explicit = BTreeMap::new();
        explicit.insert(FiniteSet::empty(), 2);
        explicit.insert(fs(&[5]), 7);
        let t = HechlerTree {
            base: SetDescriptor::omega(),
            explicit,
            default: 0,
        };
        let len = required_table_len(&t);
        let table = fn_from_tree(&t, len);
        let idx5 = enumeration_index(&[5]);
        for (i, &v) in table.values.iter().enumerate() {
            if i == 0 {
                assert_eq!(v, 2);
            } else if i == idx5 {
                assert_eq!(v, 7);
            } else {
                assert_eq!(v, 0, "unexpected threshold at index {i}");
            }
        }
        assert_eq!(tree_from_fn(&table), t);
    }

    #[test]
    fn tree_fn_round_trip_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..200 {
            let len = rng.gen_range(1..40);
            let values: Vec<u64> = (0..len).map(|_| rng.gen_range(0..6)).collect();
            let default = rng.gen_range(0..3);
            let table = FnTable { values, default };
            // Canonicalize once; the canonical representative must be a
            // fixed point of the round trip.
            let tree = tree_from_fn(&table);
            let canonical = fn_from_tree(&tree, table.values.len());
            let tree2 = tree_from_fn(&canonical);
            assert_eq!(tree, tree2);
            assert_eq!(canonical, fn_from_tree(&tree2, table.values.len()));
        }
    }

    #[test]
    fn avoiding_full_columns() {
        let x = FinDescriptor {
            full_columns: vec![0, 1],
            ..Default::default()
        };
        let h = hechler_avoiding(&BarrierCode::uniform(2), &x, win(16, 4)).unwrap();
        assert_eq!(h.threshold(&FiniteSet::empty()), 2);
        for b in elements_in_window(&BarrierCode::uniform(2), 16) {
            assert!(!(x.member(&b) && h.contains_node(&b)));
        }
    }

    #[test]
    fn avoiding_trivial_descriptor_is_full_tree() {
        let h = hechler_avoiding(
            &BarrierCode::uniform(2),
            &FinDescriptor::default(),
            win(12, 4),
        )
        .unwrap();
        assert!(h.explicit.is_empty());
        assert_eq!(h.default, 0);
    }

    #[test]
    fn avoiding_explicit_elements() {
        let code = BarrierCode::schreier(1).unwrap();
        let x = FinDescriptor::from_elements(vec![fs(&[1, 3]), fs(&[2, 4, 7])]);
        let h = hechler_avoiding(&code, &x, win(16, 4)).unwrap();
        assert!(!h.contains_node(&fs(&[1, 3])));
        assert!(!h.contains_node(&fs(&[2, 4, 7])));
        // Terminal column 0: cleared by the root threshold when listed.
        let x0 = FinDescriptor::from_elements(vec![fs(&[0])]);
        let h0 = hechler_avoiding(&code, &x0, win(12, 4)).unwrap();
        assert!(!h0.contains_node(&fs(&[0])));
    }

    #[test]
    fn avoiding_rejects_deep_structure_on_terminal_column() {
        let code = BarrierCode::schreier(1).unwrap();
        let mut x = FinDescriptor::default();
        x.per_column.insert(
            0,
            FinDescriptor {
                full_columns: vec![3],
                ..Default::default()
            },
        );
        assert!(matches!(
            hechler_avoiding(&code, &x, win(12, 4)),
            Err(IdealsError::NotInIdeal(_))
        ));
    }

    #[test]
    fn dominating_examples() {
        let w = win(16, 4);
        let u2 = BarrierCode::uniform(2);
        // Two root thresholds 3 and 5: the dominating root threshold is 6.
        let t1 = HechlerTree::root_threshold(3);
        let t2 = HechlerTree::root_threshold(5);
        let (h, bounds) = hechler_dominating(&[t1.clone(), t2.clone()], &u2, w).unwrap();
        assert_eq!(h.threshold(&FiniteSet::empty()), 6);
        assert_eq!(bounds, vec![0, 0]);

        // Exact domination makes the result a subtree of each input.
        for b in elements_in_window(&u2, w.bound) {
            if h.contains_node(&b) {
                assert!(t1.contains_node(&b) && t2.contains_node(&b));
            }
        }

        let (full, bounds) = hechler_dominating(&[HechlerTree::full()], &u2, w).unwrap();
        assert_eq!(bounds, vec![0]);
        assert!(full.contains_node(&fs(&[1, 2])));
    }

    #[test]
    fn selective_branch_examples() {
        let w = win(12, 4);
        let full = HechlerTree::full();
        let a = selective_branch_set(&full, w).unwrap();
        assert_eq!(a.len(), 12);

        let rooted = HechlerTree::root_threshold(4);
        let a = selective_branch_set(&rooted, w).unwrap();
        assert_eq!(a, fs(&[4, 5, 6, 7, 8, 9, 10, 11]));
        assert!(verify_selective(&rooted, &a, 4));

        // Growing thresholds along nodes space the selection out.
        let mut explicit = BTreeMap::new();
        explicit.insert(FiniteSet::empty(), 1);
        explicit.insert(fs(&[1]), 4);
        explicit.insert(fs(&[4]), 6);
        let t = HechlerTree {
            base: SetDescriptor::omega(),
            explicit,
            default: 0,
        };
        let a = selective_branch_set(&t, w).unwrap();
        assert!(verify_selective(&t, &a, 4));
        assert!(a.len() >= 3);
    }

    #[test]
    fn intersect_takes_max_thresholds() {
        let t1 = HechlerTree::root_threshold(3);
        let t2 = HechlerTree::root_threshold(5);
        let t = t1.intersect(&t2).unwrap();
        assert_eq!(t.threshold(&FiniteSet::empty()), 5);
    }
}
