//! Cross-module invariants checked on a corpus of codes and windows.

use barriers::barrier::{BarrierCode, ParamRule, TailRule};
use barriers::ideals::{gc_positive, katetov_shrink_recursive, random_map, GcOutcome, ShrinkKind};
use barriers::ramsey::{ColorRule, Coloring};
use barriers::sets::{FiniteSet, Window};
use barriers::verify::{elements_in_window, stabilization_point};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn corpus() -> Vec<BarrierCode> {
    let mut out: Vec<BarrierCode> = (0..=4).map(BarrierCode::uniform).collect();
    out.push(BarrierCode::schreier(1).unwrap());
    out.push(BarrierCode::schreier(2).unwrap());
    out.push(BarrierCode::omega_plus_one_example());
    out.push(BarrierCode::uniform(2).restrict(barriers::SetDescriptor::evens()));
    out.push(BarrierCode::uniform(2).shift(3));
    out.push(BarrierCode::cons(1, BarrierCode::uniform(2)));
    out.push(
        BarrierCode::glue(
            vec![BarrierCode::uniform(2), BarrierCode::uniform(2)],
            TailRule::UniformAffine { a: 1, b: 1 },
        )
        .unwrap(),
    );
    out.push(
        BarrierCode::glue(
            vec![],
            TailRule::Cases {
                rules: vec![
                    ParamRule::UniformAffine { a: 1, b: 1 },
                    ParamRule::UniformAffine { a: 1, b: 2 },
                ],
            },
        )
        .unwrap(),
    );
    out
}

fn arb_code() -> impl Strategy<Value = BarrierCode> {
    let corpus = corpus();
    (0..corpus.len()).prop_map(move |i| corpus[i].clone())
}

fn arb_set(bound: u64) -> impl Strategy<Value = FiniteSet> {
    prop::collection::btree_set(0..bound, 0..6)
        .prop_map(|s| FiniteSet::new(s.into_iter().collect()).unwrap())
}

proptest! {
    /// Element membership implies tree membership.
    #[test]
    fn contains_implies_tree_contains(code in arb_code(), s in arb_set(14)) {
        if code.contains(&s) {
            prop_assert!(code.tree_contains(&s), "{code}: {s}");
        }
    }

    /// A tree node with no extension inside the window extends inside a
    /// larger window (the tree predicate is about the infinite base, not the
    /// window).
    #[test]
    fn tree_nodes_extend_in_larger_windows(code in arb_code(), s in arb_set(10)) {
        if code.tree_contains(&s) && !code.contains(&s) {
            let mut found = false;
            'grow: for bound in [16u64, 24, 40] {
                let start = s.max_elem().map(|m| m + 1).unwrap_or(0);
                // Greedy end-extension scan within the grown window.
                let mut stack = vec![s.clone()];
                while let Some(t) = stack.pop() {
                    if code.contains(&t) {
                        found = true;
                        break 'grow;
                    }
                    let from = t.max_elem().map(|m| m + 1).unwrap_or(start);
                    for x in from..bound {
                        let next = t.extended(x).unwrap();
                        if code.tree_contains(&next) {
                            stack.push(next);
                        }
                    }
                }
            }
            prop_assert!(found, "{code}: node {s} never reached an element");
        }
    }

    /// Membership factors through the sub-barrier: for s in the tree and t
    /// entirely above s, the original membership of their union agrees with
    /// the sub-barrier membership of t.
    #[test]
    fn sub_barrier_soundness(code in arb_code(), s in arb_set(8), t in arb_set(16)) {
        prop_assume!(code.tree_contains(&s) && !code.contains(&s));
        let above = match (s.max_elem(), t.min_elem()) {
            (Some(ms), Some(mt)) => mt > ms,
            _ => true,
        };
        prop_assume!(above);
        let sub = code.sub_barrier(&s).unwrap();
        prop_assert_eq!(
            code.contains(&s.union(&t)),
            sub.contains(&t),
            "{}: s={} t={}", code, s, t
        );
    }
}

/// Finite-rank codes become the full uniform barrier past a stabilization
/// point inside the window.
#[test]
fn finite_rank_codes_stabilize() {
    for code in corpus() {
        let Ok(rank) = code.rank() else { continue };
        let Some(k) = rank.as_finite() else { continue };
        if k == 0 {
            continue;
        }
        let bound = (3 * k).max(8);
        let m = stabilization_point(&code, k, bound);
        assert!(m.is_some(), "{code} never stabilized below {bound}");
    }
}

/// A shrink certificate and positivity for the complement of its image are
/// consistent on a shared window: the certified image is sparse, so the
/// complement subset contains a full restriction.
#[test]
fn shrink_and_gc_positivity_are_consistent() {
    let code_b = BarrierCode::uniform(1);
    let code_c = BarrierCode::uniform(2);
    let w = Window::new(14, 3).unwrap();
    let f = random_map(&code_b, &code_c, w, 99).unwrap();
    let cert = katetov_shrink_recursive(&code_b, &code_c, &f, w).unwrap();

    // Characteristic coloring of the image complement inside the target.
    let mut entries = BTreeMap::new();
    for c in elements_in_window(&code_c, w.bound) {
        entries.insert(c.clone(), u64::from(!cert.image.contains(&c)));
    }
    let complement = Coloring {
        arity: 2,
        rule: ColorRule::Table {
            entries,
            default: 1,
        },
    };
    match gc_positive(&code_c, &complement, w, 3).unwrap() {
        GcOutcome::Positive { x } => {
            // Every element of the restriction to x misses the image.
            for c in barriers::verify::elements_in_pool(&code_c, x.elements()) {
                assert!(!cert.image.contains(&c));
            }
        }
        GcOutcome::NegativeInWindow => {
            // Only possible when the image blankets the window, which a
            // valid certificate of either kind rules out at this size.
            match &cert.kind {
                ShrinkKind::ColumnBounded { n } => {
                    assert!(
                        *n + 3 >= w.bound,
                        "column-bounded image cannot blanket the window"
                    )
                }
                ShrinkKind::HechlerDisjoint { .. } => {
                    panic!("tree-disjoint image cannot blanket the window")
                }
            }
        }
    }
}

/// Every certificate type survives a JSON round trip unchanged, so reports
/// written by one run are readable by the next.
#[test]
fn certificates_round_trip_through_json() {
    let w = Window::new(14, 3).unwrap();

    let witness = barriers::embed::double_arrow_witness(
        &BarrierCode::schreier(1).unwrap(),
        &BarrierCode::uniform(2),
        4,
        100,
        w,
    )
    .unwrap();
    let json = serde_json::to_string(&witness).unwrap();
    let back: barriers::embed::DoubleArrowWitness = serde_json::from_str(&json).unwrap();
    assert_eq!(back, witness);

    let f = random_map(&BarrierCode::uniform(1), &BarrierCode::uniform(2), w, 5).unwrap();
    let cert = katetov_shrink_recursive(&BarrierCode::uniform(1), &BarrierCode::uniform(2), &f, w)
        .unwrap();
    let json = serde_json::to_string(&cert).unwrap();
    let back: barriers::ideals::ShrinkCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);

    let stage = barriers::ideals::ad_stage(
        &BarrierCode::uniform(2),
        &[],
        std::slice::from_ref(&cert),
        &barriers::SetDescriptor::omega(),
        Window::new(20, 3).unwrap(),
    )
    .unwrap();
    let json = serde_json::to_string(&stage).unwrap();
    let back: barriers::ideals::AdStageCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, stage);

    let map_json = serde_json::to_string(&f).unwrap();
    let back: barriers::ideals::MapTable = serde_json::from_str(&map_json).unwrap();
    assert_eq!(back, f);
}

/// Node ranks agree with the membership-only oracle: the rank of a tree
/// node equals the truncated-tree rank of its sub-barrier, at a bound with
/// room for the full subtree.
#[test]
fn node_ranks_agree_with_the_oracle() {
    let mut finite: Vec<BarrierCode> = (1..=4).map(BarrierCode::uniform).collect();
    finite.push(
        BarrierCode::glue(
            vec![BarrierCode::uniform(2), BarrierCode::uniform(3)],
            TailRule::UniformAffine { a: 0, b: 3 },
        )
        .unwrap(),
    );
    for code in finite {
        for s in node_samples(&code, 10) {
            if code.contains(&s) {
                continue;
            }
            let sub = code.sub_barrier(&s).unwrap();
            let symbolic = code.node_rank(&s).unwrap().as_finite().unwrap();
            let bound = (3 * symbolic).max(4) + s.max_elem().map(|m| m + 1).unwrap_or(0);
            assert_eq!(
                barriers::oracle::truncated_rank(&sub, bound),
                symbolic,
                "{code} at {s}"
            );
        }
    }
}

fn node_samples(code: &BarrierCode, bound: u64) -> Vec<FiniteSet> {
    let mut out = vec![FiniteSet::empty()];
    for n in 0..bound {
        let s = FiniteSet::new(vec![n]).unwrap();
        if code.tree_contains(&s) {
            out.push(s.clone());
            for m in n + 1..bound {
                let t = s.extended(m).unwrap();
                if code.tree_contains(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}
