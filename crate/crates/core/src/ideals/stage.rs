//! Single stages of the almost-disjoint counterexample construction and the
//! hypothesis checkers for the non-compactness lemma.

use super::{
    hechler_avoiding, hechler_dominating, FinDescriptor, HechlerTree, IdealsError,
    ShrinkCertificate, ShrinkKind,
};
use crate::barrier::BarrierCode;
use crate::sets::{FiniteSet, SetDescriptor, Tail, Window};
use crate::verify::elements_in_window;
use serde::{Deserialize, Serialize};

/// Membership in `E↑`, the tree of the barrier restricted to `E`.
pub fn e_up_contains(code_c: &BarrierCode, e: &SetDescriptor, s: &FiniteSet) -> bool {
    s.elements().iter().all(|&x| e.contains(x)) && code_c.tree_contains(s)
}

/// Window count of the elements of column `n` lying in `E↑` and in the
/// tree, the finite stand-in for the richness of that intersection.
pub fn e_up_richness(
    code_c: &BarrierCode,
    e: &SetDescriptor,
    h: &HechlerTree,
    n: u64,
    w: Window,
) -> u64 {
    elements_in_window(code_c, w.bound)
        .into_iter()
        .filter(|c| c.min_elem() == Some(n))
        .filter(|c| c.elements().iter().all(|&x| e.contains(x)))
        .filter(|c| h.contains_node(c))
        .count() as u64
}

/// One verified clause of a stage certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseCheck {
    pub clause: String,
    pub pass: bool,
    pub detail: String,
}

/// Output of one stage of the construction: a new almost-disjoint member
/// and the clauses verified for it against the prior stages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdStageCertificate {
    pub a_new: Vec<FiniteSet>,
    pub x_new: SetDescriptor,
    pub checks: Vec<ClauseCheck>,
}

impl AdStageCertificate {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs one stage: dominate the avoiding trees of all prior members and
/// prior image certificates, then pick greedily, one element per column,
/// from the dominated tree inside `E↑`.
pub fn ad_stage(
    code_c: &BarrierCode,
    prior_a: &[Vec<FiniteSet>],
    prior_images: &[ShrinkCertificate],
    e: &SetDescriptor,
    w: Window,
) -> Result<AdStageCertificate, IdealsError> {
    let mut trees: Vec<HechlerTree> = Vec::new();
    for a in prior_a {
        trees.push(hechler_avoiding(
            code_c,
            &FinDescriptor::from_elements(a.clone()),
            w,
        )?);
    }
    for cert in prior_images {
        trees.push(match &cert.kind {
            ShrinkKind::HechlerDisjoint { tree } => tree.clone(),
            ShrinkKind::ColumnBounded { n } => HechlerTree::root_threshold(n + 1),
        });
    }
    let h = if trees.is_empty() {
        HechlerTree::full()
    } else {
        hechler_dominating(&trees, code_c, w)?.0
    };

    // Greedy pick: the lex-least element of each inhabited column of the
    // dominated tree inside E↑.
    let elems = elements_in_window(code_c, w.bound);
    let mut a_new: Vec<FiniteSet> = Vec::new();
    let mut columns: Vec<u64> = Vec::new();
    for n in 0..w.bound {
        let pick = elems.iter().find(|c| {
            c.min_elem() == Some(n)
                && c.elements().iter().all(|&x| e.contains(x))
                && h.contains_node(c)
        });
        if let Some(c) = pick {
            a_new.push(c.clone());
            columns.push(n);
        }
    }
    if (a_new.len() as u64) < w.depth {
        return Err(IdealsError::WindowExhausted);
    }
    let x_new = SetDescriptor::new(columns, Tail::Empty).expect("columns ascend");

    let mut checks = Vec::new();
    // (1) Prior image certificates still certify smallness of their images.
    let prior_ok = prior_images.iter().all(|cert| match &cert.kind {
        ShrinkKind::ColumnBounded { n } => cert
            .image
            .iter()
            .all(|c| c.min_elem().is_some_and(|m| m <= *n)),
        ShrinkKind::HechlerDisjoint { tree } => cert.image.iter().all(|c| !tree.contains_node(c)),
    });
    checks.push(ClauseCheck {
        clause: "prior-images-small".into(),
        pass: prior_ok,
        detail: format!("{} prior certificates replayed", prior_images.len()),
    });
    // (2) Disjoint from every prior member, exactly.
    let mut pass2 = true;
    let mut detail2 = String::from("empty intersections");
    for (i, a) in prior_a.iter().enumerate() {
        let overlap: Vec<&FiniteSet> = a_new.iter().filter(|c| a.contains(c)).collect();
        if !overlap.is_empty() {
            pass2 = false;
            detail2 = format!("member {i} shares {} elements", overlap.len());
            break;
        }
    }
    checks.push(ClauseCheck {
        clause: "disjoint-from-prior-members".into(),
        pass: pass2,
        detail: detail2,
    });
    // (3) Disjoint from every prior image, exactly.
    let mut pass3 = true;
    let mut detail3 = String::from("empty intersections");
    for (i, cert) in prior_images.iter().enumerate() {
        let overlap: Vec<&FiniteSet> = a_new.iter().filter(|c| cert.image.contains(c)).collect();
        if !overlap.is_empty() {
            pass3 = false;
            detail3 = format!("image {i} shares {} elements", overlap.len());
            break;
        }
    }
    checks.push(ClauseCheck {
        clause: "disjoint-from-prior-images".into(),
        pass: pass3,
        detail: detail3,
    });
    // (4) At most one element per column.
    let mut mins: Vec<u64> = a_new.iter().filter_map(|c| c.min_elem()).collect();
    let len_before = mins.len();
    mins.dedup();
    checks.push(ClauseCheck {
        clause: "one-per-column".into(),
        pass: mins.len() == len_before,
        detail: format!("{len_before} columns"),
    });
    // (5) Inside E↑.
    let pass5 = a_new.iter().all(|c| e_up_contains(code_c, e, c));
    checks.push(ClauseCheck {
        clause: "inside-e-up".into(),
        pass: pass5,
        detail: e.to_string(),
    });

    Ok(AdStageCertificate {
        a_new,
        x_new,
        checks,
    })
}

/// Verdict of the hypothesis checker for the non-compactness lemma.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NoCseqVerdict {
    Pass,
    ColumnViolation { member: usize, column: u64 },
    NotAnElement { member: usize, set: FiniteSet },
    UncoveredBase { grid_index: usize },
}

impl NoCseqVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, NoCseqVerdict::Pass)
    }
}

/// Checks the two hypotheses over a grid of base descriptors: every family
/// member meets each column at most once, and every grid descriptor is
/// covered by some member lying inside the restricted barrier.
pub fn verify_no_c_seq(
    code_c: &BarrierCode,
    family: &[Vec<FiniteSet>],
    grid: &[SetDescriptor],
    _w: Window,
) -> NoCseqVerdict {
    for (i, a) in family.iter().enumerate() {
        let mut seen = std::collections::BTreeSet::new();
        for c in a {
            if !code_c.contains(c) {
                return NoCseqVerdict::NotAnElement {
                    member: i,
                    set: c.clone(),
                };
            }
            let col = c.min_elem().unwrap_or(0);
            if !seen.insert(col) {
                return NoCseqVerdict::ColumnViolation {
                    member: i,
                    column: col,
                };
            }
        }
    }
    for (gi, e) in grid.iter().enumerate() {
        let covered = family.iter().any(|a| {
            !a.is_empty()
                && a.iter()
                    .all(|c| c.elements().iter().all(|&x| e.contains(x)))
        });
        if !covered {
            return NoCseqVerdict::UncoveredBase { grid_index: gi };
        }
    }
    NoCseqVerdict::Pass
}
