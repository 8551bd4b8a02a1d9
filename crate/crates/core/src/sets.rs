//! Finitely presented subsets of the naturals and the window abstraction.
//!
//! Every "infinite" set the engine manipulates is a finite prefix followed
//! by a cofinite or arithmetic tail, which keeps membership decidable. A
//! [`Window`] truncates the infinite quantifiers of the underlying
//! combinatorics to desk scale.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A strictly increasing finite sequence of naturals, the universal currency
/// for barrier elements and tree nodes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteSet(Vec<u64>);

impl FiniteSet {
    pub fn empty() -> Self {
        FiniteSet(Vec::new())
    }

    pub fn new(elements: Vec<u64>) -> Result<Self, SetError> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SetError::NotIncreasing);
        }
        Ok(FiniteSet(elements))
    }

    /// Sorts and deduplicates, so any collection of naturals becomes a set.
    pub fn from_unsorted(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        FiniteSet(elements)
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_elem(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max_elem(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    pub fn is_subset_of(&self, other: &FiniteSet) -> bool {
        self.0.iter().all(|n| other.contains(*n))
    }

    /// Strict subset test.
    pub fn is_proper_subset_of(&self, other: &FiniteSet) -> bool {
        self.len() < other.len() && self.is_subset_of(other)
    }

    /// True when `self` is an initial segment of `other`.
    pub fn is_initial_segment_of(&self, other: &FiniteSet) -> bool {
        self.len() <= other.len() && self.0 == other.0[..self.len()]
    }

    /// Appends an element that must exceed the current maximum.
    pub fn extended(&self, n: u64) -> Option<FiniteSet> {
        if self.max_elem().is_none_or(|m| n > m) {
            let mut v = self.0.clone();
            v.push(n);
            Some(FiniteSet(v))
        } else {
            None
        }
    }

    /// The first `count` elements as a new set.
    pub fn prefix(&self, count: usize) -> FiniteSet {
        FiniteSet(self.0[..count.min(self.len())].to_vec())
    }

    /// Drops the first `count` elements.
    pub fn suffix(&self, count: usize) -> FiniteSet {
        FiniteSet(self.0[count.min(self.len())..].to_vec())
    }

    /// Removes the minimum, if any.
    pub fn without_min(&self) -> FiniteSet {
        self.suffix(1)
    }

    /// Union of two sets that are allowed to interleave.
    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteSet::from_unsorted(v)
    }

    /// Elementwise translation by `n`.
    pub fn shift_up(&self, n: u64) -> FiniteSet {
        FiniteSet(self.0.iter().map(|x| x + n).collect())
    }

    /// Elementwise translation down by `n`; `None` if some element is below `n`.
    pub fn shift_down(&self, n: u64) -> Option<FiniteSet> {
        if self.0.first().is_some_and(|&x| x < n) {
            return None;
        }
        Some(FiniteSet(self.0.iter().map(|x| x - n).collect()))
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Tail rule of a [`SetDescriptor`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Tail {
    /// All naturals `>= from`.
    Cofinite { from: u64 },
    /// The progression `start, start+step, start+2*step, ...`.
    Arithmetic { start: u64, step: u64 },
    /// No tail; the set is the prefix alone.
    Empty,
}

/// A finitely presented subset of the naturals: an explicit increasing
/// prefix followed by a tail rule. Infinite unless the tail is `Empty`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetDescriptor {
    pub prefix: Vec<u64>,
    pub tail: Tail,
}

impl SetDescriptor {
    pub fn new(prefix: Vec<u64>, tail: Tail) -> Result<Self, SetError> {
        if prefix.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SetError::NotIncreasing);
        }
        let above = prefix.last().map(|m| m + 1).unwrap_or(0);
        match tail {
            Tail::Cofinite { from } if from < above => return Err(SetError::TailOverlapsPrefix),
            Tail::Arithmetic { step: 0, .. } => return Err(SetError::ZeroStep),
            Tail::Arithmetic { start, .. } if start < above => {
                return Err(SetError::TailOverlapsPrefix)
            }
            _ => {}
        }
        Ok(SetDescriptor { prefix, tail })
    }

    /// The whole of omega.
    pub fn omega() -> Self {
        SetDescriptor {
            prefix: Vec::new(),
            tail: Tail::Cofinite { from: 0 },
        }
    }

    pub fn evens() -> Self {
        SetDescriptor {
            prefix: Vec::new(),
            tail: Tail::Arithmetic { start: 0, step: 2 },
        }
    }

    pub fn odds() -> Self {
        SetDescriptor {
            prefix: Vec::new(),
            tail: Tail::Arithmetic { start: 1, step: 2 },
        }
    }

    /// All naturals `>= from`.
    pub fn from_point(from: u64) -> Self {
        SetDescriptor {
            prefix: Vec::new(),
            tail: Tail::Cofinite { from },
        }
    }

    /// A finite set as a descriptor with an empty tail.
    pub fn finite(set: &FiniteSet) -> Self {
        SetDescriptor {
            prefix: set.elements().to_vec(),
            tail: Tail::Empty,
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self.tail, Tail::Empty)
    }

    pub fn contains(&self, n: u64) -> bool {
        if self.prefix.binary_search(&n).is_ok() {
            return true;
        }
        match self.tail {
            Tail::Cofinite { from } => n >= from,
            Tail::Arithmetic { start, step } => n >= start && (n - start).is_multiple_of(step),
            Tail::Empty => false,
        }
    }

    /// First `count` elements in increasing order. Fails with `Exhausted`
    /// when a finite descriptor runs out.
    pub fn enumerate(&self, count: usize) -> Result<Vec<u64>, SetError> {
        let mut out = Vec::with_capacity(count);
        out.extend(self.prefix.iter().take(count).copied());
        let mut next = match self.tail {
            Tail::Cofinite { from } => from,
            Tail::Arithmetic { start, .. } => start,
            Tail::Empty => {
                return if out.len() == count {
                    Ok(out)
                } else {
                    Err(SetError::Exhausted)
                }
            }
        };
        let step = match self.tail {
            Tail::Arithmetic { step, .. } => step,
            _ => 1,
        };
        while out.len() < count {
            out.push(next);
            next += step;
        }
        Ok(out)
    }

    /// The elements below `bound`, in increasing order.
    pub fn elements_below(&self, bound: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self.prefix.iter().copied().filter(|&x| x < bound).collect();
        match self.tail {
            Tail::Cofinite { from } => out.extend(from..bound),
            Tail::Arithmetic { start, step } => out.extend((start..bound).step_by(step as usize)),
            Tail::Empty => {}
        }
        out
    }

    /// Intersection with `{x : x > cutoff}` as a new descriptor.
    pub fn above(&self, cutoff: u64) -> SetDescriptor {
        let prefix: Vec<u64> = self
            .prefix
            .iter()
            .copied()
            .filter(|&x| x > cutoff)
            .collect();
        let tail = match self.tail {
            Tail::Cofinite { from } => Tail::Cofinite {
                from: from.max(cutoff + 1),
            },
            Tail::Arithmetic { start, step } => {
                if start > cutoff {
                    Tail::Arithmetic { start, step }
                } else {
                    let skip = (cutoff + 1 - start).div_ceil(step);
                    Tail::Arithmetic {
                        start: start + skip * step,
                        step,
                    }
                }
            }
            Tail::Empty => Tail::Empty,
        };
        SetDescriptor { prefix, tail }
    }
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self == &SetDescriptor::omega() {
            return write!(f, "omega");
        }
        if self == &SetDescriptor::evens() {
            return write!(f, "evens");
        }
        if self == &SetDescriptor::odds() {
            return write!(f, "odds");
        }
        if !self.prefix.is_empty() || matches!(self.tail, Tail::Empty) {
            write!(f, "[")?;
            for (i, x) in self.prefix.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
            if !matches!(self.tail, Tail::Empty) {
                write!(f, "+")?;
            }
        }
        match self.tail {
            Tail::Cofinite { from } => write!(f, "from({from})"),
            Tail::Arithmetic { start, step } => write!(f, "arith({start},{step})"),
            Tail::Empty => Ok(()),
        }
    }
}

impl FromStr for SetDescriptor {
    type Err = SetError;

    /// Accepts `omega`, `evens`, `odds`, `from(n)`, `arith(start,step)`,
    /// `[a,b,c]`, and `[a,b]+from(n)` / `[a,b]+arith(s,k)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "omega" => return Ok(SetDescriptor::omega()),
            "evens" => return Ok(SetDescriptor::evens()),
            "odds" => return Ok(SetDescriptor::odds()),
            _ => {}
        }
        let (prefix, rest) = if let Some(body) = s.strip_prefix('[') {
            let close = body.find(']').ok_or(SetError::Parse)?;
            let nums = &body[..close];
            let prefix: Vec<u64> = if nums.trim().is_empty() {
                Vec::new()
            } else {
                nums.split(',')
                    .map(|t| t.trim().parse().map_err(|_| SetError::Parse))
                    .collect::<Result<_, _>>()?
            };
            let rest = body[close + 1..].trim();
            let rest = rest.strip_prefix('+').unwrap_or(rest).trim();
            (prefix, rest)
        } else {
            (Vec::new(), s)
        };
        let tail = if rest.is_empty() {
            Tail::Empty
        } else if let Some(arg) = rest.strip_prefix("from(").and_then(|r| r.strip_suffix(')')) {
            Tail::Cofinite {
                from: arg.trim().parse().map_err(|_| SetError::Parse)?,
            }
        } else if let Some(args) = rest
            .strip_prefix("arith(")
            .and_then(|r| r.strip_suffix(')'))
        {
            let mut it = args.split(',');
            let start = it
                .next()
                .ok_or(SetError::Parse)?
                .trim()
                .parse()
                .map_err(|_| SetError::Parse)?;
            let step = it
                .next()
                .ok_or(SetError::Parse)?
                .trim()
                .parse()
                .map_err(|_| SetError::Parse)?;
            if it.next().is_some() {
                return Err(SetError::Parse);
            }
            Tail::Arithmetic { start, step }
        } else {
            return Err(SetError::Parse);
        };
        SetDescriptor::new(prefix, tail)
    }
}

/// Desk-scale truncation: every element inspected is `< bound` and every
/// finite set inspected has length `<= depth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub bound: u64,
    pub depth: u64,
}

impl Window {
    pub fn new(bound: u64, depth: u64) -> Result<Self, SetError> {
        if bound < 1 || depth < 1 {
            return Err(SetError::DegenerateWindow);
        }
        Ok(Window { bound, depth })
    }
}

/// Which interval parity class `thin` keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Greedily thins `d` against the interval decomposition given by
/// `breakpoints`: intervals are `[k_i, k_{i+1})` with the final one extending
/// to the window bound. The result takes the least available element of each
/// interval of the selected parity class, at most one per interval, and
/// avoids the other class and the region below `k_0` entirely.
pub fn thin(
    d: &SetDescriptor,
    breakpoints: &[u64],
    parity: Parity,
    w: Window,
) -> Result<FiniteSet, SetError> {
    if breakpoints.windows(2).any(|p| p[0] >= p[1]) {
        return Err(SetError::NotIncreasing);
    }
    let want = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let mut out = Vec::new();
    for (i, &lo) in breakpoints.iter().enumerate() {
        if i % 2 != want {
            continue;
        }
        let hi = breakpoints
            .get(i + 1)
            .copied()
            .unwrap_or(w.bound)
            .min(w.bound);
        if let Some(x) = (lo..hi).find(|&x| d.contains(x)) {
            out.push(x);
        }
    }
    if out.is_empty() {
        return Err(SetError::EmptyResult);
    }
    Ok(FiniteSet(out))
}

/// Serde adapter for maps keyed by finite sets: JSON object keys must be
/// strings, so these serialize as entry lists.
pub mod set_keyed_map {
    use super::FiniteSet;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<V: Serialize, S: Serializer>(
        map: &BTreeMap<FiniteSet, V>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let entries: Vec<(&FiniteSet, &V)> = map.iter().collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, V: Deserialize<'de>, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<FiniteSet, V>, D::Error> {
        let entries: Vec<(FiniteSet, V)> = Vec::deserialize(d)?;
        Ok(entries.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("sequence is not strictly increasing")]
    NotIncreasing,
    #[error("tail must start above the prefix")]
    TailOverlapsPrefix,
    #[error("arithmetic step must be positive")]
    ZeroStep,
    #[error("finite descriptor exhausted")]
    Exhausted,
    #[error("thinning produced no elements")]
    EmptyResult,
    #[error("window bound and depth must be at least 1")]
    DegenerateWindow,
    #[error("malformed set descriptor")]
    Parse,
}
