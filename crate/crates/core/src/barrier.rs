//! The barrier-code grammar and its semantics.
//!
//! A [`BarrierCode`] is a finite recursive description of a barrier on an
//! infinite subset of the naturals. Keeping the grammar closed (rather than
//! accepting arbitrary membership predicates) is what makes the ordinal rank
//! computable symbolically: rank is a structural recursion on the code.
//!
//! Conventions baked into the grammar:
//!
//! * `UniformK(k)` is the barrier of all `k`-element subsets of the base;
//!   `k = 0` denotes the degenerate barrier `{{}}`.
//! * `SchreierShift(k)` is `S_k = {s : |s| = min(s)+k}`, `k >= 1`; `S_1` is
//!   the Schreier barrier.
//! * In a glue tail, an affine rule that evaluates to `0` at index `n`
//!   denotes an *empty* branch (a coverage defect that `verify_cover` can
//!   exhibit), while an explicit `UniformK(0)` branch denotes `{{}}` so the
//!   glued barrier contains the singleton `{n}`.
//! * A `SchreierAffine(c)` rule at index `n` denotes `S_{max(n+c,1)}`
//!   translated above `n`. The `max` guards the index-0 corner, where a
//!   literal `S_0` translate would fail to cover sets through `n+1`.

use crate::ordinal::Ordinal;
use crate::sets::{FiniteSet, SetDescriptor};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Finite recursive description of a barrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BarrierCode {
    /// All `k`-element subsets of the base; `k = 0` denotes `{{}}`.
    UniformK { k: u64 },
    /// The Schreier-type barrier `S_k = {s : |s| = min(s) + k}`, `k >= 1`.
    SchreierShift { k: u64 },
    /// A barrier glued from prescribed sub-barriers: element `{n} ∪ t` is in
    /// the barrier iff `t` is in the branch at `n`. Indices below
    /// `explicit.len()` use the listed codes, the rest follow `tail`.
    Glue {
        explicit: Vec<BarrierCode>,
        tail: TailRule,
    },
    /// Restriction to the elements contained in `base`.
    Restrict {
        inner: Box<BarrierCode>,
        base: SetDescriptor,
    },
    /// Translation: `s` is a member iff `s - offset` is a member of `inner`.
    Shift {
        inner: Box<BarrierCode>,
        offset: u64,
    },
    /// Prefixing: `{root} ∪ t` for `t` a member of `inner` above `root`.
    Cons { root: u64, inner: Box<BarrierCode> },
}

/// Branch rule for glue indices past the explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailRule {
    /// Branch at `n` is the uniform barrier of size `a*n + b` (empty when 0).
    UniformAffine { a: u64, b: u64 },
    /// Every tail branch is the same code.
    ConstCode { code: Box<BarrierCode> },
    /// Branch at `n` follows `rules[n % rules.len()]`; 2 to 8 rules.
    Cases { rules: Vec<ParamRule> },
}

/// Per-residue rule inside a [`TailRule::Cases`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamRule {
    UniformAffine {
        a: u64,
        b: u64,
    },
    /// `S_{max(n+c,1)}` translated above `n`.
    SchreierAffine {
        c: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BarrierError {
    #[error("set is not in the tree of the barrier")]
    NotInTree,
    #[error("set is a terminal node (an element of the barrier)")]
    TerminalNode,
    #[error("rank under restriction is only supported for uniform inner codes")]
    UnsupportedRestriction,
    #[error("no initial segment found within fuel {0}")]
    FuelExhausted(u64),
    #[error("operation requires rank {expected}, code has rank {actual}")]
    RankMismatch { expected: Ordinal, actual: Ordinal },
    #[error("replacement must be shorter than the replaced set")]
    SizeViolation,
    #[error("end replacement result is not increasing")]
    NotIncreasing,
    #[error("cases tails need 2 to 8 rules")]
    BadCases,
    #[error("schreier parameter must be positive")]
    BadSchreier,
    #[error("malformed barrier code: {0}")]
    Parse(String),
}

impl BarrierCode {
    pub fn uniform(k: u64) -> Self {
        BarrierCode::UniformK { k }
    }

    pub fn schreier(k: u64) -> Result<Self, BarrierError> {
        if k == 0 {
            return Err(BarrierError::BadSchreier);
        }
        Ok(BarrierCode::SchreierShift { k })
    }

    pub fn glue(explicit: Vec<BarrierCode>, tail: TailRule) -> Result<Self, BarrierError> {
        if let TailRule::Cases { rules } = &tail {
            if rules.len() < 2 || rules.len() > 8 {
                return Err(BarrierError::BadCases);
            }
        }
        Ok(BarrierCode::Glue { explicit, tail })
    }

    /// `B|M`. The restriction carries no error of its own; rank support
    /// depends on the inner code's uniformity.
    pub fn restrict(self, base: SetDescriptor) -> Self {
        BarrierCode::Restrict {
            inner: Box::new(self),
            base,
        }
    }

    /// `B + n`.
    pub fn shift(self, offset: u64) -> Self {
        if offset == 0 {
            self
        } else {
            BarrierCode::Shift {
                inner: Box::new(self),
                offset,
            }
        }
    }

    /// `root ⌢ B`.
    pub fn cons(root: u64, inner: BarrierCode) -> Self {
        BarrierCode::Cons {
            root,
            inner: Box::new(inner),
        }
    }

    /// The non-uniform rank `w + 1` example: even glue indices carry a
    /// translated Schreier barrier, odd indices a uniform one of size `n`.
    pub fn omega_plus_one_example() -> Self {
        BarrierCode::Glue {
            explicit: Vec::new(),
            tail: TailRule::Cases {
                rules: vec![
                    ParamRule::SchreierAffine { c: 0 },
                    ParamRule::UniformAffine { a: 1, b: 0 },
                ],
            },
        }
    }

    /// The branch `B[n]` of a glue, as a code living above `n`.
    /// `None` denotes an empty branch.
    fn glue_branch(explicit: &[BarrierCode], tail: &TailRule, n: u64) -> Option<BarrierCode> {
        if let Some(code) = explicit.get(n as usize) {
            return Some(code.clone());
        }
        let from_rule = |a: u64, b: u64| -> Option<BarrierCode> {
            match a * n + b {
                // Affine value 0 at this index: an empty branch.
                0 => None,
                k => Some(BarrierCode::UniformK { k }),
            }
        };
        match tail {
            TailRule::UniformAffine { a, b } => from_rule(*a, *b),
            TailRule::ConstCode { code } => Some((**code).clone()),
            TailRule::Cases { rules } => match &rules[(n as usize) % rules.len()] {
                ParamRule::UniformAffine { a, b } => from_rule(*a, *b),
                ParamRule::SchreierAffine { c } => {
                    let k = (n + c).max(1);
                    Some(BarrierCode::SchreierShift { k }.shift(n + 1))
                }
            },
        }
    }

    /// The sub-barrier code at one glue index, if the branch is inhabited.
    pub fn branch(&self, n: u64) -> Option<BarrierCode> {
        match self {
            BarrierCode::Glue { explicit, tail } => Self::glue_branch(explicit, tail, n),
            _ => None,
        }
    }

    /// Membership: is `s` an element of the denoted barrier? Total; sets off
    /// the base are simply not members.
    pub fn contains(&self, s: &FiniteSet) -> bool {
        match self {
            BarrierCode::UniformK { k } => s.len() as u64 == *k,
            BarrierCode::SchreierShift { k } => match s.min_elem() {
                None => false,
                Some(min) => s.len() as u64 == min + k,
            },
            BarrierCode::Glue { explicit, tail } => match s.min_elem() {
                None => false,
                Some(n) => match Self::glue_branch(explicit, tail, n) {
                    Some(branch) => branch.contains(&s.without_min()),
                    None => false,
                },
            },
            BarrierCode::Restrict { inner, base } => {
                s.elements().iter().all(|&x| base.contains(x)) && inner.contains(s)
            }
            BarrierCode::Shift { inner, offset } => match s.shift_down(*offset) {
                Some(t) => inner.contains(&t),
                None => false,
            },
            BarrierCode::Cons { root, inner } => {
                s.min_elem() == Some(*root) && inner.contains(&s.without_min())
            }
        }
    }

    /// Does the denoted family have any element at all? (A glue whose
    /// branches are all empty denotes the empty family.)
    pub fn is_nonempty(&self) -> bool {
        match self {
            BarrierCode::UniformK { .. } | BarrierCode::SchreierShift { .. } => true,
            BarrierCode::Glue { explicit, tail } => {
                explicit.iter().any(|c| c.is_nonempty())
                    || match tail {
                        TailRule::UniformAffine { a, b } => *a > 0 || *b > 0,
                        TailRule::ConstCode { code } => code.is_nonempty(),
                        TailRule::Cases { rules } => rules.iter().any(|r| match r {
                            ParamRule::UniformAffine { a, b } => *a > 0 || *b > 0,
                            ParamRule::SchreierAffine { .. } => true,
                        }),
                    }
            }
            BarrierCode::Restrict { inner, .. } => inner.is_nonempty(),
            BarrierCode::Shift { inner, .. } => inner.is_nonempty(),
            BarrierCode::Cons { inner, .. } => inner.is_nonempty(),
        }
    }

    /// Tree membership: is `s` in `T(B)`, i.e. does `s` end-extend to an
    /// element? Computed structurally. For `Restrict` this relies on the
    /// inner code denoting a Sperner front on the restricted base, which is
    /// the contract for restriction codes.
    pub fn tree_contains(&self, s: &FiniteSet) -> bool {
        match self {
            BarrierCode::UniformK { k } => s.len() as u64 <= *k,
            BarrierCode::SchreierShift { k } => match s.min_elem() {
                None => true,
                Some(min) => s.len() as u64 <= min + k,
            },
            BarrierCode::Glue { explicit, tail } => match s.min_elem() {
                None => self.is_nonempty(),
                Some(n) => match Self::glue_branch(explicit, tail, n) {
                    Some(branch) => branch.tree_contains(&s.without_min()),
                    None => false,
                },
            },
            BarrierCode::Restrict { inner, base } => {
                s.elements().iter().all(|&x| base.contains(x)) && inner.tree_contains(s)
            }
            BarrierCode::Shift { inner, offset } => {
                if s.is_empty() {
                    inner.tree_contains(s)
                } else {
                    match s.shift_down(*offset) {
                        Some(t) => inner.tree_contains(&t),
                        None => false,
                    }
                }
            }
            BarrierCode::Cons { root, inner } => match s.min_elem() {
                None => inner.is_nonempty(),
                Some(n) => n == *root && inner.tree_contains(&s.without_min()),
            },
        }
    }

    /// The ordinal rank `ρ(B) = ρ_{T(B)}(∅)`, computed symbolically.
    pub fn rank(&self) -> Result<Ordinal, BarrierError> {
        match self {
            BarrierCode::UniformK { k } => Ok(Ordinal::finite(*k)),
            BarrierCode::SchreierShift { k } => Ok(Ordinal::sup_affine(1, k - 1)),
            BarrierCode::Glue { explicit, tail } => {
                let mut best = Ordinal::zero();
                let mut bump = |r: Ordinal| best = Ordinal::max(best.clone(), r);
                for code in explicit {
                    if code.is_nonempty() {
                        bump(code.rank()?.succ());
                    }
                }
                match tail {
                    TailRule::UniformAffine { a, b } => {
                        if *a > 0 || *b > 0 {
                            bump(Ordinal::sup_affine(*a, *b));
                        }
                    }
                    TailRule::ConstCode { code } => {
                        if code.is_nonempty() {
                            bump(code.rank()?.succ());
                        }
                    }
                    TailRule::Cases { rules } => {
                        for rule in rules {
                            match rule {
                                ParamRule::UniformAffine { a, b } => {
                                    if *a > 0 || *b > 0 {
                                        bump(Ordinal::sup_affine(*a, *b));
                                    }
                                }
                                ParamRule::SchreierAffine { .. } => {
                                    bump(Ordinal::omega().succ());
                                }
                            }
                        }
                    }
                }
                Ok(best)
            }
            BarrierCode::Restrict { inner, .. } => {
                if inner.is_uniform_symbolic() {
                    inner.rank()
                } else {
                    Err(BarrierError::UnsupportedRestriction)
                }
            }
            BarrierCode::Shift { inner, .. } => inner.rank(),
            BarrierCode::Cons { inner, .. } => Ok(inner.rank()?.succ()),
        }
    }

    /// The rank `ρ_{T(B)}(s)` of a tree node, via the sub-barrier code.
    pub fn node_rank(&self, s: &FiniteSet) -> Result<Ordinal, BarrierError> {
        if !self.tree_contains(s) {
            return Err(BarrierError::NotInTree);
        }
        if self.contains(s) {
            return Ok(Ordinal::zero());
        }
        self.sub_barrier(s)?.rank()
    }

    /// The code for `B[s] = {t ∖ s : s ⊑ t ∈ B}`, denoting a barrier on the
    /// base above `max(s)`.
    pub fn sub_barrier(&self, s: &FiniteSet) -> Result<BarrierCode, BarrierError> {
        if !self.tree_contains(s) {
            return Err(BarrierError::NotInTree);
        }
        if self.contains(s) {
            return Err(BarrierError::TerminalNode);
        }
        if s.is_empty() {
            return Ok(self.clone());
        }
        match self {
            BarrierCode::UniformK { k } => Ok(BarrierCode::UniformK {
                k: k - s.len() as u64,
            }),
            BarrierCode::SchreierShift { k } => {
                let min = s.min_elem().unwrap();
                Ok(BarrierCode::UniformK {
                    k: min + k - s.len() as u64,
                })
            }
            BarrierCode::Glue { explicit, tail } => {
                let n = s.min_elem().unwrap();
                let branch = Self::glue_branch(explicit, tail, n).ok_or(BarrierError::NotInTree)?;
                branch.sub_barrier(&s.without_min())
            }
            BarrierCode::Restrict { inner, base } => Ok(BarrierCode::Restrict {
                inner: Box::new(inner.sub_barrier(s)?),
                base: base.clone(),
            }),
            BarrierCode::Shift { inner, offset } => {
                let t = s.shift_down(*offset).ok_or(BarrierError::NotInTree)?;
                Ok(inner.sub_barrier(&t)?.shift(*offset))
            }
            BarrierCode::Cons { root, inner } => {
                debug_assert_eq!(s.min_elem(), Some(*root));
                let rest = s.without_min();
                if rest.is_empty() {
                    Ok((**inner).clone())
                } else {
                    inner.sub_barrier(&rest)
                }
            }
        }
    }

    /// Conservative symbolic uniformity: true only for shapes whose
    /// uniformity is provable from the grammar (uniform and Schreier codes,
    /// their shifts and restrictions, and glue codes whose branch ranks fit
    /// the uniform pattern). Used to decide whether a restriction keeps its
    /// rank.
    pub fn is_uniform_symbolic(&self) -> bool {
        match self {
            BarrierCode::UniformK { .. } | BarrierCode::SchreierShift { .. } => true,
            BarrierCode::Shift { inner, .. } => inner.is_uniform_symbolic(),
            BarrierCode::Restrict { inner, .. } => inner.is_uniform_symbolic(),
            BarrierCode::Cons { .. } => false,
            BarrierCode::Glue { explicit, tail } => {
                if !explicit
                    .iter()
                    .all(|c| c.is_nonempty() && c.is_uniform_symbolic())
                {
                    return false;
                }
                let explicit_ranks: Vec<Ordinal> =
                    match explicit.iter().map(|c| c.rank()).collect::<Result<_, _>>() {
                        Ok(rs) => rs,
                        Err(_) => return false,
                    };
                let m = explicit.len() as u64;
                match tail {
                    TailRule::UniformAffine { a: 0, b } => {
                        *b >= 1 && explicit_ranks.iter().all(|r| *r == Ordinal::finite(*b))
                    }
                    TailRule::UniformAffine { a, b } => {
                        // Limit case: branch ranks must be nondecreasing into
                        // the strictly increasing affine tail.
                        let start = Ordinal::finite(a * m + b);
                        explicit_ranks.windows(2).all(|w| w[0] <= w[1])
                            && explicit_ranks.last().is_none_or(|r| *r <= start)
                            && a * m + b >= 1
                    }
                    TailRule::ConstCode { code } => {
                        code.is_nonempty()
                            && code.is_uniform_symbolic()
                            && code
                                .rank()
                                .is_ok_and(|r| explicit_ranks.iter().all(|e| *e == r))
                    }
                    TailRule::Cases { .. } => false,
                }
            }
        }
    }
}

/// The end replacement `a ∗ b`: keep the first `|a| - |b|` elements of `a`
/// and append `b`. Always the same size as `a`.
pub fn end_replace(a: &FiniteSet, b: &FiniteSet) -> Result<FiniteSet, BarrierError> {
    if b.len() >= a.len() {
        return Err(BarrierError::SizeViolation);
    }
    let kept = a.prefix(a.len() - b.len());
    if let (Some(last), Some(first)) = (kept.max_elem(), b.min_elem()) {
        if last >= first {
            return Err(BarrierError::NotIncreasing);
        }
    }
    Ok(kept.union(b))
}

/// The unique initial segment of `m`'s enumeration that lies in the barrier,
/// scanning at most `fuel` elements.
pub fn first_segment(
    code: &BarrierCode,
    m: &SetDescriptor,
    fuel: u64,
) -> Result<FiniteSet, BarrierError> {
    let elements = match m.enumerate(fuel as usize) {
        Ok(xs) => xs,
        // A finite descriptor: use everything it has.
        Err(_) => m.elements_below(u64::MAX),
    };
    let mut s = FiniteSet::empty();
    if code.contains(&s) {
        return Ok(s);
    }
    for &x in &elements {
        s = s.extended(x).expect("descriptor enumerates increasingly");
        if code.contains(&s) {
            return Ok(s);
        }
    }
    Err(BarrierError::FuelExhausted(fuel))
}

impl fmt::Display for BarrierCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarrierCode::UniformK { k } => write!(f, "uniform({k})"),
            BarrierCode::SchreierShift { k } => write!(f, "schreier({k})"),
            BarrierCode::Glue { explicit, tail } => {
                write!(f, "glue{{")?;
                for (i, code) in explicit.iter().enumerate() {
                    write!(f, "{i}: {code}; ")?;
                }
                write!(f, "tail: {tail}}}")
            }
            BarrierCode::Restrict { inner, base } => write!(f, "restrict({inner}, {base})"),
            BarrierCode::Shift { inner, offset } => write!(f, "shift({inner}, {offset})"),
            BarrierCode::Cons { root, inner } => write!(f, "cons({root}, {inner})"),
        }
    }
}

impl fmt::Display for TailRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailRule::UniformAffine { a, b } => write!(f, "uniformAff({a},{b})"),
            TailRule::ConstCode { code } => write!(f, "const({code})"),
            TailRule::Cases { rules } => {
                write!(f, "cases{}[", rules.len())?;
                for (i, rule) in rules.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    match rule {
                        ParamRule::UniformAffine { a, b } => write!(f, "uniformAff({a},{b})")?,
                        ParamRule::SchreierAffine { c } => write!(f, "schreierAff({c})")?,
                    }
                }
                write!(f, "]")
            }
        }
    }
}

impl FromStr for BarrierCode {
    type Err = BarrierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = CodeParser { input: s, pos: 0 };
        let code = p.code()?;
        p.skip_ws();
        if p.pos != p.input.len() {
            return Err(p.err("trailing input"));
        }
        Ok(code)
    }
}

struct CodeParser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> CodeParser<'a> {
    fn err(&self, msg: &str) -> BarrierError {
        BarrierError::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.input.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), BarrierError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{token}`")))
        }
    }

    fn number(&mut self) -> Result<u64, BarrierError> {
        self.skip_ws();
        let digits: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .collect();
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| self.err("number out of range"))
    }

    /// Everything up to the matching close of the current parenthesized
    /// argument, used for embedded set descriptors.
    fn balanced_until_comma_or_close(&mut self) -> Result<&'a str, BarrierError> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        for (i, c) in self.rest().char_indices() {
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' if depth == 0 => {
                    self.pos = start + i;
                    return Ok(self.input[start..self.pos].trim());
                }
                ')' | ']' | '}' => depth -= 1,
                ',' if depth == 0 => {
                    self.pos = start + i;
                    return Ok(self.input[start..self.pos].trim());
                }
                _ => {}
            }
        }
        Err(self.err("unterminated argument"))
    }

    fn code(&mut self) -> Result<BarrierCode, BarrierError> {
        self.skip_ws();
        if self.eat("uniform(") {
            let k = self.number()?;
            self.expect(")")?;
            Ok(BarrierCode::UniformK { k })
        } else if self.eat("schreier(") {
            let k = self.number()?;
            self.expect(")")?;
            BarrierCode::schreier(k)
        } else if self.eat("glue{") {
            let mut explicit = Vec::new();
            loop {
                self.skip_ws();
                if self.rest().starts_with("tail:") {
                    break;
                }
                let idx = self.number()?;
                if idx != explicit.len() as u64 {
                    return Err(self.err("glue indices must be 0..m-1 in order"));
                }
                self.expect(":")?;
                explicit.push(self.code()?);
                self.expect(";")?;
            }
            self.expect("tail:")?;
            let tail = self.tail()?;
            self.expect("}")?;
            BarrierCode::glue(explicit, tail)
        } else if self.eat("restrict(") {
            let inner = self.code()?;
            self.expect(",")?;
            let set_text = self.balanced_until_comma_or_close()?;
            let base: SetDescriptor = set_text
                .parse()
                .map_err(|_| self.err("bad set descriptor"))?;
            self.expect(")")?;
            Ok(inner.restrict(base))
        } else if self.eat("shift(") {
            let inner = self.code()?;
            self.expect(",")?;
            let offset = self.number()?;
            self.expect(")")?;
            Ok(inner.shift(offset))
        } else if self.eat("cons(") {
            let root = self.number()?;
            self.expect(",")?;
            let inner = self.code()?;
            self.expect(")")?;
            Ok(BarrierCode::cons(root, inner))
        } else {
            Err(self.err("expected a barrier code"))
        }
    }

    fn tail(&mut self) -> Result<TailRule, BarrierError> {
        self.skip_ws();
        if self.eat("uniformAff(") {
            let a = self.number()?;
            self.expect(",")?;
            let b = self.number()?;
            self.expect(")")?;
            Ok(TailRule::UniformAffine { a, b })
        } else if self.eat("const(") {
            let code = self.code()?;
            self.expect(")")?;
            Ok(TailRule::ConstCode {
                code: Box::new(code),
            })
        } else if self.eat("cases") {
            let count = self.number()?;
            self.expect("[")?;
            let mut rules = Vec::new();
            loop {
                rules.push(self.param_rule()?);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("]")?;
            if rules.len() as u64 != count {
                return Err(self.err("cases arity does not match rule count"));
            }
            Ok(TailRule::Cases { rules })
        } else {
            Err(self.err("expected a tail rule"))
        }
    }

    fn param_rule(&mut self) -> Result<ParamRule, BarrierError> {
        if self.eat("uniformAff(") {
            let a = self.number()?;
            self.expect(",")?;
            let b = self.number()?;
            self.expect(")")?;
            Ok(ParamRule::UniformAffine { a, b })
        } else if self.eat("schreierAff(") {
            let c = self.number()?;
            self.expect(")")?;
            Ok(ParamRule::SchreierAffine { c })
        } else {
            Err(self.err("expected a cases rule"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Tail;

    fn fs(v: &[u64]) -> FiniteSet {
        FiniteSet::new(v.to_vec()).unwrap()
    }

    fn schreier(k: u64) -> BarrierCode {
        BarrierCode::schreier(k).unwrap()
    }

    #[test]
    fn schreier_membership() {
        let s1 = schreier(1);
        assert!(s1.contains(&fs(&[0])));
        assert!(s1.contains(&fs(&[2, 5, 9])));
        assert!(!s1.contains(&fs(&[2, 5])));
        assert!(!s1.contains(&FiniteSet::empty()));
    }

    #[test]
    fn uniform_membership() {
        let u3 = BarrierCode::uniform(3);
        assert!(u3.contains(&fs(&[1, 4, 9])));
        assert!(!u3.contains(&fs(&[1, 4])));
        assert!(BarrierCode::uniform(0).contains(&FiniteSet::empty()));
    }

    #[test]
    fn omega_plus_one_membership() {
        let code = BarrierCode::omega_plus_one_example();
        // Even root 2: needs s without the root, translated down by 3, in S_2.
        assert!(code.contains(&fs(&[2, 4, 5, 6])));
        assert!(!code.contains(&fs(&[2, 4, 5])));
        // Odd root 3: uniform of size 3 above.
        assert!(code.contains(&fs(&[3, 5, 7, 9])));
        // Root 0 uses S_1 translated above 0.
        assert!(code.contains(&fs(&[0, 1])));
        assert!(code.contains(&fs(&[0, 2, 3])));
    }

    #[test]
    fn omega_plus_one_element_sizes() {
        // Element sizes of the glued example: an odd root n forces size
        // n + 1, and an even root at least 2 forces size equal to the
        // second element (the translated Schreier law).
        let code = BarrierCode::omega_plus_one_example();
        for b in crate::verify::elements_in_window(&code, 12) {
            let root = b.min_elem().unwrap();
            if root % 2 == 1 {
                assert_eq!(b.len() as u64, root + 1, "odd-root size law at {b}");
            } else if root >= 2 {
                let second = b.elements()[1];
                assert_eq!(b.len() as u64, second, "even-root size law at {b}");
            }
        }
    }

    #[test]
    fn tree_membership() {
        assert!(BarrierCode::uniform(3).tree_contains(&fs(&[5, 9])));
        assert!(!schreier(1).tree_contains(&fs(&[2, 7, 8, 11])));
        assert!(BarrierCode::omega_plus_one_example().tree_contains(&fs(&[2, 4, 5])));
    }

    #[test]
    fn rank_examples() {
        for k in 0..=8 {
            assert_eq!(BarrierCode::uniform(k).rank().unwrap(), Ordinal::finite(k));
        }
        for k in 1..=3 {
            assert_eq!(schreier(k).rank().unwrap(), Ordinal::omega());
        }
        assert_eq!(
            BarrierCode::omega_plus_one_example().rank().unwrap(),
            Ordinal::omega().succ()
        );
        // The tree of cons(0, uniform(2)) has chains of length 3 below the
        // root, so the root rank is 3.
        assert_eq!(
            BarrierCode::cons(0, BarrierCode::uniform(2))
                .rank()
                .unwrap(),
            Ordinal::finite(3)
        );
    }

    #[test]
    fn node_rank_examples() {
        let s1 = schreier(1);
        assert_eq!(s1.node_rank(&FiniteSet::empty()).unwrap(), Ordinal::omega());
        for n in 1..6 {
            assert_eq!(s1.node_rank(&fs(&[n])).unwrap(), Ordinal::finite(n));
        }
        assert_eq!(
            BarrierCode::omega_plus_one_example()
                .node_rank(&FiniteSet::empty())
                .unwrap(),
            Ordinal::omega().succ()
        );
        assert_eq!(
            BarrierCode::uniform(4).node_rank(&fs(&[2, 6])).unwrap(),
            Ordinal::finite(2)
        );
        assert_eq!(schreier(2).rank().unwrap(), Ordinal::omega(),);
        assert_eq!(s1.node_rank(&fs(&[4, 7])), Ok(Ordinal::finite(3)),);
        assert_eq!(
            s1.node_rank(&fs(&[2, 7, 8, 11])),
            Err(BarrierError::NotInTree)
        );
    }

    #[test]
    fn sub_barrier_examples() {
        assert_eq!(
            BarrierCode::uniform(3).sub_barrier(&fs(&[5])).unwrap(),
            BarrierCode::uniform(2)
        );
        assert_eq!(
            schreier(1).sub_barrier(&fs(&[4])).unwrap(),
            BarrierCode::uniform(4)
        );
        assert_eq!(
            BarrierCode::omega_plus_one_example()
                .sub_barrier(&fs(&[3]))
                .unwrap(),
            BarrierCode::uniform(3)
        );
        assert_eq!(
            BarrierCode::uniform(2).sub_barrier(&fs(&[1, 5])),
            Err(BarrierError::TerminalNode)
        );
    }

    #[test]
    fn restrict_and_shift_membership() {
        let restricted = BarrierCode::uniform(2).restrict(SetDescriptor::evens());
        assert!(restricted.contains(&fs(&[2, 6])));
        assert!(!restricted.contains(&fs(&[2, 5])));

        let odds = BarrierCode::schreier(1)
            .unwrap()
            .restrict(SetDescriptor::odds());
        assert!(odds.contains(&fs(&[3, 5, 7, 9])));

        let shifted = BarrierCode::uniform(2).shift(3);
        assert!(shifted.contains(&fs(&[4, 8])));
        assert!(!shifted.contains(&fs(&[2, 8])));

        let consed = BarrierCode::cons(0, BarrierCode::uniform(1));
        assert!(consed.contains(&fs(&[0, 7])));

        let branch = BarrierCode::cons(2, schreier(2).shift(3));
        assert!(branch.contains(&fs(&[2, 4, 5, 6])));
    }

    #[test]
    fn restrict_rank_support() {
        let ok = schreier(1).restrict(SetDescriptor::odds());
        assert_eq!(ok.rank().unwrap(), Ordinal::omega());

        let unsupported = BarrierCode::omega_plus_one_example().restrict(SetDescriptor::evens());
        assert_eq!(
            unsupported.rank(),
            Err(BarrierError::UnsupportedRestriction)
        );
    }

    #[test]
    fn end_replace_examples() {
        assert_eq!(
            end_replace(&fs(&[1, 3, 5]), &fs(&[7, 9])).unwrap(),
            fs(&[1, 7, 9])
        );
        assert_eq!(
            end_replace(&fs(&[1, 3, 5]), &fs(&[3, 5])).unwrap(),
            fs(&[1, 3, 5])
        );
        // Size-preserving formula: keep |a| - |b| elements, append b.
        assert_eq!(
            end_replace(&fs(&[0, 2, 4, 6]), &fs(&[5])).unwrap(),
            fs(&[0, 2, 4, 5])
        );
        assert_eq!(
            end_replace(&fs(&[1, 3]), &fs(&[2, 4])),
            Err(BarrierError::SizeViolation)
        );
        assert_eq!(
            end_replace(&fs(&[5, 6, 8]), &fs(&[4, 9])),
            Err(BarrierError::NotIncreasing)
        );
    }

    #[test]
    fn first_segment_examples() {
        assert_eq!(
            first_segment(&schreier(1), &SetDescriptor::evens(), 40).unwrap(),
            fs(&[0])
        );
        assert_eq!(
            first_segment(&BarrierCode::uniform(2), &SetDescriptor::omega(), 40).unwrap(),
            fs(&[0, 1])
        );
        let d = SetDescriptor::new(vec![], Tail::Arithmetic { start: 3, step: 2 }).unwrap();
        assert_eq!(
            first_segment(&schreier(1), &d, 40).unwrap(),
            fs(&[3, 5, 7, 9])
        );
        // A code with an empty branch at the descriptor's head never covers.
        let defect = BarrierCode::glue(vec![], TailRule::UniformAffine { a: 0, b: 0 }).unwrap();
        assert_eq!(
            first_segment(&defect, &SetDescriptor::omega(), 10),
            Err(BarrierError::FuelExhausted(10))
        );
    }

    #[test]
    fn uniform_symbolic_classification() {
        assert!(BarrierCode::uniform(4).is_uniform_symbolic());
        assert!(schreier(2).is_uniform_symbolic());
        assert!(!BarrierCode::omega_plus_one_example().is_uniform_symbolic());
        assert!(!BarrierCode::cons(0, BarrierCode::uniform(2)).is_uniform_symbolic());
        // Affine tail with increasing ranks is uniform.
        let glue = BarrierCode::glue(vec![], TailRule::UniformAffine { a: 1, b: 1 }).unwrap();
        assert!(glue.is_uniform_symbolic());
        // A high-rank head breaks the nondecreasing pattern.
        let glue = BarrierCode::glue(
            vec![BarrierCode::uniform(5)],
            TailRule::UniformAffine { a: 1, b: 0 },
        )
        .unwrap();
        assert!(!glue.is_uniform_symbolic());
    }

    #[test]
    fn text_round_trip() {
        let samples = [
            "uniform(3)",
            "schreier(2)",
            "glue{0: uniform(2); tail: cases2[schreierAff(0), uniformAff(1,0)]}",
            "glue{tail: uniformAff(1,1)}",
            "restrict(uniform(2), evens)",
            "shift(schreier(1), 3)",
            "cons(2, shift(schreier(2), 3))",
            "glue{0: uniform(2); 1: restrict(uniform(1), from(3)); tail: uniformAff(0,1)}",
        ];
        for text in samples {
            let code: BarrierCode = text.parse().unwrap();
            let printed = code.to_string();
            let back: BarrierCode = printed.parse().unwrap();
            assert_eq!(back, code, "round trip failed for {text}");
        }
    }

    #[test]
    fn json_round_trip() {
        let code = BarrierCode::omega_plus_one_example();
        let json = serde_json::to_string(&code).unwrap();
        let back: BarrierCode = serde_json::from_str(&json).unwrap();
        assert_eq!(back, code);
    }
}
