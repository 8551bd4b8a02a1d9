//! Cantor-normal-form ordinals below epsilon-zero.
//!
//! These serve as the ranks of barrier trees. The arithmetic surface is
//! deliberately tiny: comparison, successor, pointwise maximum, and the
//! supremum of an affine sequence `a*n + b + 1`. Everything a rank
//! computation needs, nothing more.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// An ordinal in Cantor normal form: a sum `w^e0*c0 + w^e1*c1 + ...` with
/// strictly decreasing exponents and positive coefficients. The empty sum
/// is zero. Exponents are themselves ordinals, so values below epsilon-zero
/// are representable, though rank computation only ever produces exponents
/// below omega^omega.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(Self::zero(), n)],
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(Self::finite(1), 1)],
        }
    }

    /// `w^exp * coeff`, panicking on a zero coefficient.
    pub fn power(exp: Ordinal, coeff: u64) -> Self {
        assert!(coeff > 0, "CNF coefficients are positive");
        Ordinal {
            terms: vec![(exp, coeff)],
        }
    }

    /// Builds a CNF value from `(exponent, coefficient)` pairs, which must
    /// have strictly decreasing exponents and nonzero coefficients.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalFormError> {
        for pair in terms.windows(2) {
            if pair[0].0.cmp(&pair[1].0) != Ordering::Greater {
                return Err(OrdinalFormError::ExponentsNotDecreasing);
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(OrdinalFormError::ZeroCoefficient);
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns `Some(n)` when the value is the finite ordinal `n`.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    /// A successor ordinal ends in a finite term; everything else (except 0)
    /// is a limit.
    pub fn is_limit(&self) -> bool {
        match self.terms.last() {
            None => false,
            Some((e, _)) => !e.is_zero(),
        }
    }

    /// The ordinal `self + 1`.
    pub fn succ(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((e, c)) if e.is_zero() => *c += 1,
            _ => terms.push((Ordinal::zero(), 1)),
        }
        Ordinal { terms }
    }

    /// Supremum of the affine sequence `{a*n + b + 1 : n in omega}`:
    /// omega when `a > 0`, otherwise the finite value `b + 1`.
    pub fn sup_affine(a: u64, b: u64) -> Ordinal {
        if a > 0 {
            Ordinal::omega()
        } else {
            Ordinal::finite(b + 1)
        }
    }

    pub fn max(a: Ordinal, b: Ordinal) -> Ordinal {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    /// CNF comparison: compare term lists lexicographically, exponent first.
    /// A longer list with an equal prefix is larger (it adds smaller terms).
    fn cmp(&self, other: &Self) -> Ordering {
        for (lhs, rhs) in self.terms.iter().zip(other.terms.iter()) {
            match lhs.0.cmp(&rhs.0).then_with(|| lhs.1.cmp(&rhs.1)) {
                Ordering::Equal => continue,
                non_eq => return non_eq,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for Ordinal {
    /// Canonical text form, e.g. `0`, `7`, `w`, `w*3 + 4`, `w^2*2 + w + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if exp.is_zero() {
                write!(f, "{coeff}")?;
            } else {
                match exp.as_finite() {
                    Some(1) => write!(f, "w")?,
                    Some(k) => write!(f, "w^{k}")?,
                    None => write!(f, "w^({exp})")?,
                }
                if *coeff != 1 {
                    write!(f, "*{coeff}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdinalFormError {
    #[error("exponents must be strictly decreasing")]
    ExponentsNotDecreasing,
    #[error("coefficients must be positive")]
    ZeroCoefficient,
    #[error("unexpected character at offset {0}")]
    Parse(usize),
}

impl FromStr for Ordinal {
    type Err = OrdinalFormError;

    /// Parses the canonical text form produced by `Display`. Whitespace
    /// around `+` is optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = OrdinalParser {
            input: s.as_bytes(),
            pos: 0,
        };
        let value = parser.ordinal()?;
        parser.skip_ws();
        if parser.pos != parser.input.len() {
            return Err(OrdinalFormError::Parse(parser.pos));
        }
        Ok(value)
    }
}

struct OrdinalParser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> OrdinalParser<'a> {
    fn skip_ws(&mut self) {
        while self.input.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.input.get(self.pos) == Some(&byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, OrdinalFormError> {
        let start = self.pos;
        while self.input.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(OrdinalFormError::Parse(self.pos));
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| OrdinalFormError::Parse(start))
    }

    fn ordinal(&mut self) -> Result<Ordinal, OrdinalFormError> {
        let mut terms = Vec::new();
        loop {
            self.skip_ws();
            terms.push(self.term()?);
            self.skip_ws();
            if !self.eat(b'+') {
                break;
            }
        }
        // "0" parses as a single zero-coefficient marker term.
        if terms.len() == 1 && terms[0].1 == 0 {
            return Ok(Ordinal::zero());
        }
        Ordinal::from_terms(terms)
    }

    fn term(&mut self) -> Result<(Ordinal, u64), OrdinalFormError> {
        if self.eat(b'w') {
            let exp = if self.eat(b'^') {
                if self.eat(b'(') {
                    let inner = self.ordinal()?;
                    if !self.eat(b')') {
                        return Err(OrdinalFormError::Parse(self.pos));
                    }
                    inner
                } else {
                    Ordinal::finite(self.number()?)
                }
            } else {
                Ordinal::finite(1)
            };
            let coeff = if self.eat(b'*') { self.number()? } else { 1 };
            if coeff == 0 {
                return Err(OrdinalFormError::Parse(self.pos));
            }
            Ok((exp, coeff))
        } else {
            let n = self.number()?;
            // A bare "0" term is only legal as the whole ordinal; the caller
            // resolves that case.
            Ok((Ordinal::zero(), n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    fn fin(n: u64) -> Ordinal {
        Ordinal::finite(n)
    }

    #[test]
    fn compare_basics() {
        assert_eq!(w().cmp(&fin(5)), Ordering::Greater);
        assert_eq!(w().succ().cmp(&w().succ()), Ordering::Equal);
        // w*2 > w+3
        let w2 = Ordinal::power(fin(1), 2);
        let w3 = Ordinal::from_terms(vec![(fin(1), 1), (fin(0), 3)]).unwrap();
        assert_eq!(w2.cmp(&w3), Ordering::Greater);
    }

    #[test]
    fn succ_basics() {
        assert_eq!(fin(0).succ(), fin(1));
        assert_eq!(w().succ().to_string(), "w + 1");
        // w*3+4 + 1 = w*3+5
        let x = Ordinal::from_terms(vec![(fin(1), 3), (fin(0), 4)]).unwrap();
        assert_eq!(x.succ().to_string(), "w*3 + 5");
        assert!(!w().succ().is_limit());
        assert!(w().is_limit());
    }

    #[test]
    fn sup_affine_cases() {
        assert_eq!(Ordinal::sup_affine(1, 0), w());
        assert_eq!(Ordinal::sup_affine(0, 4), fin(5));
        assert_eq!(Ordinal::sup_affine(2, 7), w());
    }

    #[test]
    fn max_cases() {
        assert_eq!(Ordinal::max(w(), w().succ()), w().succ());
        assert_eq!(Ordinal::max(fin(3), fin(3)), fin(3));
        let w2 = Ordinal::power(fin(1), 2);
        assert_eq!(Ordinal::max(w2.clone(), w()), w2);
    }

    #[test]
    fn sup_affine_dominates_samples() {
        for (a, b) in [(1u64, 0u64), (0, 4), (2, 7), (3, 1)] {
            let sup = Ordinal::sup_affine(a, b);
            for n in 0..=1000 {
                assert!(sup >= fin(a * n + b), "a={a} b={b} n={n}");
            }
        }
    }

    #[test]
    fn no_ordinal_between_a_and_succ_a() {
        // Enumerate small CNF values and check succ is the immediate successor.
        let mut values = vec![Ordinal::zero()];
        for c in 1..4u64 {
            values.push(fin(c));
            values.push(Ordinal::power(fin(1), c));
            values.push(Ordinal::power(fin(2), c));
            for d in 1..4u64 {
                values.push(Ordinal::from_terms(vec![(fin(1), c), (fin(0), d)]).unwrap());
                values.push(Ordinal::from_terms(vec![(fin(2), c), (fin(1), d)]).unwrap());
            }
        }
        for a in &values {
            let s = a.succ();
            assert_eq!(s.cmp(a), Ordering::Greater);
            for c in &values {
                assert!(!(c > a && c < &s), "found {c} strictly between {a} and {s}");
            }
        }
    }

    #[test]
    fn display_parse_round_trip_fixed() {
        for text in ["0", "7", "w", "w + 1", "w*3 + 5", "w^2*2 + w + 1", "w^3"] {
            let v: Ordinal = text.parse().unwrap();
            assert_eq!(v.to_string(), text);
        }
        let nested: Ordinal = "w^(w)".parse().unwrap();
        assert_eq!(nested.to_string(), "w^(w)");
    }

    fn arb_ordinal(depth: u32) -> BoxedStrategy<Ordinal> {
        if depth == 0 {
            (0u64..6).prop_map(Ordinal::finite).boxed()
        } else {
            prop::collection::vec((arb_ordinal(depth - 1), 1u64..4), 0..3)
                .prop_map(|mut terms| {
                    terms.sort_by(|a, b| b.0.cmp(&a.0));
                    terms.dedup_by(|a, b| a.0 == b.0);
                    Ordinal::from_terms(terms).unwrap()
                })
                .boxed()
        }
    }

    proptest! {
        #[test]
        fn order_is_total_and_antisymmetric(a in arb_ordinal(2), b in arb_ordinal(2)) {
            match a.cmp(&b) {
                Ordering::Equal => prop_assert_eq!(&a, &b),
                Ordering::Less => prop_assert_eq!(b.cmp(&a), Ordering::Greater),
                Ordering::Greater => prop_assert_eq!(b.cmp(&a), Ordering::Less),
            }
        }

        #[test]
        fn order_is_transitive(a in arb_ordinal(2), b in arb_ordinal(2), c in arb_ordinal(2)) {
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }

        #[test]
        fn text_round_trip(a in arb_ordinal(2)) {
            let text = a.to_string();
            let back: Ordinal = text.parse().unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn json_round_trip(a in arb_ordinal(2)) {
            let json = serde_json::to_string(&a).unwrap();
            let back: Ordinal = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
