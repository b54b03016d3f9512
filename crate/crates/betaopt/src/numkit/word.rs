//! Digit words: finite words and eventually periodic words with exact
//! lexicographic comparison.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A single expansion digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Digit(pub u8);

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word of digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FiniteWord(pub Vec<Digit>);

impl FiniteWord {
    pub fn from_digits(digits: &[u8]) -> Self {
        FiniteWord(digits.iter().map(|&d| Digit(d)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digit(&self, i: usize) -> Digit {
        self.0[i]
    }

    pub fn max_digit(&self) -> u8 {
        self.0.iter().map(|d| d.0).max().unwrap_or(0)
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(|d| d.0 == 0)
    }

    /// Lexicographically least rotation (Booth-style by brute force; words are short).
    pub fn min_rotation(&self) -> FiniteWord {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        let mut best = self.clone();
        for s in 1..n {
            let rot = self.rotated(s);
            if rot.0 < best.0 {
                best = rot;
            }
        }
        best
    }

    pub fn rotated(&self, s: usize) -> FiniteWord {
        let n = self.len();
        FiniteWord((0..n).map(|i| self.0[(i + s) % n]).collect())
    }

    /// True when the word is not a power of a strictly shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.len();
        for d in 1..n {
            if n % d == 0 && (0..n).all(|i| self.0[i] == self.0[i % d]) {
                return false;
            }
        }
        true
    }

    /// Shortest word whose power equals this word.
    pub fn primitive_root(&self) -> FiniteWord {
        let n = self.len();
        for d in 1..=n {
            if n % d == 0 && (0..n).all(|i| self.0[i] == self.0[i % d]) {
                return FiniteWord(self.0[..d].to_vec());
            }
        }
        self.clone()
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{}", d)?;
        }
        Ok(())
    }
}

/// Result of a lexicographic comparison.
pub use std::cmp::Ordering as Lex;

/// An eventually periodic digit sequence `preperiod (period)^∞` in canonical
/// form: the period is primitive and the preperiod is minimal (its last digit
/// differs from the digit the period would place there).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventuallyPeriodicWord {
    pre: FiniteWord,
    per: FiniteWord,
}

impl EventuallyPeriodicWord {
    /// Build and canonicalize. The period must be nonempty.
    pub fn new(pre: FiniteWord, per: FiniteWord) -> Self {
        assert!(!per.is_empty(), "period must be nonempty");
        let mut pre = pre.0;
        let mut per = per.primitive_root().0;
        // Absorb preperiod digits that the period already produces:
        // a1..an (b1..bp)^∞ = a1..a(n-1) (bp b1..b(p-1))^∞ when an == bp.
        while let Some(&last) = pre.last() {
            if last == *per.last().unwrap() {
                pre.pop();
                per.rotate_right(1);
            } else {
                break;
            }
        }
        let w = EventuallyPeriodicWord { pre: FiniteWord(pre), per: FiniteWord(per) };
        debug_assert!(w.per.is_primitive());
        w
    }

    /// `w (0)^∞` for a finite word.
    pub fn from_finite(w: &FiniteWord) -> Self {
        EventuallyPeriodicWord::new(w.clone(), FiniteWord::from_digits(&[0]))
    }

    /// Purely periodic `(w)^∞`.
    pub fn periodic(w: &FiniteWord) -> Self {
        assert!(!w.is_empty());
        EventuallyPeriodicWord::new(FiniteWord::default(), w.clone())
    }

    pub fn zero() -> Self {
        EventuallyPeriodicWord::from_finite(&FiniteWord::default())
    }

    pub fn preperiod(&self) -> &FiniteWord {
        &self.pre
    }

    pub fn period(&self) -> &FiniteWord {
        &self.per
    }

    pub fn digit(&self, i: usize) -> Digit {
        if i < self.pre.len() {
            self.pre.0[i]
        } else {
            self.per.0[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn max_digit(&self) -> u8 {
        self.pre.max_digit().max(self.per.max_digit())
    }

    /// The shifted sequence σ^n(w).
    pub fn shift(&self, n: usize) -> Self {
        if n <= self.pre.len() {
            EventuallyPeriodicWord::new(FiniteWord(self.pre.0[n..].to_vec()), self.per.clone())
        } else {
            let k = (n - self.pre.len()) % self.per.len();
            EventuallyPeriodicWord::new(FiniteWord::default(), self.per.rotated(k))
        }
    }

    /// All distinct shifts σ^n(w), n >= 0 (finitely many).
    pub fn distinct_shifts(&self) -> Vec<EventuallyPeriodicWord> {
        let bound = self.pre.len() + self.per.len();
        let mut out = Vec::with_capacity(bound);
        let mut seen = std::collections::HashSet::new();
        for n in 0..bound {
            let s = self.shift(n);
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
        out
    }

    /// True when only finitely many digits are nonzero.
    pub fn is_finitely_supported(&self) -> bool {
        self.per.is_all_zero()
    }

    pub fn first_digits(&self, n: usize) -> FiniteWord {
        FiniteWord((0..n).map(|i| self.digit(i)).collect())
    }

    /// Position (1-based) of the first nonzero digit, if any.
    pub fn first_nonzero_pos(&self) -> Option<usize> {
        let bound = self.pre.len() + self.per.len();
        (0..bound).find(|&i| self.digit(i).0 != 0).map(|i| i + 1)
    }
}

impl fmt::Display for EventuallyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pre, self.per)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact lexicographic comparison of eventually periodic sequences.
///
/// Decided by comparing up to `max(preperiods) + lcm(periods)` positions:
/// past that point both sequences are periodic with the common period, so
/// agreement there implies equality.
pub fn lex_compare(a: &EventuallyPeriodicWord, b: &EventuallyPeriodicWord) -> Lex {
    let n = a.pre.len().max(b.pre.len()) + lcm(a.per.len(), b.per.len());
    for i in 0..n {
        match a.digit(i).cmp(&b.digit(i)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Compare a prefix-known sequence against an eventually periodic one.
/// Returns None when the first `horizon` digits agree (undecided).
pub fn lex_compare_prefix(prefix: &FiniteWord, b: &EventuallyPeriodicWord, horizon: usize) -> Option<Lex> {
    let n = prefix.len().min(horizon);
    for i in 0..n {
        match prefix.digit(i).cmp(&b.digit(i)) {
            Ordering::Equal => continue,
            other => return Some(other),
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(pre: &[u8], per: &[u8]) -> EventuallyPeriodicWord {
        EventuallyPeriodicWord::new(FiniteWord::from_digits(pre), FiniteWord::from_digits(per))
    }

    #[test]
    fn lex_basic() {
        // (0)^∞ < (1)^∞
        assert_eq!(lex_compare(&w(&[], &[0]), &w(&[], &[1])), Lex::Less);
        // 2(10)^∞ == 2(10)^∞
        assert_eq!(lex_compare(&w(&[2], &[1, 0]), &w(&[2], &[1, 0])), Lex::Equal);
        // (10)^∞ = 101010... < 110101... = 1(10)^∞ — differs at position 2.
        assert_eq!(lex_compare(&w(&[], &[1, 0]), &w(&[1], &[1, 0])), Lex::Less);
    }

    #[test]
    fn canonical_absorbs_preperiod() {
        // 1(01)^∞ = 10101... = (10)^∞
        let a = w(&[1], &[0, 1]);
        let b = w(&[], &[1, 0]);
        assert_eq!(a, b);
        // 2(11)^∞: period collapses to primitive (1).
        let c = w(&[2], &[1, 1]);
        assert_eq!(c.period().len(), 1);
        // 11(0)^∞ stays as-is.
        let d = w(&[1, 1], &[0]);
        assert_eq!(d.preperiod().len(), 2);
    }

    #[test]
    fn shifts() {
        let x = w(&[2], &[1, 0]);
        assert_eq!(x.shift(1), w(&[], &[1, 0]));
        assert_eq!(x.shift(2), w(&[], &[0, 1]));
        assert_eq!(x.shift(3), w(&[], &[1, 0]));
        assert_eq!(x.distinct_shifts().len(), 3);
    }

    proptest! {
        #[test]
        fn canonical_idempotent(pre in proptest::collection::vec(0u8..3, 0..6),
                                per in proptest::collection::vec(0u8..3, 1..5)) {
            let a = w(&pre, &per);
            let again = EventuallyPeriodicWord::new(a.preperiod().clone(), a.period().clone());
            prop_assert_eq!(a, again);
        }

        #[test]
        fn lex_total_order(x in proptest::collection::vec(0u8..3, 1..5),
                           y in proptest::collection::vec(0u8..3, 1..5),
                           z in proptest::collection::vec(0u8..3, 1..5)) {
            let (a, b, c) = (w(&[], &x), w(&[], &y), w(&[], &z));
            // antisymmetry
            prop_assert_eq!(lex_compare(&a, &b), lex_compare(&b, &a).reverse());
            // transitivity
            if lex_compare(&a, &b) != Lex::Greater && lex_compare(&b, &c) != Lex::Greater {
                prop_assert_ne!(lex_compare(&a, &c), Lex::Greater);
            }
            // digit-stream consistency on a long prefix
            let ord = lex_compare(&a, &b);
            let digits_a: Vec<u8> = (0..40).map(|i| a.digit(i).0).collect();
            let digits_b: Vec<u8> = (0..40).map(|i| b.digit(i).0).collect();
            prop_assert_eq!(ord, digits_a.cmp(&digits_b));
        }
    }
}
