//! Digit words over the extended alphabet `{0, ..., b}` and base-`b` codecs.

use crate::error::check_base;
use crate::{Error, Nat, Result};
use num_integer::Integer;
use num_traits::Zero;
use std::fmt;

/// A finite digit word `d_t ... d_0` over the alphabet `{0, ..., base}`,
/// stored most-significant-first. An over-expansion may use the digit `base`
/// itself; the ordinary expansion is the unique over-expansion avoiding it.
///
/// Invariants: every digit is `<= base`, and the leading digit is nonzero
/// unless the word is the single digit `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitWord {
    base: u32,
    digits: Vec<u32>,
}

impl DigitWord {
    /// Build a word from most-significant-first digits, validating the
    /// invariants.
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        check_base(base)?;
        if digits.is_empty() {
            return Err(Error::domain("digit word must not be empty"));
        }
        if digits.len() > 1 && digits[0] == 0 {
            return Err(Error::domain("leading digit must be nonzero"));
        }
        if let Some(&d) = digits.iter().find(|&&d| d > base) {
            return Err(Error::domain(format!("digit {d} exceeds base {base}")));
        }
        Ok(DigitWord { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Number of digits in the word.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `i`-th digit, least significant at `i = 0`.
    pub fn digit(&self, i: usize) -> u32 {
        self.digits[self.digits.len() - 1 - i]
    }

    /// Digits most-significant-first, mirroring the written word.
    pub fn digits_msb(&self) -> &[u32] {
        &self.digits
    }

    /// The integer value of the word.
    pub fn value(&self) -> Nat {
        let base = Nat::from(self.base);
        let mut acc = Nat::zero();
        for &d in &self.digits {
            acc = acc * &base + Nat::from(d);
        }
        acc
    }
}

impl fmt::Display for DigitWord {
    /// Digits above 9 are parenthesized, so the base-10 word for ten reads
    /// `(10)` and is distinguishable from the two-digit word `10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            if d > 9 {
                write!(f, "({d})")?;
            } else {
                write!(f, "{d}")?;
            }
        }
        Ok(())
    }
}

/// Most-significant-first base-`base` digits of `n` (`[0]` for zero).
/// Callers guarantee `base >= 2`.
pub(crate) fn radix_digits_msb(n: &Nat, base: u32) -> Vec<u32> {
    debug_assert!(base >= 2);
    if n.is_zero() {
        return vec![0];
    }
    if base <= 256 {
        return n.to_radix_be(base).into_iter().map(u32::from).collect();
    }
    let big = Nat::from(base);
    let mut digits = Vec::new();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&big);
        digits.push(r.iter_u32_digits().next().unwrap_or(0));
        rest = q;
    }
    digits.reverse();
    digits
}

/// The ordinary base-`b` expansion of `n`: the unique over-expansion that
/// avoids the digit `b`. Round-trips with [`DigitWord::value`].
pub fn digits_of(n: &Nat, base: u32) -> Result<DigitWord> {
    check_base(base)?;
    Ok(DigitWord {
        base,
        digits: radix_digits_msb(n, base),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    #[test]
    fn ordinary_expansion_examples() {
        assert_eq!(digits_of(&nat(11), 2).unwrap().digits_msb(), &[1, 0, 1, 1]);
        assert_eq!(digits_of(&nat(0), 5).unwrap().digits_msb(), &[0]);
        for b in [2u32, 3, 7, 10, 257] {
            let n = Nat::from(b).pow(3) + Nat::from(b) + 1u32;
            assert_eq!(
                digits_of(&n, b).unwrap().digits_msb(),
                &[1, 0, 1, 1],
                "base {b}"
            );
        }
    }

    #[test]
    fn rejects_base_below_two() {
        assert_eq!(digits_of(&nat(5), 1), Err(Error::BaseTooSmall(1)));
        assert_eq!(digits_of(&nat(5), 0), Err(Error::BaseTooSmall(0)));
    }

    #[test]
    fn word_validation() {
        assert!(DigitWord::new(2, vec![1, 0, 2]).is_ok());
        assert!(DigitWord::new(2, vec![0, 1]).is_err());
        assert!(DigitWord::new(2, vec![3]).is_err());
        assert!(DigitWord::new(2, vec![]).is_err());
        assert!(DigitWord::new(2, vec![0]).is_ok());
    }

    #[test]
    fn digit_indexing_is_least_significant_first() {
        let w = DigitWord::new(10, vec![1, 0, 2, 3]).unwrap();
        assert_eq!(w.digit(0), 3);
        assert_eq!(w.digit(1), 2);
        assert_eq!(w.digit(3), 1);
    }

    #[test]
    fn value_of_over_expansion() {
        // "12" in base 2 (digit 2 allowed): 1*2 + 2 = 4.
        let w = DigitWord::new(2, vec![1, 2]).unwrap();
        assert_eq!(w.value(), nat(4));
    }

    #[test]
    fn display_parenthesizes_large_digits() {
        let w = DigitWord::new(10, vec![10]).unwrap();
        assert_eq!(w.to_string(), "(10)");
        let w = DigitWord::new(10, vec![1, 0]).unwrap();
        assert_eq!(w.to_string(), "10");
    }
}
