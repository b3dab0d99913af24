//! Exact evaluation of `s_b(n)` and the brute-force over-expansion oracle.
//!
//! `s_b(n)` counts the base-`b` over-expansions of `n - 1`, with the
//! conventions `s_b(0) = 0` and `s_b(1) = 1`. At `b = 2` this is Stern's
//! diatomic sequence, [A002487](https://oeis.org/A002487). Two independent
//! routes live here:
//!
//! * [`stern`] propagates the pair `(s_b(m), s_b(m+1))` across the base-`b`
//!   digits of `n` from most significant to least — one exact step per digit,
//!   no recursion, no memo table;
//! * [`count_over_expansions`] / [`enumerate_over_expansions`] run an
//!   exhaustive digit search with interval pruning, deliberately using
//!   neither the recurrence nor any digit-constraint shortcuts, so the two
//!   routes share no logic.

use crate::digits::{radix_digits_msb, DigitWord};
use crate::error::check_base;
use crate::{Error, Nat, Result, DEFAULT_ENUM_CAP};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{HashMap, VecDeque};

/// A point query `s_base(n)`; also the memo-cache key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SternQuery {
    pub base: u32,
    pub n: Nat,
}

/// All over-expansions of `target` in the given base, pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionSet {
    pub target: Nat,
    pub base: u32,
    pub expansions: Vec<DigitWord>,
}

/// Digit-pair transition: appending digit `d` to the digits of `m` turns the
/// pair `(s(m), s(m+1))` into the pair for `bm + d`.
fn pair_step(base: u32, d: u32, lo: &mut Nat, hi: &mut Nat) {
    debug_assert!(d < base);
    if d == 0 {
        // s(bm) = s(m), s(bm+1) = s(m) + s(m+1)
        *hi += &*lo;
    } else if d == 1 {
        // s(bm+1) = s(m) + s(m+1), s(bm+2) = s(m+1)
        *lo += &*hi;
    } else {
        // s(bm+d) = s(bm+d+1) = s(m+1) for 2 <= d <= base-1
        *lo = hi.clone();
    }
}

fn stern_unchecked(base: u32, n: &Nat) -> Nat {
    if n.is_zero() {
        return Nat::zero();
    }
    let mut lo = Nat::zero();
    let mut hi = Nat::one();
    for d in radix_digits_msb(n, base) {
        pair_step(base, d, &mut lo, &mut hi);
    }
    lo
}

/// `s_base(n)`, exact, in one pass over the base-`base` digits of `n`.
pub fn stern(base: u32, n: &Nat) -> Result<Nat> {
    check_base(base)?;
    Ok(stern_unchecked(base, n))
}

/// `[s_base(lo), ..., s_base(hi)]`, computed incrementally: the quotient
/// range `[lo/b, hi/b + 1]` is evaluated once and each entry derived from it
/// by a single recurrence case, so shared prefixes are never recomputed.
///
/// Panics if the range length exceeds addressable memory; interval sweeps
/// enforce their own caps before calling this.
pub fn stern_range(base: u32, lo: &Nat, hi: &Nat) -> Result<Vec<Nat>> {
    check_base(base)?;
    if lo > hi {
        return Err(Error::InvertedRange {
            lo: lo.clone(),
            hi: hi.clone(),
        });
    }
    Ok(range_rec(base, lo, hi))
}

fn range_rec(base: u32, lo: &Nat, hi: &Nat) -> Vec<Nat> {
    let len = (hi - lo + 1u32)
        .to_usize()
        .expect("range length exceeds addressable memory");
    if *hi <= Nat::from(base.max(4)) {
        let mut out = Vec::with_capacity(len);
        let mut n = lo.clone();
        for _ in 0..len {
            out.push(stern_unchecked(base, &n));
            n += 1u32;
        }
        return out;
    }
    let b = Nat::from(base);
    let parent = range_rec(base, &(lo / &b), &(hi / &b + 1u32));
    let mut i = (lo % &b).to_u32().unwrap();
    let mut q = 0usize;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(match i {
            0 => parent[q].clone(),
            1 => &parent[q] + &parent[q + 1],
            _ => parent[q + 1].clone(),
        });
        i += 1;
        if i == base {
            i = 0;
            q += 1;
        }
    }
    out
}

/// Bounded memo cache over the top-down recurrence, keyed by `(base, n)`.
/// Eviction is by insertion order. A cache is owned by one sweep worker at a
/// time (`&mut self`); partition sweeps across workers by giving each its
/// own cache.
pub struct SternCache {
    capacity: usize,
    map: HashMap<SternQuery, Nat>,
    order: VecDeque<SternQuery>,
}

impl SternCache {
    /// Default capacity, in entries.
    pub const DEFAULT_CAPACITY: usize = 1 << 20;

    pub fn new(capacity: usize) -> Self {
        SternCache {
            capacity: capacity.max(1),
            map: HashMap::new(),
            order: VecDeque::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `s_base(n)` via the memoized recurrence.
    pub fn stern(&mut self, base: u32, n: &Nat) -> Result<Nat> {
        check_base(base)?;
        Ok(self.compute(base, n))
    }

    fn compute(&mut self, base: u32, n: &Nat) -> Nat {
        if n.is_zero() {
            return Nat::zero();
        }
        if *n < Nat::from(base) {
            return Nat::one();
        }
        let key = SternQuery { base, n: n.clone() };
        if let Some(v) = self.map.get(&key) {
            return v.clone();
        }
        let (q, i) = n.div_rem(&Nat::from(base));
        let i = i.to_u32().unwrap();
        let v = match i {
            0 => self.compute(base, &q),
            1 => self.compute(base, &q) + self.compute(base, &(&q + 1u32)),
            _ => self.compute(base, &(&q + 1u32)),
        };
        if self.map.len() == self.capacity {
            if let Some(old) = self.order.pop_front() {
                self.map.remove(&old);
            }
        }
        self.order.push_back(key.clone());
        self.map.insert(key, v.clone());
        v
    }
}

impl Default for SternCache {
    fn default() -> Self {
        SternCache::new(Self::DEFAULT_CAPACITY)
    }
}

/// Number of over-expansions of `n >= 1` in base `base`, by exhaustive digit
/// search. Equals `stern(base, n + 1)`; the two are computed by disjoint
/// routes and cross-checked in tests.
pub fn count_over_expansions(base: u32, n: &Nat) -> Result<Nat> {
    check_base(base)?;
    if n.is_zero() {
        return Err(Error::ZeroTarget);
    }
    if let Some(small) = n.to_u128() {
        if small <= u128::MAX / (base as u128 + 1) {
            return Ok(Nat::from(count_u128(base, small)));
        }
    }
    let mut count = Nat::zero();
    dfs_words(base, n, &mut |_| {
        count += 1u32;
        true
    });
    Ok(count)
}

/// Every over-expansion of `n >= 1`, exactly once, in descending order of
/// value-at-fixed-length (the search tries larger digits first at the most
/// significant positions). Uses [`crate::DEFAULT_ENUM_CAP`].
pub fn enumerate_over_expansions(base: u32, n: &Nat) -> Result<ExpansionSet> {
    enumerate_over_expansions_capped(base, n, DEFAULT_ENUM_CAP)
}

/// [`enumerate_over_expansions`] with an explicit cap on the number of words.
pub fn enumerate_over_expansions_capped(base: u32, n: &Nat, cap: usize) -> Result<ExpansionSet> {
    check_base(base)?;
    if n.is_zero() {
        return Err(Error::ZeroTarget);
    }
    let needed = count_over_expansions(base, n)?;
    if needed > Nat::from(cap) {
        return Err(Error::CapExceeded {
            needed,
            cap: cap as u64,
        });
    }
    let mut expansions = Vec::new();
    dfs_words(base, n, &mut |digits| {
        let lead = digits.iter().position(|&d| d != 0).unwrap();
        expansions.push(DigitWord::new(base, digits[lead..].to_vec()).unwrap());
        true
    });
    debug_assert_eq!(Nat::from(expansions.len()), needed);
    Ok(ExpansionSet {
        target: n.clone(),
        base,
        expansions,
    })
}

/// Fast counting path: plain `u128` arithmetic. Positions run from the top
/// ordinary digit down; a branch survives iff the remaining value is
/// nonnegative and coverable by the remaining positions (each worth at most
/// `base * base^i`).
fn count_u128(base: u32, n: u128) -> u128 {
    let b = base as u128;
    let mut pows = vec![1u128];
    while *pows.last().unwrap() <= n / b {
        pows.push(pows.last().unwrap() * b);
    }
    // tail_max[i] = largest value representable on positions 0..i
    let mut tail_max = vec![0u128; pows.len()];
    for i in 1..pows.len() {
        tail_max[i] = tail_max[i - 1] + b * pows[i - 1];
    }

    fn go(b: u128, pows: &[u128], tail_max: &[u128], pos: usize, rem: u128) -> u128 {
        let mut total = 0u128;
        for d in 0..=b {
            let v = d * pows[pos];
            if v > rem {
                break;
            }
            let rest = rem - v;
            if rest > tail_max[pos] {
                continue;
            }
            if pos == 0 {
                total += 1; // rest == 0 since tail_max[0] == 0
            } else {
                total += go(b, pows, tail_max, pos - 1, rest);
            }
        }
        total
    }

    let top = pows.len() - 1;
    go(b, &pows, &tail_max, top, n)
}

/// Exhaustive search over full-length digit vectors (leading zeros allowed in
/// the vector; the emitted word is the vector with leading zeros stripped).
/// `visit` receives each complete vector most-significant-first and returns
/// `false` to abort the walk.
fn dfs_words(base: u32, n: &Nat, visit: &mut dyn FnMut(&[u32]) -> bool) {
    let b = Nat::from(base);
    let mut pows = vec![Nat::one()];
    while *pows.last().unwrap() <= n / &b {
        pows.push(pows.last().unwrap() * &b);
    }
    let mut tail_max = vec![Nat::zero(); pows.len()];
    for i in 1..pows.len() {
        tail_max[i] = &tail_max[i - 1] + &b * &pows[i - 1];
    }

    struct Walk<'a> {
        base: u32,
        pows: &'a [Nat],
        tail_max: &'a [Nat],
        stack: Vec<u32>,
        visit: &'a mut dyn FnMut(&[u32]) -> bool,
    }

    impl Walk<'_> {
        fn go(&mut self, pos: usize, rem: &Nat) -> bool {
            for d in 0..=self.base {
                let v = &self.pows[pos] * Nat::from(d);
                if v > *rem {
                    break;
                }
                let rest = rem - v;
                if rest > self.tail_max[pos] {
                    continue;
                }
                self.stack.push(d);
                let keep_going = if pos == 0 {
                    (self.visit)(&self.stack)
                } else {
                    self.go(pos - 1, &rest)
                };
                self.stack.pop();
                if !keep_going {
                    return false;
                }
            }
            true
        }
    }

    let top = pows.len() - 1;
    let mut walk = Walk {
        base,
        pows: &pows,
        tail_max: &tail_max,
        stack: Vec::with_capacity(pows.len()),
        visit,
    };
    walk.go(top, n);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    fn s(base: u32, n: u64) -> u64 {
        stern(base, &nat(n)).unwrap().to_u64().unwrap()
    }

    #[test]
    fn anchor_values() {
        assert_eq!(s(2, 17), 5);
        assert_eq!(s(2, 69), 14);
        assert_eq!(s(2, 5), 3);
        for b in [2, 3, 7, 10] {
            assert_eq!(s(b, 0), 0);
            assert_eq!(s(b, 1), 1);
        }
    }

    #[test]
    fn rejects_base_below_two() {
        assert_eq!(stern(1, &nat(5)), Err(Error::BaseTooSmall(1)));
        assert_eq!(
            stern_range(0, &nat(1), &nat(2)),
            Err(Error::BaseTooSmall(0))
        );
        assert!(matches!(
            count_over_expansions(1, &nat(5)),
            Err(Error::BaseTooSmall(1))
        ));
    }

    #[test]
    fn range_examples() {
        let v: Vec<u64> = stern_range(2, &nat(1), &nat(8))
            .unwrap()
            .iter()
            .map(|x| x.to_u64().unwrap())
            .collect();
        assert_eq!(v, vec![1, 1, 2, 1, 3, 2, 3, 1]);

        for b in [2, 3, 10] {
            let v = stern_range(b, &nat(5), &nat(5)).unwrap();
            assert_eq!(v, vec![stern(b, &nat(5)).unwrap()]);
        }

        let v: Vec<u64> = stern_range(3, &nat(1), &nat(3))
            .unwrap()
            .iter()
            .map(|x| x.to_u64().unwrap())
            .collect();
        assert_eq!(v, vec![1, 1, 1]);
    }

    #[test]
    fn range_rejects_inverted() {
        assert_eq!(
            stern_range(2, &nat(5), &nat(4)),
            Err(Error::InvertedRange {
                lo: nat(5),
                hi: nat(4)
            })
        );
    }

    #[test]
    fn range_matches_pointwise() {
        for b in [2, 3, 7] {
            let lo = nat(0);
            let hi = nat(300);
            let v = stern_range(b, &lo, &hi).unwrap();
            for (i, got) in v.iter().enumerate() {
                assert_eq!(*got, stern(b, &nat(i as u64)).unwrap(), "b={b}, n={i}");
            }
        }
    }

    #[test]
    fn cache_matches_pair_propagation() {
        let mut cache = SternCache::new(1 << 12);
        for b in [2, 3, 10] {
            for n in 0..400u64 {
                assert_eq!(
                    cache.stern(b, &nat(n)).unwrap(),
                    stern(b, &nat(n)).unwrap(),
                    "b={b}, n={n}"
                );
            }
        }
    }

    #[test]
    fn cache_eviction_keeps_answers_correct() {
        let mut tiny = SternCache::new(8);
        for n in (0..2000u64).rev() {
            assert_eq!(tiny.stern(2, &nat(n)).unwrap(), stern(2, &nat(n)).unwrap());
            assert!(tiny.len() <= 8);
        }
    }

    #[test]
    fn oracle_worked_example_158() {
        let b7 = nat(7);
        let n = b7.pow(2) + b7.pow(4) + b7.pow(5) + b7.pow(9) + b7.pow(11);
        assert_eq!(count_over_expansions(7, &n).unwrap(), nat(158));
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(count_over_expansions(2, &nat(4)).unwrap(), nat(3));
        for b in [2, 3, 7, 10, 300] {
            assert_eq!(count_over_expansions(b, &Nat::one()).unwrap(), nat(1));
        }
        assert_eq!(count_over_expansions(2, &nat(0)), Err(Error::ZeroTarget));
    }

    #[test]
    fn oracle_biguint_path_matches_fast_path() {
        // Force the slow path by exceeding the u128 guard.
        let n = nat(4); // 3 hyperbinary expansions
        let shifted = &n * Nat::from(2u32).pow(130) / Nat::from(2u32).pow(130);
        assert_eq!(count_over_expansions(2, &shifted).unwrap(), nat(3));
        let huge = Nat::from(2u32).pow(130); // power of two: single expansion chain
        assert_eq!(
            count_over_expansions(2, &huge).unwrap(),
            stern_unchecked(2, &(&huge + 1u32))
        );
    }

    #[test]
    fn enumerate_hand_examples() {
        let set = enumerate_over_expansions(2, &nat(4)).unwrap();
        let words: Vec<String> = set.expansions.iter().map(|w| w.to_string()).collect();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["100", "12", "20"]);

        let set = enumerate_over_expansions(10, &nat(10)).unwrap();
        let mut words: Vec<String> = set.expansions.iter().map(|w| w.to_string()).collect();
        words.sort();
        assert_eq!(words, vec!["(10)", "10"]);

        for b in [2u32, 3, 9] {
            let set = enumerate_over_expansions(b, &Nat::from(b - 1)).unwrap();
            assert_eq!(set.expansions.len(), 1);
            assert_eq!(set.expansions[0].digits_msb(), &[b - 1]);
        }
    }

    #[test]
    fn enumerate_respects_cap() {
        let err = enumerate_over_expansions_capped(2, &nat(4), 2).unwrap_err();
        assert_eq!(
            err,
            Error::CapExceeded {
                needed: nat(3),
                cap: 2
            }
        );
    }

    #[test]
    fn enumerate_words_are_distinct_valid_over_expansions() {
        for b in [2u32, 3, 7] {
            for n in 1..=80u64 {
                let set = enumerate_over_expansions(b, &nat(n)).unwrap();
                let mut seen = std::collections::HashSet::new();
                for w in &set.expansions {
                    assert_eq!(w.value(), nat(n), "b={b}, n={n}");
                    assert!(w.digits_msb()[0] != 0);
                    assert!(w.digits_msb().iter().all(|&d| d <= b));
                    assert!(seen.insert(w.clone()), "duplicate word for b={b}, n={n}");
                }
                assert_eq!(
                    Nat::from(set.expansions.len()),
                    count_over_expansions(b, &nat(n)).unwrap()
                );
            }
        }
    }

    #[test]
    fn oracle_equals_recurrence_smoke() {
        for b in [2, 3, 5, 10] {
            for n in 2..=500u64 {
                assert_eq!(
                    stern(b, &nat(n)).unwrap(),
                    count_over_expansions(b, &nat(n - 1)).unwrap(),
                    "b={b}, n={n}"
                );
            }
        }
    }

    #[test]
    fn lemma1_powers_have_single_expansion() {
        for b in [2u32, 3, 7, 10] {
            for k in 0..=12u32 {
                for j in 1..b.min(4) {
                    let n = Nat::from(j) * Nat::from(b).pow(k);
                    assert_eq!(stern(b, &n).unwrap(), Nat::one(), "b={b}, k={k}, j={j}");
                }
            }
        }
    }

    #[test]
    fn lemma1_second_interval_bound() {
        // For b <= n <= b^2: s_b(n) <= 2, equality iff n = 1 (mod b).
        for b in 2u32..=10 {
            for n in (b as u64)..=(b as u64 * b as u64) {
                let v = s(b, n);
                assert!(v <= 2, "b={b}, n={n}");
                assert_eq!(v == 2, n % b as u64 == 1, "b={b}, n={n}");
            }
        }
    }

    #[test]
    #[allow(clippy::manual_div_ceil)] // keeps the identity's written shape
    fn lemma2_identities_smoke() {
        for b in [2u64, 3, 5] {
            for n in 1..=5000u64 {
                if n % (b * b) == 1 {
                    assert_eq!(
                        s(b as u32, n),
                        s(b as u32, (n - 1) / (b * b)) + s(b as u32, (n + b - 1) / b),
                        "first identity at b={b}, n={n}"
                    );
                }
                if n % (b * b) == b + 1 {
                    assert_eq!(
                        s(b as u32, n),
                        s(b as u32, (n - 1) / b) + s(b as u32, (n + b * b - b - 1) / (b * b)),
                        "second identity at b={b}, n={n}"
                    );
                }
            }
        }
    }
}
