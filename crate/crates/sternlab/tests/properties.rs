//! Randomized invariants, each checked against an independent route.

use num_traits::{One, Zero};
use proptest::prelude::*;
use sternlab::digits::{digits_of, DigitWord};
use sternlab::stern::{count_over_expansions, stern, SternCache};
use sternlab::transfer::{matrix_m, matrix_n, theorem2_count, xi_membership, ExponentSet, Matrix3};
use sternlab::{Matrix, Nat};

fn nat(n: u128) -> Nat {
    Nat::from(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2500))]

    // Codec round-trip: 2500 cases x 4 bases = 10^4 pairs.
    #[test]
    fn digit_roundtrip(n in any::<u128>()) {
        for base in [2u32, 3, 7, 10] {
            let w = digits_of(&nat(n), base).unwrap();
            prop_assert_eq!(w.value(), nat(n));
            prop_assert!(w.digits_msb().iter().all(|&d| d < base));
            prop_assert!(w.len() == 1 || w.digits_msb()[0] != 0);
        }
    }
}

proptest! {
    #[test]
    fn recurrence_routes_agree(base in 2u32..=16, n in 0u64..1_000_000) {
        let mut cache = SternCache::new(1 << 14);
        prop_assert_eq!(
            stern(base, &Nat::from(n)).unwrap(),
            cache.stern(base, &Nat::from(n)).unwrap()
        );
    }

    #[test]
    fn oracle_matches_recurrence(base in 2u32..=10, n in 2u64..20_000) {
        prop_assert_eq!(
            stern(base, &Nat::from(n)).unwrap(),
            count_over_expansions(base, &Nat::from(n - 1)).unwrap()
        );
    }

    #[test]
    fn trace_is_cyclic(a in matrix3(), b in matrix3()) {
        prop_assert_eq!((&a * &b).trace(), (&b * &a).trace());
    }

    // Products of step matrices stay in the monoid pattern.
    #[test]
    fn step_products_stay_in_pattern(factors in prop::collection::vec((0u32..=6, any::<bool>()), 1..=6)) {
        let mut acc: Option<Matrix> = None;
        for (t, is_m) in factors {
            let f = if is_m { matrix_m(t) } else { matrix_n(t) };
            acc = Some(match acc {
                None => f,
                Some(prev) => &prev * &f,
            });
        }
        prop_assert!(xi_membership(&acc.unwrap()));
    }

    // Positive middle diagonal entry against any pattern element (or the
    // identity) keeps the trace positive.
    #[test]
    fn trace_stays_positive(
        x in matrix3(),
        mid in 1u64..50,
        factors in prop::collection::vec((0u32..=6, any::<bool>()), 0..=6),
    ) {
        let mut rows = x.rows().clone();
        rows[1][1] = Nat::from(mid);
        let x = Matrix3::from_rows(rows);
        let mut y = Matrix::identity();
        for (t, is_m) in factors {
            y = &y * &(if is_m { matrix_m(t) } else { matrix_n(t) });
        }
        prop_assert!(!(&x * &y).trace().is_zero());
    }

    // The trace count never references the base.
    #[test]
    fn sparse_counts_are_base_independent(exps in prop::collection::btree_set(0u32..=18, 2..=6)) {
        let set = ExponentSet::new(exps.into_iter().collect()).unwrap();
        let t = theorem2_count(&set).unwrap();
        prop_assert_eq!(count_over_expansions(2, &set.value(2).unwrap()).unwrap(), t.clone());
        prop_assert_eq!(count_over_expansions(5, &set.value(5).unwrap()).unwrap(), t);
    }

    // Every enumerated word is an over-expansion of its target, and ordinary
    // digits constrain over-expansion digits as d, d-1 (or the 0/1/base
    // triples at small ordinary digits).
    #[test]
    fn enumerated_digits_obey_ordinary_digits(base in prop::sample::select(vec![2u32, 3, 7]), n in 1u64..2000) {
        let n = Nat::from(n);
        let ordinary = digits_of(&n, base).unwrap();
        let set = sternlab::stern::enumerate_over_expansions(base, &n).unwrap();
        for w in &set.expansions {
            prop_assert_eq!(w.value(), n.clone());
            prop_assert!(allowed_digits(&ordinary, w, base));
        }
    }
}

fn allowed_digits(ordinary: &DigitWord, word: &DigitWord, base: u32) -> bool {
    (0..ordinary.len()).all(|i| {
        let a = ordinary.digit(i);
        let c = if i < word.len() { word.digit(i) } else { 0 };
        match a {
            0 => c == 0 || c == base - 1 || c == base,
            1 => c == 0 || c == 1 || c == base,
            _ => c == a - 1 || c == a,
        }
    })
}

prop_compose! {
    fn matrix3()(entries in prop::array::uniform9(0u64..100)) -> Matrix3<Nat> {
        Matrix3::from_rows(std::array::from_fn(|i| {
            std::array::from_fn(|j| Nat::from(entries[3 * i + j]))
        }))
    }
}

#[test]
fn plain_word_constructor_rejects_bad_words() {
    assert!(DigitWord::new(2, vec![1, 3]).is_err());
    assert!(DigitWord::new(5, vec![0, 1]).is_err());
    assert_eq!(DigitWord::new(5, vec![0]).unwrap().value(), Nat::zero());
    assert_eq!(DigitWord::new(5, vec![1]).unwrap().value(), Nat::one());
}

/// Point evaluation and the oracle are pure: concurrent callers on the same
/// inputs agree with a sequential baseline.
#[test]
fn evaluation_is_thread_safe() {
    let baseline: Vec<Nat> = (0..400u64)
        .map(|n| stern(3, &Nat::from(n)).unwrap())
        .collect();
    std::thread::scope(|scope| {
        for _ in 0..4 {
            scope.spawn(|| {
                for (n, expect) in baseline.iter().enumerate() {
                    assert_eq!(stern(3, &Nat::from(n)).unwrap(), *expect);
                }
                assert_eq!(
                    count_over_expansions(3, &Nat::from(80u32)).unwrap(),
                    stern(3, &Nat::from(81u32)).unwrap()
                );
            });
        }
    });
}

/// 200 seeded exponent sets with exponents up to 40: the trace count always
/// matches the recurrence route, and additionally the exhaustive oracle when
/// the target is small enough to walk (top exponent at most 20).
#[test]
fn trace_count_matches_recurrence_up_to_exponent_40() {
    let mut state = 7u64;
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    for _ in 0..200 {
        let len = 2 + (next() % 8) as usize;
        let mut picked = std::collections::BTreeSet::new();
        while picked.len() < len {
            picked.insert((next() % 41) as u32);
        }
        let set = ExponentSet::new(picked.into_iter().collect()).unwrap();
        let count = theorem2_count(&set).unwrap();
        for base in [2u32, 5] {
            let n = set.value(base).unwrap();
            assert_eq!(
                stern(base, &(&n + Nat::one())).unwrap(),
                count,
                "recurrence route disagrees at base {base}, e={:?}",
                set.exponents()
            );
            if *set.exponents().last().unwrap() <= 20 {
                assert_eq!(
                    count_over_expansions(base, &n).unwrap(),
                    count,
                    "oracle route disagrees at base {base}, e={:?}",
                    set.exponents()
                );
            }
        }
    }
}
