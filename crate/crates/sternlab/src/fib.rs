//! Fibonacci and Lucas numbers on all integer indices, exact.
//!
//! Seeds are `F_1 = F_2 = 1` and `L_1 = 1`, `L_2 = 3`; both recurrences are
//! extended backward, giving `F_0 = 0`, `L_0 = 2`, `F_{-m} = (-1)^{m+1} F_m`
//! and `L_{-m} = (-1)^m L_m`.

use crate::Int;
use num_traits::{One, Zero};

fn fib_nonneg(m: u64) -> Int {
    let mut a = Int::zero();
    let mut b = Int::one();
    for _ in 0..m {
        let next = &a + &b;
        a = b;
        b = next;
    }
    a
}

fn lucas_nonneg(m: u64) -> Int {
    let mut a = Int::from(2);
    let mut b = Int::one();
    for _ in 0..m {
        let next = &a + &b;
        a = b;
        b = next;
    }
    a
}

/// `F_m` for any integer `m`.
pub fn fib(m: i64) -> Int {
    if m >= 0 {
        fib_nonneg(m as u64)
    } else {
        let f = fib_nonneg(m.unsigned_abs());
        if m % 2 == 0 {
            -f
        } else {
            f
        }
    }
}

/// `L_m` for any integer `m`.
pub fn lucas(m: i64) -> Int {
    if m >= 0 {
        lucas_nonneg(m as u64)
    } else {
        let l = lucas_nonneg(m.unsigned_abs());
        if m % 2 == 0 {
            l
        } else {
            -l
        }
    }
}
