//! Transfer-matrix counting for numbers whose ordinary expansion uses only
//! the digits 0 and 1.
//!
//! Writing such a number as `b^{e_0} + ... + b^{e_l}` (`e_0 < ... < e_l`),
//! every over-expansion chooses each digit `c_{e_i}` from `{0, 1, b}`, and
//! the number of ways to realize a choice given the previous one depends
//! only on the gap `d_i = e_i - e_{i-1} - 1`. Counting walks in the
//! resulting 3-state automaton gives [`theorem2_count`]: a single 3x3 trace
//! that never references the base, so the count is the same for every
//! `b >= 2`.
//!
//! State order is (digit 0, digit 1, digit b). From a `0`/`1` state there
//! are `d` ways to borrow inside the gap (making the next digit 0 or b) and
//! one way to keep it at 1; from a `b` state the next digit has already been
//! borrowed down to 0, leaving one way each to keep it 0 or push it to b and
//! none to keep it 1. Hence the step matrix rows `(t,1,t)`, `(t,1,t)`,
//! `(1,0,1)`.

use crate::error::check_base;
use crate::fib::fib;
use crate::{Error, Matrix, Nat, Result};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul};

/// A 3x3 matrix over any scalar with exact addition and multiplication.
/// `Matrix3<Nat>` is the counting path; tests use `Matrix3<Int>` for signed
/// identity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix3<T> {
    rows: [[T; 3]; 3],
}

impl<T> Matrix3<T> {
    pub fn from_rows(rows: [[T; 3]; 3]) -> Self {
        Matrix3 { rows }
    }

    pub fn rows(&self) -> &[[T; 3]; 3] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Matrix3<U> {
        Matrix3 {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| f(&self.rows[i][j]))),
        }
    }
}

impl<T> Matrix3<T>
where
    T: Clone + Zero + One,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn identity() -> Self {
        Matrix3 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
            }),
        }
    }

    pub fn trace(&self) -> T {
        self.rows
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, row)| acc + row[i].clone())
    }
}

impl<T> Mul for &Matrix3<T>
where
    T: Clone + Zero + Add<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    type Output = Matrix3<T>;

    fn mul(self, rhs: &Matrix3<T>) -> Matrix3<T> {
        Matrix3 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..3).fold(T::zero(), |acc, k| acc + &self.rows[i][k] * &rhs.rows[k][j])
                })
            }),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Matrix3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "({} {} {})", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

/// Step matrix `M_t`: rows `(t,1,t)`, `(t,1,t)`, `(1,0,1)` in state order
/// (0, 1, b).
pub fn matrix_m(t: u32) -> Matrix {
    let t = Nat::from(t);
    let one = Nat::one();
    let zero = Nat::zero();
    Matrix3::from_rows([
        [t.clone(), one.clone(), t.clone()],
        [t.clone(), one.clone(), t],
        [one.clone(), zero, one],
    ])
}

/// Start matrix `N_t`: rows `(t,1,t)`, `(t,1,t)`, `(0,0,0)`. The zero third
/// row encodes that the lowest chosen digit cannot have been pre-borrowed.
pub fn matrix_n(t: u32) -> Matrix {
    let t = Nat::from(t);
    let one = Nat::one();
    let zero = Nat::zero();
    Matrix3::from_rows([
        [t.clone(), one.clone(), t.clone()],
        [t.clone(), one, t],
        [zero.clone(), zero.clone(), zero],
    ])
}

/// A strictly increasing sequence of nonnegative exponents `e_0 < ... < e_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    exponents: Vec<u32>,
}

impl ExponentSet {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::domain("exponent set must not be empty"));
        }
        if !exponents.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::domain("exponents must be strictly increasing"));
        }
        Ok(ExponentSet { exponents })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `sum of base^e` over the set.
    pub fn value(&self, base: u32) -> Result<Nat> {
        check_base(base)?;
        let b = Nat::from(base);
        Ok(self
            .exponents
            .iter()
            .fold(Nat::zero(), |acc, &e| acc + b.pow(e)))
    }
}

/// Number of over-expansions of `b^{e_0} + ... + b^{e_l}` for every base
/// `b >= 2`: the trace of `N_{e_0} M_{d_1} ... M_{d_l}` with
/// `d_i = e_i - e_{i-1} - 1`. Requires at least two exponents.
pub fn theorem2_count(set: &ExponentSet) -> Result<Nat> {
    let e = set.exponents();
    if e.len() < 2 {
        return Err(Error::domain(
            "transfer-matrix count needs at least two exponents",
        ));
    }
    let mut acc = matrix_n(e[0]);
    for w in e.windows(2) {
        acc = &acc * &matrix_m(w[1] - w[0] - 1);
    }
    Ok(acc.trace())
}

/// Closed form for `M_1^t`, `t >= 1`: rows `(F_2t, F_2t-1, F_2t)` twice and
/// `(F_2t-1, F_2t-2, F_2t-1)`. Callers wanting `t = 0` use the identity
/// matrix.
pub fn m1_power_closed(t: u32) -> Result<Matrix> {
    if t == 0 {
        return Err(Error::domain("closed form starts at t = 1"));
    }
    let t = t as i64;
    let f = |m: i64| fib(m).to_biguint().expect("nonnegative index");
    Ok(Matrix3::from_rows([
        [f(2 * t), f(2 * t - 1), f(2 * t)],
        [f(2 * t), f(2 * t - 1), f(2 * t)],
        [f(2 * t - 1), f(2 * t - 2), f(2 * t - 1)],
    ]))
}

/// Whether `x` lies in the multiplicative monoid pattern: first two rows
/// equal and of shape `(x1, z, x1)` with `z > 0`, third row of shape
/// `(x2, x3, x2)`. The identity matrix is excluded (its first two rows
/// differ).
pub fn xi_membership(x: &Matrix) -> bool {
    let r = x.rows();
    r[0] == r[1] && r[0][0] == r[0][2] && !r[0][1].is_zero() && r[2][0] == r[2][2]
}
