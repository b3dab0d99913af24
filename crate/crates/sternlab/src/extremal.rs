//! Extremal values of `s_b` on the intervals just above a power of the base:
//! the offset sequence `h_m`, the anchor points `(G_k(m), H_k(m))`, the
//! intervals `I(k,r,y)` with their maximum `mu` and smallest maximizer `nu`,
//! and the closed forms (`gamma`, `V`) that locate both without scanning.

use crate::digits::{digits_of, DigitWord};
use crate::error::check_base;
use crate::fib::{fib, lucas};
use crate::stern::stern_range;
use crate::{Error, Int, Nat, Result};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Scan granularity for chunked interval sweeps.
pub(crate) const SWEEP_CHUNK: usize = 1 << 16;

/// Offset sequence: `h_1 = h_2 = 1`, then `h_m = b h_{m-1} - b + 1` for even
/// `m` and `b h_{m-1} + 1` for odd `m`. Always `h_m = 1 (mod b)`; at `b = 2`
/// these are the Jacobsthal numbers ([A001045](https://oeis.org/A001045)).
pub fn h(base: u32, m: u32) -> Result<Nat> {
    check_base(base)?;
    if m == 0 {
        return Err(Error::domain("h starts at m = 1"));
    }
    let b = Nat::from(base);
    let mut value = Nat::one();
    for i in 2..=m {
        value *= &b;
        if i % 2 == 0 {
            value = value - &b + 1u32;
        } else {
            value += 1u32;
        }
    }
    Ok(value)
}

/// Summation form of the same sequence; kept as an independent route for
/// tests.
#[cfg(test)]
fn h_by_sum(base: u32, m: u32) -> Nat {
    if m <= 2 {
        return Nat::one();
    }
    let b = Nat::from(base);
    let mut value = Nat::one();
    let mut i = 0;
    while 2 * i <= m - 3 {
        value += b.pow(m - 2 - 2 * i);
        i += 1;
    }
    value
}

fn check_anchor_args(k: u32, m: u32) -> Result<()> {
    if m < 2 || m > k {
        return Err(Error::domain(format!(
            "anchor needs 2 <= m <= k, got m={m}, k={k}"
        )));
    }
    Ok(())
}

/// Anchor position `G_k(m) = b^k + h_m`, for `2 <= m <= k`.
pub fn g_anchor(base: u32, k: u32, m: u32) -> Result<Nat> {
    check_anchor_args(k, m)?;
    Ok(Nat::from(base).pow(k) + h(base, m)?)
}

/// Exact sequence value at the anchor: `H_k(m) = F_{m+2} + (k-m) F_m`.
pub fn h_anchor(k: u32, m: u32) -> Result<Nat> {
    check_anchor_args(k, m)?;
    let v = fib(m as i64 + 2) + Int::from(k - m) * fib(m as i64);
    Ok(v.to_biguint().expect("anchor value is positive"))
}

/// Parameters `(b, k, r, y)` of the interval
/// `I(k,r,y) = { n : b^k < n <= b^k + sum_{i=0..y} b^(r-2i) }`.
///
/// Brute-force scans accept any `0 <= r < k` with `2y <= r`; the closed
/// forms additionally require `2y < r < k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalSpec {
    pub base: u32,
    pub k: u32,
    pub r: u32,
    pub y: u32,
}

impl IntervalSpec {
    pub fn new(base: u32, k: u32, r: u32, y: u32) -> Result<Self> {
        check_base(base)?;
        if r >= k || 2 * y > r {
            return Err(Error::domain(format!(
                "interval needs 2y <= r < k, got k={k}, r={r}, y={y}"
            )));
        }
        Ok(IntervalSpec { base, k, r, y })
    }

    /// Whether the closed forms apply: `2y < r < k - 1`.
    pub fn in_closed_regime(&self) -> bool {
        2 * self.y < self.r && self.r + 1 < self.k
    }

    /// `(lo, hi)` with the interval equal to `(lo, hi]`.
    pub fn bounds(&self) -> (Nat, Nat) {
        let b = Nat::from(self.base);
        let lo = b.pow(self.k);
        let mut hi = lo.clone();
        for i in 0..=self.y {
            hi += b.pow(self.r - 2 * i);
        }
        (lo, hi)
    }

    /// Number of integers in the interval.
    pub fn size(&self) -> Nat {
        let (lo, hi) = self.bounds();
        hi - lo
    }
}

/// Maximum of `s_b` over an interval and the smallest `n` attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalResult {
    pub mu: Nat,
    pub nu: Nat,
}

/// Run `f` over `s_base(n)` for `n` in `[lo, hi]`, in ascending chunks.
/// `f` receives the first `n` of the chunk and the chunk's values.
pub(crate) fn for_each_stern_chunk(
    base: u32,
    lo: &Nat,
    hi: &Nat,
    mut f: impl FnMut(&Nat, &[Nat]),
) -> Result<()> {
    let mut start = lo.clone();
    while start <= *hi {
        let end = (&start + Nat::from(SWEEP_CHUNK as u64 - 1)).min(hi.clone());
        let values = stern_range(base, &start, &end)?;
        f(&start, &values);
        start = end + 1u32;
    }
    Ok(())
}

pub(crate) fn check_sweep_cap(size: &Nat, cap: u64) -> Result<()> {
    if *size > Nat::from(cap) {
        return Err(Error::CapExceeded {
            needed: size.clone(),
            cap,
        });
    }
    Ok(())
}

/// Scan every `n` in `I(k,r,y)` and return the maximum of `s_b` together
/// with its smallest attaining `n`. Ties break to the smallest `n`.
pub fn mu_nu_bruteforce(spec: &IntervalSpec, cap: u64) -> Result<ExtremalResult> {
    check_sweep_cap(&spec.size(), cap)?;
    let (lo, hi) = spec.bounds();
    let mut best: Option<ExtremalResult> = None;
    for_each_stern_chunk(spec.base, &(&lo + 1u32), &hi, |start, values| {
        for (i, s) in values.iter().enumerate() {
            let better = match &best {
                None => true,
                Some(cur) => *s > cur.mu,
            };
            if better {
                best = Some(ExtremalResult {
                    mu: s.clone(),
                    nu: start + Nat::from(i),
                });
            }
        }
    })?;
    Ok(best.expect("interval is nonempty"))
}

/// The 0/1 digit word `w(k,r,x)` and its value `gamma(k,r,x)`: a `1`, then
/// `k-r-1` zeros, then `x` blocks `10`, a `0`, then `floor(r/2) - x` blocks
/// `10`, and a final `0` when `r` is odd. Length is always `k + 1` and the
/// word starts with `1` and ends with `0`.
pub fn gamma_value(base: u32, k: u32, r: u32, x: u32) -> Result<(DigitWord, Nat)> {
    check_base(base)?;
    if !(2 * x < r && r + 1 < k) {
        return Err(Error::domain(format!(
            "gamma needs 2x < r < k-1, got k={k}, r={r}, x={x}"
        )));
    }
    let mut digits = Vec::with_capacity(k as usize + 1);
    digits.push(1);
    digits.resize(digits.len() + (k - r - 1) as usize, 0);
    for _ in 0..x {
        digits.push(1);
        digits.push(0);
    }
    digits.push(0);
    for _ in 0..(r / 2 - x) {
        digits.push(1);
        digits.push(0);
    }
    if r % 2 == 1 {
        digits.push(0);
    }
    debug_assert_eq!(digits.len(), k as usize + 1);
    let word = DigitWord::new(base, digits)?;
    let value = word.value();
    Ok((word, value))
}

/// Closed-form candidate maximum
/// `V(k,r,x) = ((k-r)(2 L_{r+2} - L_{r-4x+1}) + 2 L_{r+1} + L_{r-4x+2}) / 5`,
/// evaluated exactly. The numerator must be divisible by 5 and nonnegative;
/// in the closed regime it counts over-expansions, so a failure here is a
/// bug trap rather than a domain error.
pub fn v_value(k: i64, r: i64, x: i64) -> Result<Nat> {
    let num = Int::from(k - r) * (Int::from(2) * lucas(r + 2) - lucas(r - 4 * x + 1))
        + Int::from(2) * lucas(r + 1)
        + lucas(r - 4 * x + 2);
    let (q, rem) = num_integer::Integer::div_rem(&num, &Int::from(5));
    if !rem.is_zero() {
        return Err(Error::NonIntegral(num));
    }
    if q.is_negative() {
        return Err(Error::domain(format!("V({k},{r},{x}) is negative: {q}")));
    }
    Ok(q.to_biguint().unwrap())
}

/// Closed-form `(mu, nu)` for `I(k,r,y)` under `2y < r < k-1`.
///
/// The maximizing word index is `y` itself when `r` is even; `(r-3)/4` when
/// `k-2 = r = 3 (mod 4)` and `y >= (r+1)/4` (two indices tie and the smaller
/// word wins); and `min(ceil((r-1)/4), y)` otherwise.
pub fn mu_nu_closed(spec: &IntervalSpec) -> Result<ExtremalResult> {
    if !spec.in_closed_regime() {
        return Err(Error::domain(format!(
            "closed form needs 2y < r < k-1, got k={}, r={}, y={}",
            spec.k, spec.r, spec.y
        )));
    }
    let (k, r, y) = (spec.k, spec.r, spec.y);
    let delta = ((r + 2) / 4).min(y);
    let x = if r % 2 == 0 {
        y
    } else if k - 2 == r && r % 4 == 3 && y >= (r + 1) / 4 {
        // For r = 3 (mod 4) the two ceiling expressions coincide.
        debug_assert_eq!((r + 1) / 4, (r + 2) / 4);
        (r - 3) / 4
    } else {
        delta
    };
    let mu = v_value(k as i64, r as i64, x as i64)?;
    let (_, gamma) = gamma_value(spec.base, k, r, x)?;
    Ok(ExtremalResult {
        mu,
        nu: gamma + 1u32,
    })
}

/// Closed form of the maximum of `s_b` on `[b^k, b^(k+1))`: the value
/// `F_{k+2}`, attained exactly on `{ j b^k + t : 1 <= j <= b-1, t in
/// {h_k, h_{k+1}} }` (the two offsets coincide at `k = 1`).
pub fn interval_max(base: u32, k: u32) -> Result<(Nat, BTreeSet<Nat>)> {
    check_base(base)?;
    if k == 0 {
        return Err(Error::domain("interval maximum starts at k = 1"));
    }
    let max = fib(k as i64 + 2).to_biguint().unwrap();
    let bk = Nat::from(base).pow(k);
    let mut attaining = BTreeSet::new();
    for j in 1..base {
        for t in [h(base, k)?, h(base, k + 1)?] {
            attaining.insert(Nat::from(j) * &bk + t);
        }
    }
    Ok((max, attaining))
}

/// Brute-force counterpart of [`interval_max`]: scan `[b^k, b^(k+1))` and
/// collect the maximum with every attaining `n`.
pub fn interval_max_bruteforce(base: u32, k: u32, cap: u64) -> Result<(Nat, BTreeSet<Nat>)> {
    check_base(base)?;
    if k == 0 {
        return Err(Error::domain("interval maximum starts at k = 1"));
    }
    let lo = Nat::from(base).pow(k);
    let hi = Nat::from(base).pow(k + 1) - 1u32;
    check_sweep_cap(&(&hi - &lo + 1u32), cap)?;
    let mut max = Nat::zero();
    let mut attaining = BTreeSet::new();
    for_each_stern_chunk(base, &lo, &hi, |start, values| {
        for (i, s) in values.iter().enumerate() {
            if *s > max {
                max = s.clone();
                attaining.clear();
            }
            if *s == max {
                attaining.insert(start + Nat::from(i));
            }
        }
    })?;
    Ok((max, attaining))
}

/// Maximum of `s_base` on `[1, t)` for each threshold `t`, in one ascending
/// scan up to the largest threshold. Thresholds must be >= 2.
pub fn prefix_maxima(base: u32, thresholds: &[Nat], cap: u64) -> Result<Vec<Nat>> {
    check_base(base)?;
    if thresholds.is_empty() {
        return Ok(Vec::new());
    }
    if thresholds.iter().any(|t| *t < Nat::from(2u32)) {
        return Err(Error::domain("prefix maxima need thresholds >= 2"));
    }
    let top = thresholds.iter().max().unwrap() - 1u32;
    check_sweep_cap(&top, cap)?;
    let mut order: Vec<usize> = (0..thresholds.len()).collect();
    order.sort_by_key(|&i| thresholds[i].clone());
    let mut out = vec![Nat::zero(); thresholds.len()];
    let mut next = 0usize;
    let mut max = Nat::zero();
    for_each_stern_chunk(base, &Nat::one(), &top, |start, values| {
        for (i, s) in values.iter().enumerate() {
            let n = start + Nat::from(i);
            while next < order.len() && thresholds[order[next]] == n {
                out[order[next]] = max.clone();
                next += 1;
            }
            if *s > max {
                max = s.clone();
            }
        }
    })?;
    for &i in &order[next..] {
        out[i] = max.clone();
    }
    Ok(out)
}

/// Ordinary digits of `nu - 1` for a verified extremal result: all digits in
/// `{0,1}`, last digit 0, matching the `w(k,r,x)` template. Used by the
/// digit-shape checks.
pub fn nu_digit_word(base: u32, nu: &Nat) -> Result<DigitWord> {
    digits_of(&(nu - 1u32), base)
}
