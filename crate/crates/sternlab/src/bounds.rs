//! Upper bounds for `s_b` above a power of the base, and their verification
//! sweeps: the exact secant bound `J_{k,m}` between consecutive anchors, the
//! smooth envelope `f_k` with its log reparameterization `beta`, the limsup
//! probe at `u_k = b^k + h_k`, the base-2 reflection symmetry, and the
//! four-term product identity.
//!
//! `J` comparisons are exact (integer cross-multiplication); `f` comparisons
//! are double precision with an explicit relative margin, which is sound
//! because sequence values are integers while `f` is transcendental and the
//! observed margins sit many orders above the tolerance at desk scale.

use crate::error::check_base;
use crate::extremal::{check_sweep_cap, for_each_stern_chunk, g_anchor, h, h_anchor};
use crate::fib::fib;
use crate::stern::{stern, stern_range};
use crate::transfer::{theorem2_count, ExponentSet};
use crate::{Error, Int, Nat, Rat, Result};
use num_traits::{One, Signed, ToPrimitive};

/// Relative strictness margin for envelope (`f`) comparisons.
pub const F_MARGIN: f64 = 1e-9;

/// Relative tolerance for the sampled monotonicity check.
pub const THETA_TOL: f64 = 1e-12;

/// One failed comparison: the point, its sequence value, and the bound that
/// was not beaten.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation<M> {
    pub n: Nat,
    pub s: Nat,
    pub bound: M,
}

/// Outcome of a verification sweep. `violations` empty means pass;
/// `min_margin` is the smallest observed `bound - s` (absent for pure
/// equality checks).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<M> {
    pub base: u32,
    pub k: u32,
    pub checked: u64,
    pub violations: Vec<Violation<M>>,
    pub min_margin: Option<M>,
}

impl<M: PartialOrd + Clone> BoundReport<M> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Deterministic merge for partitioned sweeps: counts add, violations
    /// sort by `n`, margins combine by minimum.
    pub fn merge(mut self, mut other: BoundReport<M>) -> BoundReport<M> {
        assert_eq!((self.base, self.k), (other.base, other.k));
        self.checked += other.checked;
        self.violations.append(&mut other.violations);
        self.violations
            .sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.s.cmp(&b.s)));
        self.min_margin = match (self.min_margin.take(), other.min_margin.take()) {
            (Some(a), Some(b)) => Some(if b < a { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Exact slope of the secant through `(G_k(m), H_k(m))` and
/// `(G_k(m+1), H_k(m+1))`: equals `F_{m-1} (k-m) / (h_{m+1} - h_m)`.
fn j_slope(base: u32, k: u32, m: u32) -> Result<Rat> {
    let num = fib(m as i64 - 1) * Int::from(k - m);
    let den = Int::from(h(base, m + 1)?) - Int::from(h(base, m)?);
    Ok(Rat::new(num, den))
}

/// Exact value of the secant bound `J_{k,m}` at `x`. Defined on the whole
/// line; the bound statement concerns `G_k(m) < x < G_k(m+1)`.
pub fn j_bound(base: u32, k: u32, m: u32, x: &Nat) -> Result<Rat> {
    if m < 2 || m >= k {
        return Err(Error::domain(format!(
            "secant bound needs 2 <= m < k, got m={m}, k={k}"
        )));
    }
    let g = Int::from(g_anchor(base, k, m)?);
    let h_val = Rat::from_integer(Int::from(h_anchor(k, m)?));
    let dx = Rat::from_integer(Int::from(x.clone()) - g);
    Ok(h_val + j_slope(base, k, m)? * dx)
}

/// Log reparameterization `beta(x) = log_base((base^2 - 1) x + 1)`.
pub fn beta(base: u32, x: f64) -> Result<f64> {
    check_base(base)?;
    if x < 0.0 {
        return Err(Error::domain("beta needs x >= 0"));
    }
    let b2 = (base as f64) * (base as f64) - 1.0;
    Ok((b2 * x + 1.0).ln() / (base as f64).ln())
}

/// Envelope bound `f_k(x)`: with `t = beta(x)` and `phi` the golden ratio,
/// `((k - t)(phi^t + phi^-t) + phi^(t+2) + phi^-(t+2)) / sqrt(5)`.
pub fn f_bound(base: u32, k: u32, x: f64) -> Result<f64> {
    if k < 3 {
        return Err(Error::domain("envelope bound needs k >= 3"));
    }
    let t = beta(base, x)?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let pt = phi.powf(t);
    Ok(((k as f64 - t) * (pt + 1.0 / pt) + pt * phi * phi + 1.0 / (pt * phi * phi)) / 5f64.sqrt())
}

/// Check `s_b(n) < J_{k,m}(n)` for every integer strictly between the two
/// anchors, by exact integer cross-multiplication, and check equality at
/// both anchor endpoints. Endpoint mismatches are reported as violations.
pub fn verify_theorem4(base: u32, k: u32, m: u32, cap: u64) -> Result<BoundReport<Rat>> {
    if m < 2 || m >= k {
        return Err(Error::domain(format!(
            "secant sweep needs 2 <= m < k, got m={m}, k={k}"
        )));
    }
    let g_lo = g_anchor(base, k, m)?;
    let g_hi = g_anchor(base, k, m + 1)?;
    let h_lo = h_anchor(k, m)?;
    let slope_num = fib(m as i64 - 1).to_biguint().unwrap() * Nat::from(k - m);
    let dh = h(base, m + 1)? - h(base, m)?;

    let mut report = BoundReport {
        base,
        k,
        checked: 0,
        violations: Vec::new(),
        min_margin: None,
    };
    // Anchor endpoints: equality with the exact anchor value.
    for (g, m_end) in [(&g_lo, m), (&g_hi, m + 1)] {
        let s = stern(base, g)?;
        let expect = h_anchor(k, m_end)?;
        if s != expect {
            report.violations.push(Violation {
                n: g.clone(),
                s,
                bound: Rat::from_integer(Int::from(expect)),
            });
        }
    }

    let interior = &g_hi - &g_lo;
    if interior <= Nat::one() {
        return Ok(report);
    }
    check_sweep_cap(&(&interior - 1u32), cap)?;

    // s < J(n)  <=>  s * dh < H * dh + (n - G) * slope_num, all nonnegative.
    let rhs_base = &h_lo * &dh;
    let mut min_num: Option<Int> = None;
    for_each_stern_chunk(base, &(&g_lo + 1u32), &(&g_hi - 1u32), |start, values| {
        for (i, s) in values.iter().enumerate() {
            let n = start + Nat::from(i);
            let rhs = &rhs_base + (&n - &g_lo) * &slope_num;
            let lhs = s * &dh;
            let margin_num = Int::from(rhs) - Int::from(lhs);
            report.checked += 1;
            if !margin_num.is_positive() {
                report.violations.push(Violation {
                    n,
                    s: s.clone(),
                    bound: Rat::new(
                        margin_num.clone() + Int::from(s * &dh),
                        Int::from(dh.clone()),
                    ),
                });
            } else if min_num.as_ref().is_none_or(|cur| margin_num < *cur) {
                min_num = Some(margin_num);
            }
        }
    })?;
    report.min_margin = min_num.map(|n| Rat::new(n, Int::from(dh)));
    Ok(report)
}

/// Check `s_b(n) < f_k(n - b^k)` for every `n` in `(b^k, b^k + h_k]`, with
/// relative margin [`F_MARGIN`].
pub fn verify_theorem5(base: u32, k: u32, cap: u64) -> Result<BoundReport<f64>> {
    check_base(base)?;
    if k < 3 {
        return Err(Error::domain("envelope sweep needs k >= 3"));
    }
    let bk = Nat::from(base).pow(k);
    let hk = h(base, k)?;
    check_sweep_cap(&hk, cap)?;
    let mut report = BoundReport {
        base,
        k,
        checked: 0,
        violations: Vec::new(),
        min_margin: None,
    };
    let mut x = 0f64;
    for_each_stern_chunk(base, &(&bk + 1u32), &(&bk + &hk), |start, values| {
        for (i, s) in values.iter().enumerate() {
            x += 1.0;
            let f = f_bound(base, k, x).expect("x > 0");
            let margin = f - s.to_f64().unwrap();
            report.checked += 1;
            if margin <= F_MARGIN * f.max(1.0) {
                report.violations.push(Violation {
                    n: start + Nat::from(i),
                    s: s.clone(),
                    bound: f,
                });
            }
            if report.min_margin.is_none_or(|cur| margin < cur) {
                report.min_margin = Some(margin);
            }
        }
    })?;
    Ok(report)
}

/// Convergence probe for the limsup constant at `u_k = b^k + h_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimsupProbe {
    pub base: u32,
    pub k: u32,
    pub u_k: Nat,
    /// `s_b(u_k)`, exactly `F_{k+2}`.
    pub s_value: Nat,
    /// `s_b(u_k) / u_k^(log_b phi)`.
    pub ratio: f64,
    /// `(b^2 - 1)^(log_b phi) / sqrt(5)`.
    pub constant: f64,
    /// `ratio - constant`.
    pub gap: f64,
}

/// Exponent `log_base(phi)`.
pub fn log_base_phi(base: u32) -> f64 {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    phi.ln() / (base as f64).ln()
}

/// The limsup constant `(base^2 - 1)^(log_base phi) / sqrt(5)`.
pub fn limsup_constant(base: u32) -> f64 {
    let b2 = (base as f64) * (base as f64) - 1.0;
    b2.powf(log_base_phi(base)) / 5f64.sqrt()
}

pub fn limsup_probe(base: u32, k: u32) -> Result<LimsupProbe> {
    check_base(base)?;
    if k < 3 {
        return Err(Error::domain("limsup probe needs k >= 3"));
    }
    let u_k = Nat::from(base).pow(k) + h(base, k)?;
    let s_value = fib(k as i64 + 2).to_biguint().unwrap();
    let alpha = log_base_phi(base);
    let ratio = s_value.to_f64().unwrap() / (alpha * u_k.to_f64().unwrap().ln()).exp();
    let constant = limsup_constant(base);
    Ok(LimsupProbe {
        base,
        k,
        u_k,
        s_value,
        ratio,
        constant,
        gap: ratio - constant,
    })
}

/// Exhaustive check of the base-2 reflection identity
/// `s_2(2^k + x) = s_2(2^(k+1) - x)` for `1 <= x <= 2^k`. Mismatches are
/// recorded with the reflected value in the `bound` slot.
pub fn symmetry_check(k: u32, cap: u64) -> Result<BoundReport<Nat>> {
    if k == 0 {
        return Err(Error::domain("symmetry check needs k >= 1"));
    }
    let half = Nat::from(2u32).pow(k);
    check_sweep_cap(&(&half + 1u32), cap)?;
    let lo = half.clone();
    let hi = Nat::from(2u32).pow(k + 1);
    // values[i] = s_2(2^k + i) for 0 <= i <= 2^k
    let values = stern_range(2, &lo, &hi)?;
    let top = values.len() - 1;
    let mut report = BoundReport {
        base: 2,
        k,
        checked: 0,
        violations: Vec::new(),
        min_margin: None,
    };
    for x in 1..=top {
        report.checked += 1;
        if values[x] != values[top - x] {
            report.violations.push(Violation {
                n: &lo + Nat::from(x),
                s: values[x].clone(),
                bound: values[top - x].clone(),
            });
        }
    }
    Ok(report)
}

/// Both sides of the four-term identity: the sequence value
/// `s_b(1 + b^x1 + b^(x1+x2) + b^(x1+x2+x3))` and the closed form
/// `x1 x2 x3 + x1 x2 + x1 x3 + x2 x3 + x2 - 1`. Callers assert equality;
/// the value is base-independent.
pub fn identity_eq30(base: u32, x1: u32, x2: u32, x3: u32) -> Result<(Nat, Nat)> {
    check_base(base)?;
    if x1 == 0 || x2 == 0 || x3 == 0 {
        return Err(Error::domain("identity needs positive exponent gaps"));
    }
    let b = Nat::from(base);
    let n = Nat::one() + b.pow(x1) + b.pow(x1 + x2) + b.pow(x1 + x2 + x3);
    let (p1, p2, p3) = (x1 as u64, x2 as u64, x3 as u64);
    let formula = Nat::from(p1 * p2 * p3 + p1 * p2 + p1 * p3 + p2 * p3 + p2 - 1);
    Ok((stern(base, &n)?, formula))
}

/// Transfer-matrix route to the same count: exponents
/// `{x1, x1+x2, x1+x2+x3}` of the number being over-expanded.
pub fn identity_eq30_transfer(x1: u32, x2: u32, x3: u32) -> Result<Nat> {
    let set = ExponentSet::new(vec![x1, x1 + x2, x1 + x2 + x3])?;
    theorem2_count(&set)
}

/// Sampled monotonicity of `x -> J_{k,m}(b^k + x) / (b^k + x)^(log_b phi)`
/// on `[0, h_{m+1}]`, with `h_m` forced onto the grid. `min_margin` is the
/// smallest step delta; decreases beyond `THETA_TOL` relative are
/// violations.
pub fn theta_monotonicity_check(
    base: u32,
    k: u32,
    m: u32,
    samples: u32,
) -> Result<BoundReport<f64>> {
    check_base(base)?;
    if k < 5 || m < 2 || m >= k {
        return Err(Error::domain(format!(
            "monotonicity check needs k >= 5 and 2 <= m <= k-1, got k={k}, m={m}"
        )));
    }
    let samples = samples.max(2);
    let bk = Nat::from(base).pow(k).to_f64().unwrap();
    let h_m = h(base, m)?.to_f64().unwrap();
    let h_m1 = h(base, m + 1)?.to_f64().unwrap();
    let alpha = log_base_phi(base);
    let slope = (fib(m as i64 - 1) * Int::from(k - m)).to_f64().unwrap() / (h_m1 - h_m);
    let h_anchor_f = h_anchor(k, m)?.to_f64().unwrap();
    let theta = |x: f64| -> f64 {
        let j = h_anchor_f + slope * (x - h_m);
        j / (alpha * (bk + x).ln()).exp()
    };

    let mut xs: Vec<f64> = (0..samples)
        .map(|i| h_m1 * i as f64 / (samples - 1) as f64)
        .collect();
    xs.push(h_m);
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();

    let mut report = BoundReport {
        base,
        k,
        checked: 0,
        violations: Vec::new(),
        min_margin: None,
    };
    let mut prev = theta(xs[0]);
    for &x in &xs[1..] {
        let cur = theta(x);
        let delta = cur - prev;
        report.checked += 1;
        if delta < -THETA_TOL * prev.abs() {
            let n = Nat::from(bk as u128) + Nat::from(x.round() as u128);
            report.violations.push(Violation {
                n: n.clone(),
                s: stern(base, &n)?,
                bound: delta,
            });
        }
        if report.min_margin.is_none_or(|cur_min| delta < cur_min) {
            report.min_margin = Some(delta);
        }
        prev = cur;
    }
    Ok(report)
}
