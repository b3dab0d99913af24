//! Exact arithmetic for the generalized Stern sequences `s_b(n)`.
//!
//! For an integer base `b >= 2`, `s_b(n)` counts the base-`b` over-expansions
//! of `n - 1`: words over the digit alphabet `{0, 1, ..., b}` (note the extra
//! digit `b`) with nonzero leading digit that evaluate to `n - 1`. The `b = 2`
//! case is Stern's diatomic sequence, where over-expansions are the
//! hyperbinary representations.
//!
//! The crate computes `s_b(n)` by three independent routes and cross-checks
//! them against each other:
//!
//! * [`stern::stern`] — digit-pair propagation over the base-`b` digits of
//!   `n` (the recurrence route), `O(log n)` exact big-integer steps;
//! * [`stern::count_over_expansions`] — exhaustive digit search with interval
//!   pruning (the brute-force oracle, deliberately sharing no logic with the
//!   recurrence);
//! * [`transfer::theorem2_count`] — a 3x3 transfer-matrix trace for inputs
//!   whose ordinary expansion uses only digits 0 and 1.
//!
//! On top of these sit the extremal quantities (interval maxima `mu`/`nu`,
//! the anchor points `G_k(m)`/`H_k(m)`, the closed forms `gamma` and `V`)
//! and the upper-bound machinery (the secant bound `J_{k,m}`, the smooth
//! envelope `f_k`, and the limsup constant `(b^2-1)^{log_b phi} / sqrt(5)`),
//! all with exhaustive desk-scale verification sweeps behind the `sternlab`
//! CLI.
//!
//! All counting paths are exact (arbitrary precision); floating point enters
//! only where `phi` or `log_b` genuinely appears (the envelope bound and the
//! limsup probe), and every such comparison carries an explicit margin.

pub mod bounds;
pub mod cli;
pub mod digits;
mod error;
pub mod extremal;
pub mod fib;
pub mod stern;
pub mod transfer;

pub use error::Error;

/// Unbounded nonnegative integer. Indices `n`, sequence values, `h_m`, and
/// anchor points all live here; arithmetic never overflows.
pub type Nat = num_bigint::BigUint;

/// Unbounded signed integer, for Fibonacci/Lucas numbers at negative indices
/// and signed intermediate expressions.
pub type Int = num_bigint::BigInt;

/// Exact rational, for the secant bound `J_{k,m}` and exact inequality checks.
pub type Rat = num_rational::BigRational;

/// Transfer matrix with unbounded nonnegative integer entries.
pub type Matrix = transfer::Matrix3<Nat>;

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on interval-sweep sizes (number of `n` values scanned).
pub const DEFAULT_SWEEP_CAP: u64 = 2_000_000;

/// Default cap on the number of words an enumeration may emit.
pub const DEFAULT_ENUM_CAP: usize = 1_000_000;
