//! Command-line entry point: point evaluation, the brute-force oracle,
//! verification suites, limsup scans, and CSV/SVG plot emission.
//!
//! Exit codes: 0 = success / all checks pass, 1 = a verification found a
//! violation, 2 = usage or domain error. All output is deterministic for
//! fixed arguments and seed.

use crate::bounds::{
    f_bound, identity_eq30, identity_eq30_transfer, j_bound, limsup_probe, symmetry_check,
    verify_theorem4, verify_theorem5,
};
use crate::extremal::{
    g_anchor, h, h_anchor, interval_max, interval_max_bruteforce, mu_nu_bruteforce, mu_nu_closed,
    nu_digit_word, prefix_maxima, IntervalSpec,
};
use crate::fib::fib;
use crate::stern::{
    count_over_expansions, enumerate_over_expansions, stern, stern_range, SternCache,
};
use crate::transfer::{matrix_m, matrix_n, theorem2_count, xi_membership, ExponentSet, Matrix3};
use crate::{Error, Matrix, Nat, Rat, Result as LibResult, DEFAULT_SWEEP_CAP};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::io::Write;
use std::str::FromStr;

const USAGE: &str = "\
usage: sternlab <command> [options]

commands:
  eval --base B N...
      print s_B(N) for each N, one per line
  oracle --base B N [--list]
      print the brute-force over-expansion count of N; with --list, also
      the expansions as digit words
  verify <suite> [--base B] [--k-max K] [--seed S]
      suites: prop1 thm1 thm2 thm3 thm4 thm5 lemma2 lemma15 lemma18
              lemma19 symmetry identity xi
      exits 1 if any check fails
  scan-limsup --base B --k K
      print u_k, s(u_k), the ratio, the limit constant, and the gap
  plot figure2 --base B --k-max K --out FILE.csv [--svg FILE.svg]
      s(n) for 1 <= n <= B^K with the envelope bound on each
      (B^k, B^k + h_k]
  plot figure3 --base B --k K --out FILE.csv [--svg FILE.svg]
      s(n) for B^K <= n <= B^K + h_K with both the secant and envelope
      bounds

environment:
  STERNLAB_SWEEP_CAP   overrides the default sweep cap (2000000)
";

enum CliError {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage_err(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Default)]
struct Flags {
    base: Option<u32>,
    k: Option<u32>,
    k_max: Option<u32>,
    seed: u64,
    out: Option<String>,
    svg: Option<String>,
    list: bool,
    positional: Vec<String>,
}

fn parse_flags(args: &[String]) -> CliResult<Flags> {
    let mut flags = Flags::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut take = |name: &str| -> CliResult<&String> {
            it.next()
                .ok_or_else(|| usage_err(format!("{name} needs a value")))
        };
        match arg.as_str() {
            "--base" => {
                flags.base = Some(parse_num(take("--base")?)?);
            }
            "--k" => {
                flags.k = Some(parse_num(take("--k")?)?);
            }
            "--k-max" => {
                flags.k_max = Some(parse_num(take("--k-max")?)?);
            }
            "--seed" => {
                flags.seed = parse_num(take("--seed")?)?;
            }
            "--out" => {
                flags.out = Some(take("--out")?.clone());
            }
            "--svg" => {
                flags.svg = Some(take("--svg")?.clone());
            }
            "--list" => {
                flags.list = true;
            }
            other if other.starts_with("--") => {
                return Err(usage_err(format!("unknown flag {other}")));
            }
            other => flags.positional.push(other.to_string()),
        }
    }
    Ok(flags)
}

fn parse_num<T: FromStr>(s: &str) -> CliResult<T> {
    s.parse()
        .map_err(|_| usage_err(format!("invalid number: {s}")))
}

fn parse_nat(s: &str) -> CliResult<Nat> {
    Nat::from_str(s).map_err(|_| usage_err(format!("invalid integer: {s}")))
}

fn sweep_cap() -> u64 {
    std::env::var("STERNLAB_SWEEP_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SWEEP_CAP)
}

/// Dispatch a full argument vector (without the program name). Returns the
/// process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(args, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            let _ = write!(err, "{USAGE}");
            2
        }
        Err(CliError::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "io error: {e}");
            2
        }
    }
}

fn dispatch(args: &[String], out: &mut dyn Write) -> CliResult<bool> {
    let Some(command) = args.first() else {
        return Err(usage_err("missing command"));
    };
    let rest = parse_flags(&args[1..])?;
    match command.as_str() {
        "eval" => cmd_eval(rest, out),
        "oracle" => cmd_oracle(rest, out),
        "verify" => cmd_verify(rest, out),
        "scan-limsup" => cmd_scan_limsup(rest, out),
        "plot" => cmd_plot(rest, out),
        other => Err(usage_err(format!("unknown command {other}"))),
    }
}

fn require_base(flags: &Flags) -> CliResult<u32> {
    flags.base.ok_or_else(|| usage_err("--base is required"))
}

fn cmd_eval(flags: Flags, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(&flags)?;
    if flags.positional.is_empty() {
        return Err(usage_err("eval needs at least one N"));
    }
    for arg in &flags.positional {
        let n = parse_nat(arg)?;
        writeln!(out, "{}", stern(base, &n)?)?;
    }
    Ok(true)
}

fn cmd_oracle(flags: Flags, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(&flags)?;
    let [arg] = flags.positional.as_slice() else {
        return Err(usage_err("oracle needs exactly one N"));
    };
    let n = parse_nat(arg)?;
    if flags.list {
        let set = enumerate_over_expansions(base, &n)?;
        writeln!(out, "{}", set.expansions.len())?;
        for w in &set.expansions {
            writeln!(out, "{w}")?;
        }
    } else {
        writeln!(out, "{}", count_over_expansions(base, &n)?)?;
    }
    Ok(true)
}

fn cmd_scan_limsup(flags: Flags, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(&flags)?;
    let k = flags.k.ok_or_else(|| usage_err("--k is required"))?;
    let p = limsup_probe(base, k)?;
    writeln!(
        out,
        "u_k={} s={} ratio={} constant={} gap={}",
        p.u_k, p.s_value, p.ratio, p.constant, p.gap
    )?;
    Ok(true)
}

fn cmd_verify(flags: Flags, out: &mut dyn Write) -> CliResult<bool> {
    let [suite] = flags.positional.as_slice() else {
        return Err(usage_err("verify needs exactly one suite name"));
    };
    let cap = sweep_cap();
    match suite.as_str() {
        "prop1" => verify_prop1(&flags, cap, out),
        "thm1" => verify_thm1(&flags, out),
        "thm2" => verify_thm2(&flags, out),
        "thm3" => verify_thm3(&flags, cap, out),
        "thm4" => verify_thm4_suite(&flags, cap, out),
        "thm5" => verify_thm5_suite(&flags, cap, out),
        "lemma2" => verify_lemma2(&flags, out),
        "lemma15" => verify_lemma15(&flags, cap, out),
        "lemma18" => verify_lemma18(&flags, out),
        "lemma19" => verify_lemma19(&flags, out),
        "symmetry" => verify_symmetry(&flags, cap, out),
        "identity" => verify_identity(&flags, out),
        "xi" => verify_xi(&flags, out),
        other => Err(usage_err(format!("unknown suite {other}"))),
    }
}

fn finish(out: &mut dyn Write, suite: &str, failures: u64) -> CliResult<bool> {
    if failures == 0 {
        writeln!(out, "{suite}: pass")?;
        Ok(true)
    } else {
        writeln!(out, "{suite}: FAIL ({failures} violations)")?;
        Ok(false)
    }
}

fn verify_prop1(flags: &Flags, cap: u64, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    let k_max = flags.k_max.unwrap_or(12);
    let mut failures = 0;
    for k in 1..=k_max {
        let closed = interval_max(base, k)?;
        let brute = interval_max_bruteforce(base, k, cap)?;
        let ok = closed == brute;
        failures += u64::from(!ok);
        writeln!(
            out,
            "prop1 b={base} k={k} max={} attaining={} {}",
            closed.0,
            closed.1.len(),
            verdict(ok)
        )?;
    }
    finish(out, "prop1", failures)
}

fn verify_thm1(flags: &Flags, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    let k_max = flags.k_max.unwrap_or(18);
    let mut failures = 0;
    for k in 2..=k_max {
        for m in 2..=k {
            let got = stern(base, &g_anchor(base, k, m)?)?;
            let expect = h_anchor(k, m)?;
            let ok = got == expect;
            failures += u64::from(!ok);
            writeln!(out, "thm1 b={base} k={k} m={m} s={got} {}", verdict(ok))?;
        }
    }
    finish(out, "thm1", failures)
}

fn verify_thm2(flags: &Flags, out: &mut dyn Write) -> CliResult<bool> {
    let mut failures = 0;

    let anchor = theorem2_count(&ExponentSet::new(vec![2, 4, 5, 9, 11])?)?;
    let ok = anchor == Nat::from(158u32);
    failures += u64::from(!ok);
    writeln!(
        out,
        "thm2 anchor {{2,4,5,9,11}} count={anchor} {}",
        verdict(ok)
    )?;

    let mut rng = SplitMix64::new(flags.seed);
    for i in 0..200 {
        let set = random_exponent_set(&mut rng, 8, 20);
        let count = theorem2_count(&set)?;
        let mut ok = true;
        for b in [2u32, 5] {
            ok &= count_over_expansions(b, &set.value(b)?)? == count;
        }
        failures += u64::from(!ok);
        writeln!(
            out,
            "thm2 set={i} l={} e_max={} count={count} {}",
            set.len() - 1,
            set.exponents().last().unwrap(),
            verdict(ok)
        )?;
    }
    finish(out, "thm2", failures)
}

fn thm3_tuples(k_max: u32) -> impl Iterator<Item = (u32, u32, u32)> {
    (3..=k_max)
        .flat_map(|k| (1..k - 1).flat_map(move |r| (0..r.div_ceil(2)).map(move |y| (k, r, y))))
}

fn verify_thm3(flags: &Flags, cap: u64, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    let k_max = flags.k_max.unwrap_or(if base == 2 { 13 } else { 9 });
    let mut failures = 0;
    for (k, r, y) in thm3_tuples(k_max) {
        let spec = IntervalSpec::new(base, k, r, y)?;
        let closed = mu_nu_closed(&spec)?;
        let brute = mu_nu_bruteforce(&spec, cap)?;
        let shape = nu_digit_word(base, &brute.nu)?;
        let ok =
            closed == brute && shape.digits_msb().iter().all(|&d| d <= 1) && shape.digit(0) == 0;
        failures += u64::from(!ok);
        writeln!(
            out,
            "thm3 b={base} k={k} r={r} y={y} mu={} nu={} {}",
            brute.mu,
            brute.nu,
            verdict(ok)
        )?;
    }
    finish(out, "thm3", failures)
}

fn verify_thm4_suite(flags: &Flags, cap: u64, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    let k_max = flags.k_max.unwrap_or(12);
    let mut failures = 0;
    for k in 3..=k_max {
        for m in 2..k {
            let report = verify_theorem4(base, k, m, cap)?;
            failures += report.violations.len() as u64;
            let margin = report
                .min_margin
                .as_ref()
                .map_or("-".to_string(), format_rat_12);
            writeln!(
                out,
                "thm4 b={base} k={k} m={m} checked={} min_margin={margin} {}",
                report.checked,
                verdict(report.passed())
            )?;
        }
    }
    finish(out, "thm4", failures)
}

fn verify_thm5_suite(flags: &Flags, cap: u64, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    let k_max = flags.k_max.unwrap_or(12);
    let mut failures = 0;
    for k in 3..=k_max {
        let report = verify_theorem5(base, k, cap)?;
        failures += report.violations.len() as u64;
        writeln!(
            out,
            "thm5 b={base} k={k} checked={} min_margin={} {}",
            report.checked,
            report.min_margin.unwrap_or(f64::NAN),
            verdict(report.passed())
        )?;
    }
    finish(out, "thm5", failures)
}

#[allow(clippy::manual_div_ceil)] // keeps the identity's written shape
fn verify_lemma2(flags: &Flags, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    let b = base as u64;
    let n_max = 100_000u64;
    let mut cache = SternCache::default();
    let mut s = |n: u64| {
        cache
            .stern(base, &Nat::from(n))
            .map(|v| v.to_u64().unwrap())
    };
    let mut failures = 0;
    let mut checked = [0u64; 2];
    for n in 1..=n_max {
        if n % (b * b) == 1 {
            checked[0] += 1;
            if s(n)? != s((n - 1) / (b * b))? + s((n + b - 1) / b)? {
                failures += 1;
            }
        }
        if n % (b * b) == b + 1 {
            checked[1] += 1;
            if s(n)? != s((n - 1) / b)? + s((n + b * b - b - 1) / (b * b))? {
                failures += 1;
            }
        }
    }
    writeln!(
        out,
        "lemma2 b={base} class=1 checked={} class=b+1 checked={}",
        checked[0], checked[1]
    )?;
    finish(out, "lemma2", failures)
}

fn verify_lemma15(flags: &Flags, cap: u64, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    let m_max = flags.k_max.unwrap_or(14);
    let ms: Vec<u32> = (6..=m_max).collect();
    let thresholds: Vec<Nat> = ms
        .iter()
        .map(|&m| g_anchor(base, m - 1, m - 3))
        .collect::<LibResult<_>>()?;
    let maxima = prefix_maxima(base, &thresholds, cap)?;
    let mut failures = 0;
    for (&m, max) in ms.iter().zip(&maxima) {
        let bound = fib(m as i64).to_biguint().unwrap();
        let ok = *max <= bound;
        failures += u64::from(!ok);
        writeln!(
            out,
            "lemma15 b={base} m={m} max_below={max} bound={bound} {}",
            verdict(ok)
        )?;
    }
    finish(out, "lemma15", failures)
}

fn verify_lemma18(flags: &Flags, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    if base != 2 {
        return Err(usage_err("lemma18 is a base-2 statement"));
    }
    let t_max = flags.k_max.unwrap_or(14);
    let mut cache = SternCache::default();
    let mut failures = 0;
    for t in 2..=t_max {
        let mut checked = 0u64;
        for x in 1..=512u64 {
            let lg = x.ilog2();
            if t < lg + 2 {
                continue;
            }
            checked += 1;
            let lhs = cache.stern(2, &(Nat::from(2u32).pow(t) + Nat::from(x)))?;
            let rhs = cache.stern(2, &Nat::from(x))? * Nat::from(t as u64 + 1 - lg as u64);
            if lhs > rhs {
                failures += 1;
            }
        }
        writeln!(out, "lemma18 t={t} checked={checked}")?;
    }
    finish(out, "lemma18", failures)
}

fn verify_lemma19(flags: &Flags, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    if base != 2 {
        return Err(usage_err("lemma19 is a base-2 statement"));
    }
    let k_max = flags.k_max.unwrap_or(13);
    let mut failures = 0;
    for k in 5..=k_max {
        for m in 4..k {
            // n in [2^k + 2^(m-1), 2^k + 2^(m-1) + h_{m-3})
            let two_k = Nat::from(2u32).pow(k);
            let lo = &two_k + Nat::from(2u32).pow(m - 1);
            let hi = &two_k + Nat::from(2u32).pow(m - 1) + h(2, m - 3)? - 1u32;
            let bound = h_anchor(k, m)?;
            let mut checked = 0u64;
            for s in stern_range(2, &lo, &hi)? {
                checked += 1;
                if s >= bound {
                    failures += 1;
                }
            }
            writeln!(out, "lemma19 k={k} m={m} checked={checked} bound={bound}")?;
        }
    }
    finish(out, "lemma19", failures)
}

fn verify_symmetry(flags: &Flags, cap: u64, out: &mut dyn Write) -> CliResult<bool> {
    if flags.base.is_some_and(|b| b != 2) {
        return Err(usage_err("the reflection identity is stated for base 2"));
    }
    let k_max = flags.k_max.unwrap_or(14);
    let mut failures = 0;
    for k in 1..=k_max {
        let report = symmetry_check(k, cap)?;
        failures += report.violations.len() as u64;
        writeln!(
            out,
            "symmetry k={k} checked={} {}",
            report.checked,
            verdict(report.passed())
        )?;
    }
    finish(out, "symmetry", failures)
}

fn verify_identity(flags: &Flags, out: &mut dyn Write) -> CliResult<bool> {
    let base = require_base(flags)?;
    let hi = flags.k_max.unwrap_or(5);
    let mut failures = 0;
    for x1 in 1..=hi {
        for x2 in 1..=hi {
            for x3 in 1..=hi {
                let (s, formula) = identity_eq30(base, x1, x2, x3)?;
                let transfer = identity_eq30_transfer(x1, x2, x3)?;
                let ok = s == formula && s == transfer;
                failures += u64::from(!ok);
                writeln!(
                    out,
                    "identity b={base} x=({x1},{x2},{x3}) s={s} formula={formula} {}",
                    verdict(ok)
                )?;
            }
        }
    }
    finish(out, "identity", failures)
}

fn verify_xi(flags: &Flags, out: &mut dyn Write) -> CliResult<bool> {
    let mut rng = SplitMix64::new(flags.seed);
    let mut failures = 0;

    // Closure: products of step matrices stay in the pattern.
    for _ in 0..200 {
        let len = 1 + rng.below(6) as usize;
        let mut acc = random_step_matrix(&mut rng);
        for _ in 1..len {
            acc = &acc * &random_step_matrix(&mut rng);
        }
        if !xi_membership(&acc) {
            failures += 1;
        }
    }
    writeln!(out, "xi closure: 200 products {}", verdict(failures == 0))?;

    // Trace positivity: nonnegative X with positive middle diagonal entry
    // against any pattern element or the identity.
    let before = failures;
    for _ in 0..200 {
        let mut x = Matrix3::from_rows(std::array::from_fn(|_| {
            std::array::from_fn(|_| Nat::from(rng.below(10)))
        }));
        let mut rows = x.rows().clone();
        rows[1][1] = Nat::from(1 + rng.below(9));
        x = Matrix3::from_rows(rows);

        let y = if rng.below(5) == 0 {
            Matrix::identity()
        } else {
            let len = 1 + rng.below(4) as usize;
            let mut acc = random_step_matrix(&mut rng);
            for _ in 1..len {
                acc = &acc * &random_step_matrix(&mut rng);
            }
            acc
        };
        if (&x * &y).trace().is_zero() {
            failures += 1;
        }
    }
    writeln!(
        out,
        "xi trace positivity: 200 pairs {}",
        verdict(failures == before)
    )?;

    if xi_membership(&Matrix::identity()) {
        failures += 1;
    }
    writeln!(
        out,
        "xi identity excluded: {}",
        verdict(!xi_membership(&Matrix::identity()))
    )?;
    finish(out, "xi", failures)
}

fn random_step_matrix(rng: &mut SplitMix64) -> Matrix {
    let t = rng.below(7) as u32;
    if rng.below(2) == 0 {
        matrix_m(t)
    } else {
        matrix_n(t)
    }
}

fn random_exponent_set(rng: &mut SplitMix64, l_max: u64, e_max: u64) -> ExponentSet {
    let l = 1 + rng.below(l_max);
    let mut picked = BTreeSet::new();
    while picked.len() < (l + 1) as usize {
        picked.insert(rng.below(e_max + 1) as u32);
    }
    ExponentSet::new(picked.into_iter().collect()).unwrap()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATION"
    }
}

/// Deterministic seeded generator for the randomized suites.
struct SplitMix64(u64);

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

// ---------------------------------------------------------------------------
// Plots
// ---------------------------------------------------------------------------

struct PlotRow {
    n: Nat,
    s: Nat,
    j: Option<Rat>,
    f: Option<f64>,
}

fn cmd_plot(flags: Flags, out: &mut dyn Write) -> CliResult<bool> {
    let [figure] = flags.positional.as_slice() else {
        return Err(usage_err("plot needs exactly one figure name"));
    };
    let base = require_base(&flags)?;
    let out_path = flags
        .out
        .as_ref()
        .ok_or_else(|| usage_err("--out is required"))?;
    let cap = sweep_cap();

    let (rows, anchors) = match figure.as_str() {
        "figure2" => {
            let k_max = flags
                .k_max
                .ok_or_else(|| usage_err("--k-max is required"))?;
            (figure2_rows(base, k_max, cap)?, Vec::new())
        }
        "figure3" => {
            let k = flags.k.ok_or_else(|| usage_err("--k is required"))?;
            figure3_rows(base, k, cap)?
        }
        other => return Err(usage_err(format!("unknown figure {other}"))),
    };

    write_csv(out_path, &rows)?;
    writeln!(out, "wrote {out_path} ({} rows)", rows.len())?;
    if let Some(svg_path) = &flags.svg {
        write_svg(svg_path, &rows, &anchors)?;
        writeln!(out, "wrote {svg_path}")?;
    }
    Ok(true)
}

/// Rows for `1 <= n <= base^k_max`, with the envelope bound filled on each
/// `(base^k, base^k + h_k]` for `3 <= k < k_max`.
fn figure2_rows(base: u32, k_max: u32, cap: u64) -> CliResult<Vec<PlotRow>> {
    if k_max < 4 {
        return Err(usage_err("figure2 needs --k-max >= 4"));
    }
    let top = Nat::from(base).pow(k_max);
    crate::extremal::check_sweep_cap(&top, cap)?;

    // Disjoint ascending envelope intervals (lo, hi], one per k.
    let mut intervals = Vec::new();
    for k in 3..k_max {
        let lo = Nat::from(base).pow(k);
        let hi = &lo + h(base, k)?;
        intervals.push((lo, hi, k));
    }

    let mut rows = Vec::new();
    let mut which = 0usize;
    crate::extremal::for_each_stern_chunk(base, &Nat::one(), &top, |start, values| {
        for (i, s) in values.iter().enumerate() {
            let n = start + Nat::from(i);
            while which < intervals.len() && n > intervals[which].1 {
                which += 1;
            }
            let f = intervals.get(which).and_then(|(lo, _, k)| {
                (n > *lo).then(|| {
                    let x = (&n - lo).to_f64().unwrap();
                    f_bound(base, *k, x).expect("x > 0")
                })
            });
            rows.push(PlotRow {
                n,
                s: s.clone(),
                j: None,
                f,
            });
        }
    })?;
    Ok(rows)
}

/// Rows for `base^k <= n <= base^k + h_k` with both bounds, plus the anchor
/// points `(G_k(m), H_k(m))` for the SVG markers.
#[allow(clippy::type_complexity)]
fn figure3_rows(base: u32, k: u32, cap: u64) -> CliResult<(Vec<PlotRow>, Vec<(Nat, Nat)>)> {
    if k < 3 {
        return Err(usage_err("figure3 needs --k >= 3"));
    }
    let lo = Nat::from(base).pow(k);
    let hk = h(base, k)?;
    crate::extremal::check_sweep_cap(&(&hk + 1u32), cap)?;
    let hi = &lo + &hk;

    let anchors: Vec<(Nat, Nat)> = (2..=k)
        .map(|m| Ok((g_anchor(base, k, m)?, h_anchor(k, m)?)))
        .collect::<LibResult<_>>()?;

    let mut rows = Vec::new();
    let mut m = 2u32;
    crate::extremal::for_each_stern_chunk(base, &lo, &hi, |start, values| {
        for (i, s) in values.iter().enumerate() {
            let n = start + Nat::from(i);
            let (j, f) = if n > lo {
                while m < k && n > anchors[(m - 1) as usize].0 {
                    m += 1;
                }
                let x = (&n - &lo).to_f64().unwrap();
                (
                    Some(j_bound(base, k, m.min(k - 1), &n).expect("2 <= m < k")),
                    Some(f_bound(base, k, x).expect("x > 0")),
                )
            } else {
                (None, None)
            };
            rows.push(PlotRow {
                n,
                s: s.clone(),
                j,
                f,
            });
        }
    })?;
    Ok((rows, anchors))
}

fn write_csv(path: &str, rows: &[PlotRow]) -> CliResult<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(file, "n,s,j_bound,f_bound")?;
    for row in rows {
        let j = row.j.as_ref().map_or(String::new(), format_rat_12);
        let f = row.f.map_or(String::new(), |v| v.to_string());
        writeln!(file, "{},{},{},{}", row.n, row.s, j, f)?;
    }
    Ok(())
}

/// Decimal rendering with 12 significant digits, round half away from zero.
fn format_rat_12(r: &Rat) -> String {
    const DIGITS: u32 = 12;
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();
    let ten = Nat::from(10u32);

    // e = floor(log10(num/den)), via digit counts then adjustment.
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    if scale_cmp(&num, &den, e) == std::cmp::Ordering::Less {
        e -= 1;
    } else if scale_cmp(&num, &den, e + 1) != std::cmp::Ordering::Less {
        e += 1;
    }

    let render = |e: i64| -> (Nat, i64) {
        // t = round(num * 10^(11 - e) / den), a 12-or-13-digit integer.
        let shift = DIGITS as i64 - 1 - e;
        let (scaled_num, scaled_den) = if shift >= 0 {
            (&num * ten.pow(shift as u32), den.clone())
        } else {
            (num.clone(), &den * ten.pow((-shift) as u32))
        };
        ((&scaled_num + &scaled_den / 2u32) / scaled_den, e)
    };

    let (mut t, mut e) = render(e);
    if t.to_string().len() > DIGITS as usize {
        (t, e) = render(e + 1);
    }
    let digits = t.to_string();
    debug_assert_eq!(digits.len(), DIGITS as usize);

    let body = if e < 0 {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), digits)
    } else if (e as usize) < DIGITS as usize - 1 {
        let (int_part, frac) = digits.split_at(e as usize + 1);
        format!("{int_part}.{frac}")
    } else {
        format!("{digits}{}", "0".repeat(e as usize + 1 - DIGITS as usize))
    };
    format!("{sign}{body}")
}

/// Compare num/den with 10^e without rationals.
fn scale_cmp(num: &Nat, den: &Nat, e: i64) -> std::cmp::Ordering {
    let ten = Nat::from(10u32);
    if e >= 0 {
        num.cmp(&(den * ten.pow(e as u32)))
    } else {
        (num * ten.pow((-e) as u32)).cmp(den)
    }
}

fn write_svg(path: &str, rows: &[PlotRow], anchors: &[(Nat, Nat)]) -> CliResult<()> {
    const W: f64 = 1000.0;
    const H: f64 = 620.0;
    const M: f64 = 40.0;

    let x_min = rows.first().map_or(0.0, |r| r.n.to_f64().unwrap());
    let x_max = rows.last().map_or(1.0, |r| r.n.to_f64().unwrap());
    let mut y_max = 1f64;
    for row in rows {
        y_max = y_max.max(row.s.to_f64().unwrap());
        if let Some(f) = row.f {
            y_max = y_max.max(f);
        }
    }
    y_max *= 1.05;

    let px = |n: f64| M + (n - x_min) / (x_max - x_min).max(1.0) * (W - 2.0 * M);
    let py = |v: f64| H - M - v / y_max * (H - 2.0 * M);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{M}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{M}\" y1=\"{M}\" x2=\"{M}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - M,
        W - M,
        H - M,
        H - M
    ));

    // Sequence values as dots.
    for row in rows {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1\" fill=\"black\"/>\n",
            px(row.n.to_f64().unwrap()),
            py(row.s.to_f64().unwrap())
        ));
    }

    // Bound curves as polylines, broken where undefined.
    for (pick, color) in [
        (
            Box::new(|r: &PlotRow| r.f) as Box<dyn Fn(&PlotRow) -> Option<f64>>,
            "green",
        ),
        (
            Box::new(|r: &PlotRow| r.j.as_ref().and_then(|j| j.to_f64())),
            "purple",
        ),
    ] {
        let mut path = String::new();
        let mut pen_down = false;
        for row in rows {
            match pick(row) {
                Some(v) => {
                    let cmd = if pen_down { 'L' } else { 'M' };
                    path.push_str(&format!(
                        "{cmd}{:.2} {:.2} ",
                        px(row.n.to_f64().unwrap()),
                        py(v)
                    ));
                    pen_down = true;
                }
                None => pen_down = false,
            }
        }
        if !path.is_empty() {
            svg.push_str(&format!(
                "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                path.trim_end()
            ));
        }
    }

    for (g, h_val) in anchors {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"blue\"/>\n",
            px(g.to_f64().unwrap()),
            py(h_val.to_f64().unwrap())
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)?;
    Ok(())
}
