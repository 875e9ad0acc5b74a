//! Distribution statistics of c-Ramanujan primes among all primes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::RamanujanList;
use crate::primes::PrimeTable;
use crate::rational::RationalC;
use crate::scalar::Real;

/// Euler–Mascheroni constant to ten digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_9;

/// Bound on the periodic remainder term dropped from the run-length variance.
pub const VARIANCE_REMAINDER_BOUND: f64 = 0.00006;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport<F> {
    pub c: RationalC,
    pub limit: u64,
    /// c-Ramanujan primes below `limit`.
    pub pi_c: u64,
    /// π(limit).
    pub pi: u64,
    pub actual_density: F,
    pub expected_density: F,
    /// `R_{c,n} / p_{⌊n/(1-c)⌋}` at `n = pi_c`; absent when `pi_c = 0`.
    pub ratio_last: Option<F>,
    pub r_last: Option<u64>,
    pub asymptotic_prime: Option<u64>,
}

fn ensure_covered(list: &RamanujanList, table: &PrimeTable, x: u64) -> Result<()> {
    if !list.covers(table, x)? {
        return Err(Error::invalid(format!(
            "list for c = {} stops at n = {} and does not cover {x}",
            list.c, list.n_max
        )));
    }
    Ok(())
}

/// `⌊n / (1 - c)⌋` in exact arithmetic.
pub fn asymptotic_index(c: &RationalC, n: u64) -> u64 {
    let den = c.denominator() as u128;
    let gap = (c.denominator() - c.numerator()) as u128;
    (n as u128 * den / gap) as u64
}

/// Density of c-Ramanujan primes among the primes below `limit`.
pub fn density<F: Real>(
    list: &RamanujanList,
    table: &PrimeTable,
    limit: u64,
) -> Result<DensityReport<F>> {
    ensure_covered(list, table, limit)?;
    let pi = table.pi(limit)?;
    let pi_c = list.values.partition_point(|&r| r < limit) as u64;
    let (ratio_last, r_last, asymptotic_prime) = if pi_c == 0 {
        (None, None, None)
    } else {
        let r = list.values[pi_c as usize - 1];
        let p = asymptotic_prime(table, &list.c, pi_c)?;
        (Some(F::of_u64(r) / F::of_u64(p)), Some(r), Some(p))
    };
    Ok(DensityReport {
        c: list.c,
        limit,
        pi_c,
        pi,
        actual_density: F::of_u64(pi_c) / F::of_u64(pi.max(1)),
        expected_density: list.c.complement().to_real(),
        ratio_last,
        r_last,
        asymptotic_prime,
    })
}

fn asymptotic_prime(table: &PrimeTable, c: &RationalC, n: u64) -> Result<u64> {
    let idx = asymptotic_index(c, n);
    table.nth_prime(idx).map_err(|_| {
        Error::resource(format!(
            "p_{idx} (asymptotic prime for n = {n}) lies beyond the table limit {}",
            table.limit()
        ))
    })
}

/// Fraction of primes in `[lo, hi]` that are c-Ramanujan.
pub fn density_between<F: Real>(
    list: &RamanujanList,
    table: &PrimeTable,
    lo: u64,
    hi: u64,
) -> Result<F> {
    if lo > hi {
        return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
    }
    ensure_covered(list, table, hi)?;
    let primes = table.pi(hi)? - table.pi(lo.saturating_sub(1))?;
    let start = list.values.partition_point(|&r| r < lo);
    let end = list.values.partition_point(|&r| r <= hi);
    Ok(F::of_u64((end - start) as u64) / F::of_u64(primes.max(1)))
}

/// One flag per prime `p` with `lo < p < hi`: whether `p` is c-Ramanujan.
pub fn mark_primes(
    table: &PrimeTable,
    list: &RamanujanList,
    lo: u64,
    hi: u64,
) -> Result<Vec<bool>> {
    if hi <= lo {
        return Ok(Vec::new());
    }
    if hi > table.limit() {
        return Err(Error::OutOfRange {
            what: "mark interval end",
            value: hi,
            limit: table.limit(),
        });
    }
    ensure_covered(list, table, hi)?;
    Ok(table
        .primes_between(lo, hi)
        .map(|p| list.contains(p))
        .collect())
}

/// Longest block of `true` and longest block of `false`.
pub fn longest_runs(marks: &[bool]) -> (u64, u64) {
    let (mut best_t, mut best_f, mut cur) = (0u64, 0u64, 0u64);
    let mut prev = None;
    for &m in marks {
        cur = if prev == Some(m) { cur + 1 } else { 1 };
        prev = Some(m);
        if m {
            best_t = best_t.max(cur);
        } else {
            best_f = best_f.max(cur);
        }
    }
    (best_t, best_f)
}

fn check_probability<F: Real>(p: F) -> Result<()> {
    if p > F::zero() && p < F::one() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "probability {p} must lie in (0, 1)"
        )))
    }
}

/// Asymptotic mean of the longest head run in `n` tosses of a coin with
/// head probability `p`:
/// `ln n / ln(1/p) - (1/2 - (ln(1-p) + γ) / ln(1/p))`.
pub fn schilling_expected<F: Real>(n: u64, p: F) -> Result<F> {
    check_probability(p)?;
    if n < 2 {
        return Err(Error::invalid(format!("need at least two tosses, got {n}")));
    }
    let inv = p.recip().ln();
    let gamma = F::lit(EULER_GAMMA);
    Ok(F::of_u64(n).ln() / inv - (F::lit(0.5) - ((F::one() - p).ln() + gamma) / inv))
}

/// `π² / (6 ln²(1/p)) + 1/12`, the variance without its bounded remainder.
pub fn schilling_variance<F: Real>(p: F) -> Result<F> {
    check_probability(p)?;
    let inv = p.recip().ln();
    Ok(F::PI() * F::PI() / (F::lit(6.0) * inv * inv) + F::lit(1.0 / 12.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport<F> {
    pub c: RationalC,
    pub lo: u64,
    pub hi: u64,
    /// Primes in `(lo, hi]`.
    pub n_primes: u64,
    /// c-Ramanujan primes in `(lo, hi]`.
    pub n_ramanujan: u64,
    pub p_ramanujan: F,
    pub longest_ram_actual: u64,
    pub longest_nonram_actual: u64,
    pub longest_ram_expected: F,
    pub longest_nonram_expected: F,
    pub variance_ram: F,
    pub variance_nonram: F,
    pub variance_remainder_bound: F,
}

/// Observed longest runs over the primes in `(lo, hi)` against the coin
/// model with the empirical probability over `(lo, hi]`.
pub fn run_report<F: Real>(
    table: &PrimeTable,
    list: &RamanujanList,
    lo: u64,
    hi: u64,
) -> Result<RunReport<F>> {
    if lo >= hi {
        return Err(Error::invalid(format!("need lo < hi, got ({lo}, {hi})")));
    }
    let marks = mark_primes(table, list, lo, hi)?;
    let (ram, nonram) = longest_runs(&marks);

    let n_primes = table.pi(hi)? - table.pi(lo)?;
    let start = list.values.partition_point(|&r| r <= lo);
    let end = list.values.partition_point(|&r| r <= hi);
    let n_ramanujan = (end - start) as u64;
    if n_primes == 0 {
        return Err(Error::invalid(format!("no primes in ({lo}, {hi}]")));
    }
    let p = F::of_u64(n_ramanujan) / F::of_u64(n_primes);
    let q = F::one() - p;
    Ok(RunReport {
        c: list.c,
        lo,
        hi,
        n_primes,
        n_ramanujan,
        p_ramanujan: p,
        longest_ram_actual: ram,
        longest_nonram_actual: nonram,
        longest_ram_expected: schilling_expected(n_primes, p)?,
        longest_nonram_expected: schilling_expected(n_primes, q)?,
        variance_ram: schilling_variance(p)?,
        variance_nonram: schilling_variance(q)?,
        variance_remainder_bound: F::lit(VARIANCE_REMAINDER_BOUND),
    })
}

/// `(n, R_{c,n} / p_{⌊n/(1-c)⌋})` at each checkpoint.
pub fn ratio_trend<F: Real>(
    list: &RamanujanList,
    table: &PrimeTable,
    checkpoints: &[u64],
) -> Result<Vec<(u64, F)>> {
    checkpoints
        .iter()
        .map(|&n| {
            let r = list.get(n).ok_or_else(|| {
                Error::resource(format!(
                    "checkpoint n = {n} exceeds the generated n_max = {}",
                    list.n_max
                ))
            })?;
            let p = asymptotic_prime(table, &list.c, n)?;
            Ok((n, F::of_u64(r) / F::of_u64(p)))
        })
        .collect()
}

/// Whether `n ln n <= R <= (2n/(1-c)) ln(2n/(1-c))`.
pub fn growth_window_holds(c: &RationalC, n: u64, r: u64) -> bool {
    let nf = n as f64;
    let scaled = 2.0 * nf / c.complement().to_f64();
    let rf = r as f64;
    nf * nf.ln() <= rf && rf <= scaled * scaled.ln()
}

/// Smallest `n` from which the window holds for every later `n` in the list.
pub fn growth_window_onset(list: &RamanujanList) -> Option<u64> {
    let mut onset = None;
    for (i, &r) in list.values.iter().enumerate().rev() {
        let n = i as u64 + 1;
        if growth_window_holds(&list.c, n, r) {
            onset = Some(n);
        } else {
            break;
        }
    }
    onset
}

/// `|density - (1-c)|` at each limit, and whether it never increases.
pub fn density_decay<F: Real>(
    list: &RamanujanList,
    table: &PrimeTable,
    limits: &[u64],
) -> Result<(Vec<(u64, F)>, bool)> {
    let mut out = Vec::with_capacity(limits.len());
    for &limit in limits {
        let rep = density::<F>(list, table, limit)?;
        out.push((limit, (rep.actual_density - rep.expected_density).abs()));
    }
    let monotone = out.windows(2).all(|w| w[1].1 <= w[0].1);
    Ok((out, monotone))
}
