//! Analytic search horizons for `R_{c,n}`.
//!
//! From the Rosser–Schoenfeld inequalities
//!
//! ```text
//! x / (ln x - 1/2) < π(x)          for x >= 67
//! π(y) < y / (ln y - 3/2)          for y > e^{3/2}
//! ```
//!
//! applied at `x` and `y = cx`, the interval `(cx, x]` holds more than
//!
//! ```text
//! f(x) = x / (ln x - 1/2) - c·x / (ln x - A),     A = 3/2 - ln c
//! ```
//!
//! primes. Substituting `u = ln x - 1/2` into `f'(x) >= 0` gives the cubic
//! `(u - 1)(u - (A - 1/2))² - c(u - (A + 1/2))u² >= 0`; past its greatest real
//! root `u_c`, and past both validity thresholds, `f` is increasing. Any
//! `x0 >= M_c` with `f(x0) >= n` therefore bounds `R_{c,n}` from above.
//!
//! For `c <= 1/2` the Ramanujan-prime bound `R_{1/2,n} < p_{3n}` (n >= 2)
//! combined with monotonicity in `c` gives a second, usually much tighter,
//! certificate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::rational::RationalC;
use crate::scalar::Real;

/// Beyond this the analytic search gives up with a resource-limit error.
pub const DEFAULT_X_CEILING: f64 = 1e15;

/// Relative width at which the `f(x) = n` bisection stops.
pub const SOLVE_REL_TOL: f64 = 1e-6;

/// Relative width at which cubic root brackets stop.
pub const ROOT_REL_TOL: f64 = 1e-12;

/// Multiplicative slack applied to analytic bounds before rounding up.
pub const ROUNDING_SLACK: f64 = 1e-9;

/// Lower end of the `x / (ln x - 1/2) < π(x)` range.
pub const PI_LOWER_FROM: f64 = 67.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    AnalyticF,
    P3nFallback,
}

/// An integer `x0` with `R_{c,n} <= x0`, plus the quantities that justify it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCertificate<F> {
    pub c: RationalC,
    pub n: u64,
    pub x0: u64,
    pub method: BoundMethod,
    /// `A = 3/2 - ln c`; present for analytic certificates.
    pub a: Option<F>,
    pub u_c: F,
    pub m_c: F,
}

fn slack<F: Real>() -> F {
    F::lit(ROUNDING_SLACK).max(F::epsilon() * F::lit(8.0))
}

fn root_tol<F: Real>() -> F {
    F::lit(ROOT_REL_TOL).max(F::epsilon() * F::lit(4.0))
}

fn solve_tol<F: Real>() -> F {
    F::lit(SOLVE_REL_TOL).max(F::epsilon() * F::lit(4.0))
}

fn ln_c<F: Real>(c: &RationalC) -> F {
    F::of_u64(c.numerator()).ln() - F::of_u64(c.denominator()).ln()
}

/// `A = 3/2 - ln c` for a real `c` in `(0, 1)`.
pub fn a_constant_real<F: Real>(c: F) -> F {
    F::lit(1.5) - c.ln()
}

/// `A = 3/2 - ln c`; always greater than 3/2.
pub fn constant_a<F: Real>(c: &RationalC) -> F {
    F::lit(1.5) - ln_c::<F>(c)
}

/// Smallest `x` at which both prime-counting inequalities behind `f` apply:
/// `x >= 67` and `cx > e^{3/2}` (the second is strict).
pub fn f_validity_threshold<F: Real>(c: &RationalC) -> F {
    F::lit(PI_LOWER_FROM).max(F::lit(1.5).exp() / c.to_real::<F>())
}

fn f_unchecked<F: Real>(c: F, a: F, x: F) -> F {
    let l = x.ln();
    x / (l - F::lit(0.5)) - c * x / (l - a)
}

/// The lower bound `f(x)` on `π(x) - π(cx)`.
pub fn f_lower<F: Real>(c: &RationalC, x: F) -> Result<F> {
    let cf = c.to_real::<F>();
    let cx_floor = F::lit(1.5).exp();
    if !(x >= F::lit(PI_LOWER_FROM)) || !(cf * x > cx_floor) {
        return Err(Error::invalid(format!(
            "f(x) needs x >= 67 and x > e^(3/2)/c = {}; got x = {x}",
            cx_floor / cf
        )));
    }
    Ok(f_unchecked(cf, constant_a::<F>(c), x))
}

/// Coefficients of the monotonicity cubic, highest degree first.
pub fn monotonicity_cubic<F: Real>(c: &RationalC) -> [F; 4] {
    let cf = c.to_real::<F>();
    let a = constant_a::<F>(c);
    let half = F::lit(0.5);
    let s = a - half;
    let t = a + half;
    let one = F::one();
    let two = F::lit(2.0);
    // (u-1)(u-s)^2 = u^3 - (2s+1)u^2 + (s^2+2s)u - s^2 ;  c(u-t)u^2 = c u^3 - ct u^2
    [
        one - cf,
        -(two * s + one) + cf * t,
        s * s + two * s,
        -(s * s),
    ]
}

pub fn eval_cubic<F: Real>(coeffs: &[F; 4], u: F) -> F {
    ((coeffs[0] * u + coeffs[1]) * u + coeffs[2]) * u + coeffs[3]
}

fn bisect_root<F: Real>(coeffs: &[F; 4], mut lo: F, mut hi: F) -> F {
    let tol = root_tol::<F>();
    let mut p_lo = eval_cubic(coeffs, lo);
    for _ in 0..400 {
        let mid = (lo + hi) / F::lit(2.0);
        if hi - lo <= tol * mid.abs().max(F::one()) {
            return mid;
        }
        let p_mid = eval_cubic(coeffs, mid);
        if p_mid == F::zero() {
            return mid;
        }
        if (p_mid > F::zero()) == (p_lo > F::zero()) {
            lo = mid;
            p_lo = p_mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / F::lit(2.0)
}

/// All real roots of a cubic with nonzero leading coefficient, ascending.
///
/// The roots are bracketed by splitting `[-B, B]` (Cauchy bound of the monic
/// form) at the critical points, so each piece is monotone and holds at most
/// one sign change; each bracket is then bisected.
pub fn real_roots_cubic<F: Real>(coeffs: &[F; 4]) -> Vec<F> {
    let lead = coeffs[0];
    let monic = [
        F::one(),
        coeffs[1] / lead,
        coeffs[2] / lead,
        coeffs[3] / lead,
    ];
    let bound = F::one() + monic[1].abs().max(monic[2].abs()).max(monic[3].abs());
    let mut cuts = vec![-bound];
    let disc = monic[1] * monic[1] - F::lit(3.0) * monic[2];
    if disc > F::zero() {
        let r = disc.sqrt();
        cuts.push((-monic[1] - r) / F::lit(3.0));
        cuts.push((-monic[1] + r) / F::lit(3.0));
    }
    cuts.push(bound);

    let mut roots = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (p_lo, p_hi) = (eval_cubic(&monic, lo), eval_cubic(&monic, hi));
        if p_lo == F::zero() {
            roots.push(lo);
        } else if (p_lo < F::zero()) != (p_hi < F::zero()) && p_hi != F::zero() {
            roots.push(bisect_root(&monic, lo, hi));
        }
    }
    if eval_cubic(&monic, bound) == F::zero() {
        roots.push(bound);
    }
    roots.dedup();
    roots
}

/// Greatest real root `u_c` of the monotonicity cubic.
pub fn cubic_u_c<F: Real>(c: &RationalC) -> F {
    let coeffs = monotonicity_cubic::<F>(c);
    real_roots_cubic(&coeffs)
        .into_iter()
        .fold(F::neg_infinity(), F::max)
}

/// `M_c = max(67, e^{3/2}/c, e^{u_c + 1/2})`.
pub fn validity_threshold_m<F: Real>(c: &RationalC) -> F {
    let u_c = cubic_u_c::<F>(c);
    f_validity_threshold::<F>(c).max((u_c + F::lit(0.5)).exp())
}

/// Solves `f(x) >= n` for the smallest bracketed `x >= M_c`, returning the
/// right end of the final bracket (before slack and rounding).
pub fn analytic_solution<F: Real>(c: &RationalC, n: u64, ceiling: F) -> Result<F> {
    let cf = c.to_real::<F>();
    let a = constant_a::<F>(c);
    let m_c = validity_threshold_m::<F>(c);
    let target = F::of_u64(n);
    let valid_at = |x: F| x >= F::lit(PI_LOWER_FROM) && cf * x > F::lit(1.5).exp();

    if valid_at(m_c) && f_unchecked(cf, a, m_c) >= target {
        return Ok(m_c);
    }
    let mut hi = m_c;
    loop {
        hi = hi * F::lit(2.0);
        if hi > ceiling {
            return Err(Error::resource(format!(
                "analytic bound for c = {c}, n = {n} passes the search ceiling {ceiling}"
            )));
        }
        if f_unchecked(cf, a, hi) >= target {
            break;
        }
    }
    let mut lo = m_c;
    let tol = solve_tol::<F>();
    while hi - lo > tol * hi {
        let mid = (lo + hi) / F::lit(2.0);
        if f_unchecked(cf, a, mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn to_ceiling_u64<F: Real>(x: F) -> Result<u64> {
    (x * (F::one() + slack::<F>()))
        .ceil()
        .to_u64()
        .ok_or_else(|| Error::resource(format!("bound {x} does not fit in u64")))
}

fn fallback_applies(c: &RationalC, n: u64) -> bool {
    n >= 2 && 2 * c.numerator() <= c.denominator()
}

/// An upper bound for `R_{c,n}`.
///
/// The analytic bound is always attempted. When `c <= 1/2`, `n >= 2` and the
/// table holds at least `3n` primes, `p_{3n}` is also available and the
/// smaller of the two is returned.
pub fn upper_bound<F: Real>(
    c: &RationalC,
    n: u64,
    table: Option<&PrimeTable>,
) -> Result<BoundCertificate<F>> {
    upper_bound_with_ceiling(c, n, table, F::lit(DEFAULT_X_CEILING))
}

pub fn upper_bound_with_ceiling<F: Real>(
    c: &RationalC,
    n: u64,
    table: Option<&PrimeTable>,
    ceiling: F,
) -> Result<BoundCertificate<F>> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let u_c = cubic_u_c::<F>(c);
    let m_c = validity_threshold_m::<F>(c);
    let analytic = analytic_solution::<F>(c, n, ceiling).and_then(to_ceiling_u64);

    let fallback = match table {
        Some(t) if fallback_applies(c, n) && t.prime_count() >= 3 * n => Some(t.nth_prime(3 * n)?),
        _ => None,
    };

    let (x0, method) = match (analytic, fallback) {
        (Ok(x), Some(p)) if p < x => (p, BoundMethod::P3nFallback),
        (Ok(x), _) => (x, BoundMethod::AnalyticF),
        (Err(_), Some(p)) => (p, BoundMethod::P3nFallback),
        (Err(e), None) => return Err(e),
    };
    Ok(BoundCertificate {
        c: *c,
        n,
        x0,
        method,
        a: (method == BoundMethod::AnalyticF).then(|| constant_a::<F>(c)),
        u_c,
        m_c,
    })
}

/// A table size that is guaranteed to hold the certificate `upper_bound`
/// would return: the analytic bound, or for `c <= 1/2` the Rosser upper end
/// of `p_{3n}` when that is smaller.
pub fn horizon_estimate(c: &RationalC, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let analytic = analytic_solution::<f64>(c, n, DEFAULT_X_CEILING).and_then(to_ceiling_u64);
    let rosser = if fallback_applies(c, n) {
        let (_, high) = rosser_window::<f64>(3 * n)?;
        Some(high.ceil() as u64)
    } else {
        None
    };
    match (analytic, rosser) {
        (Ok(a), Some(r)) => Ok(a.min(r)),
        (Ok(a), None) => Ok(a),
        (Err(_), Some(r)) => Ok(r),
        (Err(e), None) => Err(e),
    }
}

/// `(m ln m + m ln ln m - m, m ln m + m ln ln m + m)`, which contains `p_m`
/// for every `m >= 6`.
pub fn rosser_window<F: Real>(m: u64) -> Result<(F, F)> {
    if m < 6 {
        return Err(Error::invalid(format!(
            "the Rosser window holds only for m >= 6, got {m}"
        )));
    }
    let mf = F::of_u64(m);
    let centre = mf * mf.ln() + mf * mf.ln().ln();
    Ok((centre - mf, centre + mf))
}
