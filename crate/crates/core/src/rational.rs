//! Exact representation of the interval parameter `c`.
//!
//! Every boundary decision in the sweep (`⌊ck⌋`, whether `(c(k-1), ck]`
//! contains an integer, `p < c(k+1)`) is answered with integer arithmetic on
//! the reduced fraction. Products are widened to `u128`, so no input in the
//! `u64` domain can overflow.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::NumCast;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A rational number strictly between 0 and 1, stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RationalC {
    numerator: u64,
    denominator: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl RationalC {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if numerator == 0 || numerator >= denominator {
            return Err(Error::invalid(format!(
                "c = {numerator}/{denominator} must lie strictly between 0 and 1"
            )));
        }
        let g = gcd(numerator, denominator);
        Ok(RationalC {
            numerator: numerator / g,
            denominator: denominator / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// `⌊c·k⌋` in exact arithmetic.
    #[inline]
    pub fn floor_mul(&self, k: u64) -> u64 {
        match self.numerator.checked_mul(k) {
            Some(p) => p / self.denominator,
            // c < 1 so the quotient is below k and fits back into u64.
            None => ((self.numerator as u128 * k as u128) / self.denominator as u128) as u64,
        }
    }

    /// The unique integer `m` with `c(k-1) < m <= ck`, if there is one.
    ///
    /// The half-open interval has length `c < 1`, so it holds at most one
    /// integer, and it holds one exactly when `⌊ck⌋` steps up from `⌊c(k-1)⌋`.
    pub fn integer_in_step(&self, k: u64) -> Option<u64> {
        if k == 0 {
            return None;
        }
        let m = self.floor_mul(k);
        (m > self.floor_mul(k - 1)).then_some(m)
    }

    /// Largest integer `q` with `q < c·x`, i.e. `⌈cx⌉ - 1`, for `x >= 1`.
    pub fn ceil_mul_minus_one(&self, x: u64) -> u64 {
        let prod = self.numerator as u128 * x as u128;
        ((prod - 1) / self.denominator as u128) as u64
    }

    /// `1 - c`, which is again in `(0, 1)`.
    pub fn complement(&self) -> RationalC {
        RationalC::new(self.denominator - self.numerator, self.denominator)
            .expect("complement of a value in (0,1) stays in (0,1)")
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    pub fn to_real<F: Real>(&self) -> F {
        let n: F = NumCast::from(self.numerator).expect("u64 converts to float");
        let d: F = NumCast::from(self.denominator).expect("u64 converts to float");
        n / d
    }

    /// Number of decimal places needed to write `c` exactly, if it is a
    /// terminating decimal with at most 18 digits after the point.
    pub fn decimal_places(&self) -> Option<u32> {
        (0..=18u32).find(|&d| 10u128.pow(d) % self.denominator as u128 == 0)
    }

    /// Decimal form with at least `min_places` digits, or `a/b` when `c`
    /// has no terminating decimal expansion.
    pub fn display_decimal(&self, min_places: u32) -> String {
        match self.decimal_places() {
            Some(d) => {
                let places = d.max(min_places);
                let scale = 10u128.pow(places);
                let scaled = self.numerator as u128 * scale / self.denominator as u128;
                format!("0.{:0width$}", scaled, width = places as usize)
            }
            None => self.to_string(),
        }
    }
}

impl fmt::Display for RationalC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl PartialOrd for RationalC {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalC {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

fn parse_u64(s: &str, input: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::invalid(format!("cannot parse `{input}` as a rational c")))
}

/// Parses a non-negative decimal such as `0.45` into `(numerator, 10^d)`.
fn parse_decimal(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::invalid(format!("cannot parse `{s}` as a decimal"));
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|ch| ch.is_ascii_digit())
        || !frac_part.chars().all(|ch| ch.is_ascii_digit())
        || frac_part.len() > 18
    {
        return Err(bad());
    }
    let scale = 10u64.pow(frac_part.len() as u32);
    let int_val: u64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let frac_val: u64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| bad())?
    };
    let num = int_val
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac_val))
        .ok_or_else(bad)?;
    Ok((num, scale))
}

impl FromStr for RationalC {
    type Err = Error;

    /// Accepts `a/b` or a decimal; `0.45` is read exactly as `45/100 = 9/20`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num = parse_u64(a, s)?;
            let den = parse_u64(b, s)?;
            if den == 0 {
                return Err(Error::invalid(format!("zero denominator in `{s}`")));
            }
            RationalC::new(num, den)
        } else {
            let (num, den) = parse_decimal(s)?;
            RationalC::new(num, den)
        }
    }
}

/// Parses a grid of `c` values: either `start:end:step` (inclusive, exact
/// decimal or fractional steps) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<RationalC>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!(
                "grid `{text}` must have the form start:end:step"
            )));
        }
        let start: RationalC = parts[0].parse()?;
        let end: RationalC = parts[1].parse()?;
        let step: RationalC = parts[2].parse()?;
        let mut out = Vec::new();
        // Walk on the common denominator so every grid point stays exact.
        let den = lcm(lcm(start.denominator, end.denominator), step.denominator);
        let scale = |r: RationalC| r.numerator * (den / r.denominator);
        let (mut cur, last, inc) = (scale(start), scale(end), scale(step));
        while cur <= last {
            out.push(RationalC::new(cur, den)?);
            cur += inc;
        }
        if out.is_empty() {
            return Err(Error::invalid(format!("grid `{text}` is empty")));
        }
        Ok(out)
    } else {
        text.split(',').map(|s| s.parse()).collect()
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
