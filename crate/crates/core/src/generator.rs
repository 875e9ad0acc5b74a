//! Generation of `R_{c,1..n}` by sweeping integer `x`.
//!
//! The count `s(k) = π(k) - π(⌊ck⌋)` of primes in `(ck, k]` is carried along
//! `k = 1, 2, ...`: it gains one when `k` is prime and loses one when the
//! window `(c(k-1), ck]` holds an integer that is prime. For every `j < n` the
//! sweep remembers the last `k` at which `s(k) = j`; once the horizon is past
//! every `R_{c,n}`, `R_{c,n} = 1 + max_{j<n} L_j`.
//!
//! Two readings of "for every `x >= R`" are supported. The default evaluates
//! the condition at integers only. The strict reading takes the infimum over
//! real `x ∈ [k, k+1)`, which is `π(k) - #{p < c(k+1)}`.

use serde::Serialize;

use crate::bounds::{horizon_estimate, upper_bound};
use crate::error::{Error, Result};
use crate::primes::{PrimeTable, TableConfig};
use crate::rational::RationalC;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    #[default]
    IntegerSweep,
    StrictReal,
}

impl Semantics {
    /// Extra table headroom the semantics needs past the horizon.
    fn lookahead(self) -> u64 {
        match self {
            Semantics::IntegerSweep => 0,
            Semantics::StrictReal => 1,
        }
    }
}

/// `R_{c,1}, ..., R_{c,n_max}` for one `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamanujanList {
    pub c: RationalC,
    pub values: Vec<u64>,
    pub n_max: u64,
    pub horizon: u64,
    pub semantics: Semantics,
}

impl RamanujanList {
    /// `R_{c,n}` for `1 <= n <= n_max`.
    pub fn get(&self, n: u64) -> Option<u64> {
        n.checked_sub(1)
            .and_then(|i| self.values.get(i as usize))
            .copied()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.values.binary_search(&p).is_ok()
    }

    pub fn last(&self) -> Option<u64> {
        self.values.last().copied()
    }

    /// Whether every c-Ramanujan prime `<= x` is in the list.
    ///
    /// `R_{c,n} <= x` forces the count at `x` to be at least `n`, so the list
    /// is complete through `x` once `n_max` reaches that count.
    pub fn covers(&self, table: &PrimeTable, x: u64) -> Result<bool> {
        if self.last().is_some_and(|r| r >= x) {
            return Ok(true);
        }
        let count = match self.semantics {
            Semantics::IntegerSweep => interval_count(table, &self.c, x)?,
            Semantics::StrictReal => strict_infimum_count(table, &self.c, x)?,
        };
        Ok(self.n_max >= count)
    }
}

/// `π(k) - π(⌊ck⌋)`, the number of primes in `(ck, k]`.
pub fn interval_count(table: &PrimeTable, c: &RationalC, k: u64) -> Result<u64> {
    let hi = table.pi(k)?;
    Ok(hi - table.pi_unchecked(c.floor_mul(k)))
}

/// `π(k) - #{p : p < c(k+1)}`, the least value of `π(x) - π(cx)` over real
/// `x ∈ [k, k+1)`.
pub fn strict_infimum_count(table: &PrimeTable, c: &RationalC, k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::invalid("strict count needs k >= 1"));
    }
    if k >= table.limit() {
        return Err(Error::OutOfRange {
            what: "strict count argument k + 1",
            value: k.saturating_add(1),
            limit: table.limit(),
        });
    }
    Ok(strict_unchecked(table, c, k))
}

#[inline]
fn strict_unchecked(table: &PrimeTable, c: &RationalC, k: u64) -> u64 {
    table.pi_unchecked(k) - table.pi_unchecked(c.ceil_mul_minus_one(k + 1))
}

/// Incremental tracker of `⌊(num·k + offset) / den⌋` as `k` advances by one.
struct FloorStep {
    num: u64,
    den: u64,
    rem: u64,
    quot: u64,
}

impl FloorStep {
    fn new(c: &RationalC, semantics: Semantics) -> Self {
        // integer: ⌊c·k⌋ at k = 0; strict: ⌊(num·(k+1) - 1)/den⌋ at k = 0
        let rem = match semantics {
            Semantics::IntegerSweep => 0,
            Semantics::StrictReal => c.numerator() - 1,
        };
        FloorStep {
            num: c.numerator(),
            den: c.denominator(),
            rem,
            quot: 0,
        }
    }

    /// Advances `k` and returns the integer newly passed, if any.
    #[inline]
    fn advance(&mut self) -> Option<u64> {
        self.rem += self.num;
        if self.rem >= self.den {
            self.rem -= self.den;
            self.quot += 1;
            Some(self.quot)
        } else {
            None
        }
    }
}

/// Runs the sweep over `1..=horizon`; returns `L_j` for `j < n_max`.
fn sweep(
    table: &PrimeTable,
    c: &RationalC,
    n_max: u64,
    horizon: u64,
    semantics: Semantics,
) -> Vec<u64> {
    debug_assert!(horizon + semantics.lookahead() <= table.limit());
    let mut last = vec![0u64; n_max as usize];
    let mut floor = FloorStep::new(c, semantics);
    let mut s: u64 = 0;
    for k in 1..=horizon {
        if table.is_prime_unchecked(k) {
            s += 1;
        }
        if let Some(m) = floor.advance() {
            if table.is_prime_unchecked(m) {
                s -= 1;
            }
        }
        if s < n_max {
            last[s as usize] = k;
        }
    }
    last
}

enum SweepOutcome {
    Done(RamanujanList),
    /// The horizon was too tight; the sweep wants a table up to this limit.
    Extend(u64),
}

fn run(
    table: &PrimeTable,
    c: &RationalC,
    n_max: u64,
    mut horizon: u64,
    semantics: Semantics,
) -> SweepOutcome {
    loop {
        let needed = horizon + semantics.lookahead();
        if needed > table.limit() {
            return SweepOutcome::Extend(needed);
        }
        let last = sweep(table, c, n_max, horizon, semantics);
        let mut values = Vec::with_capacity(n_max as usize);
        let mut running = 0;
        for &l in &last {
            running = running.max(l);
            values.push(running + 1);
        }
        if running + 1 >= horizon {
            horizon = horizon.saturating_mul(2);
            continue;
        }
        return SweepOutcome::Done(RamanujanList {
            c: *c,
            values,
            n_max,
            horizon,
            semantics,
        });
    }
}

fn check_n(n_max: u64) -> Result<()> {
    if n_max == 0 {
        Err(Error::invalid("n_max must be at least 1"))
    } else {
        Ok(())
    }
}

/// Sweeps to an explicit starting horizon (doubled while any `L_j` abuts it)
/// inside a fixed table.
pub fn generate_with_horizon(
    table: &PrimeTable,
    c: &RationalC,
    n_max: u64,
    horizon: u64,
    semantics: Semantics,
) -> Result<RamanujanList> {
    check_n(n_max)?;
    if horizon < 2 {
        return Err(Error::invalid("horizon must be at least 2"));
    }
    match run(table, c, n_max, horizon, semantics) {
        SweepOutcome::Done(list) => Ok(list),
        SweepOutcome::Extend(needed) => Err(Error::resource(format!(
            "c = {c}, n = {n_max}: sweep horizon needs a prime table up to {needed}, have {}",
            table.limit()
        ))),
    }
}

/// `R_{c,1..n_max}` using a shared table, with the horizon taken from
/// [`upper_bound`].
pub fn generate_in(
    table: &PrimeTable,
    c: &RationalC,
    n_max: u64,
    semantics: Semantics,
) -> Result<RamanujanList> {
    check_n(n_max)?;
    let cert = upper_bound::<f64>(c, n_max, Some(table))?;
    generate_with_horizon(table, c, n_max, cert.x0.max(2), semantics)
}

/// Table limit that suffices for [`generate_in`] with these arguments.
pub fn required_limit(c: &RationalC, n_max: u64, semantics: Semantics) -> Result<u64> {
    Ok(horizon_estimate(c, n_max)?.max(2) + semantics.lookahead())
}

/// Builds a table sized for `(c, n_max)` and generates into it, growing the
/// table if the horizon has to be re-extended.
pub fn generate_with_config(
    c: &RationalC,
    n_max: u64,
    semantics: Semantics,
    config: &TableConfig,
) -> Result<(RamanujanList, PrimeTable)> {
    check_n(n_max)?;
    let mut limit = required_limit(c, n_max, semantics)?;
    loop {
        let table = PrimeTable::build_with(limit, config)?;
        let cert = upper_bound::<f64>(c, n_max, Some(&table))?;
        match run(&table, c, n_max, cert.x0.max(2), semantics) {
            SweepOutcome::Done(list) => return Ok((list, table)),
            SweepOutcome::Extend(needed) => limit = needed,
        }
    }
}

/// `R_{c,1..n_max}` under integer-sweep semantics with default settings.
pub fn generate(c: &RationalC, n_max: u64) -> Result<RamanujanList> {
    generate_with_config(c, n_max, Semantics::IntegerSweep, &TableConfig::default())
        .map(|(list, _)| list)
}

/// Generates every c-Ramanujan prime up to `x`, returning the table as well
/// (it covers at least `x`).
pub fn generate_covering(
    c: &RationalC,
    x: u64,
    semantics: Semantics,
    config: &TableConfig,
) -> Result<(RamanujanList, PrimeTable)> {
    let probe = PrimeTable::build_with(x.max(2) + semantics.lookahead(), config)?;
    let count = match semantics {
        Semantics::IntegerSweep => interval_count(&probe, c, x)?,
        Semantics::StrictReal => strict_infimum_count(&probe, c, x.max(1))?,
    };
    let n_max = count.max(1);
    let need = required_limit(c, n_max, semantics)?;
    if need <= probe.limit() {
        let list = generate_in(&probe, c, n_max, semantics)?;
        return Ok((list, probe));
    }
    drop(probe);
    let (list, table) = generate_with_config(c, n_max, semantics, config)?;
    Ok((list, table))
}

/// Brute-force check of the definition: `candidate` is `R_{c,n}` iff the
/// count is at least `n` at every integer in `[candidate, horizon]` and below
/// `n` at `candidate - 1`. `horizon` must be a proven upper bound for
/// `R_{c,n}` (beyond it the count cannot fall below `n`).
pub fn verify_definition(
    table: &PrimeTable,
    c: &RationalC,
    candidate: u64,
    n: u64,
    horizon: u64,
) -> Result<bool> {
    if candidate == 0 || n == 0 {
        return Err(Error::invalid("candidate and n must be positive"));
    }
    if horizon < candidate {
        return Err(Error::invalid(format!(
            "horizon {horizon} lies below the candidate {candidate}"
        )));
    }
    if horizon > table.limit() {
        return Err(Error::OutOfRange {
            what: "verification horizon",
            value: horizon,
            limit: table.limit(),
        });
    }
    let count = |k: u64| table.pi_unchecked(k) - table.pi_unchecked(c.floor_mul(k));
    if count(candidate - 1) >= n {
        return Ok(false);
    }
    Ok((candidate..=horizon).all(|k| count(k) >= n))
}

/// [`verify_definition`] for `candidates[i]` as `R_{c,i+1}` over one shared
/// horizon, in a single descending pass that keeps the running minimum of
/// the count.
pub fn verify_definition_all(
    table: &PrimeTable,
    c: &RationalC,
    candidates: &[u64],
    horizon: u64,
) -> Result<Vec<bool>> {
    if horizon > table.limit() {
        return Err(Error::OutOfRange {
            what: "verification horizon",
            value: horizon,
            limit: table.limit(),
        });
    }
    if let Some(&bad) = candidates.iter().find(|&&x| x == 0 || x > horizon) {
        return Err(Error::invalid(format!(
            "candidate {bad} is not in [1, horizon = {horizon}]"
        )));
    }
    let count = |k: u64| table.pi_unchecked(k) - table.pi_unchecked(c.floor_mul(k));

    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(candidates[i]));
    let mut suffix_min = vec![0u64; candidates.len()];
    let mut pending = order.iter().peekable();
    let mut running = u64::MAX;
    let mut k = horizon;
    while let Some(&&i) = pending.peek() {
        running = running.min(count(k));
        while let Some(&&j) = pending.peek() {
            if candidates[j] == k {
                suffix_min[j] = running;
                pending.next();
            } else {
                break;
            }
        }
        if k == 1 {
            debug_assert!(pending.peek().is_none(), "candidate {i} left unvisited");
            break;
        }
        k -= 1;
    }

    Ok(candidates
        .iter()
        .enumerate()
        .map(|(i, &cand)| {
            let n = i as u64 + 1;
            suffix_min[i] >= n && count(cand - 1) < n
        })
        .collect())
}

/// A point where the strict real-x count dips below the integer count in a
/// way that moves some `R_{c,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SemanticsDip {
    pub k: u64,
    pub integer_count: u64,
    pub strict_count: u64,
}

/// Every `k <= horizon` where the strict infimum falls below the integer
/// count at a `k` no smaller than the affected `R_{c,n}` (`n <= n_max`). An
/// empty result certifies that both readings give the same `R_{c,1..n_max}`.
pub fn semantics_discrepancy_scan(
    table: &PrimeTable,
    c: &RationalC,
    n_max: u64,
    horizon: u64,
) -> Result<Vec<SemanticsDip>> {
    check_n(n_max)?;
    if horizon >= table.limit() {
        return Err(Error::OutOfRange {
            what: "scan horizon + 1",
            value: horizon.saturating_add(1),
            limit: table.limit(),
        });
    }
    let reference = generate_in(table, c, n_max, Semantics::IntegerSweep)?;

    let mut int_floor = FloorStep::new(c, Semantics::IntegerSweep);
    let mut strict_floor = FloorStep::new(c, Semantics::StrictReal);
    let (mut s_int, mut s_strict) = (0u64, 0u64);
    let mut dips = Vec::new();
    for k in 1..=horizon {
        if table.is_prime_unchecked(k) {
            s_int += 1;
            s_strict += 1;
        }
        if let Some(m) = int_floor.advance() {
            if table.is_prime_unchecked(m) {
                s_int -= 1;
            }
        }
        if let Some(m) = strict_floor.advance() {
            if table.is_prime_unchecked(m) {
                s_strict -= 1;
            }
        }
        if s_strict < s_int && s_strict < n_max && k >= reference.values[s_strict as usize] {
            dips.push(SemanticsDip {
                k,
                integer_count: s_int,
                strict_count: s_strict,
            });
        }
    }
    Ok(dips)
}
