//! Sieve-backed prime oracle.
//!
//! Primality of odd numbers is stored one bit per odd integer, with a
//! cumulative popcount per 64-bit word. That answers `is_prime` and `π(k)` in
//! constant time and `p_n` with a binary search over the word ranks, at
//! roughly `limit / 10.7` bytes.
//!
//! The table is filled by a segmented sieve of Eratosthenes: each segment of
//! words is sieved independently by the base primes up to `√limit`, so
//! segments can be processed in parallel without changing the result.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Odd-number flags per segment by default (2^18, a few hundred KiB of
/// scratch per worker).
pub const DEFAULT_SEGMENT_BITS: usize = 1 << 18;

/// Default ceiling on table memory: 2 GiB.
pub const DEFAULT_MEM_CAP: u64 = 2 << 30;

/// Ranks are stored as `u32`; π(10^11) = 4 118 054 813 still fits.
pub const MAX_LIMIT: u64 = 100_000_000_000;

const WORD_BITS: u64 = 64;
// Each word covers 64 odd numbers, i.e. 128 consecutive integers.
const WORD_SPAN: u64 = 2 * WORD_BITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableConfig {
    /// Odd-number flags sieved per segment; rounded up to whole words.
    pub segment_bits: usize,
    /// Upper bound on the bytes the finished table may occupy.
    pub mem_cap: u64,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            segment_bits: DEFAULT_SEGMENT_BITS,
            mem_cap: DEFAULT_MEM_CAP,
        }
    }
}

impl TableConfig {
    pub fn with_mem_cap(mem_cap: u64) -> Self {
        TableConfig {
            mem_cap,
            ..Default::default()
        }
    }

    /// Bytes a table up to `limit` will occupy.
    pub fn estimated_bytes(limit: u64) -> u64 {
        let words = limit / WORD_SPAN + 1;
        words * (8 + 4)
    }
}

/// Immutable prime table for `2 <= k <= limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    // bit j of words[w] <=> 2*(64w + j) + 1 is prime
    words: Vec<u64>,
    // odd primes in words[..w]
    ranks: Vec<u32>,
    prime_count: u64,
}

impl PrimeTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with(limit, &TableConfig::default())
    }

    pub fn build_with(limit: u64, config: &TableConfig) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!(
                "prime table limit must be at least 2, got {limit}"
            )));
        }
        if limit > MAX_LIMIT {
            return Err(Error::resource(format!(
                "prime table limit {limit} exceeds the supported maximum {MAX_LIMIT}"
            )));
        }
        let needed = TableConfig::estimated_bytes(limit);
        if needed > config.mem_cap {
            return Err(Error::resource(format!(
                "a prime table up to {limit} needs {needed} bytes, above the memory cap of {} bytes",
                config.mem_cap
            )));
        }

        let last_index = (limit - 1) / 2; // largest odd number <= limit
        let n_words = (last_index / WORD_BITS + 1) as usize;
        let base = base_primes(isqrt(limit));
        let seg_words = config.segment_bits.div_ceil(WORD_BITS as usize).max(1);

        let mut words = vec![!0u64; n_words];
        words
            .par_chunks_mut(seg_words)
            .enumerate()
            .for_each(|(s, chunk)| sieve_segment(chunk, (s * seg_words) as u64, &base));

        // 1 is not prime.
        words[0] &= !1;
        // Clear flags past the limit in the final word.
        let tail_bits = last_index % WORD_BITS + 1;
        if tail_bits < WORD_BITS {
            words[n_words - 1] &= (1u64 << tail_bits) - 1;
        }

        let mut ranks = Vec::with_capacity(words.len());
        let mut acc: u64 = 0;
        for w in &words {
            ranks.push(acc as u32);
            acc += w.count_ones() as u64;
        }

        Ok(PrimeTable {
            limit,
            words,
            ranks,
            prime_count: acc + 1, // plus the even prime
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// π(limit).
    pub fn prime_count(&self) -> u64 {
        self.prime_count
    }

    pub fn memory_bytes(&self) -> u64 {
        (self.words.len() * 8 + self.ranks.len() * 4) as u64
    }

    fn check(&self, what: &'static str, k: u64) -> Result<()> {
        if k > self.limit {
            Err(Error::OutOfRange {
                what,
                value: k,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn is_prime(&self, k: u64) -> Result<bool> {
        self.check("is_prime argument", k)?;
        Ok(self.is_prime_unchecked(k))
    }

    #[inline]
    pub(crate) fn is_prime_unchecked(&self, k: u64) -> bool {
        if k & 1 == 0 {
            return k == 2;
        }
        let i = k / 2;
        (self.words[(i / WORD_BITS) as usize] >> (i % WORD_BITS)) & 1 == 1
    }

    /// π(k), the number of primes `<= k`.
    pub fn pi(&self, k: u64) -> Result<u64> {
        self.check("pi argument", k)?;
        Ok(self.pi_unchecked(k))
    }

    #[inline]
    pub(crate) fn pi_unchecked(&self, k: u64) -> u64 {
        if k < 2 {
            return 0;
        }
        let i = (k - 1) / 2;
        let w = (i / WORD_BITS) as usize;
        let b = i % WORD_BITS;
        let mask = if b == WORD_BITS - 1 {
            !0u64
        } else {
            (1u64 << (b + 1)) - 1
        };
        1 + self.ranks[w] as u64 + (self.words[w] & mask).count_ones() as u64
    }

    /// The `n`th prime, `p_1 = 2`.
    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::invalid("prime index must be at least 1"));
        }
        if n > self.prime_count {
            return Err(Error::OutOfRange {
                what: "prime index",
                value: n,
                limit: self.limit,
            });
        }
        if n == 1 {
            return Ok(2);
        }
        let target = n - 1; // ordinal among odd primes
                            // last word whose preceding rank is below the target
        let w = self.ranks.partition_point(|&r| (r as u64) < target) - 1;
        let mut word = self.words[w];
        for _ in 1..(target - self.ranks[w] as u64) {
            word &= word - 1;
        }
        let bit = word.trailing_zeros() as u64;
        Ok(2 * (w as u64 * WORD_BITS + bit) + 1)
    }

    /// `p_m` for real `m`, read as the `⌊m⌋`th prime.
    pub fn nth_prime_floor<F: Real>(&self, m: F) -> Result<u64> {
        if !(m >= F::one()) {
            return Err(Error::invalid(format!(
                "prime index {m} must be at least 1"
            )));
        }
        let n = m
            .floor()
            .to_u64()
            .ok_or_else(|| Error::invalid(format!("prime index {m} is not representable")))?;
        self.nth_prime(n)
    }

    /// Primes `p` with `lo < p < hi`, ascending.
    pub fn primes_between(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        let hi = hi.min(self.limit.saturating_add(1));
        let two = (lo < 2 && hi > 2).then_some(2u64);
        let start = lo.saturating_add(1).max(3);
        let first = start / 2; // index of the first odd number >= start
        let end = if hi > 0 {
            (hi - 1).saturating_sub(1) / 2 + 1
        } else {
            0
        };
        two.into_iter().chain(OddPrimeIter {
            table: self,
            next_index: first,
            end_index: end.max(first),
        })
    }
}

struct OddPrimeIter<'a> {
    table: &'a PrimeTable,
    next_index: u64,
    end_index: u64,
}

impl Iterator for OddPrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next_index < self.end_index {
            let w = (self.next_index / WORD_BITS) as usize;
            let b = self.next_index % WORD_BITS;
            let word = self.table.words[w] >> b;
            if word == 0 {
                self.next_index = (w as u64 + 1) * WORD_BITS;
                continue;
            }
            let idx = self.next_index + word.trailing_zeros() as u64;
            if idx >= self.end_index {
                self.next_index = self.end_index;
                return None;
            }
            self.next_index = idx + 1;
            return Some(2 * idx + 1);
        }
        None
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Odd primes up to `n` by a plain sieve.
fn base_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut p = 3;
    while p <= n {
        if !composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    out
}

/// Strikes odd composites from one segment; `first_word` is the global index
/// of `chunk[0]`.
fn sieve_segment(chunk: &mut [u64], first_word: u64, base: &[u64]) {
    let lo = first_word * WORD_BITS;
    let hi = lo + chunk.len() as u64 * WORD_BITS;
    for &p in base {
        let square = (p * p) / 2;
        if square >= hi {
            break;
        }
        // Index i holds 2i+1; multiples of p sit at i ≡ (p-1)/2 (mod p).
        let phase = (p - 1) / 2;
        let mut i = lo + (phase + p - lo % p) % p;
        if i < square {
            i = square;
        }
        while i < hi {
            let local = i - lo;
            chunk[(local / WORD_BITS) as usize] &= !(1u64 << (local % WORD_BITS));
            i += p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    /// Unsegmented byte sieve, independent of the table's layout.
    fn plain_sieve(n: usize) -> Vec<bool> {
        let mut is = vec![true; n + 1];
        is[0] = false;
        if n >= 1 {
            is[1] = false;
        }
        let mut i = 2;
        while i * i <= n {
            if is[i] {
                let mut j = i * i;
                while j <= n {
                    is[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        is
    }

    #[test]
    fn small_tables() {
        let t = PrimeTable::build(10).unwrap();
        assert_eq!(t.pi(10).unwrap(), 4);
        assert_eq!(t.prime_count(), 4);
        let t2 = PrimeTable::build(2).unwrap();
        assert_eq!(t2.pi(2).unwrap(), 1);
        assert_eq!(t2.nth_prime(1).unwrap(), 2);
        let t3 = PrimeTable::build(3).unwrap();
        assert_eq!(t3.pi(3).unwrap(), 2);
        assert!(PrimeTable::build(1).is_err());
        assert!(PrimeTable::build(0).is_err());
    }

    #[test]
    fn pi_examples() {
        let t = PrimeTable::build(100_000).unwrap();
        assert_eq!(t.pi(0).unwrap(), 0);
        assert_eq!(t.pi(1).unwrap(), 0);
        assert_eq!(t.pi(13).unwrap(), 6);
        assert_eq!(t.pi(100_000).unwrap(), 9592);
        assert!(matches!(t.pi(100_001), Err(Error::OutOfRange { .. })));
        assert!(t.is_prime(100_001).is_err());
    }

    #[test]
    fn agrees_with_plain_sieve() {
        let n = 200_003;
        let reference = plain_sieve(n);
        let t = PrimeTable::build(n as u64).unwrap();
        let mut count = 0;
        for k in 0..=n {
            if reference[k] {
                count += 1;
            }
            assert_eq!(t.is_prime(k as u64).unwrap(), reference[k], "k = {k}");
            assert_eq!(t.pi(k as u64).unwrap(), count, "k = {k}");
        }
    }

    #[test]
    fn nth_prime_examples() {
        let t = PrimeTable::build(200_000).unwrap();
        assert_eq!(t.nth_prime(1).unwrap(), 2);
        assert_eq!(t.nth_prime(2).unwrap(), 3);
        assert_eq!(t.nth_prime_floor(7.5f64).unwrap(), 17);
        assert_eq!(t.nth_prime_floor(7.5f32).unwrap(), 17);
        assert_eq!(t.nth_prime(300).unwrap(), 1987);
        assert_eq!(t.nth_prime(10_000).unwrap(), 104_729);
        assert!(t.nth_prime(0).is_err());
        assert!(t.nth_prime_floor(0.5f64).is_err());
        assert!(t.nth_prime(t.prime_count() + 1).is_err());
        let last = t.nth_prime(t.prime_count()).unwrap();
        assert_eq!(t.pi(last).unwrap(), t.prime_count());
    }

    #[test]
    fn segment_size_does_not_matter() {
        let limit = 300_001;
        let a = PrimeTable::build_with(
            limit,
            &TableConfig {
                segment_bits: 64,
                ..Default::default()
            },
        )
        .unwrap();
        let b = PrimeTable::build_with(
            limit,
            &TableConfig {
                segment_bits: 1000,
                ..Default::default()
            },
        )
        .unwrap();
        let c = PrimeTable::build(limit).unwrap();
        assert_eq!(a.words, c.words);
        assert_eq!(b.words, c.words);
        assert_eq!(a.ranks, c.ranks);
    }

    #[test]
    fn memory_cap_is_enforced() {
        let err = PrimeTable::build_with(10_000_000, &TableConfig::with_mem_cap(1000)).unwrap_err();
        match err {
            Error::ResourceLimit(msg) => assert!(msg.contains("1000")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn primes_between_open_interval() {
        let t = PrimeTable::build(1000).unwrap();
        let v: Vec<u64> = t.primes_between(0, 12).collect();
        assert_eq!(v, vec![2, 3, 5, 7, 11]);
        let v: Vec<u64> = t.primes_between(2, 11).collect();
        assert_eq!(v, vec![3, 5, 7]);
        assert_eq!(t.primes_between(5, 5).count(), 0);
        assert_eq!(t.primes_between(0, 2).count(), 0);
        assert_eq!(t.primes_between(0, 3).collect::<Vec<_>>(), vec![2]);
        assert_eq!(t.primes_between(0, 5000).count() as u64, t.prime_count());
        let high: Vec<u64> = t.primes_between(990, 5000).collect();
        assert_eq!(high, vec![991, 997]);
    }

    #[test]
    fn pi_step_invariant() {
        let t = PrimeTable::build(50_000).unwrap();
        for k in 2..=50_000u64 {
            let step = t.pi(k).unwrap() - t.pi(k - 1).unwrap();
            assert_eq!(step == 1, t.is_prime(k).unwrap());
            assert!(t.nth_prime(t.pi(k).unwrap()).unwrap() <= k);
        }
    }

    #[test]
    fn million() {
        let t = PrimeTable::build(1_000_000).unwrap();
        assert_eq!(t.pi(1_000_000).unwrap(), 78_498);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn sampled_trial_division(k in 0u64..1_000_000) {
            use std::sync::OnceLock;
            static TABLE: OnceLock<PrimeTable> = OnceLock::new();
            let t = TABLE.get_or_init(|| PrimeTable::build(1_000_000).unwrap());
            prop_assert_eq!(t.is_prime(k).unwrap(), trial_division(k));
        }
    }
}
