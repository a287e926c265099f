//! Segmented prime generation and the basic arithmetic functions
//! (pi, psi, omega, von Mangoldt) feeding every other module.
//!
//! The sieve marks composites with base primes >= 7 over a bitmap whose
//! candidate positions are pre-seeded by the 2*3*5 wheel; segments tile
//! the requested range exactly and are independent, so disjoint segments
//! can be sieved concurrently with deterministic merged results.

mod cache;

pub use cache::SegmentCache;

use crate::error::{Error, Result};
use crate::numeric::{par_sum_by, Kahan};
use rayon::prelude::*;

/// Default segment length, in integers (cache-friendly).
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;

/// Default memory budget for one materialized sieve call, in bytes.
pub const DEFAULT_MEMORY_BUDGET: u64 = 512 << 20;

const WHEEL: u64 = 30;
const WHEEL_RESIDUES: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];

/// A sieved window of integers `[lo, hi)` with primality flags and,
/// optionally, per-index values of the von Mangoldt function.
#[derive(Clone, Debug)]
pub struct PrimeSegment {
    lo: u64,
    hi: u64,
    flags: Vec<u64>,
    lambda: Option<Vec<f64>>,
}

impl PrimeSegment {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    /// Primality flag for `n`; panics if `n` is outside `[lo, hi)`.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n >= self.lo && n < self.hi, "n out of segment range");
        let i = n - self.lo;
        self.flags[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Iterator over the primes in the segment, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        SetBits::new(&self.flags, self.len()).map(move |i| self.lo + i)
    }

    pub fn prime_count(&self) -> u64 {
        self.flags.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Von Mangoldt values indexed by `n - lo`, if they were computed.
    pub fn lambda(&self) -> Option<&[f64]> {
        self.lambda.as_deref()
    }

    pub(crate) fn flag_words(&self) -> &[u64] {
        &self.flags
    }

    pub(crate) fn from_parts(lo: u64, hi: u64, flags: Vec<u64>) -> Self {
        PrimeSegment {
            lo,
            hi,
            flags,
            lambda: None,
        }
    }
}

struct SetBits<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
    limit: u64,
}

impl<'a> SetBits<'a> {
    fn new(words: &'a [u64], limit: u64) -> Self {
        SetBits {
            words,
            word_idx: 0,
            current: words.first().copied().unwrap_or(0),
            limit,
        }
    }
}

impl Iterator for SetBits<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as u64;
                self.current &= self.current - 1;
                let idx = self.word_idx as u64 * 64 + bit;
                if idx >= self.limit {
                    return None;
                }
                return Some(idx);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

/// Options for [`sieve_range_with`].
pub struct SieveOptions<'a> {
    pub segment_size: u64,
    pub with_lambda: bool,
    pub memory_budget: u64,
    pub cache: Option<&'a SegmentCache>,
}

impl Default for SieveOptions<'_> {
    fn default() -> Self {
        SieveOptions {
            segment_size: DEFAULT_SEGMENT_SIZE,
            with_lambda: false,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            cache: None,
        }
    }
}

/// Simple sieve of Eratosthenes; returns all primes `<= limit`.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Sieve `[lo, hi)` into segments of at most `segment_size` integers.
///
/// The concatenated segments cover `[lo, hi)` exactly; flags are correct
/// primality bits. Fails with [`Error::RangeTooLarge`] when the
/// materialized result would exceed the default memory budget.
pub fn sieve_range(lo: u64, hi: u64, segment_size: u64) -> Result<Vec<PrimeSegment>> {
    sieve_range_with(
        lo,
        hi,
        &SieveOptions {
            segment_size,
            ..SieveOptions::default()
        },
    )
}

/// [`sieve_range`] with explicit options (lambda values, budget, cache).
pub fn sieve_range_with(lo: u64, hi: u64, opts: &SieveOptions) -> Result<Vec<PrimeSegment>> {
    if lo < 2 || lo >= hi {
        return Err(Error::Domain(format!(
            "sieve_range requires 2 <= lo < hi, got [{lo}, {hi})"
        )));
    }
    if opts.segment_size < 64 {
        return Err(Error::Domain(format!(
            "segment_size must be >= 64, got {}",
            opts.segment_size
        )));
    }
    let per_entry = if opts.with_lambda { 8 } else { 0 };
    let needed = (hi - lo).div_ceil(8) + (hi - lo).saturating_mul(per_entry);
    if needed > opts.memory_budget {
        return Err(Error::RangeTooLarge {
            lo,
            hi,
            needed,
            budget: opts.memory_budget,
        });
    }

    let base = simple_sieve(isqrt(hi - 1));
    let seg = opts.segment_size;
    let count = (hi - lo).div_ceil(seg);
    (0..count)
        .into_par_iter()
        .map(|k| {
            let s_lo = lo + k * seg;
            let s_hi = (s_lo + seg).min(hi);
            if let Some(cache) = opts.cache {
                if let Some(mut hit) = cache.load(s_lo, s_hi)? {
                    if opts.with_lambda {
                        hit.lambda = Some(lambda_values(&hit, &base));
                    }
                    return Ok(hit);
                }
            }
            let mut segment = sieve_segment(s_lo, s_hi, &base);
            if let Some(cache) = opts.cache {
                cache.store(&segment)?;
            }
            if opts.with_lambda {
                segment.lambda = Some(lambda_values(&segment, &base));
            }
            Ok(segment)
        })
        .collect()
}

/// Sieve one segment `[lo, hi)` given base primes covering `sqrt(hi - 1)`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> PrimeSegment {
    debug_assert!(lo < hi);
    let len = hi - lo;
    let words = len.div_ceil(64) as usize;
    let mut flags = vec![0u64; words];

    // Seed candidates from the 2*3*5 wheel.
    let start_residue = lo % WHEEL;
    for &r in &WHEEL_RESIDUES {
        let mut n = lo - start_residue + r;
        if n < lo {
            n += WHEEL;
        }
        while n < hi {
            let i = n - lo;
            flags[(i / 64) as usize] |= 1 << (i % 64);
            n += WHEEL;
        }
    }
    for small in [1u64, 2, 3, 5] {
        if small >= lo && small < hi {
            let i = small - lo;
            if small == 1 {
                flags[(i / 64) as usize] &= !(1 << (i % 64));
            } else {
                flags[(i / 64) as usize] |= 1 << (i % 64);
            }
        }
    }

    // Strike composites with odd multiples of base primes >= 7.
    for &p in base.iter().filter(|&&p| p >= 7) {
        if p * p >= hi {
            break;
        }
        let mut start = p * p;
        if start < lo {
            let mut k = lo.div_ceil(p);
            if k % 2 == 0 {
                k += 1; // even multiples carry no wheel candidates
            }
            start = k * p;
        }
        let mut n = start;
        while n < hi {
            let i = n - lo;
            flags[(i / 64) as usize] &= !(1 << (i % 64));
            n += 2 * p;
        }
    }
    PrimeSegment {
        lo,
        hi,
        flags,
        lambda: None,
    }
}

/// Von Mangoldt values for a sieved segment: `log p` at prime powers
/// `p^k` (including the primes themselves), 0 elsewhere.
fn lambda_values(segment: &PrimeSegment, base: &[u64]) -> Vec<f64> {
    let mut lambda = vec![0.0; segment.len() as usize];
    for p in segment.primes() {
        lambda[(p - segment.lo) as usize] = (p as f64).ln();
    }
    for &p in base {
        let mut pk = p as u128 * p as u128;
        while pk < segment.hi as u128 {
            if pk >= segment.lo as u128 {
                lambda[(pk as u64 - segment.lo) as usize] = (p as f64).ln();
            }
            pk *= p as u128;
        }
    }
    lambda
}

/// Exact count of primes `<= x`.
pub fn pi(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    let segments = sieve_range(2, x + 1, DEFAULT_SEGMENT_SIZE).expect("pi within default budget");
    segments.iter().map(|s| s.prime_count()).sum()
}

/// Chebyshev `psi(x) = sum_{n <= x} Lambda(n)`, compensated summation.
pub fn psi_direct(x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    let limit = x.floor() as u64;
    let segments = sieve_range(2, limit + 1, DEFAULT_SEGMENT_SIZE).expect("psi within budget");
    let partials: Vec<f64> = segments
        .par_iter()
        .map(|seg| {
            let mut acc = Kahan::default();
            for p in seg.primes() {
                // largest k with p^k <= limit
                let mut k = 1u32;
                let mut pk = p as u128;
                while pk * p as u128 <= limit as u128 {
                    pk *= p as u128;
                    k += 1;
                }
                acc.add(k as f64 * (p as f64).ln());
            }
            acc.value()
        })
        .collect();
    let mut acc = Kahan::default();
    for v in partials {
        acc.add(v);
    }
    acc.value()
}

/// Number of distinct prime factors of `n`.
pub fn omega(n: u64) -> u32 {
    if n <= 1 {
        return 0;
    }
    let mut n = n;
    let mut count = 0;
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            count += 1;
            while n % p == 0 {
                n /= p;
            }
        }
    }
    let mut d = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6]; // wheel-30 gaps from 7
    let mut i = 0;
    while d * d <= n {
        if n % d == 0 {
            count += 1;
            while n % d == 0 {
                n /= d;
            }
        }
        d += steps[i];
        i = (i + 1) % steps.len();
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |rr| rr > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|rr| rr <= n) {
        r += 1;
    }
    r
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn sprp(n: u64, a: u64) -> bool {
    // strong probable-prime test to base a; n odd > 2
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = powmod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for u64: trial division by small primes, then
/// strong probable-prime tests with witness sets proven exhaustive for
/// the relevant ranges.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let witnesses: &[u64] = if n < 3_215_031_751 {
        &[2, 3, 5, 7]
    } else if n < 3_474_749_660_383 {
        &[2, 3, 5, 7, 11, 13]
    } else {
        &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    };
    witnesses.iter().all(|&a| sprp(n, a))
}

/// Is `n` a prime power `p^k`, `k >= 1`? Returns the prime base.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    if is_prime(n) {
        return Some(n);
    }
    for k in 2..=63u32 {
        if (1u128 << k) > n as u128 {
            break;
        }
        let r = nth_root_u64(n, k);
        if pow_checked(r, k) == Some(n) && is_prime(r) {
            return Some(r);
        }
    }
    None
}

fn pow_checked(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Floor of the k-th root of n.
pub fn nth_root_u64(n: u64, k: u32) -> u64 {
    if n == 0 || k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && pow_checked(r, k).map_or(true, |v| v > n) {
        r -= 1;
    }
    while pow_checked(r + 1, k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Bitmap of primes below a limit with O(1) rank queries.
///
/// Memory is roughly `limit * 3/16` bytes; construction fails when that
/// exceeds the budget.
pub struct PrimePi {
    limit: u64,
    words: Vec<u64>,
    ranks: Vec<u32>,
}

impl PrimePi {
    /// Build the table for primes in `[0, limit)`.
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        let needed = limit.div_ceil(8) + limit.div_ceil(64) * 4;
        if needed > budget {
            return Err(Error::RangeTooLarge {
                lo: 0,
                hi: limit,
                needed,
                budget,
            });
        }
        let nwords = limit.div_ceil(64) as usize;
        let mut words = vec![0u64; nwords];
        if limit > 2 {
            // segment boundaries are multiples of 64 so segments own
            // disjoint word ranges
            let seg = DEFAULT_SEGMENT_SIZE;
            let base = simple_sieve(isqrt(limit - 1));
            let first = 2u64;
            let chunks: Vec<(u64, u64)> = {
                let mut v = Vec::new();
                let mut s = first & !63;
                if s < 2 {
                    s = 0;
                }
                let mut cur = s;
                while cur < limit {
                    let next = ((cur + seg) & !63).min(limit);
                    v.push((cur.max(2), next));
                    cur = next;
                }
                v
            };
            let parts: Vec<(usize, Vec<u64>)> = chunks
                .par_iter()
                .map(|&(lo, hi)| {
                    let segment = sieve_segment(lo, hi, &base);
                    // re-align to absolute word positions
                    let word0 = (lo / 64) as usize;
                    let shift = lo % 64;
                    let src = segment.flag_words();
                    let outlen = (hi as usize).div_ceil(64) - word0;
                    let mut out = vec![0u64; outlen];
                    for (i, &w) in src.iter().enumerate() {
                        if shift == 0 {
                            out[i] |= w;
                        } else {
                            out[i] |= w << shift;
                            if i + 1 < outlen {
                                out[i + 1] |= w >> (64 - shift);
                            }
                        }
                    }
                    (word0, out)
                })
                .collect();
            for (word0, out) in parts {
                for (i, w) in out.into_iter().enumerate() {
                    words[word0 + i] |= w;
                }
            }
        }
        let mut ranks = Vec::with_capacity(nwords + 1);
        let mut acc = 0u32;
        for w in &words {
            ranks.push(acc);
            acc += w.count_ones();
        }
        ranks.push(acc);
        Ok(PrimePi {
            limit,
            words,
            ranks,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// pi(x): number of primes <= x. Panics if `x >= limit`.
    pub fn count_leq(&self, x: u64) -> u64 {
        assert!(x < self.limit, "PrimePi query {x} beyond limit {}", self.limit);
        let w = (x / 64) as usize;
        let mask = u64::MAX >> (63 - (x % 64));
        self.ranks[w] as u64 + (self.words[w] & mask).count_ones() as u64
    }

    /// Number of primes in `[lo, hi)`.
    pub fn count_in(&self, lo: u64, hi: u64) -> u64 {
        if hi <= lo || hi <= 1 {
            return 0;
        }
        let hi_leq = self.count_leq(hi - 1);
        if lo <= 2 {
            return hi_leq;
        }
        hi_leq - self.count_leq(lo - 1)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n < self.limit);
        self.words[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// Ascending primes in `[lo, hi)`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        let hi = hi.min(self.limit);
        PrimePiIter {
            table: self,
            word: (lo.min(hi) / 64) as usize,
            current: if lo < hi {
                let w = self.words[(lo / 64) as usize];
                w & (u64::MAX << (lo % 64))
            } else {
                0
            },
            hi,
        }
    }
}

struct PrimePiIter<'a> {
    table: &'a PrimePi,
    word: usize,
    current: u64,
    hi: u64,
}

impl Iterator for PrimePiIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as u64;
                self.current &= self.current - 1;
                let n = self.word as u64 * 64 + bit;
                if n >= self.hi {
                    return None;
                }
                return Some(n);
            }
            self.word += 1;
            if self.word as u64 * 64 >= self.hi {
                return None;
            }
            self.current = self.table.words[self.word];
        }
    }
}

/// Count primes in `[lo, hi)` by sieving just that window with the given
/// base primes (which must cover `sqrt(hi - 1)`).
pub fn count_primes_in_window(lo: u64, hi: u64, base: &[u64]) -> u64 {
    if hi <= lo {
        return 0;
    }
    let lo = lo.max(2);
    if hi <= lo {
        return 0;
    }
    debug_assert!(
        base.last().map_or(0, |&p| p * p) >= hi.saturating_sub(1)
            || base.last().map_or(0, |&p| p) >= isqrt(hi - 1),
        "base primes must cover sqrt(hi)"
    );
    sieve_segment(lo, hi, base).prime_count()
}

/// Sum of psi over many disjoint windows is not needed; this helper sums
/// prime counts over windows deterministically and in parallel.
pub fn count_primes_in_windows(windows: &[(u64, u64)], base: &[u64]) -> u64 {
    windows
        .par_iter()
        .map(|&(lo, hi)| count_primes_in_window(lo, hi, base))
        .sum()
}

/// psi via lambda-carrying segments, used as an independent route in tests.
pub fn psi_from_segments(x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    let limit = x.floor() as u64;
    let segments = sieve_range_with(
        2,
        limit + 1,
        &SieveOptions {
            with_lambda: true,
            ..SieveOptions::default()
        },
    )
    .expect("within budget");
    let n = segments.len() as u64;
    par_sum_by(n, 1, |lo, _hi| {
        let seg = &segments[lo as usize];
        let mut acc = Kahan::default();
        for &v in seg.lambda().unwrap() {
            if v != 0.0 {
                acc.add(v);
            }
        }
        acc.value()
    })
}

#[cfg(test)]
mod tests;
