//! The counting functions and representation scanners: shifted-prime
//! counts `Pi_{c,a}(x)`, representation counts `Upsilon_c(N)`, witnesses
//! for `N = floor(p^c) + q`, and exception scans.
//!
//! For `0 < c < 1` the shifted count enumerates primes `q` and counts
//! primes in the preimage interval of `q + a` (far fewer outer
//! iterations, since `q <= x^c`); for `c > 1` it enumerates `p`
//! directly. Both paths are exposed and must agree.
//!
//! `Upsilon` is implemented in both of its published forms: the displayed
//! definition counts distinct `m` (mode `distinct-m`), the proof's pair
//! sum counts primes `p` (mode `count-p`). The two differ — each record
//! stores which convention produced it.

use crate::error::{Error, Result};
use crate::exactpow::{floor_pow_value, preimage_range, Exponent};
use crate::primal::{
    count_primes_in_window, is_prime, isqrt, simple_sieve, PrimePi, DEFAULT_MEMORY_BUDGET,
};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;

/// Which definition of `Upsilon_c(N)` a count follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpsilonMode {
    /// Distinct representable `m` per the displayed definition.
    DistinctM,
    /// Primes `p` per the proof's pair sum.
    CountP,
}

impl UpsilonMode {
    pub fn as_str(self) -> &'static str {
        match self {
            UpsilonMode::DistinctM => "distinct-m",
            UpsilonMode::CountP => "count-p",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "distinct-m" => Ok(UpsilonMode::DistinctM),
            "count-p" => Ok(UpsilonMode::CountP),
            other => Err(Error::Domain(format!(
                "unknown mode `{other}` (expected distinct-m or count-p)"
            ))),
        }
    }
}

impl fmt::Display for UpsilonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of an empirical-vs-predicted table for `Pi` or `Upsilon`.
#[derive(Clone, Debug)]
pub struct CountRecord {
    pub x_or_n: u64,
    pub c: Exponent,
    pub a: u64,
    pub count: u64,
    /// `x/(c log^2 x)` for Pi rows, `N^(1/c)/log^2 N` for Upsilon rows.
    pub predicted: f64,
    pub ratio: f64,
    pub mode: Option<UpsilonMode>,
}

impl CountRecord {
    pub const CSV_HEADER: &'static str = "x_or_N,c,a,count,predicted,ratio,mode";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.x_or_n,
            self.c.as_str(),
            self.a,
            self.count,
            self.predicted,
            self.ratio,
            self.mode.map(|m| m.as_str()).unwrap_or("")
        )
    }
}

/// A checked representation `N = m + q` with `m = floor(p^c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepresentationWitness {
    pub n: u64,
    pub m: u64,
    pub p: u64,
    pub q: u64,
}

impl RepresentationWitness {
    /// Re-derive every invariant of the witness from scratch.
    pub fn validate(&self, c: &Exponent) -> Result<bool> {
        Ok(self.n == self.m + self.q
            && is_prime(self.p)
            && is_prime(self.q)
            && crate::exactpow::in_floor_class(self.p, self.m, c)?)
    }
}

fn pi_predicted(c: &Exponent, x: u64) -> f64 {
    let lg = (x as f64).ln();
    x as f64 / (c.value() * lg * lg)
}

fn upsilon_predicted(c: &Exponent, n: u64) -> f64 {
    let lg = (n as f64).ln();
    (n as f64).powf(1.0 / c.value()) / (lg * lg)
}

/// `Pi_{c,a}(x)`: primes `p <= x` with `floor(p^c) - a` prime.
pub fn count_shifted(c: &Exponent, a: u64, x: u64) -> Result<CountRecord> {
    c.require_non_integer()?;
    let count = if x < 2 {
        0
    } else if c.numerator() < c.denominator() {
        count_shifted_qmajor(c, a, x)?
    } else {
        count_shifted_pmajor(c, a, x)?
    };
    let predicted = pi_predicted(c, x);
    Ok(CountRecord {
        x_or_n: x,
        c: c.clone(),
        a,
        count,
        predicted,
        ratio: count as f64 / predicted,
        mode: None,
    })
}

/// q-major route: enumerate primes `q` with `q + a <= floor(x^c)` and
/// count primes in the preimage interval of `q + a`, clipped to `[2, x]`.
pub fn count_shifted_qmajor(c: &Exponent, a: u64, x: u64) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    let m_max = floor_pow_value(x, c)?;
    if m_max <= a + 1 {
        return Ok(0);
    }
    let p_table = PrimePi::new(x + 1)?;
    let q_hi = m_max - a; // largest admissible q (exceeds x when c > 1)
    let q_storage;
    let q_table = if q_hi <= x {
        &p_table
    } else {
        q_storage = PrimePi::new(q_hi + 1)?;
        &q_storage
    };
    let mut count = 0u64;
    for q in q_table.primes_in(2, q_hi + 1) {
        let m = q + a;
        let (lo, hi) = preimage_range(m, c)?;
        count += p_table.count_in(lo.max(2), hi.min(x + 1));
    }
    Ok(count)
}

/// p-major route: enumerate primes `p <= x` directly and test
/// `floor(p^c) - a` for primality.
pub fn count_shifted_pmajor(c: &Exponent, a: u64, x: u64) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    let table = PrimePi::new(x + 1)?;
    let primes: Vec<u64> = table.primes_in(2, x + 1).collect();
    let counts: Result<Vec<u64>> = primes
        .par_chunks(4096)
        .map(|chunk| {
            let mut local = 0u64;
            for &p in chunk {
                let m = floor_pow_value(p, c)?;
                if m >= a + 2 && is_prime(m - a) {
                    local += 1;
                }
            }
            Ok(local)
        })
        .collect();
    Ok(counts?.into_iter().sum())
}

/// Prefix counts of `Pi_{c,a}`: index `x` of the result holds the count
/// for that `x`, for every `x <= x_max`, computed in one range scan.
pub fn count_shifted_prefix(c: &Exponent, a: u64, x_max: u64) -> Result<Vec<u64>> {
    c.require_non_integer()?;
    let mut diff = vec![0u64; (x_max + 2) as usize];
    if x_max >= 2 {
        let p_table = PrimePi::new(x_max + 1)?;
        if c.numerator() < c.denominator() {
            let m_max = floor_pow_value(x_max, c)?;
            if m_max > a + 1 {
                let q_hi = m_max - a;
                let q_storage;
                let q_table = if q_hi <= x_max {
                    &p_table
                } else {
                    q_storage = PrimePi::new(q_hi + 1)?;
                    &q_storage
                };
                for q in q_table.primes_in(2, q_hi + 1) {
                    let (lo, hi) = preimage_range(q + a, c)?;
                    for p in p_table.primes_in(lo.max(2), hi.min(x_max + 1)) {
                        diff[p as usize] += 1;
                    }
                }
            }
        } else {
            for p in p_table.primes_in(2, x_max + 1) {
                let m = floor_pow_value(p, c)?;
                if m >= a + 2 && is_prime(m - a) {
                    diff[p as usize] += 1;
                }
            }
        }
    }
    let mut acc = 0u64;
    let mut counts = vec![0u64; (x_max + 1) as usize];
    for x in 0..=x_max {
        acc += diff[x as usize];
        counts[x as usize] = acc;
    }
    Ok(counts)
}

/// `Upsilon_c(N)` in the requested mode.
pub fn upsilon(c: &Exponent, n: u64, mode: UpsilonMode) -> Result<CountRecord> {
    c.require_non_integer()?;
    if n < 2 {
        return Err(Error::Domain(format!("upsilon requires N >= 2, got {n}")));
    }
    let table = PrimePi::new(n + 1)?;
    let count = match mode {
        UpsilonMode::DistinctM => {
            let qs: Vec<u64> = table.primes_in(2, n.max(2)).collect(); // q <= N - 1
            let parts: Result<Vec<u64>> = qs
                .par_chunks(512)
                .map(|chunk| {
                    let mut local = 0;
                    for &q in chunk {
                        let m = n - q;
                        if m >= 1 && smallest_prime_in_preimage(m, c)?.is_some() {
                            local += 1;
                        }
                    }
                    Ok(local)
                })
                .collect();
            parts?.into_iter().sum()
        }
        UpsilonMode::CountP => upsilon_count_p(c, n, &table)?,
    };
    let predicted = upsilon_predicted(c, n);
    Ok(CountRecord {
        x_or_n: n,
        c: c.clone(),
        a: 0,
        count,
        predicted,
        ratio: count as f64 / predicted,
        mode: Some(mode),
    })
}

/// Pair count over primes `q`: number of primes in the preimage interval
/// of each `m = N - q`. Windows past the table limit are sieved
/// individually.
fn upsilon_count_p(c: &Exponent, n: u64, table: &PrimePi) -> Result<u64> {
    let qs: Vec<u64> = table.primes_in(2, n.max(2)).collect();
    if qs.is_empty() {
        return Ok(0);
    }
    let (_, global_hi) = preimage_range(n - 1, c)?;
    if global_hi <= table.limit() {
        let parts: Result<Vec<u64>> = qs
            .par_chunks(512)
            .map(|chunk| {
                let mut local = 0;
                for &q in chunk {
                    let (lo, hi) = preimage_range(n - q, c)?;
                    local += table.count_in(lo.max(2), hi);
                }
                Ok(local)
            })
            .collect();
        return Ok(parts?.into_iter().sum());
    }
    let base = simple_sieve(isqrt(global_hi - 1));
    let parts: Result<Vec<u64>> = qs
        .par_iter()
        .map(|&q| {
            let (lo, hi) = preimage_range(n - q, c)?;
            if hi <= table.limit() {
                Ok(table.count_in(lo.max(2), hi))
            } else {
                Ok(count_primes_in_window(lo, hi, &base))
            }
        })
        .collect();
    Ok(parts?.into_iter().sum())
}

/// Counts of `Upsilon_c(N)` for every `N <= n_max`, sharing the per-`m`
/// window work across the whole range.
///
/// Index `N` of the returned vector holds the count for `N`.
pub fn upsilon_range(c: &Exponent, n_max: u64, mode: UpsilonMode) -> Result<Vec<u64>> {
    c.require_non_integer()?;
    if n_max < 2 {
        return Err(Error::Domain("upsilon_range requires n_max >= 2".into()));
    }
    let table = PrimePi::new(n_max + 1)?;
    let m_max = n_max - 2;
    let weights: Vec<u64> = match mode {
        UpsilonMode::DistinctM => {
            let mut w = vec![0u64; (m_max + 1) as usize];
            let chunks: Vec<(u64, u64)> = (1..=m_max)
                .step_by(256)
                .map(|s| (s, (s + 256).min(m_max + 1)))
                .collect();
            let parts: Result<Vec<Vec<u64>>> = chunks
                .par_iter()
                .map(|&(lo, hi)| {
                    let mut v = Vec::with_capacity((hi - lo) as usize);
                    for m in lo..hi {
                        v.push(smallest_prime_in_preimage(m, c)?.is_some() as u64);
                    }
                    Ok(v)
                })
                .collect();
            for ((lo, hi), part) in chunks.iter().zip(parts?) {
                w[*lo as usize..*hi as usize].copy_from_slice(&part);
            }
            w
        }
        UpsilonMode::CountP => preimage_prime_counts(c, m_max)?,
    };
    let counts: Vec<u64> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            if n < 3 {
                return 0;
            }
            let mut acc = 0u64;
            for q in table.primes_in(2, n) {
                let m = n - q;
                if m <= m_max {
                    acc += weights[m as usize];
                }
            }
            acc
        })
        .collect();
    Ok(counts)
}

/// Number of primes in the preimage interval of each `m <= m_max`.
///
/// The preimages tile `[lo(1), hi(m_max))`, so the per-window counts come
/// from one pass; fails with a budget error when the swept range is out
/// of desk scale (e.g. `c = 1/3` with large `m_max`).
fn preimage_prime_counts(c: &Exponent, m_max: u64) -> Result<Vec<u64>> {
    let (first_lo, _) = preimage_range(1, c)?;
    let (_, last_hi) = preimage_range(m_max, c)?;
    let span = last_hi - first_lo.min(last_hi);
    if span / 4 > DEFAULT_MEMORY_BUDGET {
        return Err(Error::RangeTooLarge {
            lo: first_lo,
            hi: last_hi,
            needed: span / 4,
            budget: DEFAULT_MEMORY_BUDGET,
        });
    }
    let base = simple_sieve(isqrt(last_hi.saturating_sub(1)));
    let counts: Result<Vec<u64>> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let (lo, hi) = preimage_range(m, c)?;
            Ok(count_primes_in_window(lo, hi, &base))
        })
        .collect();
    let mut out = vec![0u64];
    out.extend(counts?);
    Ok(out)
}

/// Smallest prime `p` with `floor(p^c) = m`, if any.
pub fn smallest_prime_in_preimage(m: u64, c: &Exponent) -> Result<Option<u64>> {
    let (lo, hi) = preimage_range(m, c)?;
    let mut n = lo.max(2);
    while n < hi {
        if is_prime(n) {
            return Ok(Some(n));
        }
        n += 1;
    }
    Ok(None)
}

/// Deterministic search for one representation `N = floor(p^c) + q`.
///
/// Scans `m` ascending and returns the witness with the smallest `m`
/// (and the smallest `p` for that `m`).
pub fn find_representation(c: &Exponent, n: u64) -> Result<Option<RepresentationWitness>> {
    c.require_non_integer()?;
    if n < 2 {
        return Err(Error::Domain(format!("N must be >= 2, got {n}")));
    }
    let table = PrimePi::new(n + 1)?;
    let mut cache = HashMap::new();
    find_with(c, n, &table, &mut cache)
}

fn find_with(
    c: &Exponent,
    n: u64,
    q_primes: &PrimePi,
    cache: &mut HashMap<u64, Option<u64>>,
) -> Result<Option<RepresentationWitness>> {
    for m in 1..=n.saturating_sub(2) {
        let q = n - m;
        if !q_primes.is_prime(q) {
            continue;
        }
        let witness_p = match cache.get(&m) {
            Some(&cached) => cached,
            None => {
                let found = smallest_prime_in_preimage(m, c)?;
                cache.insert(m, found);
                found
            }
        };
        if let Some(p) = witness_p {
            return Ok(Some(RepresentationWitness { n, m, p, q }));
        }
    }
    Ok(None)
}

/// All `N` in `[n_lo, n_hi]` with no representation, ascending.
pub fn scan_exceptions(c: &Exponent, n_lo: u64, n_hi: u64) -> Result<Vec<u64>> {
    c.require_non_integer()?;
    if n_lo < 2 || n_lo > n_hi {
        return Err(Error::Domain(format!(
            "scan_exceptions requires 2 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]"
        )));
    }
    let table = PrimePi::new(n_hi + 1)?;
    let mut cache = HashMap::new();
    let mut exceptions = Vec::new();
    for n in n_lo..=n_hi {
        if find_with(c, n, &table, &mut cache)?.is_none() {
            exceptions.push(n);
        }
    }
    Ok(exceptions)
}

/// One [`CountRecord`] per requested `x`; the ratio column exposes the
/// convergence of `count * c * log^2 x / x` toward 1.
pub fn convergence_table(c: &Exponent, a: u64, xs: &[u64]) -> Result<Vec<CountRecord>> {
    if xs.is_empty() {
        return Err(Error::EmptyInput("convergence_table xs"));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("xs must be strictly increasing".into()));
    }
    xs.iter().map(|&x| count_shifted(c, a, x)).collect()
}
