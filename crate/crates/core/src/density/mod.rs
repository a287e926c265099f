//! The c-averaged densities `F_N(c)` and `F_{x,a}(c)`, the exact
//! breakpoint decomposition of the c-axis, and the integrals that
//! approach `B - A`.
//!
//! A pair `(p, r)` is active at `c` exactly when `floor(p^c) = r`, i.e.
//! on `[log r / log p, log (r+1) / log p)`. A pair enters the
//! decomposition of `[A, B]` iff that window meets `[A, B]` with
//! positive measure, decided by exact integer power comparisons
//! (`r < p^B` and `r + 1 > p^A`); this includes the boundary pairs whose
//! window starts below `A`, which the classical pair-sum notation drops
//! as `O(1)` but which carry real mass at finite scale.
//!
//! Integration is streamed: pairs are enumerated per `r` (never
//! materialized), each clipped window integrated by adaptive quadrature,
//! partials folded in a fixed order so worker count cannot change the
//! result bits.

mod logratio;

pub use logratio::LogRatio;

use crate::error::{Error, Result};
use crate::exactpow::{floor_pow_value, least_power_reaching, Exponent};
use crate::numeric::{adaptive_simpson, Kahan};
use crate::primal::PrimePi;
use crate::pscount::{upsilon, UpsilonMode};
use rayon::prelude::*;

/// Per-interval quadrature tolerance (relative).
pub const QUADRATURE_REL_TOL: f64 = 1e-8;

/// A maximal c-interval on which one pair `(p, r)` is active.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActiveInterval {
    /// `log(r) / log(p)`.
    pub c_lo: LogRatio,
    /// `log(r+1) / log(p)`.
    pub c_hi: LogRatio,
    pub p: u64,
    pub r: u64,
}

impl ActiveInterval {
    fn new(p: u64, r: u64) -> Self {
        ActiveInterval {
            c_lo: LogRatio::new(r, p),
            c_hi: LogRatio::new(r + 1, p),
            p,
            r,
        }
    }

    /// Certified soundness: `floor(p^c) = r` at a rational point strictly
    /// inside the interval, and the endpoints are the exact transition
    /// ratios.
    pub fn verify(&self) -> Result<bool> {
        debug_assert_eq!(self.c_lo.base, self.p);
        let mid = 0.5 * (self.c_lo.value() + self.c_hi.value());
        // smallest dyadic denominator whose rounding of the midpoint
        // stays strictly inside (keeps the power arithmetic cheap)
        for bits in [6u32, 8, 10, 12, 14, 16, 18, 20] {
            let den = 1u64 << bits;
            let num = (mid * den as f64).round() as u64;
            if num == 0 {
                continue;
            }
            let inside = self.c_lo.cmp_rational(num, den)? == std::cmp::Ordering::Less
                && self.c_hi.cmp_rational(num, den)? == std::cmp::Ordering::Greater;
            if inside {
                let c = Exponent::rational(num, den)?;
                return crate::exactpow::in_floor_class(self.p, self.r, &c);
            }
        }
        Ok(false)
    }
}

/// How far the pair enumeration follows the `p` axis.
///
/// `Full` is the natural bound `p < (r+1)^(1/A)` from the decomposition
/// itself. `Cap(P)` truncates at `p <= P` for exploratory runs; the
/// result is then a certified lower part of the decomposition, not the
/// whole of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PLimitPolicy {
    Full,
    Cap(u64),
}

/// One density-integral evaluation.
#[derive(Clone, Debug)]
pub struct DensityReport {
    pub n_or_x: u64,
    pub a_end: Exponent,
    pub b_end: Exponent,
    pub integral: f64,
    /// `B - A`.
    pub target: f64,
    pub abs_dev: f64,
    pub interval_count: u64,
}

impl DensityReport {
    pub const CSV_HEADER: &'static str = "N_or_x,A,B,integral,target,abs_dev,interval_count";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n_or_x,
            self.a_end.as_str(),
            self.b_end.as_str(),
            self.integral,
            self.target,
            self.abs_dev,
            self.interval_count
        )
    }
}

fn check_band(a: &Exponent, b: &Exponent) -> Result<()> {
    a.require_non_integer()?;
    b.require_non_integer()?;
    if a >= b {
        return Err(Error::Domain(format!(
            "need A < B, got A = {} >= B = {}",
            a.as_str(),
            b.as_str()
        )));
    }
    let floor_a = a.numerator() / a.denominator();
    let floor_b = b.numerator() / b.denominator();
    if floor_a != floor_b {
        return Err(Error::Domain(format!(
            "[{}, {}] crosses an integer; both ends must lie in one unit cell",
            a.as_str(),
            b.as_str()
        )));
    }
    Ok(())
}

fn band_width(a: &Exponent, b: &Exponent) -> f64 {
    let num = b.numerator() as f64 * a.denominator() as f64
        - a.numerator() as f64 * b.denominator() as f64;
    num / (a.denominator() as f64 * b.denominator() as f64)
}

/// Exclusive p-range of the pairs `(p, r)` active somewhere in `[A, B]`
/// with positive measure: `r < p^B` and `r + 1 > p^A`.
fn pair_p_range(r: u64, a: &Exponent, b: &Exponent) -> Result<(u64, u64)> {
    // smallest p with p^Bn > r^Bd: least_power_reaching gives the least
    // p with >=, so bump when equality holds
    let t = least_power_reaching(r, b.denominator(), b.numerator())?;
    let exact = crate::exactpow::cmp_pow_routed(t, b.numerator(), r, b.denominator())?
        == std::cmp::Ordering::Equal;
    let p_lo = if exact { t + 1 } else { t }.max(2);
    // exclusive end: smallest p with p^An >= (r+1)^Ad
    let p_hi = least_power_reaching(r + 1, a.denominator(), a.numerator())?;
    Ok((p_lo, p_hi))
}

/// Upsilon-side pair enumeration shared by the breakpoint list, the
/// streaming count, and the integral; pairs are visited grouped by `r`
/// (primes ascending within each `r`).
struct UpsilonPairs {
    rs: Vec<u64>, // r = N - q over primes q
    table: PrimePi,
    a: Exponent,
    b: Exponent,
    cap: Option<u64>,
}

impl UpsilonPairs {
    fn new(n: u64, a: &Exponent, b: &Exponent, policy: PLimitPolicy) -> Result<Self> {
        check_band(a, b)?;
        if n < 2 {
            return Err(Error::Domain("need N >= 2".into()));
        }
        let q_table = PrimePi::new(n.max(3))?;
        let rs: Vec<u64> = q_table.primes_in(2, n).map(|q| n - q).collect();
        let cap = match policy {
            PLimitPolicy::Full => None,
            PLimitPolicy::Cap(p) => Some(p),
        };
        // the widest p-range belongs to the largest r
        let p_limit = match rs.iter().max() {
            None => 3,
            Some(&r_max) => {
                let (_, hi) = pair_p_range(r_max, a, b)?;
                match cap {
                    Some(c) => hi.min(c + 1),
                    None => hi,
                }
            }
        };
        let table = PrimePi::new(p_limit.max(3))?;
        Ok(UpsilonPairs {
            rs,
            table,
            a: a.clone(),
            b: b.clone(),
            cap,
        })
    }

    /// Deterministic parallel fold over pairs: `leaf` maps the pairs of
    /// one `r` to a partial, partials merge in fixed `r` order.
    fn fold<T, Leaf, Merge>(&self, leaf: Leaf, merge: Merge) -> Result<T>
    where
        T: Send + Default,
        Leaf: Fn(u64, &mut dyn Iterator<Item = u64>) -> T + Sync,
        Merge: Fn(T, T) -> T,
    {
        let parts: Result<Vec<T>> = self
            .rs
            .par_iter()
            .map(|&r| {
                let (p_lo, mut p_hi) = pair_p_range(r, &self.a, &self.b)?;
                if let Some(cap) = self.cap {
                    p_hi = p_hi.min(cap + 1);
                }
                let mut primes = self.table.primes_in(p_lo, p_hi);
                Ok(leaf(r, &mut primes))
            })
            .collect();
        Ok(parts?.into_iter().fold(T::default(), merge))
    }
}

/// All active intervals of the Upsilon decomposition on `[A, B]`,
/// sorted by certified lower endpoint (ties broken by `(r, p)`).
pub fn breakpoints_upsilon(
    n: u64,
    a: &Exponent,
    b: &Exponent,
    policy: PLimitPolicy,
) -> Result<Vec<ActiveInterval>> {
    let pairs = UpsilonPairs::new(n, a, b, policy)?;
    let mut intervals = pairs.fold(
        |r, ps| ps.map(|p| ActiveInterval::new(p, r)).collect::<Vec<_>>(),
        |mut acc: Vec<ActiveInterval>, mut part| {
            acc.append(&mut part);
            acc
        },
    )?;
    let mut failure = None;
    intervals.sort_by(|x, y| {
        x.c_lo
            .cmp_certified(&y.c_lo)
            .unwrap_or_else(|e| {
                failure.get_or_insert(e);
                std::cmp::Ordering::Equal
            })
            .then(x.r.cmp(&y.r))
            .then(x.p.cmp(&y.p))
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(intervals),
    }
}

/// Streaming count of the active pairs, for scales where the interval
/// list would not fit in memory.
pub fn upsilon_interval_count(
    n: u64,
    a: &Exponent,
    b: &Exponent,
    policy: PLimitPolicy,
) -> Result<u64> {
    let pairs = UpsilonPairs::new(n, a, b, policy)?;
    pairs.fold(|_, ps| ps.count() as u64, |x, y| x + y)
}

/// `F_N(c) = Upsilon_c(N) log^2 N / (c N^(1/c))`, count-p convention.
pub fn f_density(c: &Exponent, n: u64) -> Result<f64> {
    let count = upsilon(c, n, UpsilonMode::CountP)?.count;
    Ok(count as f64 * density_normalizer(c.value(), n))
}

/// `log^2 N * exp(-log N / c) / c`, evaluated in exp form so small `c`
/// underflows to zero instead of overflowing `N^(1/c)`.
pub fn density_normalizer(c: f64, n: u64) -> f64 {
    let ln_n = (n as f64).ln();
    ln_n * ln_n * (-ln_n / c).exp() / c
}

/// `F_{x,a}(c) = Pi_{c,a}(x) c log^2 x / x`.
pub fn f_shift_density(c: &Exponent, a: u64, x: u64) -> Result<f64> {
    let count = crate::pscount::count_shifted(c, a, x)?.count;
    let lg = (x as f64).ln();
    Ok(count as f64 * c.value() * lg * lg / x as f64)
}

/// Exact integral of `F_N` over `[A, B]` by breakpoint decomposition:
/// per-pair adaptive quadrature of `log^2 N / (c N^(1/c))`, streamed and
/// folded deterministically.
pub fn integrate_f(n: u64, a: &Exponent, b: &Exponent) -> Result<DensityReport> {
    let pairs = UpsilonPairs::new(n, a, b, PLimitPolicy::Full)?;
    let ln_n = (n as f64).ln();
    let g = move |c: f64| ln_n * ln_n * (-ln_n / c).exp() / c;
    let a_f = a.value();
    let b_f = b.value();
    let (integral, count) = pairs.fold(
        |r, ps| {
            let mut acc = Kahan::default();
            let mut cnt = 0u64;
            for p in ps {
                let ln_p = (p as f64).ln();
                let c1 = ((r as f64).ln() / ln_p).max(a_f);
                let c2 = (((r + 1) as f64).ln() / ln_p).min(b_f);
                acc.add(adaptive_simpson(&g, c1, c2, QUADRATURE_REL_TOL));
                cnt += 1;
            }
            (acc.value(), cnt)
        },
        |(s1, c1), (s2, c2)| (s1 + s2, c1 + c2),
    )?;
    let target = band_width(a, b);
    Ok(DensityReport {
        n_or_x: n,
        a_end: a.clone(),
        b_end: b.clone(),
        integral,
        target,
        abs_dev: (integral - target).abs(),
        interval_count: count,
    })
}

/// Exact integral of `F_{x,a}` over `[A, B]`: per active pair the
/// integrand is `c log^2 x / x`, so each clipped window contributes
/// `(c2^2 - c1^2)/2 * log^2 x / x` in closed form.
pub fn integrate_f_shift(x: u64, shift: u64, a: &Exponent, b: &Exponent) -> Result<DensityReport> {
    check_band(a, b)?;
    if x < 1 {
        return Err(Error::Domain("need x >= 1".into()));
    }
    let p_table = PrimePi::new((x + 1).max(3))?;
    let primes: Vec<u64> = p_table.primes_in(2, x + 1).collect();
    // largest admissible r over all p <= x
    let r_limit = least_power_reaching(x, b.numerator(), b.denominator())?;
    let q_table = PrimePi::new((r_limit + 2).max(3))?;
    let a_f = a.value();
    let b_f = b.value();
    let parts: Result<Vec<(f64, u64)>> = primes
        .par_chunks(64)
        .map(|chunk| {
            let mut acc = Kahan::default();
            let mut cnt = 0u64;
            for &p in chunk {
                let r_min = floor_pow_value(p, a)?.max(1);
                let r_max = least_power_reaching(p, b.numerator(), b.denominator())?;
                let q_lo = (r_min.saturating_sub(shift)).max(2);
                let q_hi = r_max.saturating_sub(shift);
                let ln_p = (p as f64).ln();
                for q in q_table.primes_in(q_lo, q_hi) {
                    let r = q + shift;
                    let c1 = ((r as f64).ln() / ln_p).max(a_f);
                    let c2 = (((r + 1) as f64).ln() / ln_p).min(b_f);
                    if c2 > c1 {
                        acc.add(0.5 * (c2 * c2 - c1 * c1));
                    }
                    cnt += 1;
                }
            }
            Ok((acc.value(), cnt))
        })
        .collect();
    let mut total = Kahan::default();
    let mut count = 0u64;
    for (s, c) in parts? {
        total.add(s);
        count += c;
    }
    let lg = (x as f64).ln();
    let integral = total.value() * lg * lg / x as f64;
    let target = band_width(a, b);
    Ok(DensityReport {
        n_or_x: x,
        a_end: a.clone(),
        b_end: b.clone(),
        integral,
        target,
        abs_dev: (integral - target).abs(),
        interval_count: count,
    })
}

/// Midpoint Riemann sum of `F_N` with `samples` exact rational nodes.
pub fn riemann_f(n: u64, a: &Exponent, b: &Exponent, samples: u32) -> Result<f64> {
    check_band(a, b)?;
    let nodes = midpoint_nodes(a, b, samples)?;
    let width = band_width(a, b);
    // shared prime table spanning the largest preimage reachable at the
    // smallest node
    let r_max = n.saturating_sub(2).max(1);
    let (_, hi) = crate::exactpow::preimage_range(r_max, &nodes[0])?;
    let table = PrimePi::new(hi.max(3))?;
    let q_table = PrimePi::new((n + 1).max(3))?;
    let vals: Result<Vec<f64>> = nodes
        .par_iter()
        .map(|c| {
            let mut acc = 0u64;
            for q in q_table.primes_in(2, n.max(2)) {
                let (lo, hi) = crate::exactpow::preimage_range(n - q, c)?;
                acc += table.count_in(lo.max(2), hi);
            }
            Ok(acc as f64 * density_normalizer(c.value(), n))
        })
        .collect();
    let mut acc = Kahan::default();
    for v in vals? {
        acc.add(v);
    }
    Ok(acc.value() * width / samples as f64)
}

/// Midpoint Riemann sum of `F_{x,a}` with `samples` exact rational nodes.
pub fn riemann_f_shift(
    x: u64,
    shift: u64,
    a: &Exponent,
    b: &Exponent,
    samples: u32,
) -> Result<f64> {
    check_band(a, b)?;
    let nodes = midpoint_nodes(a, b, samples)?;
    let width = band_width(a, b);
    let vals: Result<Vec<f64>> = nodes
        .par_iter()
        .map(|c| f_shift_density(c, shift, x))
        .collect();
    let mut acc = Kahan::default();
    for v in vals? {
        acc.add(v);
    }
    Ok(acc.value() * width / samples as f64)
}

/// Exact rational midpoints `A + (2j+1)(B-A)/(2k)`.
fn midpoint_nodes(a: &Exponent, b: &Exponent, samples: u32) -> Result<Vec<Exponent>> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let (an, ad) = (a.numerator(), a.denominator());
    let (bn, bd) = (b.numerator(), b.denominator());
    let k = samples as u64;
    // common denominator 2k * ad * bd
    let den = 2 * k * ad * bd;
    (0..k)
        .map(|j| {
            let base = an * 2 * k * bd; // A scaled
            let step = (2 * j + 1) * (bn * ad - an * bd);
            Exponent::rational(base + step, den)
        })
        .collect()
}
