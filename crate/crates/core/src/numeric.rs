//! Small numeric helpers: compensated summation and deterministic
//! parallel reductions.
//!
//! Every parallel sum in this crate goes through [`par_sum_by`], which
//! splits work into fixed-size chunks, evaluates the chunks in parallel,
//! and folds the partial sums in chunk order. The reduction tree is a
//! function of the input alone, never of the scheduler or the worker
//! count, so results are bit-identical for any thread-pool size.

use rayon::prelude::*;

/// Kahan–Babuška compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Compensated sum of `f(i)` over `lo..hi`, sequential.
#[cfg(test)]
pub fn kahan_sum(lo: u64, hi: u64, mut f: impl FnMut(u64) -> f64) -> f64 {
    let mut acc = Kahan::default();
    for i in lo..hi {
        acc.add(f(i));
    }
    acc.value()
}

/// Deterministic parallel sum over indexed chunks.
///
/// `n` items are split into chunks of `chunk` (fixed, independent of the
/// worker count); `part` maps a chunk range to a partial sum; partials are
/// folded sequentially in chunk order with compensation.
pub fn par_sum_by(n: u64, chunk: u64, part: impl Fn(u64, u64) -> f64 + Sync) -> f64 {
    assert!(chunk > 0);
    let chunks = n.div_ceil(chunk);
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let lo = k * chunk;
            let hi = ((k + 1) * chunk).min(n);
            part(lo, hi)
        })
        .collect();
    let mut acc = Kahan::default();
    for p in partials {
        acc.add(p);
    }
    acc.value()
}

/// Adaptive Simpson quadrature with relative tolerance `rel_tol`.
///
/// The integrand must be smooth on `[a, b]`; subdivision stops when the
/// two-panel refinement agrees within tolerance (Richardson-corrected).
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }

    if a >= b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    let tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_handles_cancellation() {
        let mut k = Kahan::default();
        k.add(1e16);
        k.add(1.0);
        k.add(-1e16);
        assert_eq!(k.value(), 1.0);
    }

    #[test]
    fn par_sum_matches_sequential_for_any_chunking() {
        let seq = kahan_sum(0, 10_000, |i| 1.0 / (1.0 + i as f64));
        for chunk in [1, 7, 64, 4096, 100_000] {
            let par = par_sum_by(10_000, chunk, |lo, hi| {
                kahan_sum(lo, hi, |i| 1.0 / (1.0 + i as f64))
            });
            assert!((par - seq).abs() < 1e-12);
        }
    }

    #[test]
    fn simpson_integrates_exponential() {
        let v = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-10);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-9);
    }
}
