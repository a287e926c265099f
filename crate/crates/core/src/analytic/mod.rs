//! Executable forms of the analytic toolkit: the sawtooth function, the
//! Vaaler trigonometric approximation, Selberg sieve weights, direct
//! exponential sums, and the k-th derivative exponential-sum bound.

mod selberg;
mod vaaler;

pub use selberg::{selberg_weights, SelbergWeights};
pub use vaaler::{vaaler_coefficients, VaalerApprox, COEFF_A_BOUND, COEFF_B_BOUND, GRID_ERROR_BOUND};

use crate::error::{Error, Result};
use crate::exactpow::{floor_pow_value, Exponent};
use crate::numeric::Kahan;
use num_complex::Complex64;
use rayon::prelude::*;

/// The centered sawtooth `Psi(t) = t - floor(t) - 1/2`, in `[-1/2, 1/2)`.
pub fn sawtooth(t: f64) -> f64 {
    t - t.floor() - 0.5
}

/// `sum_{a < n <= b} e(f(n))` by direct compensated summation.
///
/// The phase is reduced through `sin/cos(2*pi*f)`; with phases below
/// ~2^40 the accumulated absolute error stays well under `1e-9 * (b-a)`.
pub fn exp_sum_direct(phase: impl Fn(u64) -> f64 + Sync, a: u64, b: u64) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    const CHUNK: u64 = 1 << 16;
    let n = b - a;
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let lo = a + 1 + k * CHUNK;
            let hi = (lo + CHUNK).min(b + 1);
            let mut re = Kahan::default();
            let mut im = Kahan::default();
            for m in lo..hi {
                let (s, c) = (std::f64::consts::TAU * phase(m)).sin_cos();
                re.add(c);
                im.add(s);
            }
            (re.value(), im.value())
        })
        .collect();
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    for (r, i) in partials {
        re.add(r);
        im.add(i);
    }
    Complex64::new(re.value(), im.value())
}

/// The k-th derivative test bound
/// `(b-a) * lambda_k^(1/(2K-2)) + (b-a)^(1-2/K) * lambda_k^(-1/(2K-2))`
/// with `K = 2^(k-1)`, for `k` in `[2, 4]`.
pub fn vdc_bound(k: u32, a: u64, b: u64, lambda_k: f64) -> f64 {
    assert!((2..=4).contains(&k), "k must be in [2, 4]");
    assert!(b > a && b - a >= 1, "need b - a >= 1");
    assert!(lambda_k > 0.0, "lambda_k must be positive");
    let len = (b - a) as f64;
    let big_k = (1u32 << (k - 1)) as f64;
    let e = 1.0 / (2.0 * big_k - 2.0);
    len * lambda_k.powf(e) + len.powf(1.0 - 2.0 / big_k) * lambda_k.powf(-e)
}

/// The phase-sum order `k = floor(c + 2)` fixed by the parameter system;
/// exposed rather than hard-wired so other orders can be compared.
pub fn phase_sum_order(c: &Exponent) -> u32 {
    (c.numerator() / c.denominator()) as u32 + 2
}

/// The sieve-level system `D = N^(1/(8(C+1)2^C))`, `H = D^3`.
pub fn phase_sum_parameters(n: u64, big_c: f64) -> (u64, u64) {
    let exponent = 1.0 / (8.0 * (big_c + 1.0) * 2f64.powf(big_c));
    let d = (n as f64).powf(exponent).floor().max(1.0) as u64;
    (d, d.saturating_pow(3))
}

/// Direct evaluation of the dyadic phase sum
/// `sum_{m_lo < m <= 2 m_lo, m <= N^(1/c)/d} e(m^c d^c h / t)`.
pub fn proposition_phase_sum(
    n: u64,
    c: &Exponent,
    d: u64,
    t: u64,
    h: i64,
    m_lo: u64,
) -> Result<Complex64> {
    if h == 0 {
        return Err(Error::Domain("phase sum requires h != 0".into()));
    }
    if m_lo == 0 || d == 0 || t == 0 {
        return Err(Error::Domain("phase sum requires m_lo, d, t >= 1".into()));
    }
    let global_cap = floor_pow_value(n, &c.reciprocal())? / d;
    let hi = (2 * m_lo).min(global_cap);
    if hi <= m_lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let cv = c.value();
    let scale = h as f64 / t as f64;
    Ok(exp_sum_direct(
        |m| ((m * d) as f64).powf(cv) * scale,
        m_lo,
        hi,
    ))
}

/// Smallest `|f''|` over the dyadic block for the phase family
/// `f(m) = m^c d^c h / t` (the second derivative decreases in `m` for
/// `c < 2`), used to feed [`vdc_bound`] with `k = 2`.
pub fn phase_family_lambda2(c: &Exponent, d: u64, t: u64, h: i64, m_lo: u64) -> f64 {
    let cv = c.value();
    let coeff = (cv * (cv - 1.0)).abs() * (d as f64).powf(cv) * h.unsigned_abs() as f64 / t as f64;
    coeff * (2.0 * m_lo as f64).powf(cv - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;

    #[test]
    fn sawtooth_examples() {
        assert_eq!(sawtooth(0.25), -0.25);
        assert_eq!(sawtooth(1.0), -0.5);
        approx::assert_abs_diff_eq!(sawtooth(3.7), 0.2, epsilon = 1e-12);
        assert_eq!(sawtooth(0.0), -0.5);
        for t in [-3.3, -0.1, 0.0, 0.4999, 17.25] {
            let v = sawtooth(t);
            assert!((-0.5..0.5).contains(&v), "Psi({t}) = {v}");
        }
    }

    #[test]
    fn exp_sum_trivial_phases() {
        let s = exp_sum_direct(|_| 0.0, 0, 5);
        approx::assert_abs_diff_eq!(s.re, 5.0, epsilon = 1e-12);
        approx::assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-12);
        // e(1/2) + e(1) = 0
        let s = exp_sum_direct(|n| n as f64 / 2.0, 0, 2);
        approx::assert_abs_diff_eq!(s.re, 0.0, epsilon = 1e-12);
        approx::assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-12);
        assert_eq!(exp_sum_direct(|_| 0.0, 5, 5).norm(), 0.0);
    }

    #[test]
    fn exp_sum_triangle_inequality() {
        for (a, b) in [(0u64, 100), (10, 1000), (0, 65_537)] {
            let s = exp_sum_direct(|n| (n as f64 * 0.37).fract(), a, b);
            assert!(s.norm() <= (b - a) as f64 + 1e-9);
        }
    }

    /// 128-bit fixed-point oracle for the phase n*sqrt(2) mod 1.
    fn sqrt2_phase_fixed(n: u64) -> f64 {
        const P: u32 = 128;
        // floor(sqrt(2) * 2^P) via integer square root of 2^(2P+1)
        let s = (BigUint::from(1u8) << (2 * P + 1)).sqrt();
        let prod = BigUint::from(n) * s;
        let frac = &prod & ((BigUint::from(1u8) << P) - BigUint::from(1u8));
        let num = (frac >> (P - 53)).to_f64().unwrap();
        num / (1u64 << 53) as f64
    }

    #[test]
    fn exp_sum_matches_high_precision_oracle() {
        let direct = exp_sum_direct(|n| n as f64 * std::f64::consts::SQRT_2, 0, 100);
        let oracle = exp_sum_direct(sqrt2_phase_fixed, 0, 100);
        assert!(
            (direct.norm() - oracle.norm()).abs() <= 1e-9 * 100.0,
            "direct {} vs oracle {}",
            direct.norm(),
            oracle.norm()
        );
    }

    #[test]
    fn vdc_bound_formula_arithmetic() {
        approx::assert_relative_eq!(vdc_bound(2, 0, 100, 1e-4), 101.0, max_relative = 1e-12);
        approx::assert_relative_eq!(vdc_bound(2, 0, 10_000, 1e-6), 1010.0, max_relative = 1e-12);
        let lambda: f64 = 3.7e-5;
        let expect = 100.0 * lambda.powf(1.0 / 6.0) + 10.0 * lambda.powf(-1.0 / 6.0);
        approx::assert_relative_eq!(vdc_bound(3, 0, 100, lambda), expect, max_relative = 1e-12);
    }

    #[test]
    fn phase_sum_degenerate_and_empty() {
        // integer c = 1 with t = 1 makes every phase integral: sum = length
        let one = Exponent::parse("1/1").unwrap();
        let s = proposition_phase_sum(10_000, &one, 1, 1, 1, 50).unwrap();
        approx::assert_abs_diff_eq!(s.re, 50.0, epsilon = 1e-9);
        approx::assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-9);
        // empty range: dyadic block beyond N^(1/c)/d
        let half = Exponent::parse("1/2").unwrap();
        let s = proposition_phase_sum(100, &half, 1, 3, 1, 1 << 40).unwrap();
        assert_eq!(s.norm(), 0.0);
        assert!(proposition_phase_sum(100, &half, 1, 3, 0, 10).is_err());
    }

    #[test]
    fn phase_sum_within_vdc_envelope() {
        let half = Exponent::parse("1/2").unwrap();
        let (d, t, h, m_lo) = (1u64, 3u64, 1i64, 50u64);
        let s = proposition_phase_sum(10_000, &half, d, t, h, m_lo).unwrap();
        let lambda2 = phase_family_lambda2(&half, d, t, h, m_lo);
        let bound = vdc_bound(2, m_lo, 2 * m_lo, lambda2);
        let ratio = s.norm() / bound;
        assert!(ratio <= 10.0, "measured ratio {ratio}");
    }

    #[test]
    fn parameter_system_shapes() {
        let half = Exponent::parse("1/2").unwrap();
        assert_eq!(phase_sum_order(&half), 2);
        assert_eq!(phase_sum_order(&Exponent::parse("5/2").unwrap()), 4);
        let (d, h) = phase_sum_parameters(1 << 40, 1.0);
        assert_eq!(h, d.pow(3));
        assert!(d >= 1);
    }
}
