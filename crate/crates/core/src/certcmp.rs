//! Certified comparisons of integer powers and products of logarithms.
//!
//! `a^ea` against `b^eb` is decided without materializing the powers:
//! exact ties are recognized structurally (both sides powers of one
//! primitive base), everything else separates at some finite precision
//! of fixed-point logarithms, escalated up to a hard cap. This keeps
//! floor/preimage arithmetic exact even for exponents in the tens of
//! thousands, where big-integer exponentiation is out of the question.

use crate::error::{Error, Result};
use crate::exactpow::MAX_CERTIFICATION_PRECISION;
use num_bigint::BigUint;
use num_traits::Zero;
use std::cmp::Ordering;

/// Decompose `n = g^k` with `g` not itself a perfect power.
pub(crate) fn primitive_power(n: u64) -> (u64, u32) {
    debug_assert!(n >= 2);
    for k in (2..=63u32).rev() {
        let r = crate::primal::nth_root_u64(n, k);
        if r >= 2 && checked_pow(r, k) == Some(n) {
            return (r, k);
        }
    }
    (n, 1)
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Compare `a^ea` with `b^eb` exactly (`a, b >= 1`, `ea, eb >= 1`).
pub(crate) fn cmp_pow_certified(a: u64, ea: u64, b: u64, eb: u64) -> Result<Ordering> {
    if a == 1 || b == 1 {
        return Ok((a != 1).cmp(&(b != 1)));
    }
    // structural tie detection: a = g^i, b = h^j can only give
    // a^ea = b^eb when g = h and i*ea = j*eb
    let (ga, ia) = primitive_power(a);
    let (gb, ib) = primitive_power(b);
    if ga == gb {
        return Ok((ia as u128 * ea as u128).cmp(&(ib as u128 * eb as u128)));
    }
    // f64 fast path with generous error allowance
    let la = (a as f64).ln() * ea as f64;
    let lb = (b as f64).ln() * eb as f64;
    let tol = 1e-12 * la.max(lb).max(1.0);
    if (la - lb).abs() > tol {
        return Ok(la.partial_cmp(&lb).expect("finite"));
    }
    // escalate fixed-point logarithms; distinct primitive bases mean the
    // sides are unequal, so some precision separates them
    let mut bits = 96u32;
    while bits <= MAX_CERTIFICATION_PRECISION {
        let fa = ln_fixed(a, bits).scale(ea);
        let fb = ln_fixed(b, bits).scale(eb);
        if let Some(ord) = fa.try_cmp(&fb) {
            return Ok(ord);
        }
        bits *= 2;
    }
    Err(Error::PrecisionOverflow {
        base: a,
        c: format!("{a}^{ea} vs {b}^{eb}"),
        max_bits: MAX_CERTIFICATION_PRECISION,
    })
}

/// Compare `ln(a) * ln(d)` with `ln(c) * ln(b)` exactly, given that
/// equality has already been ruled out structurally by the caller.
pub(crate) fn cmp_ln_products(a: u64, d: u64, c: u64, b: u64) -> Result<Ordering> {
    let mut bits = 96u32;
    while bits <= MAX_CERTIFICATION_PRECISION {
        let lhs = ln_fixed(a, bits).mul(&ln_fixed(d, bits));
        let rhs = ln_fixed(c, bits).mul(&ln_fixed(b, bits));
        if let Some(ord) = lhs.try_cmp(&rhs) {
            return Ok(ord);
        }
        bits *= 2;
    }
    Err(Error::PrecisionOverflow {
        base: b,
        c: format!("log({a})*log({d}) vs log({c})*log({b})"),
        max_bits: MAX_CERTIFICATION_PRECISION,
    })
}

/// A fixed-point interval `[center - err, center + err] / 2^bits`.
pub(crate) struct FixedInterval {
    center: BigUint,
    err_ulps: BigUint,
    bits: u32,
}

impl FixedInterval {
    pub(crate) fn mul(&self, other: &FixedInterval) -> FixedInterval {
        debug_assert_eq!(self.bits, other.bits);
        let bits = self.bits;
        let center = (&self.center * &other.center) >> bits;
        // |xy - x0 y0| <= x0 ey + y0 ex + ex ey, plus shift truncation
        let err = (&self.center * &other.err_ulps
            + &other.center * &self.err_ulps
            + &self.err_ulps * &other.err_ulps)
            >> bits;
        FixedInterval {
            center,
            err_ulps: err + BigUint::from(2u8),
            bits,
        }
    }

    pub(crate) fn scale(&self, k: u64) -> FixedInterval {
        FixedInterval {
            center: &self.center * k,
            err_ulps: &self.err_ulps * k,
            bits: self.bits,
        }
    }

    pub(crate) fn try_cmp(&self, other: &FixedInterval) -> Option<Ordering> {
        let gap = &self.err_ulps + &other.err_ulps;
        if self.center > &other.center + &gap {
            Some(Ordering::Greater)
        } else if other.center > &self.center + &gap {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    #[cfg(test)]
    pub(crate) fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.center.to_f64().unwrap() / 2f64.powi(self.bits as i32)
    }
}

/// `ln(n)` as a fixed-point interval with `bits` fractional bits.
pub(crate) fn ln_fixed(n: u64, bits: u32) -> FixedInterval {
    debug_assert!(n >= 2);
    let e = 63 - n.leading_zeros() as u64; // floor(log2 n)
    // ln n = e ln 2 + ln(n / 2^e), argument in [1, 2)
    let ln2 = atanh_series(BigUint::from(1u8), BigUint::from(3u8), bits);
    let num = BigUint::from(n) - (BigUint::from(1u8) << e);
    let den = BigUint::from(n) + (BigUint::from(1u8) << e);
    let frac = atanh_series(num, den, bits);
    FixedInterval {
        center: ln2.center * e + frac.center,
        err_ulps: ln2.err_ulps * e + frac.err_ulps,
        bits,
    }
}

/// `2 atanh(p/q)` in fixed point; requires `p/q <= 1/3` so terms shrink
/// at least 9x per step.
fn atanh_series(p: BigUint, q: BigUint, bits: u32) -> FixedInterval {
    let z = (p << bits) / &q;
    let z2 = (&z * &z) >> bits;
    let mut term = z;
    let mut acc = BigUint::zero();
    let mut j = 0u64;
    let mut steps = 0u64;
    while !term.is_zero() {
        acc += &term / (2 * j + 1);
        term = (&term * &z2) >> bits;
        j += 1;
        steps += 1;
    }
    FixedInterval {
        center: acc << 1,
        err_ulps: BigUint::from(4 * steps + 8),
        bits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_power_decomposition() {
        assert_eq!(primitive_power(64), (2, 6));
        assert_eq!(primitive_power(36), (6, 2));
        assert_eq!(primitive_power(97), (97, 1));
        assert_eq!(primitive_power(1 << 40), (2, 40));
    }

    #[test]
    fn ln_fixed_matches_f64() {
        for n in [2u64, 3, 10, 997, 1 << 33] {
            let fi = ln_fixed(n, 96);
            assert!(
                (fi.approx() - (n as f64).ln()).abs() < 1e-12,
                "ln({n})"
            );
        }
    }

    #[test]
    fn power_comparison_small_cases_match_bigint() {
        for (a, ea, b, eb) in [
            (2u64, 10u64, 3u64, 6u64),
            (5, 7, 7, 5),
            (10, 3, 31, 2),
            (8, 2, 4, 3), // exact tie: 2^6 both
            (9, 3, 27, 2), // exact tie: 3^6 both
        ] {
            let exact = BigUint::from(a).pow(ea as u32).cmp(&BigUint::from(b).pow(eb as u32));
            assert_eq!(
                cmp_pow_certified(a, ea, b, eb).unwrap(),
                exact,
                "{a}^{ea} vs {b}^{eb}"
            );
        }
    }

    #[test]
    fn power_comparison_huge_exponents() {
        // 100000 ln2 = 69314.72 against 63093 ln3 = 69314.75 and
        // 63092 ln3 = 69313.67: opposite sides of a close call
        assert_eq!(
            cmp_pow_certified(2, 100_000, 3, 63_093).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            cmp_pow_certified(2, 100_000, 3, 63_092).unwrap(),
            Ordering::Greater
        );
        // tighter: ln3/ln2 = 1.5849625007..., so 2^158496250 < 3^100000000
        assert_eq!(
            cmp_pow_certified(2, 158_496_250, 3, 100_000_000).unwrap(),
            Ordering::Less
        );
        // ties with huge exponents are structural, instant
        assert_eq!(
            cmp_pow_certified(4, 3_000_000_000, 8, 2_000_000_000).unwrap(),
            Ordering::Equal
        );
    }
}
