//! Symbolic breakpoint endpoints `log(num)/log(base)` with certified
//! comparisons.
//!
//! Adjacent breakpoints of the c-axis decomposition can be separated by
//! less than double precision, so ordering decisions escalate: a fast
//! f64 comparison with a rigorous error allowance, an exact structural
//! test (both ratios rational, detected through perfect-power
//! decomposition), then fixed-point logarithms of increasing precision
//! up to a hard cap.

use crate::certcmp::{cmp_ln_products, primitive_power};
use crate::error::Result;
use crate::exactpow::cmp_pow_routed;
use std::cmp::Ordering;

/// The exact real `log(num) / log(base)`, `num >= 1`, `base >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LogRatio {
    pub num: u64,
    pub base: u64,
}

impl LogRatio {
    pub fn new(num: u64, base: u64) -> Self {
        assert!(num >= 1 && base >= 2, "log-ratio domain");
        LogRatio { num, base }
    }

    pub fn value(&self) -> f64 {
        (self.num as f64).ln() / (self.base as f64).ln()
    }

    /// Exact comparison with a rational `n/d`:
    /// `log a / log b <cmp> n/d  <=>  a^d <cmp> b^n`.
    pub fn cmp_rational(&self, n: u64, d: u64) -> Result<Ordering> {
        assert!(d >= 1);
        if self.num == 1 {
            return Ok(if n == 0 { Ordering::Equal } else { Ordering::Less });
        }
        cmp_pow_routed(self.num, d, self.base, n)
    }

    /// Certified comparison of two log-ratios, escalating precision.
    pub fn cmp_certified(&self, other: &LogRatio) -> Result<Ordering> {
        if self.num == 1 || other.num == 1 {
            // a value is zero iff num == 1
            return Ok((self.num != 1).cmp(&(other.num != 1)));
        }
        // f64 fast path: each ratio carries at most a few ulps of error,
        // so separation above 1e-13 of the magnitude is decisive
        let va = self.value();
        let vb = other.value();
        let tol = 1e-13 * va.abs().max(vb.abs()).max(1.0);
        if (va - vb).abs() > tol {
            return Ok(va.partial_cmp(&vb).expect("finite log-ratios"));
        }
        // structural equality: both ratios are rational multiples of the
        // same irrational (or plainly rational) when the primitive bases
        // of numerator and denominator match pairwise
        let (ga, ka) = primitive_power(self.num);
        let (gb, kb) = primitive_power(self.base);
        let (gc, kc) = primitive_power(other.num);
        let (gd, kd) = primitive_power(other.base);
        if (ga == gb && gc == gd) || (ga == gc && gb == gd) {
            return Ok((ka as u128 * kd as u128).cmp(&(kc as u128 * kb as u128)));
        }
        // distinct structure: unequal, so finite precision decides
        // (compare ln(a) ln(d) with ln(c) ln(b) in fixed point)
        cmp_ln_products(self.num, other.base, other.num, self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_comparison_is_exact() {
        let lr = LogRatio::new(3, 11); // log 3 / log 11 = 0.45815...
        assert_eq!(lr.cmp_rational(2, 5).unwrap(), Ordering::Greater); // > 0.4
        assert_eq!(lr.cmp_rational(1, 2).unwrap(), Ordering::Less); // < 0.5
        let exact = LogRatio::new(8, 4); // = 3/2
        assert_eq!(exact.cmp_rational(3, 2).unwrap(), Ordering::Equal);
        // huge-denominator rational still compares
        let near = LogRatio::new(1000, 7);
        assert_eq!(
            near.cmp_rational(3_550_000, 1_000_000).unwrap(),
            Ordering::Less // log1000/log7 = 3.54996...
        );
    }

    #[test]
    fn certified_comparison_orders_close_ratios() {
        let a = LogRatio::new(1000, 7);
        let b = LogRatio::new(999, 7);
        assert_eq!(a.cmp_certified(&b).unwrap(), Ordering::Greater);
        // equal structural values: log 4/log 8 = log 16/log 64 = 2/3
        let x = LogRatio::new(4, 8);
        let y = LogRatio::new(16, 64);
        assert_eq!(x.cmp_certified(&y).unwrap(), Ordering::Equal);
        // rational vs nearby irrational
        let r = LogRatio::new(9, 3); // exactly 2
        let s = LogRatio::new(10, 3); // slightly above 2
        assert_eq!(r.cmp_certified(&s).unwrap(), Ordering::Less);
        // ties that the f64 path cannot see: 8/2 (=3) vs 27/3 (=3)
        let t = LogRatio::new(8, 2);
        let u = LogRatio::new(27, 3);
        assert_eq!(t.cmp_certified(&u).unwrap(), Ordering::Equal);
    }

    #[test]
    fn certified_matches_f64_when_separated() {
        let cases = [
            (LogRatio::new(3, 11), LogRatio::new(4, 11)),
            (LogRatio::new(97, 13), LogRatio::new(96, 13)),
            (LogRatio::new(5, 2), LogRatio::new(7, 3)),
            (LogRatio::new(123, 456), LogRatio::new(124, 457)),
        ];
        for (a, b) in cases {
            let expect = a.value().partial_cmp(&b.value()).unwrap();
            assert_eq!(a.cmp_certified(&b).unwrap(), expect, "{a:?} vs {b:?}");
        }
    }
}
