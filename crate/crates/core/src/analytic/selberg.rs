//! Selberg sieve weights for sifting by all primes up to the level `D`,
//! with the classical optimal choice
//!
//! ```text
//! lambda_d = mu(d) * (d/phi(d)) * G_d(D/d) / G(D),
//! ```
//!
//! where `G_d(y)` sums `prod_{p|k} 1/(p-1)` over squarefree `k <= y`
//! coprime to `d`. This normalization has `lambda_1 = 1`, `|lambda_d| <= 1`,
//! and quadratic form `sum lambda_{d1} lambda_{d2} / [d1, d2] = 1/G(D)`,
//! which is below `1/log D` because `G(D) >= sum_{n<=D} 1/n > log D`.

use crate::numeric::Kahan;
use crate::primal::omega;

/// Selberg weights `lambda_d` (d <= D) and the folded coefficients
/// `rho_d = sum_{[d1,d2]=d} lambda_{d1} lambda_{d2}` (d <= D^2).
#[derive(Clone, Debug)]
pub struct SelbergWeights {
    level: u64,
    lambda: Vec<f64>,
    rho: Vec<f64>,
}

/// Build the weights for a level `D >= 3`.
pub fn selberg_weights(level: u64) -> SelbergWeights {
    assert!(level >= 3, "Selberg level must be >= 3");
    let d_max = level as usize;

    // smallest prime factor table to D, for factorizations
    let mut spf: Vec<u32> = (0..=d_max as u32).collect();
    let mut i = 2usize;
    while i * i <= d_max {
        if spf[i] == i as u32 {
            let mut j = i * i;
            while j <= d_max {
                if spf[j] == j as u32 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        i += 1;
    }

    // squarefree flags, mu, g(k) = prod_{p|k} 1/(p-1), d/phi(d)
    let mut squarefree = vec![true; d_max + 1];
    let mut mu = vec![1i8; d_max + 1];
    let mut g = vec![0.0f64; d_max + 1];
    let mut d_over_phi = vec![0.0f64; d_max + 1];
    g[1] = 1.0;
    d_over_phi[1] = 1.0;
    for k in 2..=d_max {
        let mut rest = k;
        let mut gval = 1.0;
        let mut dphi = 1.0;
        let mut m = 1i8;
        let mut sf = true;
        while rest > 1 {
            let p = spf[rest] as usize;
            let mut count = 0;
            while rest % p == 0 {
                rest /= p;
                count += 1;
            }
            if count > 1 {
                sf = false;
                break;
            }
            gval *= 1.0 / (p as f64 - 1.0);
            dphi *= p as f64 / (p as f64 - 1.0);
            m = -m;
        }
        squarefree[k] = sf;
        mu[k] = if sf { m } else { 0 };
        g[k] = if sf { gval } else { 0.0 };
        d_over_phi[k] = if sf { dphi } else { 0.0 };
    }

    // G(D) and the restricted sums G_d(D/d)
    let big_g = {
        let mut acc = Kahan::default();
        for k in 1..=d_max {
            if squarefree[k] {
                acc.add(g[k]);
            }
        }
        acc.value()
    };

    let mut lambda = vec![0.0f64; d_max + 1];
    for d in 1..=d_max {
        if !squarefree[d] {
            continue;
        }
        let y = d_max / d;
        let mut acc = Kahan::default();
        for k in 1..=y {
            if squarefree[k] && num_integer::gcd(k, d) == 1 {
                acc.add(g[k]);
            }
        }
        lambda[d] = mu[d] as f64 * d_over_phi[d] * acc.value() / big_g;
    }

    // rho_d over the folded lcm
    let sf_ds: Vec<usize> = (1..=d_max).filter(|&d| squarefree[d]).collect();
    let mut rho = vec![0.0f64; d_max * d_max + 1];
    for &d1 in &sf_ds {
        for &d2 in &sf_ds {
            let l = d1 / num_integer::gcd(d1, d2) * d2;
            rho[l] += lambda[d1] * lambda[d2];
        }
    }

    SelbergWeights {
        level,
        lambda,
        rho,
    }
}

impl SelbergWeights {
    pub fn level(&self) -> u64 {
        self.level
    }

    /// `lambda_d`; zero for `d > D` and for non-squarefree `d`.
    pub fn lambda(&self, d: u64) -> f64 {
        self.lambda.get(d as usize).copied().unwrap_or(0.0)
    }

    /// `rho_d`; zero for `d > D^2`.
    pub fn rho(&self, d: u64) -> f64 {
        self.rho.get(d as usize).copied().unwrap_or(0.0)
    }

    /// `sum_{d | n} lambda_d` (only `d <= D` contribute).
    pub fn divisor_sum(&self, n: u64) -> f64 {
        let mut acc = 0.0;
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                acc += self.lambda(d);
                let other = n / d;
                if other != d {
                    acc += self.lambda(other);
                }
            }
            d += 1;
        }
        acc
    }

    /// `sum_d sum_{[d1,d2]=d} lambda_{d1} lambda_{d2} / d = sum_d rho_d / d`.
    pub fn quadratic_form(&self) -> f64 {
        let mut acc = Kahan::default();
        for (d, &r) in self.rho.iter().enumerate().skip(1) {
            if r != 0.0 {
                acc.add(r / d as f64);
            }
        }
        acc.value()
    }

    /// Measured constant `max_d |rho_d| / 3^omega(d)`.
    pub fn rho_ratio_constant(&self) -> f64 {
        self.rho
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &r)| r != 0.0)
            .map(|(d, &r)| r.abs() / 3f64.powi(omega(d as u64) as i32))
            .fold(0.0, f64::max)
    }

    pub const CSV_HEADER: &'static str = "d,lambda,rho";

    /// One row per `d <= D` (lambda and rho side by side).
    pub fn csv_rows(&self) -> Vec<String> {
        (1..=self.level)
            .map(|d| format!("{d},{},{}", self.lambda(d), self.rho(d)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primal::simple_sieve;

    #[test]
    fn lambda_one_is_one_and_bounded() {
        for level in [3u64, 10, 100, 1000] {
            let w = selberg_weights(level);
            assert_eq!(w.lambda(1), 1.0, "D={level}");
            for d in 1..=level {
                assert!(w.lambda(d).abs() <= 1.0 + 1e-12, "D={level} d={d}");
            }
            for d in level + 1..level + 10 {
                assert_eq!(w.lambda(d), 0.0);
            }
        }
    }

    #[test]
    fn divisor_sum_is_one_for_large_primes() {
        // n = 7 > D = 3: only d = 1 divides within range
        let w = selberg_weights(3);
        assert_eq!(w.divisor_sum(7), 1.0);
        for level in [10u64, 100, 1000] {
            let w = selberg_weights(level);
            for p in simple_sieve(2 * level) {
                if p > level {
                    let s = w.divisor_sum(p);
                    assert_eq!(s * s, 1.0, "D={level} p={p}");
                }
            }
        }
    }

    #[test]
    fn quadratic_form_below_reciprocal_log() {
        for level in [10u64, 100, 1000] {
            let w = selberg_weights(level);
            let q = w.quadratic_form();
            assert!(q > 0.0);
            assert!(
                q < 1.0 / (level as f64).ln(),
                "D={level}: {q} >= 1/log D"
            );
        }
    }

    #[test]
    fn quadratic_form_equals_inverse_g() {
        // independent route: the closed form 1/G(D)
        for level in [10u64, 50, 200] {
            let w = selberg_weights(level);
            let mut big_g = 0.0;
            for k in 1..=level {
                let mut rest = k;
                let mut gval = 1.0;
                let mut sf = true;
                let mut p = 2;
                while p * p <= rest {
                    if rest % p == 0 {
                        rest /= p;
                        if rest % p == 0 {
                            sf = false;
                            break;
                        }
                        gval /= (p - 1) as f64;
                    }
                    p += 1;
                }
                if sf && rest > 1 {
                    gval /= (rest - 1) as f64;
                }
                if sf {
                    big_g += gval;
                }
            }
            approx::assert_relative_eq!(w.quadratic_form(), 1.0 / big_g, max_relative = 1e-9);
        }
    }

    #[test]
    fn rho_vanishes_past_level_squared_and_ratio_is_modest() {
        for level in [10u64, 100] {
            let w = selberg_weights(level);
            assert_eq!(w.rho(level * level + 1), 0.0);
            assert_eq!(w.rho(level * level + 1000), 0.0);
            let c = w.rho_ratio_constant();
            assert!(c > 0.0 && c <= 1.5, "D={level}: measured C = {c}");
        }
    }

    #[test]
    fn rho_matches_direct_fold_small() {
        let w = selberg_weights(12);
        for d in 1..=144u64 {
            let mut direct = 0.0;
            for d1 in 1..=12u64 {
                for d2 in 1..=12u64 {
                    if d1 * d2 / num_integer::gcd(d1, d2) == d {
                        direct += w.lambda(d1) * w.lambda(d2);
                    }
                }
            }
            approx::assert_abs_diff_eq!(w.rho(d), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn divisor_sum_square_nonnegative() {
        let w = selberg_weights(30);
        for n in 1..500u64 {
            let s = w.divisor_sum(n);
            assert!(s * s >= 0.0);
        }
    }
}
