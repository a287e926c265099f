//! Zeta-zero data ingestion and the explicit-formula toolkit: the
//! truncated explicit formula for Chebyshev `psi`, zero counting
//! `N(sigma, T)`, the zero-density bound evaluator, and zero-free-region
//! margins.

use crate::error::{Error, Result};
use crate::numeric::Kahan;
use crate::primal::{prime_power_base, psi_direct};
use rayon::prelude::*;
use std::io::BufRead;
use std::path::Path;

/// Ordered positive imaginary parts of nontrivial zeros, with their real
/// parts (1/2 unless a table says otherwise) and provenance. Conjugate
/// zeros are implied, never stored.
#[derive(Clone, Debug)]
pub struct ZeroTable {
    gammas: Vec<f64>,
    betas: Vec<f64>,
    source: String,
}

impl ZeroTable {
    /// Parse a table: one decimal ordinate per line, strictly increasing;
    /// `#`-prefixed lines are comments.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        let mut gammas = Vec::new();
        for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line?;
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let value: f64 = body.parse().map_err(|e| Error::ZeroTableParse {
                path: path.to_path_buf(),
                line: idx + 1,
                reason: format!("{e}"),
            })?;
            if value <= 0.0 {
                return Err(Error::ZeroTableParse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    reason: "ordinates must be positive".into(),
                });
            }
            if let Some(&prev) = gammas.last() {
                if value <= prev {
                    return Err(Error::ZeroTableOrder {
                        path: path.to_path_buf(),
                        line: idx + 1,
                        value,
                        previous: prev,
                    });
                }
            }
            gammas.push(value);
        }
        let betas = vec![0.5; gammas.len()];
        Ok(ZeroTable {
            gammas,
            betas,
            source: path.display().to_string(),
        })
    }

    /// Build a table from ordinates on the critical line.
    pub fn from_gammas(gammas: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if gammas.windows(2).any(|w| w[0] >= w[1]) || gammas.first().is_some_and(|&g| g <= 0.0) {
            return Err(Error::Domain(
                "zero ordinates must be positive and strictly increasing".into(),
            ));
        }
        let betas = vec![0.5; gammas.len()];
        Ok(ZeroTable {
            gammas,
            betas,
            source: source.into(),
        })
    }

    pub fn count(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn max_gamma(&self) -> Option<f64> {
        self.gammas.last().copied()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// Load a zero table from disk.
pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroTable> {
    ZeroTable::load(path)
}

/// Result of one truncated explicit-formula evaluation.
#[derive(Clone, Debug)]
pub struct ExplicitFormulaResult {
    pub x: f64,
    pub t: f64,
    /// `x - sum_{0<gamma<=T} 2 Re(x^rho / rho) - log 2pi - log(1 - x^-2)/2`.
    pub value: f64,
    pub zero_terms_used: u64,
    /// Materialized `R(x, T)` bound with an explicit constant 2 standing
    /// in for the implied one.
    pub r_budget: f64,
    /// `psi(x)` by direct summation, with the midpoint convention at
    /// prime-power points.
    pub direct: f64,
    pub abs_error: f64,
}

impl ExplicitFormulaResult {
    pub const CSV_HEADER: &'static str = "x,T,value,direct,abs_error,r_budget";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.x, self.t, self.value, self.direct, self.abs_error, self.r_budget
        )
    }
}

/// Distance from `x` to the nearest prime power other than `x` itself.
fn nearest_prime_power_gap(x: f64) -> f64 {
    let xi = x.round().max(2.0) as u64;
    let mut d_below = f64::INFINITY;
    let mut n = xi;
    while n >= 2 {
        if (x - n as f64).abs() > f64::EPSILON && prime_power_base(n).is_some() {
            d_below = x - n as f64;
            break;
        }
        n -= 1;
    }
    let d_above;
    let mut n = xi.max(2);
    loop {
        if (n as f64 - x) > -f64::EPSILON
            && (n as f64 - x).abs() > f64::EPSILON
            && prime_power_base(n).is_some()
        {
            d_above = n as f64 - x;
            break;
        }
        n += 1;
    }
    d_below.abs().min(d_above)
}

/// The truncated explicit formula for `psi_0(x)` against a zero table.
///
/// Conjugate zeros are folded as `2 Re(x^rho / rho)` (exact by symmetry,
/// half the work); zero blocks are reduced over a fixed tree so results
/// do not depend on the worker count. Domain: `x > 1`,
/// `2 <= T <= max gamma`.
pub fn psi_explicit(x: f64, t: f64, zeros: &ZeroTable) -> Result<ExplicitFormulaResult> {
    if x <= 1.0 {
        return Err(Error::Domain(format!(
            "psi_explicit requires x > 1, got {x}"
        )));
    }
    if t < 2.0 {
        return Err(Error::Domain(format!(
            "psi_explicit requires T >= 2, got {t}"
        )));
    }
    let max_gamma = zeros.max_gamma().unwrap_or(0.0);
    if t > max_gamma {
        return Err(Error::ZeroTableExhausted {
            source_name: zeros.source().to_string(),
            t,
            max_gamma,
        });
    }
    let n_used = zeros.gammas.partition_point(|&g| g <= t);
    let ln_x = x.ln();
    let sqrt_x = x.sqrt();

    const BLOCK: usize = 1024;
    let partials: Vec<f64> = (0..n_used.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = ((b + 1) * BLOCK).min(n_used);
            let mut acc = Kahan::default();
            for i in lo..hi {
                let gamma = zeros.gammas[i];
                let beta = zeros.betas[i];
                let (sin, cos) = (gamma * ln_x).sin_cos();
                let xbeta = if beta == 0.5 { sqrt_x } else { x.powf(beta) };
                // 2 Re(x^rho / rho) = 2 x^beta (beta cos + gamma sin) / |rho|^2
                let denom = beta * beta + gamma * gamma;
                acc.add(2.0 * xbeta * (beta * cos + gamma * sin) / denom);
            }
            acc.value()
        })
        .collect();
    let mut zero_sum = Kahan::default();
    for p in partials {
        zero_sum.add(p);
    }

    let value = x
        - zero_sum.value()
        - (2.0 * std::f64::consts::PI).ln()
        - 0.5 * (1.0 - 1.0 / (x * x)).ln();

    let gap = nearest_prime_power_gap(x);
    let log_xt = (x * t).ln();
    let r_budget = 2.0 * (ln_x * (x / (t * gap)).min(1.0) + x / t * log_xt * log_xt);

    let mut direct = psi_direct(x);
    if x.fract() == 0.0 && x >= 2.0 {
        if let Some(p) = prime_power_base(x as u64) {
            direct -= 0.5 * (p as f64).ln(); // psi_0 midpoint at a jump
        }
    }
    let abs_error = (value - direct).abs();
    Ok(ExplicitFormulaResult {
        x,
        t,
        value,
        zero_terms_used: n_used as u64,
        r_budget,
        direct,
        abs_error,
    })
}

/// `N(sigma, T)` over the stored (upper half-plane) zeros: count of
/// zeros with `beta > sigma` and `0 < gamma <= T`. Conjugates are not
/// double-counted.
pub fn count_zeros(sigma: f64, t: f64, zeros: &ZeroTable) -> u64 {
    zeros
        .gammas
        .iter()
        .zip(&zeros.betas)
        .take_while(|(&g, _)| g <= t)
        .filter(|(_, &b)| b > sigma)
        .count() as u64
}

/// The zero-density bound evaluator `T^(30(1-sigma)/13)` (the `o(1)` in
/// the exponent is omitted; this evaluates the formula, it does not
/// verify the bound).
pub fn gm_bound(sigma: f64, t: f64) -> f64 {
    t.powf(30.0 * (1.0 - sigma) / 13.0)
}

/// Zero-free-region margin `1 - c0 (log tau)^(-2/3) (log log tau)^(-1/3)`
/// with `tau = gamma + 2`; errors when `tau <= e` (log log nonpositive).
pub fn zero_free_margin(gamma: f64, c0: f64) -> Result<f64> {
    if gamma <= 0.0 || c0 <= 0.0 {
        return Err(Error::Domain("gamma and c0 must be positive".into()));
    }
    let tau = gamma + 2.0;
    if tau.ln() <= 1.0 {
        return Err(Error::Domain(format!(
            "zero_free_margin needs tau = gamma + 2 > e, got tau = {tau}"
        )));
    }
    let lt = tau.ln();
    let llt = lt.ln();
    Ok(1.0 - c0 * lt.powf(-2.0 / 3.0) * llt.powf(-1.0 / 3.0))
}
