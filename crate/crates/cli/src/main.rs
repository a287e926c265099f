//! Command-line front end: every library operation as a reproducible
//! experiment with CSV/JSON output.
//!
//! Exit codes: 0 on success, 2 on usage errors (unknown flags, malformed
//! exponents, missing required inputs), 1 on computation errors.

mod config;
mod output;

use clap::{Parser, Subcommand};
use config::{OutputFormat, RunConfig};
use output::Table;
use pshapiro::analytic::{
    phase_family_lambda2, proposition_phase_sum, selberg_weights, vaaler_coefficients, vdc_bound,
};
use pshapiro::density::{integrate_f, integrate_f_shift, DensityReport};
use pshapiro::exactpow::Exponent;
use pshapiro::pscount::{
    convergence_table, count_shifted, find_representation, scan_exceptions, upsilon, CountRecord,
    UpsilonMode,
};
use pshapiro::zeta::{count_zeros, load_zeros, psi_explicit, ExplicitFormulaResult};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pshapiro",
    version,
    about = "Arithmetic of the sequence floor(p^c) over primes: counting functions, \
             representation scans, explicit-formula checks, sieve weights, and density integrals"
)]
struct Cli {
    /// Config file with `key = value` lines (zeros_path, workers,
    /// max_precision_bits, output_format, cache_dir); flags override.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count primes p <= x whose floor(p^c) is a shifted prime q + a.
    CountShifted {
        /// Exponent c as `u/v` or a decimal literal.
        #[arg(long)]
        c: String,
        /// Shift a >= 0.
        #[arg(long, default_value_t = 0)]
        a: u64,
        #[arg(long)]
        x: u64,
    },
    /// Count representations N = floor(p^c) + q.
    Upsilon {
        #[arg(long)]
        c: String,
        #[arg(long = "N")]
        n: u64,
        /// Counting convention: distinct-m or count-p.
        #[arg(long, default_value = "distinct-m")]
        mode: String,
    },
    /// Find one representation N = floor(p^c) + q, if any.
    Represent {
        #[arg(long)]
        c: String,
        #[arg(long = "N")]
        n: u64,
    },
    /// List every N in a range with no representation.
    ScanExceptions {
        #[arg(long)]
        c: String,
        /// Inclusive range `lo..hi`.
        #[arg(long)]
        range: String,
    },
    /// Empirical-vs-predicted table of the shifted count at several x.
    Convergence {
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 0)]
        a: u64,
        /// Evaluation points (repeat the flag), strictly increasing.
        #[arg(long = "x", required = true)]
        xs: Vec<u64>,
    },
    /// Truncated explicit formula for psi(x) against a zero table.
    ExplicitFormula {
        #[arg(long)]
        x: f64,
        #[arg(long = "T")]
        t: f64,
        /// Zero table path (overrides config zeros_path).
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
    /// Count tabulated zeros with beta > sigma and gamma <= T.
    ZeroCount {
        #[arg(long)]
        sigma: f64,
        #[arg(long = "T")]
        t: f64,
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
    /// Emit Vaaler coefficients for H and verify the two-sided bound on a grid.
    VaalerCheck {
        #[arg(long = "H")]
        h: u32,
        /// Grid points on [0, 1) for the verification.
        #[arg(long, default_value_t = 10_000)]
        grid: u32,
    },
    /// Build Selberg weights at level D, verify their invariants, and emit them.
    SelbergCheck {
        #[arg(long = "D")]
        d: u64,
        /// What to emit: summary, lambda, or rho.
        #[arg(long, default_value = "summary")]
        emit: String,
    },
    /// Dyadic phase sums e(m^c d^c h/t) against the k=2 derivative-test bound.
    ExpsumCheck {
        #[arg(long)]
        c: String,
        #[arg(long = "N")]
        n: u64,
        /// Largest dyadic block start (default min(10^5, N^(1/c))).
        #[arg(long)]
        max_m: Option<u64>,
    },
    /// Integrate F_N over [A, B] by exact breakpoint decomposition.
    IntegrateDensity {
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "A")]
        a_end: String,
        #[arg(long = "B")]
        b_end: String,
    },
    /// Integrate F_{x,a} over [A, B] by exact breakpoint decomposition.
    IntegrateShiftDensity {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 0)]
        a: u64,
        #[arg(long = "A")]
        a_end: String,
        #[arg(long = "B")]
        b_end: String,
    },
}

/// Usage errors exit 2, computation errors exit 1.
enum CliError {
    Usage(String),
    Compute(String),
}

impl From<pshapiro::Error> for CliError {
    fn from(e: pshapiro::Error) -> Self {
        match e {
            pshapiro::Error::ExponentParse { .. } => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

fn parse_exponent(s: &str, cfg: &RunConfig) -> Result<Exponent, CliError> {
    Ok(Exponent::parse(s)?.with_precision(cfg.max_precision_bits))
}

fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| CliError::Usage(format!("bad range `{s}` (expected lo..hi)")))?;
    let lo = lo
        .parse()
        .map_err(|_| CliError::Usage(format!("bad range start `{lo}`")))?;
    let hi = hi
        .parse()
        .map_err(|_| CliError::Usage(format!("bad range end `{hi}`")))?;
    Ok((lo, hi))
}

fn zeros_table(
    flag: &Option<PathBuf>,
    cfg: &RunConfig,
) -> Result<pshapiro::zeta::ZeroTable, CliError> {
    let path = flag
        .clone()
        .or_else(|| cfg.zeros_path.clone())
        .ok_or_else(|| {
            CliError::Usage("no zero table: pass --zeros or set zeros_path in the config".into())
        })?;
    Ok(load_zeros(path)?)
}

fn count_table(records: &[CountRecord]) -> Table {
    let mut t = Table::new(CountRecord::CSV_HEADER);
    for r in records {
        t.push_row(r.csv_row());
    }
    t
}

fn run(cli: Cli) -> Result<String, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(CliError::Usage)?,
        None => RunConfig::default(),
    };
    if let Some(f) = &cli.format {
        cfg.output_format = OutputFormat::parse(f).map_err(CliError::Usage)?;
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build_global()
        .ok(); // a pool may already exist in tests; determinism does not depend on it

    let fmt = cfg.output_format;
    match cli.cmd {
        Cmd::CountShifted { c, a, x } => {
            let c = parse_exponent(&c, &cfg)?;
            let rec = count_shifted(&c, a, x)?;
            Ok(count_table(&[rec]).render(fmt))
        }
        Cmd::Upsilon { c, n, mode } => {
            let c = parse_exponent(&c, &cfg)?;
            let mode = UpsilonMode::parse(&mode).map_err(|e| CliError::Usage(e.to_string()))?;
            let rec = upsilon(&c, n, mode)?;
            Ok(count_table(&[rec]).render(fmt))
        }
        Cmd::Represent { c, n } => {
            let c = parse_exponent(&c, &cfg)?;
            let mut t = Table::new("N,c,found,m,p,q");
            match find_representation(&c, n)? {
                Some(w) => t.push_row(format!("{n},{},true,{},{},{}", c.as_str(), w.m, w.p, w.q)),
                None => t.push_row(format!("{n},{},false,,,", c.as_str())),
            }
            Ok(t.render(fmt))
        }
        Cmd::ScanExceptions { c, range } => {
            let c = parse_exponent(&c, &cfg)?;
            let (lo, hi) = parse_range(&range)?;
            let exceptions = scan_exceptions(&c, lo, hi)?;
            let mut t = Table::new("N");
            for n in exceptions {
                t.push_row(n.to_string());
            }
            Ok(t.render(fmt))
        }
        Cmd::Convergence { c, a, xs } => {
            let c = parse_exponent(&c, &cfg)?;
            let rows = convergence_table(&c, a, &xs)?;
            Ok(count_table(&rows).render(fmt))
        }
        Cmd::ExplicitFormula { x, t, zeros } => {
            let table = zeros_table(&zeros, &cfg)?;
            let result = psi_explicit(x, t, &table)?;
            let mut out = Table::new(ExplicitFormulaResult::CSV_HEADER);
            out.push_row(result.csv_row());
            Ok(out.render(fmt))
        }
        Cmd::ZeroCount { sigma, t, zeros } => {
            let table = zeros_table(&zeros, &cfg)?;
            let mut out = Table::new("sigma,T,count");
            out.push_row(format!("{sigma},{t},{}", count_zeros(sigma, t, &table)));
            Ok(out.render(fmt))
        }
        Cmd::VaalerCheck { h, grid } => {
            if h < 1 {
                return Err(CliError::Usage("H must be >= 1".into()));
            }
            let v = vaaler_coefficients(h);
            for j in 0..grid {
                let t = j as f64 / grid as f64;
                let err = (pshapiro::analytic::sawtooth(t) - v.approx(t)).abs();
                let maj = v.majorant(t);
                if err > maj + 1e-12 {
                    return Err(CliError::Compute(format!(
                        "two-sided bound violated at t = {t}: error {err} > majorant {maj}"
                    )));
                }
                if maj < -1e-12 {
                    return Err(CliError::Compute(format!(
                        "majorant negative at t = {t}: {maj}"
                    )));
                }
            }
            let mut out = Table::new(pshapiro::analytic::VaalerApprox::CSV_HEADER);
            for row in v.csv_rows() {
                out.push_row(row);
            }
            Ok(out.render(fmt))
        }
        Cmd::SelbergCheck { d, emit } => {
            if d < 3 {
                return Err(CliError::Usage("D must be >= 3".into()));
            }
            let w = selberg_weights(d);
            if (w.lambda(1) - 1.0).abs() > 1e-12 {
                return Err(CliError::Compute("lambda_1 != 1".into()));
            }
            for i in 1..=d {
                if w.lambda(i).abs() > 1.0 + 1e-12 {
                    return Err(CliError::Compute(format!("|lambda_{i}| > 1")));
                }
            }
            let qform = w.quadratic_form();
            if d >= 10 && qform >= 1.0 / (d as f64).ln() {
                return Err(CliError::Compute(format!(
                    "quadratic form {qform} not below 1/log D"
                )));
            }
            match emit.as_str() {
                "summary" => {
                    let mut out = Table::new("D,quadratic_form,one_over_log_D,max_rho_ratio");
                    out.push_row(format!(
                        "{d},{qform},{},{}",
                        1.0 / (d as f64).ln(),
                        w.rho_ratio_constant()
                    ));
                    Ok(out.render(fmt))
                }
                "lambda" | "rho" => {
                    let mut out = Table::new(pshapiro::analytic::SelbergWeights::CSV_HEADER);
                    for row in w.csv_rows() {
                        out.push_row(row);
                    }
                    Ok(out.render(fmt))
                }
                other => Err(CliError::Usage(format!(
                    "unknown emit `{other}` (expected summary, lambda, or rho)"
                ))),
            }
        }
        Cmd::ExpsumCheck { c, n, max_m } => {
            let c = parse_exponent(&c, &cfg)?;
            let cap = pshapiro::exactpow::floor_pow_value(n, &c.reciprocal())?;
            let max_m = max_m.unwrap_or_else(|| cap.min(100_000));
            let mut out = Table::new("c,d,t,h,m_lo,len,re,im,modulus,vdc,ratio");
            for d in [1u64, 2] {
                for t in [3u64, 5] {
                    for h in [1i64, 2, 3] {
                        let mut m_lo = 64u64;
                        while m_lo <= max_m {
                            let hi = (2 * m_lo).min(cap / d);
                            if hi <= m_lo {
                                break;
                            }
                            let s = proposition_phase_sum(n, &c, d, t, h, m_lo)?;
                            let lambda2 = phase_family_lambda2(&c, d, t, h, m_lo);
                            let bound = vdc_bound(2, m_lo, hi, lambda2);
                            out.push_row(format!(
                                "{},{d},{t},{h},{m_lo},{},{},{},{},{},{}",
                                c.as_str(),
                                hi - m_lo,
                                s.re,
                                s.im,
                                s.norm(),
                                bound,
                                s.norm() / bound
                            ));
                            m_lo *= 2;
                        }
                    }
                }
            }
            Ok(out.render(fmt))
        }
        Cmd::IntegrateDensity { n, a_end, b_end } => {
            let a = parse_exponent(&a_end, &cfg)?;
            let b = parse_exponent(&b_end, &cfg)?;
            let report = integrate_f(n, &a, &b)?;
            let mut out = Table::new(DensityReport::CSV_HEADER);
            out.push_row(report.csv_row());
            Ok(out.render(fmt))
        }
        Cmd::IntegrateShiftDensity { x, a, a_end, b_end } => {
            let lo = parse_exponent(&a_end, &cfg)?;
            let hi = parse_exponent(&b_end, &cfg)?;
            let report = integrate_f_shift(x, a, &lo, &hi)?;
            let mut out = Table::new(DensityReport::CSV_HEADER);
            out.push_row(report.csv_row());
            Ok(out.render(fmt))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
