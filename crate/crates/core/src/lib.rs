//! Arithmetic of the Piatetski-Shapiro prime sequence `floor(p^c)`.
//!
//! The crate is organized around the objects it computes:
//!
//! - [`primal`]: segmented prime sieve, `pi`, Chebyshev `psi`, `omega`,
//!   deterministic u64 primality, and O(1) prime-counting tables.
//! - [`exactpow`]: certified evaluation of `floor(n^c)` with exact
//!   rational exponents, floor-class membership, and preimage intervals.
//! - [`pscount`]: the counting functions `Pi_{c,a}(x)` and `Upsilon_c(N)`,
//!   representation witnesses `N = floor(p^c) + q`, and exception scans.
//! - [`analytic`]: sawtooth, Vaaler approximation, Selberg sieve weights,
//!   direct exponential sums, and the k-th derivative test bound.
//! - [`zeta`]: zero-table ingestion, the truncated explicit formula for
//!   `psi`, zero counting and zero-free-region margins.
//! - [`density`]: the c-averaged densities `F_N(c)` and `F_{x,a}(c)`,
//!   breakpoint decomposition of the c-axis, and their exact integrals.

pub mod analytic;
mod certcmp;
pub mod density;
pub mod error;
pub mod exactpow;
mod numeric;
pub mod primal;
pub mod pscount;
pub mod zeta;

pub use error::{Error, Result};
pub use exactpow::Exponent;
