//! Thin wrappers around the special functions the toolkit needs.

use crate::error::{Error, Result};

pub use statrs::function::erf::erf;
pub use statrs::function::gamma::{gamma, ln_gamma};

/// Odd double factorial (2n-1)!! computed in exact integer arithmetic.
///
/// This is the Gaussian even-moment constant: E[Z^{2n}] = (2n-1)!! sigma^{2n}.
/// Guarded at n = 20; beyond that the caller is asking for moments nobody
/// can resolve in f64 anyway.
pub fn double_factorial_odd(n: u32) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    if n > 20 {
        return Err(Error::Precision(format!(
            "double factorial guard: n = {n} exceeds 20"
        )));
    }
    let mut acc: u128 = 1;
    let mut k: u128 = 2 * (n as u128) - 1;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc as f64)
}
