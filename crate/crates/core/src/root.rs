//! Bracketed root finding for threshold crossings.

use crate::error::{Error, Result};

/// Default tolerance on the root location.
pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping when the
/// bracket is narrower than `tol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection in `log(x)` for positive, widely ranging brackets.
pub fn bisect_log<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if lo <= 0.0 || hi <= lo {
        return Err(Error::InvalidParameter(format!(
            "log bracket [{lo}, {hi}] is not positive"
        )));
    }
    bisect(|t| f(t.exp()), lo.ln(), hi.ln(), rel_tol).map(f64::exp)
}
