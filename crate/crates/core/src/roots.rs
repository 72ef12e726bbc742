//! Bracketing root finder used for every boundary curve.

use std::cmp::Ordering;

use crate::error::{Error, Result};

pub const MAX_BISECTIONS: usize = 200;

/// Bisection on a sign oracle: `sign(x)` must be `Less` at `lo` and `Greater` at
/// `hi` (or vice versa). Stops when the bracket cannot be split further in binary64.
pub fn bisect_sign<F>(mut lo: f64, mut hi: f64, sign: F) -> Result<f64>
where
    F: Fn(f64) -> Ordering,
{
    let s_lo = sign(lo);
    let s_hi = sign(hi);
    if s_lo == Ordering::Equal {
        return Ok(lo);
    }
    if s_hi == Ordering::Equal {
        return Ok(hi);
    }
    if s_lo == s_hi {
        return Err(Error::OutOfDomain(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match sign(mid) {
            Ordering::Equal => return Ok(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection on a real-valued function with a sign change on `[lo, hi]`.
pub fn bisect<F>(lo: f64, hi: f64, f: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    bisect_sign(lo, hi, |x| f(x).partial_cmp(&0.0).unwrap_or(Ordering::Equal))
}
