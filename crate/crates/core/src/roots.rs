//! Bracketing root finders for monotone scalar functions.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Bisection for a root of `f` on `[lo, hi]`, where `f(lo)` and `f(hi)` have
/// opposite signs (or one of them is zero). Stops once the bracket width is at
/// most `rel_tol · max(|lo|, |hi|)` and returns the bracket end on `hi`'s
/// side, so `f` at the result never has the sign of `f(lo)`.
pub fn bisect<T: Real>(
    mut f: impl FnMut(T) -> T,
    mut lo: T,
    mut hi: T,
    rel_tol: T,
    max_iter: usize,
) -> Result<T> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NonConvergence {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            iterations: 0,
        });
    }
    let half = T::lit(0.5);
    for _ in 0..max_iter {
        let mid = lo + (hi - lo) * half;
        if hi - lo <= rel_tol * lo.abs().max(hi.abs()) || mid == lo || mid == hi {
            return Ok(hi);
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        lo: lo.as_f64(),
        hi: hi.as_f64(),
        iterations: max_iter,
    })
}

/// Doubles `hi` (starting from `start > 0`) until `f(hi) < 0`. Returns the
/// bracket `[hi/2, hi]`, or `[0, start]` if the first probe is already negative.
pub fn expand_until_negative<T: Real>(
    mut f: impl FnMut(T) -> T,
    start: T,
    max_doublings: usize,
) -> Result<(T, T)> {
    let two = T::lit(2.0);
    let mut lo = T::zero();
    let mut hi = start;
    for _ in 0..max_doublings {
        if f(hi) < T::zero() {
            return Ok((lo, hi));
        }
        lo = hi;
        hi *= two;
        if !hi.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence {
        lo: lo.as_f64(),
        hi: hi.as_f64(),
        iterations: max_doublings,
    })
}
