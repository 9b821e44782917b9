//! Bisection for monotone scalar equations.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub t: f64,
    /// `g(t) - target` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

const MAX_ITER: usize = 400;

/// Solve `g(t) = target` for a strictly decreasing `g` on `[lo, hi]`.
///
/// Requires `g(lo) > target > g(hi)`. Bisects until the bracket cannot shrink
/// in floating point, then returns whichever end has the smaller residual.
pub fn bisect_decreasing<G>(g: G, mut lo: f64, mut hi: f64, target: f64) -> Result<Root>
where
    G: Fn(f64) -> f64,
{
    let mut g_lo = g(lo) - target;
    let mut g_hi = g(hi) - target;
    if g_lo.is_nan() || g_hi.is_nan() {
        return Err(Error::Domain("bisection endpoint evaluates to NaN"));
    }
    if g_lo < 0.0 || g_hi > 0.0 {
        return Err(Error::NoRoot);
    }
    let mut iterations = 0;
    while iterations < MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let g_mid = g(mid) - target;
        if g_mid == 0.0 {
            return Ok(Root {
                t: mid,
                residual: 0.0,
                iterations,
            });
        }
        if g_mid > 0.0 {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    let (t, residual) = if g_lo.abs() <= g_hi.abs() { (lo, g_lo) } else { (hi, g_hi) };
    Ok(Root {
        t,
        residual,
        iterations,
    })
}
