//! Bracketing root finders shared by the spectrum and chemical-potential solvers.

use crate::error::{Error, Result};

/// Upper bound on bisection steps. Halving an f64 interval down to adjacent
/// floats never needs more than ~1100 steps, even across the subnormal range.
const MAX_BISECTIONS: usize = 2200;

/// Bisection on `[lo, hi]`, which must bracket a sign change of `f`.
///
/// Stops when the bracket width drops to `xtol` or the midpoint can no
/// longer be separated from an endpoint. Pass `xtol = 0.0` to refine to the
/// last representable float.
pub fn bisect<F>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    bisect_until(f, lo, hi, |a, b| b - a <= xtol)
}

/// Bisection with a relative stopping width: `b - a <= rtol * max(1, |a|, |b|)`.
pub fn bisect_relative<F>(f: F, lo: f64, hi: f64, rtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    bisect_until(f, lo, hi, |a, b| {
        b - a <= rtol * a.abs().max(b.abs()).max(1.0)
    })
}

fn bisect_until<F, S>(mut f: F, lo: f64, hi: f64, done: S) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    S: Fn(f64, f64) -> bool,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::NumericalFailure(format!(
            "bisection bracket [{a}, {b}] does not enclose a sign change (f = {fa}, {fb})"
        )));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = a + 0.5 * (b - a);
        if done(a, b) || mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.is_nan() {
            return Err(Error::NumericalFailure(format!("function is NaN at {mid}")));
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(Error::NumericalFailure(format!(
        "bisection did not converge on [{a}, {b}]"
    )))
}
