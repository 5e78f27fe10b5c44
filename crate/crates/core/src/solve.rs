//! Bracketed scalar root finding: Illinois-damped false position with
//! bisection safeguards.
//!
//! Every mean evaluation that is not closed-form reduces to one root of a
//! monotone-ratio equation on a guaranteed bracket, so this solver is the
//! workhorse of the crate. It never leaves the initial bracket.

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct NoBracket {
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Finds the root of `f` in `[lo, hi]`, assuming a sign change.
///
/// Converges to a bracket of width `xtol + 4ε|z|`; returns its midpoint.
pub(crate) fn solve_bracketed<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> Result<f64, NoBracket> {
    debug_assert!(lo <= hi);
    if lo == hi {
        return Ok(lo);
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NoBracket { f_lo: fa, f_hi: fb });
    }
    let mut side = 0i8;
    for iter in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= xtol + 4.0 * f64::EPSILON * mid.abs() {
            return Ok(mid);
        }
        // False-position candidate, with periodic forced bisection and a
        // fallback when the candidate degenerates onto the bracket edge.
        let mut c = (a * fb - b * fa) / (fb - fa);
        if iter % 8 == 7 || !c.is_finite() || c <= a || c >= b {
            c = mid;
        }
        let fc = f(c);
        if fc == 0.0 {
            return Ok(c);
        }
        if fa.signum() != fc.signum() {
            b = c;
            fb = fc;
            // Illinois trick: halve the stagnant endpoint's value.
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}
