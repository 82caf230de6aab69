//! Bessel functions of the first kind by ascending series, and their first
//! positive zeros.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

const MAX_INDEX: f64 = 2.0;
const SCAN_STEP: f64 = 0.01;
const SCAN_END: f64 = 10.0;

/// `J_α(x)` for `α ∈ [0, 2]`, `x ≥ 0`. Accurate to ~1e-13 absolute for
/// `x ≤ 10`; cancellation grows beyond that.
pub fn bessel_j(alpha: f64, x: f64) -> Result<f64> {
    check_index(alpha)?;
    if x < 0.0 || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("Bessel argument must be >= 0, got {x}")));
    }
    Ok(series(alpha, x))
}

fn series(alpha: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half.powf(alpha) / gamma(alpha + 1.0);
    let mut sum = term;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * (m + alpha));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() || term == 0.0 || m > 500.0 {
            return sum;
        }
    }
}

fn check_index(alpha: f64) -> Result<()> {
    if !(0.0..=MAX_INDEX).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "Bessel index must lie in [0, 2], got {alpha}"
        )));
    }
    Ok(())
}

/// First positive zero of `J_α`.
pub fn bessel_first_zero(alpha: f64) -> Result<f64> {
    check_index(alpha)?;
    let steps = (SCAN_END / SCAN_STEP).round() as usize;
    let mut a = SCAN_STEP;
    let mut fa = series(alpha, a);
    for i in 2..=steps {
        let b = i as f64 * SCAN_STEP;
        let fb = series(alpha, b);
        if fa == 0.0 {
            return Ok(a);
        }
        if fa.signum() != fb.signum() {
            return Ok(bisect(alpha, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    Err(Error::InvalidParameter(format!("no zero of J_{alpha} found in (0, 10]")))
}

fn bisect(alpha: f64, mut a: f64, mut b: f64, fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = series(alpha, m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
