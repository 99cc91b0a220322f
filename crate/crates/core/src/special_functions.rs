//! Cylindrical Bessel functions of the first kind, integer order.
//!
//! Values come from a normalized downward (Miller) recurrence started well
//! above both the order and the argument, so the minimal solution `J_l`
//! dominates at every order that is read back. The normalization uses the
//! positive-definite identity `1 = J_0(x)^2 + 2 sum_{k>=1} J_k(x)^2`, which is
//! free of cancellation for large arguments. Small arguments (`x <= 1`) use
//! the power series directly.
//!
//! Zeros are bracketed by a sign-change scan with step `pi/4` starting at
//! `x = l` (no zero of `J_l` lies below its order) and refined by safeguarded
//! Newton iteration.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: u32 = 512;
/// Largest supported argument.
pub const MAX_ARGUMENT: f64 = 1024.0;

const SERIES_LIMIT: f64 = 1.0;
const RESCALE_ABOVE: f64 = 1e100;
const RESCALE_BY: f64 = 1e-100;
const SCAN_STEP: f64 = FRAC_PI_4;

/// Value and first derivative of `J_order` at `argument`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub order: u32,
    pub argument: f64,
    pub value: f64,
    pub derivative: f64,
}

fn check_args(l: u32, x: f64) -> Result<()> {
    if l > MAX_ORDER {
        return Err(Error::Domain(format!(
            "Bessel order {l} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    if !(x >= 0.0) || x > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "Bessel argument {x} outside supported range [0, {MAX_ARGUMENT}]"
        )));
    }
    Ok(())
}

/// Power series for `J_l(x)`; only used for small `x`, where the terms
/// decrease monotonically.
fn series(l: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=l {
        term *= half / i as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let mut sum = term;
    let h2 = half * half;
    let mut k = 1.0;
    loop {
        term *= -h2 / (k * (k + l as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Fills `out[i] = J_{lo + i}(x)` for `x > 0` using normalized downward
/// recurrence.
fn miller_window(x: f64, lo: u32, out: &mut [f64]) {
    let hi = lo + out.len() as u32 - 1;
    let margin = (10.0 * x.cbrt()).ceil() as u32 + 30;
    let start = hi.max(x.ceil() as u32) + margin;
    let two_over_x = 2.0 / x;

    // f_{k+1}, f_k with f_{start+1} = 0, f_start = 1
    let mut next = 0.0_f64;
    let mut cur = 1.0_f64;
    let mut sumsq = 0.0_f64;
    let mut k = start;
    loop {
        if k <= hi && k >= lo {
            out[(k - lo) as usize] = cur;
        }
        if k == 0 {
            sumsq += cur * cur;
            break;
        }
        sumsq += 2.0 * cur * cur;
        let prev = (k as f64) * two_over_x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            next *= RESCALE_BY;
            sumsq *= RESCALE_BY * RESCALE_BY;
            for v in out.iter_mut() {
                *v *= RESCALE_BY;
            }
        }
    }
    // f_start > 0 and J_start(x) > 0 because start exceeds x, so the common
    // factor is positive.
    let norm = sumsq.sqrt();
    for v in out.iter_mut() {
        *v /= norm;
    }
}

/// `out[i] = J_{lo + i}(x)`; arguments are assumed validated.
fn j_window(x: f64, lo: u32, out: &mut [f64]) {
    if x == 0.0 {
        for (i, v) in out.iter_mut().enumerate() {
            *v = if lo + i as u32 == 0 { 1.0 } else { 0.0 };
        }
    } else if x <= SERIES_LIMIT {
        for (i, v) in out.iter_mut().enumerate() {
            *v = series(lo + i as u32, x);
        }
    } else {
        miller_window(x, lo, out);
    }
}

/// `J_l(x)` for `0 <= l <= 512`, `0 <= x <= 1024`.
pub fn bessel_j(l: u32, x: f64) -> Result<f64> {
    check_args(l, x)?;
    let mut out = [0.0];
    j_window(x, l, &mut out);
    Ok(out[0])
}

/// `J_l(x)` and `J_l'(x)` from a single recurrence pass.
pub fn bessel_eval(l: u32, x: f64) -> Result<BesselEval> {
    check_args(l, x)?;
    let (value, derivative) = if l == 0 {
        let mut w = [0.0; 2];
        j_window(x, 0, &mut w);
        (w[0], -w[1])
    } else {
        let mut w = [0.0; 3];
        j_window(x, l - 1, &mut w);
        (w[1], 0.5 * (w[0] - w[2]))
    };
    Ok(BesselEval {
        order: l,
        argument: x,
        value,
        derivative,
    })
}

/// `dJ_l/dx`.
pub fn bessel_j_prime(l: u32, x: f64) -> Result<f64> {
    Ok(bessel_eval(l, x)?.derivative)
}

/// `J_0(x), ..., J_{max_order}(x)`.
pub fn bessel_j_orders(max_order: u32, x: f64) -> Result<Vec<f64>> {
    check_args(max_order, x)?;
    let mut out = vec![0.0; max_order as usize + 1];
    j_window(x, 0, &mut out);
    Ok(out)
}

/// Refines a root of `J_l` inside a sign-change bracket `[lo, hi]`.
fn refine_zero(l: u32, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let positive_at_lo = f_lo > 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let mut w = [0.0; 3];
        let (f, df) = if l == 0 {
            j_window(x, 0, &mut w[..2]);
            (w[0], -w[1])
        } else {
            j_window(x, l - 1, &mut w);
            (w[1], 0.5 * (w[0] - w[2]))
        };
        if f == 0.0 {
            return x;
        }
        if (f > 0.0) == positive_at_lo {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / df;
        let next = if df != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 1e-14 * x.max(1.0) || hi - lo <= 4.0 * f64::EPSILON * x {
            break;
        }
    }
    x
}

/// Walks the sign-change scan of `J_l` from `x = l` upwards, calling `visit`
/// for every refined zero until it returns `false` or the scan passes
/// `x_max`.
fn scan_zeros(l: u32, x_max: f64, mut visit: impl FnMut(f64) -> bool) {
    let mut a = l as f64;
    let mut w = [0.0];
    j_window(a, l, &mut w);
    let mut fa = w[0];
    while a < x_max {
        let b = (a + SCAN_STEP).min(x_max);
        j_window(b, l, &mut w);
        let fb = w[0];
        if fb == 0.0 {
            if !visit(b) {
                return;
            }
            fa = -fa;
        } else if (fa > 0.0) != (fb > 0.0) {
            let z = refine_zero(l, a, b, fa);
            if z <= x_max && !visit(z) {
                return;
            }
            fa = fb;
        } else {
            fa = fb;
        }
        a = b;
    }
}

/// All positive zeros of `J_l` in `(0, x_max]`, ascending.
pub fn bessel_zeros_upto(l: u32, x_max: f64) -> Result<Vec<f64>> {
    if l > MAX_ORDER {
        return Err(Error::Domain(format!(
            "Bessel order {l} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    if !(x_max >= 0.0) {
        return Err(Error::Domain(format!(
            "x_max must be non-negative, got {x_max}"
        )));
    }
    if x_max > MAX_ARGUMENT {
        return Err(Error::Range(format!(
            "x_max {x_max} exceeds supported argument range {MAX_ARGUMENT}"
        )));
    }
    let mut zeros = Vec::new();
    scan_zeros(l, x_max, |z| {
        zeros.push(z);
        true
    });
    Ok(zeros)
}

/// The `n`-th (1-based) positive zero of `J_l`.
pub fn bessel_zero(l: u32, n: u32) -> Result<f64> {
    if l > MAX_ORDER {
        return Err(Error::Domain(format!(
            "Bessel order {l} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("zero index is 1-based, got 0".into()));
    }
    let mut count = 0;
    let mut found = None;
    scan_zeros(l, MAX_ARGUMENT, |z| {
        count += 1;
        if count == n {
            found = Some(z);
            false
        } else {
            true
        }
    });
    found.ok_or_else(|| {
        Error::Range(format!(
            "zero #{n} of J_{l} lies beyond the supported range {MAX_ARGUMENT}"
        ))
    })
}
