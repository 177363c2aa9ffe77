//! Bessel functions of the first kind and integer order.

use crate::error::{Result, TrkError};
use crate::scalar::{lit, Real};

/// `J_m(x)` for `x ≥ 0`.
///
/// Uses Miller's backward recurrence started well above `max(m, x)` and
/// normalized with `J_0 + 2 Σ J_{2k} = 1`; the evaluation runs in `f64`.
pub fn bessel_j<T: Real>(m: u32, x: T) -> Result<T> {
    let xf = x.to_f64().unwrap_or(f64::NAN);
    if !xf.is_finite() {
        return Err(TrkError::InvalidParameter(format!("non-finite Bessel argument {xf}")));
    }
    if xf < 0.0 {
        return Err(TrkError::NegativeArgument(xf));
    }
    Ok(lit(bessel_j_f64(m, xf)))
}

/// `J_m(x)` for any real `x`, via `J_m(−x) = (−1)^m J_m(x)`.
pub fn bessel_j_signed<T: Real>(m: u32, x: T) -> T {
    let v = bessel_j(m, x.abs()).expect("finite argument");
    if x < T::zero() && m % 2 == 1 {
        -v
    } else {
        v
    }
}

fn bessel_j_f64(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x < 1e-8 {
        // Leading series term; the next term is O(x²) smaller.
        let mut v = 1.0;
        for k in 1..=m {
            v *= x / (2.0 * k as f64);
        }
        return v;
    }
    let top = (m as f64).max(x);
    let mut start = (top + 30.0 + 12.0 * top.cbrt()).ceil() as usize;
    start += start % 2;
    let (mut above, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        // cur = J_k, above = J_{k+1}; produce J_{k-1}.
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        let idx = k - 1;
        if idx == m as usize {
            result = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    norm += cur;
    result / norm
}
