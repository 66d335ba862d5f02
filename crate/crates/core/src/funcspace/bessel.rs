//! Bessel functions `I_n` and `J_n` of integer order by their ascending series.
//!
//! Terms and partial sums are carried in double-double arithmetic, so the
//! cancellation in the alternating `J_n` series and the long product in the
//! leading factor `(x/2)^n / n!` cost no accuracy at the double level.

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// `(x/2)^n / n!` as a double-double mantissa and a power-of-two exponent,
/// so that large `n` does not underflow mid-product.
fn leading_factor(n: usize, half_x: f64) -> (DoubleDouble, i32) {
    const RESCALE: f64 = 1.157_920_892_373_162e77; // 2^256
    let mut acc = DoubleDouble::from_f64(1.0);
    let mut exp2 = 0i32;
    for k in 1..=n {
        acc = acc.mul_f64(half_x).div_f64(k as f64);
        if acc.hi.abs() < 1e-200 && acc.hi != 0.0 {
            acc = acc.mul_f64(RESCALE);
            exp2 -= 256;
        }
    }
    (acc, exp2)
}

/// Sums `sum_m sign^m (x/2)^{2m} / (m! (n+m)!)` relative to the leading term.
fn ascending_tail(n: usize, half_x: f64, alternating: bool) -> DoubleDouble {
    let q = DoubleDouble::from_f64(half_x).mul(DoubleDouble::from_f64(half_x));
    let mut term = DoubleDouble::from_f64(1.0);
    let mut sum = DoubleDouble::ZERO;
    let mut max_abs: f64 = 0.0;
    for m in 0..10_000usize {
        sum = sum.add(term);
        max_abs = max_abs.max(term.hi.abs());
        let denom = ((m + 1) as f64) * ((n + m + 1) as f64);
        term = term.mul(q).div_f64(denom);
        if alternating {
            term = term.neg();
        }
        let t = term.hi.abs();
        if t < 1e-18 * sum.hi.abs() || t < 1e-32 * max_abs || t == 0.0 {
            break;
        }
    }
    sum
}

/// Modified Bessel function of the first kind, `I_n(x)` for `0 <= x <= 50`.
pub fn bessel_i(n: usize, x: f64) -> Result<f64> {
    if !(0.0..=50.0).contains(&x) {
        return Err(Error::Domain(format!(
            "bessel_i: argument {x} outside [0, 50]"
        )));
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let half_x = x / 2.0;
    let (lead, exp2) = leading_factor(n, half_x);
    let tail = ascending_tail(n, half_x, false);
    Ok(scale_pow2(lead.mul(tail).to_f64(), exp2))
}

/// Bessel function of the first kind, `J_n(x)` for `|x| <= 20`.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 20.0 {
        return Err(Error::Domain(format!(
            "bessel_j: argument {x} outside [-20, 20]"
        )));
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let half_x = x.abs() / 2.0;
    let (lead, exp2) = leading_factor(n, half_x);
    let tail = ascending_tail(n, half_x, true);
    let value = scale_pow2(lead.mul(tail).to_f64(), exp2);
    // J_n(-x) = (-1)^n J_n(x)
    Ok(if x < 0.0 && n % 2 == 1 { -value } else { value })
}

fn scale_pow2(v: f64, mut exp2: i32) -> f64 {
    let mut v = v;
    while exp2 < 0 && v != 0.0 {
        let step = exp2.max(-1000);
        v *= 2f64.powi(step);
        exp2 -= step;
    }
    v
}
