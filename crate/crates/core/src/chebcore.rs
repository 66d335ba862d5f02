//! Chebyshev series on `[-1, 1]`, the Joukowski map, and coefficient recurrences.
//!
//! First-kind series are stored with the *halved-first-term* convention:
//! the value of `[a0, a1, a2, ...]` at `x` is `a0/2 + a1 T1(x) + a2 T2(x) + ...`.
//! The stored numbers are therefore exactly what the contour formulas produce,
//! and the halving only enters at evaluation time. Second-kind series carry no
//! halving.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::dd::ComplexDD;
use crate::error::{Error, Result};

/// A point of the complex plane. Used both for `z` (the ellipse plane) and
/// `u` (the circle plane).
pub type ComplexPoint = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `T_k`, halved first coefficient.
    FirstKind,
    /// `U_k`, no halving.
    SecondKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    kind: Kind,
    coeffs: Vec<f64>,
}

/// Result of [`ChebSeries::eval_diag`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    /// `x` was outside `[-1, 1]`.
    pub extrapolated: bool,
}

impl ChebSeries {
    pub fn new(kind: Kind, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSeries("empty coefficient vector".into()));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "coefficient {k} is not finite ({})",
                coeffs[k]
            )));
        }
        Ok(Self { kind, coeffs })
    }

    pub fn first_kind(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(Kind::FirstKind, coeffs)
    }

    pub fn second_kind(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(Kind::SecondKind, coeffs)
    }

    /// The zero series of length one.
    pub fn zero(kind: Kind) -> Self {
        Self {
            kind,
            coeffs: vec![0.0],
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Nominal degree, `len - 1` (trailing zeros are not trimmed).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates the series with the Clenshaw recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(self.kind, &self.coeffs, x)
    }

    pub fn eval_diag(&self, x: f64) -> Evaluated {
        Evaluated {
            value: self.eval(x),
            extrapolated: !(-1.0..=1.0).contains(&x),
        }
    }

    /// Evaluates the series at a complex point, e.g. on a Bernstein ellipse.
    pub fn eval_complex(&self, z: ComplexPoint) -> ComplexPoint {
        clenshaw(self.kind, &self.coeffs, z)
    }

    /// Converts a first-kind series to second kind via `b_n = (a_n - a_{n+2}) / 2`.
    ///
    /// The relation is applied to the stored (unhalved) coefficients, so no
    /// special case is needed at `n = 0`.
    pub fn t_to_u(&self) -> Result<ChebSeries> {
        self.expect_kind(Kind::FirstKind)?;
        let a = &self.coeffs;
        let b = (0..a.len())
            .map(|n| {
                let next = a.get(n + 2).copied().unwrap_or(0.0);
                (a[n] - next) / 2.0
            })
            .collect();
        Ok(ChebSeries {
            kind: Kind::SecondKind,
            coeffs: b,
        })
    }

    /// Coefficients of the `s`-th derivative, by the backward recurrence
    /// `a_{k-1}' = a_{k+1}' + 2k a_k`.
    ///
    /// `s = 0` is the identity. When `s` exceeds the degree the result is the
    /// zero series of length one.
    pub fn differentiate(&self, s: usize) -> Result<ChebSeries> {
        self.expect_kind(Kind::FirstKind)?;
        let degree = self.degree();
        if s > degree {
            return Ok(ChebSeries::zero(Kind::FirstKind));
        }
        let mut current = self.coeffs.clone();
        for _ in 0..s {
            current = derivative_step(&current);
        }
        Ok(ChebSeries {
            kind: Kind::FirstKind,
            coeffs: current,
        })
    }

    fn expect_kind(&self, expected: Kind) -> Result<()> {
        if self.kind != expected {
            return Err(Error::KindMismatch {
                expected,
                found: self.kind,
            });
        }
        Ok(())
    }
}

/// One differentiation sweep. Input has length `L >= 2`, output `L - 1`.
fn derivative_step(prev: &[f64]) -> Vec<f64> {
    let top = prev.len() - 1;
    // out has indices 0..top-1, with out[top] = out[top + 1] = 0 implied.
    let mut out = vec![0.0; top + 2];
    for k in (1..=top).rev() {
        out[k - 1] = out[k + 1] + 2.0 * k as f64 * prev[k];
    }
    out.truncate(top);
    out
}

fn clenshaw<T>(kind: Kind, coeffs: &[f64], x: T) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + From<f64>,
{
    let zero = T::from(0.0);
    let two_x = x * T::from(2.0);
    let (mut b1, mut b2) = (zero, zero);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = T::from(c) + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    match kind {
        Kind::FirstKind => T::from(coeffs[0] * 0.5) + x * b1 - b2,
        // U_0 = 1, U_1 = 2x: the tail of the recurrence is one more step.
        Kind::SecondKind => T::from(coeffs[0]) + two_x * b1 - b2,
    }
}

/// Evaluates a *plain* first-kind series `sum c_k T_k(z)` (no halving).
pub fn eval_plain_t<T>(coeffs: &[f64], z: T) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + From<f64>,
{
    if coeffs.is_empty() {
        return T::from(0.0);
    }
    let zero = T::from(0.0);
    let two_z = z * T::from(2.0);
    let (mut b1, mut b2) = (zero, zero);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = T::from(c) + two_z * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    T::from(coeffs[0]) + z * b1 - b2
}

/// Complex Clenshaw for plain coefficients carried in double-double, so the
/// result is close to correctly rounded even where `|p(z)|` is much smaller
/// than the terms of the recurrence (off the interval, on large ellipses).
pub fn eval_plain_t_accurate(coeffs: &[f64], z: ComplexPoint) -> ComplexPoint {
    if coeffs.is_empty() {
        return ComplexPoint::new(0.0, 0.0);
    }
    let two_z = z * 2.0;
    let (mut b1, mut b2) = (ComplexDD::ZERO, ComplexDD::ZERO);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = b1.mul_c64(two_z).sub(b2).add_f64(c);
        b2 = b1;
        b1 = b0;
    }
    b1.mul_c64(z).sub(b2).add_f64(coeffs[0]).to_c64()
}

/// [`eval_plain_t_accurate`] at a point given in double-double, for callers
/// whose nodes are known beyond double precision.
pub(crate) fn eval_plain_t_dd(coeffs: &[f64], z: ComplexDD) -> ComplexPoint {
    if coeffs.is_empty() {
        return ComplexPoint::new(0.0, 0.0);
    }
    let two_z = z.scale(2.0);
    let (mut b1, mut b2) = (ComplexDD::ZERO, ComplexDD::ZERO);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = b1.mul(two_z).sub(b2).add_f64(c);
        b2 = b1;
        b1 = b0;
    }
    b1.mul(z).sub(b2).add_f64(coeffs[0]).to_c64()
}

/// `z(u) = (u + 1/u) / 2`.
pub fn joukowski(u: ComplexPoint) -> Result<ComplexPoint> {
    if !(u.re.is_finite() && u.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite point {u}")));
    }
    if u.re == 0.0 && u.im == 0.0 {
        return Err(Error::Domain("joukowski map is singular at u = 0".into()));
    }
    Ok((u + u.inv()) * 0.5)
}

/// Inverse of the Joukowski map on the branch with `|u| >= 1`.
///
/// Points of `[-1, 1]` map onto the unit circle.
pub fn inverse_joukowski(z: ComplexPoint) -> Result<ComplexPoint> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite point {z}")));
    }
    let one = Complex64::new(1.0, 0.0);
    // sqrt(z-1)*sqrt(z+1) behaves like z at infinity, so z + s does not cancel.
    let s = (z - one).sqrt() * (z + one).sqrt();
    let u = z + s;
    if u.norm() >= 1.0 {
        Ok(u)
    } else {
        Ok(z - s)
    }
}

/// Converts monomial coefficients `p(x) = sum m_k x^k` into plain Chebyshev
/// coefficients `p(x) = sum c_k T_k(x)` by Horner's scheme in the Chebyshev basis,
/// using `x T_k = (T_{k+1} + T_{|k-1|}) / 2`.
pub fn monomial_to_chebyshev(monomial: &[f64]) -> Vec<f64> {
    if monomial.is_empty() {
        return vec![0.0];
    }
    let mut acc = vec![*monomial.last().unwrap()];
    for &m in monomial.iter().rev().skip(1) {
        let mut next = vec![0.0; acc.len() + 1];
        for (k, &c) in acc.iter().enumerate() {
            if k == 0 {
                next[1] += c;
            } else {
                next[k + 1] += 0.5 * c;
                next[k - 1] += 0.5 * c;
            }
        }
        next[0] += m;
        acc = next;
    }
    acc
}
