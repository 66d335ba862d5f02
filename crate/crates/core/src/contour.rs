//! Trapezoidal-rule evaluation of the contour integrals for Chebyshev
//! coefficients on the Bernstein ellipse `E_rho`.
//!
//! With `u_j = rho * w_j`, `w_j = exp(2 pi i j / m)` and `z_j = (u_j + 1/u_j) / 2`,
//!
//! ```text
//! a_n(m, rho) = 2 / (m rho^n) * sum_j f(z_j) w_j^{-n}
//! b_n(m, rho) = 1 / (m rho^n) * sum_j f(z_j) (1 - rho^{-2} w_j^{-2}) w_j^{-n}
//! ```
//!
//! The per-coefficient routines sum in ascending `j` with a double-double
//! accumulator; the batch routines sample once and run a length-`m` FFT.
//! Nodes are rounded once from double-double values in both cases.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::chebcore::eval_plain_t_dd;
use crate::dd::{unit_root_dd, ComplexDD, DoubleDouble};
use crate::error::{Error, Result};
use crate::funcspace::AnalyticFn;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPlan {
    rho: f64,
    m: usize,
}

impl ContourPlan {
    pub fn new(rho: f64, m: usize) -> Result<Self> {
        if !(rho >= 1.0) || !rho.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "contour radius must be finite and >= 1, got {rho}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("node count m must be positive".into()));
        }
        Ok(Self { rho, m })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn check_analytic(&self, f: &AnalyticFn) -> Result<()> {
        if self.rho >= f.rho_max() {
            return Err(Error::Analyticity {
                rho: self.rho,
                rho_max: f.rho_max(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffResult {
    pub n: usize,
    pub value: Complex64,
    pub plan: ContourPlan,
    /// `|Im value| / max(1, |Re value|)`; zero in exact arithmetic for
    /// functions real on `[-1, 1]`.
    pub imag_diagnostic: f64,
}

impl CoeffResult {
    fn new(n: usize, value: Complex64, plan: ContourPlan) -> Self {
        Self {
            n,
            value,
            plan,
            imag_diagnostic: value.im.abs() / value.re.abs().max(1.0),
        }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// `w_j = exp(2 pi i j / m)` from libm, with `w_{m-j} = conj(w_j)` enforced
/// and the quarter-turn points exact. Cheap enough for the large node
/// counts of the modulus integrals.
pub(crate) fn unit_roots_approx(m: usize) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(1.0, 0.0); m];
    for j in 1..=m / 2 {
        let v = if 2 * j == m {
            Complex64::new(-1.0, 0.0)
        } else if 4 * j == m {
            Complex64::new(0.0, 1.0)
        } else {
            let theta = j as f64 * (2.0 * PI) / m as f64;
            Complex64::new(theta.cos(), theta.sin())
        };
        w[j] = v;
        w[m - j] = v.conj();
    }
    w
}

/// Node `z = (rho w + conj(w) / rho) / 2` on `E_rho`.
#[inline]
pub(crate) fn ellipse_point(rho: f64, w: Complex64) -> Complex64 {
    let a = 0.5 * (rho + 1.0 / rho);
    let b = 0.5 * (rho - 1.0 / rho);
    Complex64::new(a * w.re, b * w.im)
}

/// Unit roots `w_j` and ellipse nodes `z_j`, both rounded once from
/// double-double values. Near a singularity each ulp of node error is
/// amplified by `|f'/f|`, so the nodes are worth the extra work.
/// Polynomials skip the rounding and are evaluated at the double-double
/// nodes themselves.
pub(crate) struct Contour {
    pub roots: Vec<Complex64>,
    pub nodes: Vec<Complex64>,
    exact: Vec<ComplexDD>,
}

impl Contour {
    pub fn new(rho: f64, m: usize) -> Self {
        let inv = DoubleDouble::from_f64(1.0).div_f64(rho);
        let rho_dd = DoubleDouble::from_f64(rho);
        let a = rho_dd.add(inv).mul_f64(0.5);
        let b = rho_dd.add(inv.neg()).mul_f64(0.5);
        let mut roots = vec![Complex64::new(1.0, 0.0); m];
        let mut nodes = vec![Complex64::new(a.to_f64(), 0.0); m];
        let mut exact = vec![ComplexDD::new(a, DoubleDouble::ZERO); m];
        for j in 1..=m / 2 {
            let (c, s) = unit_root_dd(j, m);
            let w = Complex64::new(c.to_f64(), s.to_f64());
            let (x, y) = (a.mul(c), b.mul(s));
            roots[j] = w;
            roots[m - j] = w.conj();
            nodes[j] = Complex64::new(x.to_f64(), y.to_f64());
            nodes[m - j] = nodes[j].conj();
            exact[j] = ComplexDD::new(x, y);
            exact[m - j] = ComplexDD::new(x, y.neg());
        }
        Self { roots, nodes, exact }
    }

    /// Samples `f(z_j)`, failing on the first non-finite value.
    pub fn sample(&self, f: &AnalyticFn) -> Result<Vec<Complex64>> {
        let poly = f.polynomial_coeffs();
        (0..self.nodes.len())
            .map(|j| {
                let z = self.nodes[j];
                let v = match poly {
                    Some(c) => eval_plain_t_dd(c, self.exact[j]),
                    None => f.eval(z)?,
                };
                if v.re.is_finite() && v.im.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Evaluation { node: j, z })
                }
            })
            .collect()
    }
}

/// `v / rho^n`, splitting the power when `rho^n` alone would overflow.
pub(crate) fn divide_by_power(v: Complex64, rho: f64, n: usize) -> Complex64 {
    let p = rho.powi(n as i32);
    if p.is_finite() {
        return v / p;
    }
    let chunk = ((700.0 / rho.ln()).floor() as usize).max(1);
    let step = rho.powi(chunk as i32);
    let mut out = v;
    let mut left = n;
    while left >= chunk {
        out /= step;
        left -= chunk;
    }
    out / rho.powi(left as i32)
}

fn sampling(n: usize, m: usize, required: usize) -> Result<()> {
    if m < required {
        return Err(Error::SamplingCondition { n, m, required });
    }
    Ok(())
}

/// First-kind coefficient `a_n` from the `m`-point trapezoidal rule on `E_rho`.
pub fn coeff_t(f: &AnalyticFn, n: usize, plan: ContourPlan) -> Result<CoeffResult> {
    sampling(n, plan.m, n + 1)?;
    plan.check_analytic(f)?;
    let m = plan.m;
    let contour = Contour::new(plan.rho, m);
    let g = contour.sample(f)?;
    let roots = &contour.roots;
    let mut sum = ComplexDD::ZERO;
    for (j, &gj) in g.iter().enumerate() {
        sum = sum.add_product(gj, roots[(j * n) % m].conj());
    }
    let value = divide_by_power(sum.to_c64() * (2.0 / m as f64), plan.rho, n);
    Ok(CoeffResult::new(n, value, plan))
}

/// Second-kind coefficient `b_n` from the `m`-point trapezoidal rule on `E_rho`.
pub fn coeff_u(f: &AnalyticFn, n: usize, plan: ContourPlan) -> Result<CoeffResult> {
    sampling(n, plan.m, n + 3)?;
    plan.check_analytic(f)?;
    let m = plan.m;
    let contour = Contour::new(plan.rho, m);
    let g = contour.sample(f)?;
    let roots = &contour.roots;
    let inv_rho2 = 1.0 / (plan.rho * plan.rho);
    let mut sum = ComplexDD::ZERO;
    for (j, &gj) in g.iter().enumerate() {
        let weight = Complex64::new(1.0, 0.0) - roots[(2 * j) % m].conj() * inv_rho2;
        sum = sum.add_product(gj * weight, roots[(j * n) % m].conj());
    }
    let value = divide_by_power(sum.to_c64() / m as f64, plan.rho, n);
    Ok(CoeffResult::new(n, value, plan))
}

fn forward_dft(mut buffer: Vec<Complex64>) -> Vec<Complex64> {
    let fft = FftPlanner::new().plan_fft_forward(buffer.len());
    fft.process(&mut buffer);
    buffer
}

/// `a_0, ..., a_N` from a single set of `m` samples.
pub fn batch_coeffs_t(f: &AnalyticFn, big_n: usize, plan: ContourPlan) -> Result<Vec<CoeffResult>> {
    sampling(big_n, plan.m, big_n + 1)?;
    plan.check_analytic(f)?;
    let spectrum = forward_dft(Contour::new(plan.rho, plan.m).sample(f)?);
    let scale = 2.0 / plan.m as f64;
    Ok((0..=big_n)
        .map(|n| CoeffResult::new(n, divide_by_power(spectrum[n] * scale, plan.rho, n), plan))
        .collect())
}

/// `b_0, ..., b_N` from a single set of `m` samples, with the second-kind
/// weight folded into the samples before the transform.
pub fn batch_coeffs_u(f: &AnalyticFn, big_n: usize, plan: ContourPlan) -> Result<Vec<CoeffResult>> {
    sampling(big_n, plan.m, big_n + 3)?;
    plan.check_analytic(f)?;
    let m = plan.m;
    let contour = Contour::new(plan.rho, m);
    let roots = &contour.roots;
    let inv_rho2 = 1.0 / (plan.rho * plan.rho);
    let weighted = contour
        .sample(f)?
        .into_iter()
        .enumerate()
        .map(|(j, g)| g * (Complex64::new(1.0, 0.0) - roots[(2 * j) % m].conj() * inv_rho2))
        .collect();
    let spectrum = forward_dft(weighted);
    let scale = 1.0 / m as f64;
    Ok((0..=big_n)
        .map(|n| CoeffResult::new(n, divide_by_power(spectrum[n] * scale, plan.rho, n), plan))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{bessel_i, registry_lookup};

    fn plan(rho: f64, m: usize) -> ContourPlan {
        ContourPlan::new(rho, m).unwrap()
    }

    #[test]
    fn unit_roots_are_conjugate_symmetric() {
        for m in [1, 2, 3, 4, 7, 8, 64, 101, 202] {
            let c = Contour::new(1.7, m);
            let w = unit_roots_approx(m);
            for j in 1..m {
                assert_eq!(c.roots[m - j], c.roots[j].conj());
                assert_eq!(c.nodes[m - j], c.nodes[j].conj());
                assert!((c.roots[j] - w[j]).norm() < 1e-15);
                assert!((c.nodes[j] - ellipse_point(1.7, w[j])).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn chebyshev_t3_is_exact() {
        let f = registry_lookup("poly", &[0.0, 0.0, 0.0, 1.0]).unwrap();
        let r = coeff_t(&f, 3, plan(1.5, 7)).unwrap();
        assert!((r.re() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn exp_at_unit_radius() {
        let f = registry_lookup("exp", &[]).unwrap();
        let r = coeff_t(&f, 0, plan(1.0, 64)).unwrap();
        assert!((r.re() - 2.5321317555040167).abs() < 1e-13);
        assert_eq!(r.imag_diagnostic, 0.0);
    }

    #[test]
    fn pole_coefficient_ten() {
        let f = registry_lookup("pole", &[2.0]).unwrap();
        let exact = -(2.0 / 3f64.sqrt()) * (2.0 - 3f64.sqrt()).powi(10);
        let r = coeff_t(&f, 10, plan(3.0, 202)).unwrap();
        assert!(((r.re() - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn second_kind_examples() {
        let x = registry_lookup("poly", &[0.0, 1.0]).unwrap();
        assert!((coeff_u(&x, 1, plan(1.2, 9)).unwrap().re() - 0.5).abs() < 1e-13);
        let one = registry_lookup("poly", &[1.0]).unwrap();
        assert!((coeff_u(&one, 0, plan(1.5, 5)).unwrap().re() - 1.0).abs() < 1e-14);
        let exp = registry_lookup("exp", &[]).unwrap();
        let expected = bessel_i(4, 1.0).unwrap() - bessel_i(6, 1.0).unwrap();
        let b4 = coeff_u(&exp, 4, plan(9.0, 64)).unwrap().re();
        assert!(((b4 - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn preconditions() {
        let f = registry_lookup("pole", &[2.0]).unwrap();
        assert!(matches!(
            coeff_t(&f, 5, plan(1.0, 5)),
            Err(Error::SamplingCondition { n: 5, m: 5, required: 6 })
        ));
        assert!(matches!(
            coeff_u(&f, 5, plan(1.0, 7)),
            Err(Error::SamplingCondition { required: 8, .. })
        ));
        assert!(matches!(
            coeff_t(&f, 1, plan(3.8, 16)),
            Err(Error::Analyticity { .. })
        ));
        assert!(matches!(
            batch_coeffs_t(&f, 10, plan(1.0, 10)),
            Err(Error::SamplingCondition { .. })
        ));
        assert!(ContourPlan::new(0.9, 10).is_err());
        assert!(ContourPlan::new(1.0, 0).is_err());
    }

    #[test]
    fn evaluation_error_names_node() {
        use std::sync::Arc;
        let f = AnalyticFn::new(
            "bad",
            f64::INFINITY,
            Arc::new(|z: Complex64| Ok(if z.im > 0.5 { Complex64::new(f64::NAN, 0.0) } else { z })),
        )
        .unwrap();
        match coeff_t(&f, 0, plan(3.0, 8)) {
            Err(Error::Evaluation { node, .. }) => assert_eq!(node, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn batch_entry_zero_matches_per_coefficient() {
        let f = registry_lookup("exp", &[]).unwrap();
        let batch = batch_coeffs_t(&f, 50, plan(1.0, 101)).unwrap();
        assert_eq!(batch.len(), 51);
        let single = coeff_t(&f, 0, plan(1.0, 101)).unwrap();
        assert!((batch[0].value - single.value).norm() < 1e-14);
    }

    #[test]
    fn divide_by_power_survives_overflow() {
        let v = divide_by_power(Complex64::new(1e300, 0.0), 10.0, 400);
        assert!((v.re.log10() + 100.0).abs() < 1e-9);
    }
}
