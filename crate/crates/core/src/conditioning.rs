//! Mean modulus `M(rho)`, condition numbers of the coefficient integrals,
//! optimal-radius rules and node-count heuristics.
//!
//! For the first kind, `kappa(n, rho) = M(rho) / (|a_n| rho^n)` where
//! `M(rho) = (1/pi) * integral |f(z(rho e^{i theta}))| d theta`.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::contour::{coeff_t, ellipse_point, unit_roots_approx, ContourPlan};
use crate::error::{Error, Result};
use crate::funcspace::AnalyticFn;

/// Default radius offset for branch-point functions.
pub const BRANCH_OFFSET: f64 = 1e-3;
/// Minimum quadrature size for `M(rho)`.
pub const DEFAULT_Q: usize = 1024;
const MAX_Q: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusRule {
    Fixed(f64),
    /// `M(rho) ~ exp(mu rho^nu) rho^varsigma` as `rho -> infinity`.
    Entire { mu: f64, nu: f64, varsigma: f64 },
    /// Nearest singularity a pole on `E_A`. `refined` selects the variant
    /// with the `log(A^2 - 1) - log(A^2 + 1)` correction.
    Pole { a: f64, refined: bool },
    BranchLimit { rho_max: f64 },
    /// Numerical minimisation of `log kappa` over `log rho`.
    Auto { rho_max_hint: f64, tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    PoleLike,
    EntireLike,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionEstimate {
    pub n: usize,
    pub rho: f64,
    pub m_rho: f64,
    pub kappa: f64,
    pub ref_coeff: f64,
    /// Set when the reference coefficient is zero and `kappa` is infinite.
    pub zero_coefficient: bool,
}

fn check_radius(f: &AnalyticFn, rho: f64) -> Result<()> {
    let rho_max = f.rho_max();
    if !(rho > 0.0) || !rho.is_finite() || rho >= rho_max || rho <= 1.0 / rho_max {
        return Err(Error::Analyticity { rho, rho_max });
    }
    Ok(())
}

/// Node count for `M(rho)`: the integrand peaks with width about
/// `(rho_max - rho) / rho` near a singularity.
pub fn default_q(f: &AnalyticFn, rho: f64) -> usize {
    let rho_max = f.rho_max();
    if !rho_max.is_finite() {
        return DEFAULT_Q;
    }
    let r = rho.max(1.0 / rho);
    let want = 40.0 * r / (rho_max - r);
    if !want.is_finite() || want >= MAX_Q as f64 {
        return MAX_Q;
    }
    (want.ceil() as usize).next_power_of_two().clamp(DEFAULT_Q, MAX_Q)
}

/// Weighted modulus integral `(2/q) sum_j |f(z_j)| |weight(w_j)|`.
fn modulus_sum(
    f: &AnalyticFn,
    rho: f64,
    q: usize,
    weight: impl Fn(Complex64) -> f64,
) -> Result<f64> {
    let roots = unit_roots_approx(q);
    let mut sum = 0.0;
    for (j, &w) in roots.iter().enumerate() {
        let z = ellipse_point(rho, w);
        let v = f.eval(z)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Evaluation { node: j, z });
        }
        sum += v.norm() * weight(w);
    }
    Ok(2.0 * sum / q as f64)
}

/// `M(rho)` by the `q`-point trapezoidal rule. Radii below one are accepted
/// and give `M(1/rho)`, since `E_rho` and `E_{1/rho}` coincide.
pub fn m_of_rho(f: &AnalyticFn, rho: f64, q: usize) -> Result<f64> {
    if q < 64 {
        return Err(Error::InvalidArgument(format!(
            "M(rho) quadrature needs q >= 64, got {q}"
        )));
    }
    check_radius(f, rho)?;
    modulus_sum(f, rho, q, |_| 1.0)
}

/// `M(rho)` at `q` and `2q` nodes; returns the finer value and the relative
/// difference between the two.
pub fn m_of_rho_checked(f: &AnalyticFn, rho: f64, q: usize) -> Result<(f64, f64)> {
    let coarse = m_of_rho(f, rho, q)?;
    let fine = m_of_rho(f, rho, 2 * q)?;
    Ok((fine, (fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE)))
}

/// `exp(ln m - ln|r| - n ln rho)`, robust to `rho^n` overflowing.
fn ratio(m_rho: f64, reference: f64, rho: f64, n: usize) -> f64 {
    let direct = m_rho / (reference.abs() * rho.powi(n as i32));
    if direct.is_finite() && direct > 0.0 {
        direct
    } else {
        (m_rho.ln() - reference.abs().ln() - n as f64 * rho.ln()).exp()
    }
}

fn estimate(n: usize, rho: f64, m_rho: f64, reference: f64) -> ConditionEstimate {
    let zero = reference == 0.0;
    ConditionEstimate {
        n,
        rho,
        m_rho,
        kappa: if zero { f64::INFINITY } else { ratio(m_rho, reference, rho, n) },
        ref_coeff: reference,
        zero_coefficient: zero,
    }
}

/// First-kind condition number with a caller-supplied reference `a_n`.
pub fn kappa_t(f: &AnalyticFn, n: usize, rho: f64, reference: f64) -> Result<ConditionEstimate> {
    let m_rho = m_of_rho(f, rho, default_q(f, rho))?;
    Ok(estimate(n, rho, m_rho, reference))
}

/// Second-kind condition number with a caller-supplied reference `b_n`.
/// The numerator carries the weight `|1 - (rho e^{i theta})^{-2}|`.
pub fn kappa_u(f: &AnalyticFn, n: usize, rho: f64, reference: f64) -> Result<ConditionEstimate> {
    check_radius(f, rho)?;
    let inv_rho2 = 1.0 / (rho * rho);
    let q = default_q(f, rho);
    // (1/2pi) integral = half of the (1/pi) normalisation used by M
    let weighted = 0.5
        * modulus_sum(f, rho, q, |w| {
            (Complex64::new(1.0, 0.0) - (w * w).conj() * inv_rho2).norm()
        })?;
    Ok(estimate(n, rho, weighted, reference))
}

/// Closed-form radius for rule `rule` and index `n`. The `Auto` rule needs a
/// function and is handled by [`select_radius`].
pub fn optimal_radius(rule: &RadiusRule, n: usize) -> Result<f64> {
    let nf = n as f64;
    let rho = match *rule {
        RadiusRule::Fixed(rho) => rho,
        RadiusRule::Entire { mu, nu, varsigma } => ((nf - varsigma) / (mu * nu)).powf(1.0 / nu).max(1.0),
        RadiusRule::Pole { a, refined } => pole_radius(a, n, refined).max(1.0),
        RadiusRule::BranchLimit { rho_max } => ((1.0 - BRANCH_OFFSET) * rho_max).max(1.0),
        RadiusRule::Auto { .. } => {
            return Err(Error::InvalidArgument(
                "the auto radius rule needs a function to probe".into(),
            ))
        }
    };
    Ok(rho)
}

fn pole_radius(a: f64, n: usize, refined: bool) -> f64 {
    if n == 0 {
        return a * (1.0 - 1.0 / (3.0 * LN_2));
    }
    let nf = n as f64;
    let simple = nf * (3.0 * LN_2 + nf.ln());
    let denom = if refined {
        let d = nf * (3.0 * LN_2 - (a * a + 1.0).ln() + (a * a - 1.0).ln() + nf.ln());
        // the correction can swamp small n when A is close to 1
        if d > 1.0 { d } else { simple }
    } else {
        simple
    };
    a * (1.0 - 1.0 / denom)
}

/// Radius for coefficient `n` of `f` according to its own rule.
pub fn select_radius(f: &AnalyticFn, n: usize) -> Result<f64> {
    match *f.radius_rule() {
        RadiusRule::Auto { rho_max_hint, tolerance } => {
            Ok(radius_auto(f, n, rho_max_hint.min(f.rho_max()), tolerance)?.rho)
        }
        ref rule => {
            let rho = optimal_radius(rule, n)?;
            if rho >= f.rho_max() {
                return Err(Error::Analyticity {
                    rho,
                    rho_max: f.rho_max(),
                });
            }
            Ok(rho)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutoRadius {
    pub rho: f64,
    /// The probe coefficient underflowed; `rho` is the bracket's upper end.
    pub underflow: bool,
}

const AUTO_MARGIN: f64 = 1e-3;
const AUTO_CAP: f64 = 1e6;

/// Golden-section minimisation of `log kappa(n, rho)` over `log rho`.
///
/// `log M` is convex in `log rho`, so `log M - n log rho` is unimodal. The
/// reference coefficient only shifts `log kappa` by a constant; it is probed
/// once to detect underflow.
pub fn radius_auto(f: &AnalyticFn, n: usize, rho_max: f64, tol: f64) -> Result<AutoRadius> {
    if !(rho_max > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rho_max must exceed 1, got {rho_max}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let nf = n as f64;
    let objective = |t: f64| -> Result<f64> {
        let rho = t.exp();
        match m_of_rho(f, rho, default_q(f, rho)) {
            Ok(m) if m > 0.0 && m.is_finite() => Ok(m.ln() - nf * t),
            Ok(_) | Err(Error::Evaluation { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };

    let (mut lo, mut hi) = if rho_max.is_finite() {
        (0.0, (rho_max.ln() - AUTO_MARGIN).max(AUTO_MARGIN))
    } else {
        let mut lo = 1.1f64.ln();
        let mut hi = (4.0 * nf + 4.0).max(8.0).ln();
        let mut current = objective(hi)?;
        while hi < AUTO_CAP.ln() {
            let next_hi = (hi + LN_2).min(AUTO_CAP.ln());
            let next = objective(next_hi)?;
            if next < current {
                lo = hi;
                hi = next_hi;
                current = next;
            } else {
                break;
            }
        }
        (lo, hi)
    };

    let mid = 0.5 * (lo + hi);
    let m_probe = 4 * n + 64;
    let probe = coeff_t(f, n, ContourPlan::new(mid.exp(), m_probe)?)?;
    if probe.value.norm() < 1e-300 {
        return Ok(AutoRadius {
            rho: hi.exp(),
            underflow: true,
        });
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    let (f_lo, f_hi) = (objective(lo.max(1e-12))?, objective(hi)?);
    let values = [fc, fd, f_lo, f_hi];
    let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let bottom = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if top.is_finite() && top - bottom <= 1e-12 * (1.0 + bottom.abs()) {
        return Ok(AutoRadius {
            rho: mid.exp(),
            underflow: false,
        });
    }
    while hi - lo > 2.0 * tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = objective(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = objective(d)?;
        }
    }
    Ok(AutoRadius {
        rho: (0.5 * (lo + hi)).exp().max(1.0),
        underflow: false,
    })
}

/// Trapezoidal node count needed for relative accuracy `eps` at index `n`.
pub fn nodes_estimate(n: usize, eps: f64, class: NodeClass) -> usize {
    match class {
        NodeClass::PoleLike => {
            if n == 0 {
                return 50;
            }
            let nf = n as f64;
            (nf * (3.0 * LN_2 + nf.ln()) * (1.0 / eps).ln()).max(50.0).ceil() as usize
        }
        NodeClass::EntireLike => (2 * n + 2).max(100),
    }
}
