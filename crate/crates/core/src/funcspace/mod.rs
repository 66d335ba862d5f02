//! Analytic test functions: complex evaluation, analyticity metadata, and
//! exact-coefficient oracles.
//!
//! Every registry function is real on `[-1, 1]` and satisfies
//! `f(conj z) = conj f(z)`.

mod bessel;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use bessel::{bessel_i, bessel_j};

use crate::chebcore::{eval_plain_t_accurate, inverse_joukowski, monomial_to_chebyshev, ComplexPoint};
use crate::conditioning::{NodeClass, RadiusRule};
use crate::error::{Error, Result};

pub type EvalFn = Arc<dyn Fn(ComplexPoint) -> Result<ComplexPoint> + Send + Sync>;
/// Exact `s`-th derivative at a real point.
pub type DerivativeFn = Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    BesselSeries,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCoeff {
    pub n: usize,
    pub value: f64,
    pub provenance: Provenance,
}

/// Closed-form first-kind coefficients for the functions that have them.
#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Oracle {
    /// `e^{c x}`: `a_n = 2 I_n(c)`.
    Exp { c: f64 },
    /// `cos(c x + d)`: `a_n = 2 cos(d + n pi/2) J_n(c)`.
    CosAffine { c: f64, d: f64 },
    /// `1/(x - a)`, `a > 1`.
    RealPole { a: f64 },
    /// `sum_j 2 Re(r_j / (x - z_j))`, conjugate pole pairs.
    ConjugatePoles { terms: Vec<(Complex64, Complex64)> },
    /// `e^{2x} + cos(2x + 3)`.
    Exp2Cos,
    /// Plain Chebyshev coefficients `p = sum c_k T_k`.
    Chebyshev { plain: Vec<f64> },
}

impl Oracle {
    pub fn coeff(&self, n: usize) -> Result<OracleCoeff> {
        let (value, provenance) = match self {
            Oracle::Exp { c } => (2.0 * bessel_i(n, *c)?, Provenance::BesselSeries),
            Oracle::CosAffine { c, d } => (cos_affine_coeff(*c, *d, n)?, Provenance::BesselSeries),
            Oracle::RealPole { a } => {
                let s = (a * a - 1.0).sqrt();
                let r = 1.0 / (a + s);
                (-2.0 / s * r.powi(n as i32), Provenance::ClosedForm)
            }
            Oracle::ConjugatePoles { terms } => {
                let v = terms
                    .iter()
                    .map(|&(res, z0)| 2.0 * (res * simple_pole_coeff(z0, n)).re)
                    .sum();
                (v, Provenance::ClosedForm)
            }
            Oracle::Exp2Cos => (
                2.0 * bessel_i(n, 2.0)? + cos_affine_coeff(2.0, 3.0, n)?,
                Provenance::BesselSeries,
            ),
            Oracle::Chebyshev { plain } => {
                let c = plain.get(n).copied().unwrap_or(0.0);
                (if n == 0 { 2.0 * c } else { c }, Provenance::ClosedForm)
            }
        };
        Ok(OracleCoeff {
            n,
            value,
            provenance,
        })
    }
}

/// `cos(theta + k pi/2)` with the quarter turns applied exactly.
pub(crate) fn cos_quarter_shift(theta: f64, k: usize) -> f64 {
    match k % 4 {
        0 => theta.cos(),
        1 => -theta.sin(),
        2 => -theta.cos(),
        _ => theta.sin(),
    }
}

fn cos_affine_coeff(c: f64, d: f64, n: usize) -> Result<f64> {
    let phase = cos_quarter_shift(d, n);
    if phase == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * phase * bessel_j(n, c)?)
}

/// First-kind coefficient of `1/(x - z0)` for `z0` off `[-1, 1]`:
/// `a_n = -2 / s * u^{-n}` with `u = z0 + s`, `|u| > 1`.
fn simple_pole_coeff(z0: Complex64, n: usize) -> Complex64 {
    let u = inverse_joukowski(z0).expect("finite pole");
    let s = (u - u.inv()) * 0.5;
    -(u.inv().powi(n as i32)) * 2.0 / s
}

fn factorial(s: usize) -> f64 {
    (1..=s).map(|k| k as f64).product()
}

/// An analytic function on a neighbourhood of `[-1, 1]`, with the metadata the
/// contour machinery needs.
#[derive(Clone)]
pub struct AnalyticFn {
    name: String,
    eval: EvalFn,
    rho_max: f64,
    radius_rule: RadiusRule,
    node_class: NodeClass,
    oracle: Option<Oracle>,
    derivative: Option<DerivativeFn>,
    branch_cut: bool,
    /// Plain Chebyshev coefficients when `f` is a polynomial; lets the
    /// contour code evaluate at unrounded nodes.
    polynomial: Option<Arc<Vec<f64>>>,
}

impl fmt::Debug for AnalyticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFn")
            .field("name", &self.name)
            .field("rho_max", &self.rho_max)
            .field("radius_rule", &self.radius_rule)
            .field("node_class", &self.node_class)
            .field("oracle", &self.oracle)
            .field("branch_cut", &self.branch_cut)
            .finish_non_exhaustive()
    }
}

impl AnalyticFn {
    /// A function with no oracle, an automatic radius rule and pole-like node
    /// heuristics. `rho_max` may be `f64::INFINITY`.
    pub fn new(name: impl Into<String>, rho_max: f64, eval: EvalFn) -> Result<Self> {
        if !(rho_max > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "rho_max must exceed 1, got {rho_max}"
            )));
        }
        Ok(Self {
            name: name.into(),
            eval,
            rho_max,
            radius_rule: RadiusRule::Auto {
                rho_max_hint: rho_max,
                tolerance: 1e-3,
            },
            node_class: if rho_max.is_finite() {
                NodeClass::PoleLike
            } else {
                NodeClass::EntireLike
            },
            oracle: None,
            derivative: None,
            branch_cut: false,
            polynomial: None,
        })
    }

    pub fn with_radius_rule(mut self, rule: RadiusRule) -> Self {
        self.radius_rule = rule;
        self
    }

    pub fn with_node_class(mut self, class: NodeClass) -> Self {
        self.node_class = class;
        self
    }

    pub fn with_oracle(mut self, oracle: Oracle) -> Self {
        self.oracle = Some(oracle);
        self
    }

    pub fn with_derivative(mut self, derivative: DerivativeFn) -> Self {
        self.derivative = Some(derivative);
        self
    }

    pub fn with_branch_cut(mut self, branch_cut: bool) -> Self {
        self.branch_cut = branch_cut;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn radius_rule(&self) -> &RadiusRule {
        &self.radius_rule
    }

    pub fn node_class(&self) -> NodeClass {
        self.node_class
    }

    pub fn oracle(&self) -> Option<&Oracle> {
        self.oracle.as_ref()
    }

    pub fn has_branch_cut(&self) -> bool {
        self.branch_cut
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        (self.eval)(z)
    }

    pub(crate) fn polynomial_coeffs(&self) -> Option<&[f64]> {
        self.polynomial.as_deref().map(Vec::as_slice)
    }

    /// Real-axis convenience; returns the real part.
    pub fn eval_real(&self, x: f64) -> Result<f64> {
        Ok(self.eval(Complex64::new(x, 0.0))?.re)
    }

    /// Exact `s`-th derivative at real `x`, when known.
    pub fn derivative(&self, x: f64, s: usize) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(x, s))
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Exact first-kind coefficient `a_n` (stored convention, unhalved).
    pub fn exact_coeff(&self, n: usize) -> Result<f64> {
        Ok(self.oracle_coeff(n)?.value)
    }

    pub fn oracle_coeff(&self, n: usize) -> Result<OracleCoeff> {
        match &self.oracle {
            Some(o) => o.coeff(n),
            None => Err(Error::NoOracle(self.name.clone())),
        }
    }

    /// Polynomial given by plain Chebyshev coefficients, `p = sum c_k T_k`.
    pub fn chebyshev_polynomial(plain: Vec<f64>) -> Result<Self> {
        if plain.is_empty() {
            return Err(Error::Registry("poly needs at least one coefficient".into()));
        }
        if plain.iter().any(|c| !c.is_finite()) {
            return Err(Error::Registry("poly coefficients must be finite".into()));
        }
        let for_eval = Arc::new(plain.clone());
        let exact = Arc::clone(&for_eval);
        let for_deriv = plain.clone();
        let eval: EvalFn = Arc::new(move |z| Ok(eval_plain_t_accurate(&for_eval, z)));
        let deriv: DerivativeFn = Arc::new(move |x, s| {
            let mut stored = for_deriv.clone();
            stored[0] *= 2.0;
            let series = crate::chebcore::ChebSeries::first_kind(stored).expect("finite");
            series.differentiate(s).expect("first kind").eval(x)
        });
        let mut f = AnalyticFn::new("poly", f64::INFINITY, eval)?
            .with_radius_rule(RadiusRule::Fixed(1.0))
            .with_node_class(NodeClass::EntireLike)
            .with_oracle(Oracle::Chebyshev { plain })
            .with_derivative(deriv);
        f.polynomial = Some(exact);
        Ok(f)
    }

    /// Polynomial given by monomial coefficients, `p = sum m_k x^k`.
    pub fn monomial_polynomial(monomial: &[f64]) -> Result<Self> {
        if monomial.is_empty() {
            return Err(Error::Registry("poly_mono needs at least one coefficient".into()));
        }
        let mut f = Self::chebyshev_polynomial(monomial_to_chebyshev(monomial))?;
        f.name = "poly_mono".into();
        Ok(f)
    }
}

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn expect_params(name: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::Registry(format!(
            "`{name}` takes {n} parameter(s), got {}",
            params.len()
        )));
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::Registry(format!("`{name}` parameters must be finite")));
    }
    Ok(())
}

/// Names accepted by [`registry_lookup`], with their parameter lists.
pub const REGISTRY_NAMES: &[(&str, &str)] = &[
    ("exp", "e^x"),
    ("cos", "cos(x); alias for cos_affine with c=1, d=0, or cos(cx+d) given c,d"),
    ("cos_affine", "c,d: cos(c x + d), c > 0"),
    ("pole", "a: 1/(x - a), a > 1"),
    ("rational_runge", "(x + 1)/(x^2 + 1)"),
    ("rational4", "(x + 1)/(x^2 + 4)"),
    ("branch", "c,phi: (c - x)^phi, c > 1, phi > 0"),
    ("exp2cos", "e^{2x} + cos(2x + 3)"),
    ("poly", "c0,c1,...: sum c_k T_k(x)"),
    ("poly_mono", "m0,m1,...: sum m_k x^k"),
];

/// Looks up a test function by name.
pub fn registry_lookup(name: &str, params: &[f64]) -> Result<AnalyticFn> {
    match name {
        "exp" => {
            expect_params(name, params, 0)?;
            Ok(exp_scaled("exp", 1.0))
        }
        "cos" | "cos_affine" => {
            let (c, d) = match (name, params.len()) {
                ("cos", 0) => (1.0, 0.0),
                _ => {
                    expect_params(name, params, 2)?;
                    (params[0], params[1])
                }
            };
            cos_affine(c, d)
        }
        "pole" => {
            expect_params(name, params, 1)?;
            real_pole(params[0])
        }
        "rational_runge" => {
            expect_params(name, params, 0)?;
            Ok(rational_pair(name, Complex64::new(0.0, 1.0)))
        }
        "rational4" => {
            expect_params(name, params, 0)?;
            Ok(rational_pair(name, Complex64::new(0.0, 2.0)))
        }
        "branch" => {
            expect_params(name, params, 2)?;
            branch(params[0], params[1])
        }
        "exp2cos" => {
            expect_params(name, params, 0)?;
            Ok(exp2cos())
        }
        "poly" => AnalyticFn::chebyshev_polynomial(params.to_vec()),
        "poly_mono" => AnalyticFn::monomial_polynomial(params),
        other => Err(Error::Registry(format!("unknown function `{other}`"))),
    }
}

fn exp_scaled(name: &str, c: f64) -> AnalyticFn {
    let eval: EvalFn = Arc::new(move |z: Complex64| Ok((z * c).exp()));
    let deriv: DerivativeFn = Arc::new(move |x, s| c.powi(s as i32) * (c * x).exp());
    AnalyticFn::new(name, f64::INFINITY, eval)
        .expect("entire")
        .with_radius_rule(RadiusRule::Entire {
            mu: c / 2.0,
            nu: 1.0,
            varsigma: -0.5,
        })
        .with_node_class(NodeClass::EntireLike)
        .with_oracle(Oracle::Exp { c })
        .with_derivative(deriv)
}

fn cos_affine(c: f64, d: f64) -> Result<AnalyticFn> {
    if !(c > 0.0) {
        return Err(Error::Registry(format!("cos_affine needs c > 0, got {c}")));
    }
    let eval: EvalFn = Arc::new(move |z: Complex64| Ok((z * c + d).cos()));
    let deriv: DerivativeFn =
        Arc::new(move |x, s| c.powi(s as i32) * cos_quarter_shift(c * x + d, s));
    Ok(AnalyticFn::new(format!("cos_affine({c},{d})"), f64::INFINITY, eval)?
        .with_radius_rule(RadiusRule::Entire {
            mu: c / 2.0,
            nu: 1.0,
            varsigma: -0.5,
        })
        .with_node_class(NodeClass::EntireLike)
        .with_oracle(Oracle::CosAffine { c, d })
        .with_derivative(deriv))
}

fn real_pole(a: f64) -> Result<AnalyticFn> {
    if !(a > 1.0) {
        return Err(Error::Registry(format!("pole needs a > 1, got {a}")));
    }
    let big_a = a + (a * a - 1.0).sqrt();
    let eval: EvalFn = Arc::new(move |z: Complex64| Ok((z - a).inv()));
    let deriv: DerivativeFn = Arc::new(move |x, s| {
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        sign * factorial(s) / (x - a).powi(s as i32 + 1)
    });
    Ok(AnalyticFn::new(format!("pole({a})"), big_a, eval)?
        .with_radius_rule(RadiusRule::Pole {
            a: big_a,
            refined: false,
        })
        .with_node_class(NodeClass::PoleLike)
        .with_oracle(Oracle::RealPole { a })
        .with_derivative(deriv))
}

/// `(x + 1) / ((x - z0)(x - conj z0))` for purely imaginary `z0`.
fn rational_pair(name: &str, z0: Complex64) -> AnalyticFn {
    let q = (z0 * z0.conj()).re;
    let residue = (z0 + 1.0) / (z0 - z0.conj());
    let big_a = inverse_joukowski(z0).expect("finite pole").norm();
    let eval: EvalFn = Arc::new(move |z: Complex64| Ok((z + 1.0) / (z * z + q)));
    let deriv: DerivativeFn = Arc::new(move |x, s| {
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        let term = residue * (c64(x) - z0).powi(-(s as i32 + 1));
        2.0 * sign * factorial(s) * term.re
    });
    AnalyticFn::new(name, big_a, eval)
        .expect("finite rho_max > 1")
        .with_radius_rule(RadiusRule::Pole {
            a: big_a,
            refined: false,
        })
        .with_node_class(NodeClass::PoleLike)
        .with_oracle(Oracle::ConjugatePoles {
            terms: vec![(residue, z0)],
        })
        .with_derivative(deriv)
}

fn branch(c: f64, phi: f64) -> Result<AnalyticFn> {
    if !(c > 1.0) {
        return Err(Error::Registry(format!("branch needs c > 1, got {c}")));
    }
    if !(phi > 0.0) {
        return Err(Error::Registry(format!("branch needs phi > 0, got {phi}")));
    }
    let rho_max = c + (c * c - 1.0).sqrt();
    let eval: EvalFn = Arc::new(move |z: Complex64| Ok(((c64(c) - z).ln() * phi).exp()));
    let deriv: DerivativeFn = Arc::new(move |x, s| {
        let falling: f64 = (0..s).map(|j| phi - j as f64).product();
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        sign * falling * (c - x).powf(phi - s as f64)
    });
    Ok(AnalyticFn::new(format!("branch({c},{phi})"), rho_max, eval)?
        .with_radius_rule(RadiusRule::BranchLimit { rho_max })
        .with_node_class(NodeClass::PoleLike)
        .with_derivative(deriv)
        .with_branch_cut(true))
}

fn exp2cos() -> AnalyticFn {
    let eval: EvalFn = Arc::new(|z: Complex64| Ok((z * 2.0).exp() + (z * 2.0 + 3.0).cos()));
    let deriv: DerivativeFn = Arc::new(|x, s| {
        let scale = 2f64.powi(s as i32);
        scale * ((2.0 * x).exp() + cos_quarter_shift(2.0 * x + 3.0, s))
    });
    AnalyticFn::new("exp2cos", f64::INFINITY, eval)
        .expect("entire")
        .with_radius_rule(RadiusRule::Entire {
            mu: 1.0,
            nu: 1.0,
            varsigma: -0.5,
        })
        .with_node_class(NodeClass::EntireLike)
        .with_oracle(Oracle::Exp2Cos)
        .with_derivative(deriv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebcore::ChebSeries;

    fn all_registry() -> Vec<AnalyticFn> {
        vec![
            registry_lookup("exp", &[]).unwrap(),
            registry_lookup("cos", &[]).unwrap(),
            registry_lookup("cos_affine", &[2.0, 2.0]).unwrap(),
            registry_lookup("pole", &[2.0]).unwrap(),
            registry_lookup("rational_runge", &[]).unwrap(),
            registry_lookup("rational4", &[]).unwrap(),
            registry_lookup("branch", &[1.5, 0.5]).unwrap(),
            registry_lookup("exp2cos", &[]).unwrap(),
            registry_lookup("poly", &[0.5, -1.0, 0.25, 2.0]).unwrap(),
            registry_lookup("poly_mono", &[1.0, 0.0, -3.0]).unwrap(),
        ]
    }

    #[test]
    fn rho_max_values() {
        let pole = registry_lookup("pole", &[2.0]).unwrap();
        assert!((pole.rho_max() - 3.7320508).abs() < 1e-7);
        assert!(registry_lookup("exp", &[]).unwrap().rho_max().is_infinite());
        let runge = registry_lookup("rational_runge", &[]).unwrap();
        assert!((runge.rho_max() - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        let r4 = registry_lookup("rational4", &[]).unwrap();
        assert!((r4.rho_max() - (2.0 + 5f64.sqrt())).abs() < 1e-14);
        let br = registry_lookup("branch", &[2.0, 0.5]).unwrap();
        assert!((br.rho_max() - (2.0 + 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn registry_errors() {
        assert!(matches!(
            registry_lookup("nope", &[]),
            Err(Error::Registry(_))
        ));
        assert!(registry_lookup("pole", &[1.0]).is_err());
        assert!(registry_lookup("pole", &[0.5]).is_err());
        assert!(registry_lookup("pole", &[]).is_err());
        assert!(registry_lookup("exp", &[1.0]).is_err());
        assert!(registry_lookup("poly", &[]).is_err());
        assert!(registry_lookup("branch", &[0.5, 0.5]).is_err());
        assert!(registry_lookup("cos_affine", &[-1.0, 0.0]).is_err());
    }

    #[test]
    fn rational4_at_zero() {
        let f = registry_lookup("rational4", &[]).unwrap();
        assert_eq!(f.eval(c64(0.0)).unwrap(), c64(0.25));
    }

    #[test]
    fn exact_coefficients() {
        let exp = registry_lookup("exp", &[]).unwrap();
        assert!((exp.exact_coeff(0).unwrap() - 2.5321317555040167).abs() < 1e-15);
        let pole = registry_lookup("pole", &[2.0]).unwrap();
        assert!((pole.exact_coeff(1).unwrap() + 0.30940107675850305).abs() < 1e-16);
        let cos = registry_lookup("cos_affine", &[2.0, 2.0]).unwrap();
        let expected = 2.0 * 2f64.cos() * 0.22389077914123567;
        assert!((cos.exact_coeff(0).unwrap() - expected).abs() < 1e-15);
        assert!((cos.exact_coeff(0).unwrap() + 0.1863428789434003).abs() < 1e-15);
        // cos(x): odd coefficients vanish exactly
        let cos1 = registry_lookup("cos", &[]).unwrap();
        assert_eq!(cos1.exact_coeff(3).unwrap(), 0.0);
        let br = registry_lookup("branch", &[2.0, 0.5]).unwrap();
        assert!(matches!(br.exact_coeff(0), Err(Error::NoOracle(_))));
        assert_eq!(
            exp.oracle_coeff(2).unwrap().provenance,
            Provenance::BesselSeries
        );
    }

    #[test]
    fn real_on_interval() {
        for f in all_registry() {
            for i in 0..100 {
                let x = -1.0 + 2.0 * i as f64 / 99.0;
                let v = f.eval(c64(x)).unwrap();
                assert_eq!(v.im.abs(), 0.0, "{} at {x}", f.name());
            }
        }
    }

    #[test]
    fn schwarz_symmetry() {
        for f in all_registry() {
            let rho = if f.rho_max().is_finite() {
                1.0 + 0.9 * (f.rho_max() - 1.0)
            } else {
                4.0
            };
            for j in 0..37 {
                let t = 0.17 * j as f64;
                for &r in &[1.0, 0.5 * (1.0 + rho), rho] {
                    let u = Complex64::from_polar(r, t);
                    let z = (u + u.inv()) * 0.5;
                    let a = f.eval(z.conj()).unwrap();
                    let b = f.eval(z).unwrap().conj();
                    assert!(
                        (a - b).norm() <= 1e-14 * b.norm().max(1.0),
                        "{} at {z}",
                        f.name()
                    );
                }
            }
        }
    }

    #[test]
    fn finite_inside_ellipses() {
        for f in all_registry() {
            let top = if f.rho_max().is_finite() { 0.999 * f.rho_max() } else { 30.0 };
            for &r in &[1.0, 0.5 * (1.0 + top), top] {
                for j in 0..64 {
                    let u = Complex64::from_polar(r, j as f64 * 0.0981);
                    let v = f.eval((u + u.inv()) * 0.5).unwrap();
                    assert!(v.re.is_finite() && v.im.is_finite(), "{}", f.name());
                }
            }
        }
    }

    fn oracle_series(f: &AnalyticFn, n_max: usize) -> ChebSeries {
        ChebSeries::first_kind((0..=n_max).map(|n| f.exact_coeff(n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn oracles_reproduce_function_values() {
        for f in [
            registry_lookup("exp", &[]).unwrap(),
            registry_lookup("pole", &[2.0]).unwrap(),
            registry_lookup("exp2cos", &[]).unwrap(),
            registry_lookup("rational4", &[]).unwrap(),
            registry_lookup("rational_runge", &[]).unwrap(),
            registry_lookup("cos_affine", &[2.0, 2.0]).unwrap(),
        ] {
            let series = oracle_series(&f, 60);
            for i in 0..50 {
                let x = -1.0 + 2.0 * (i as f64 + 0.5) / 50.0;
                let exact = f.eval_real(x).unwrap();
                assert!(
                    (series.eval(x) - exact).abs() < 1e-12,
                    "{} at {x}",
                    f.name()
                );
            }
        }
    }

    #[test]
    fn derivative_oracles_match_finite_differences() {
        for f in all_registry() {
            for &x in &[-0.7, 0.1, 0.6] {
                let h = 1e-5;
                let fd = (f.derivative(x + h, 0).unwrap() - f.derivative(x - h, 0).unwrap()) / (2.0 * h);
                let d1 = f.derivative(x, 1).unwrap();
                assert!((fd - d1).abs() < 1e-6 * d1.abs().max(1.0), "{}", f.name());
                let v = f.eval_real(x).unwrap();
                assert!((f.derivative(x, 0).unwrap() - v).abs() < 1e-13 * v.abs().max(1.0));
            }
        }
    }

    #[test]
    fn monomial_polynomial_oracle() {
        // 1 - 3x^2 = 1 - 3(T0 + T2)/2 = -0.5 T0 - 1.5 T2; stored a0 = -1
        let f = registry_lookup("poly_mono", &[1.0, 0.0, -3.0]).unwrap();
        assert!((f.exact_coeff(0).unwrap() + 1.0).abs() < 1e-15);
        assert!((f.exact_coeff(2).unwrap() + 1.5).abs() < 1e-15);
        assert_eq!(f.exact_coeff(5).unwrap(), 0.0);
    }
}
