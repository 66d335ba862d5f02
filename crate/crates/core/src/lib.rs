//! Chebyshev coefficients of analytic functions from trapezoidal-rule
//! contour integrals on Bernstein ellipses.
//!
//! Two ways of computing the first `N + 1` coefficients are provided:
//!
//! * one radius `rho` for all coefficients and a single FFT
//!   ([`Strategy::FixedRho`]), which controls the absolute error of the
//!   normalised coefficients `rho^n a_n`;
//! * one radius per coefficient, chosen to minimise the condition number of
//!   its integral ([`Strategy::Optimal`], [`Strategy::Auto`]), which controls
//!   the relative error of every `a_n`.
//!
//! On top of the coefficients sit the differentiation recurrence
//! ([`ChebSeries::differentiate`]) and colleague-matrix rootfinding
//! ([`roots_in_interval`]).
//!
//! ```
//! use chebcontour::{compute_coefficients, registry_lookup, Kind, NodeRule, Strategy};
//!
//! let f = registry_lookup("exp", &[]).unwrap();
//! let strategy = Strategy::Optimal { nodes: NodeRule::Fixed(100) };
//! let a = compute_coefficients(&f, 40, Kind::FirstKind, &strategy, 1).unwrap();
//! let exact = f.exact_coeff(40).unwrap();
//! assert!(((a[40].re() - exact) / exact).abs() < 1e-13);
//! ```

pub mod chebcore;
pub mod conditioning;
pub mod contour;
mod dd;
pub mod error;
pub mod expansion;
pub mod exprparse;
pub mod funcspace;
pub mod specops;

pub use chebcore::{ChebSeries, ComplexPoint, Kind};
pub use conditioning::{
    kappa_t, kappa_u, m_of_rho, nodes_estimate, optimal_radius, radius_auto, select_radius,
    ConditionEstimate, NodeClass, RadiusRule,
};
pub use contour::{batch_coeffs_t, batch_coeffs_u, coeff_t, coeff_u, CoeffResult, ContourPlan};
pub use error::{Error, Result};
pub use expansion::{compute_coefficients, to_series, NodeRule, Strategy};
pub use exprparse::{from_expr, parse, Expr};
pub use funcspace::{registry_lookup, AnalyticFn};
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    pub mod coefficients {}
    #[doc = include_str!("../../../book/src/conditioning.md")]
    pub mod conditioning {}
    #[doc = include_str!("../../../book/src/functions.md")]
    pub mod functions {}
    #[doc = include_str!("../../../book/src/differentiation.md")]
    pub mod differentiation {}
    #[doc = include_str!("../../../book/src/roots.md")]
    pub mod roots {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub mod readme {}

pub use specops::{build_colleague, eigen_roots, roots_in_interval, roots_of_derivative, RootOptions, RootSet};
