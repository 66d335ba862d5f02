//! Whole-expansion drivers: all coefficients `0..=N` under one strategy.

use rayon::prelude::*;

use crate::chebcore::{ChebSeries, Kind};
use crate::conditioning::{nodes_estimate, radius_auto, select_radius};
use crate::contour::{batch_coeffs_t, batch_coeffs_u, coeff_t, coeff_u, CoeffResult, ContourPlan};
use crate::error::{Error, Result};
use crate::funcspace::AnalyticFn;

/// How many trapezoidal nodes each per-coefficient integral uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeRule {
    /// The same `m` for every coefficient, raised to the sampling minimum
    /// where needed.
    Fixed(usize),
    /// [`nodes_estimate`] at tolerance `eps` with the function's node class,
    /// raised so the aliasing factor `(rho / rho_max)^m` stays below `eps`
    /// on the radius actually used.
    Heuristic { eps: f64 },
}

impl NodeRule {
    fn nodes(&self, f: &AnalyticFn, n: usize, kind: Kind, rho: f64) -> usize {
        let m = match *self {
            NodeRule::Fixed(m) => m,
            NodeRule::Heuristic { eps } => {
                let estimate = nodes_estimate(n, eps, f.node_class());
                let gap = (f.rho_max() / rho).ln();
                if gap.is_finite() && gap > 0.0 {
                    estimate.max(((1.0 / eps).ln() / gap).ceil() as usize)
                } else {
                    estimate
                }
            }
        };
        let floor = match kind {
            Kind::FirstKind => n + 1,
            Kind::SecondKind => n + 3,
        };
        m.max(floor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// One radius for all coefficients, computed with a single FFT.
    FixedRho { rho: f64, m: usize },
    /// Each coefficient on its own radius from the function's radius rule.
    Optimal { nodes: NodeRule },
    /// Each coefficient on a numerically optimised radius.
    Auto { nodes: NodeRule, tol: f64 },
}

/// Plan used for coefficient `n` under a per-coefficient strategy.
pub fn plan_for(f: &AnalyticFn, n: usize, kind: Kind, strategy: &Strategy) -> Result<ContourPlan> {
    match *strategy {
        Strategy::FixedRho { rho, m } => ContourPlan::new(rho, m),
        Strategy::Optimal { nodes } => {
            let rho = select_radius(f, n)?;
            ContourPlan::new(rho, nodes.nodes(f, n, kind, rho))
        }
        Strategy::Auto { nodes, tol } => {
            let rho = radius_auto(f, n, f.rho_max(), tol)?.rho;
            ContourPlan::new(rho, nodes.nodes(f, n, kind, rho))
        }
    }
}

/// Coefficients `0..=big_n` of `f` in the chosen kind.
///
/// `threads > 1` computes per-coefficient strategies on a dedicated pool;
/// the output is ordered by `n` and identical to the sequential result.
pub fn compute_coefficients(
    f: &AnalyticFn,
    big_n: usize,
    kind: Kind,
    strategy: &Strategy,
    threads: usize,
) -> Result<Vec<CoeffResult>> {
    if let Strategy::FixedRho { rho, m } = *strategy {
        let plan = ContourPlan::new(rho, m)?;
        return match kind {
            Kind::FirstKind => batch_coeffs_t(f, big_n, plan),
            Kind::SecondKind => batch_coeffs_u(f, big_n, plan),
        };
    }
    let one = |n: usize| -> Result<CoeffResult> {
        let plan = plan_for(f, n, kind, strategy)?;
        match kind {
            Kind::FirstKind => coeff_t(f, n, plan),
            Kind::SecondKind => coeff_u(f, n, plan),
        }
    };
    if threads <= 1 {
        return (0..=big_n).map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| (0..=big_n).into_par_iter().map(one).collect())
}

/// Real parts of the coefficients as a series of the given kind.
pub fn to_series(kind: Kind, results: &[CoeffResult]) -> Result<ChebSeries> {
    ChebSeries::new(kind, results.iter().map(|r| r.value.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::registry_lookup;

    #[test]
    fn parallel_matches_sequential() {
        let f = registry_lookup("pole", &[2.0]).unwrap();
        let s = Strategy::Optimal { nodes: NodeRule::Heuristic { eps: 1e-14 } };
        let a = compute_coefficients(&f, 40, Kind::FirstKind, &s, 1).unwrap();
        let b = compute_coefficients(&f, 40, Kind::FirstKind, &s, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_nodes_respect_sampling_minimum() {
        let f = registry_lookup("exp", &[]).unwrap();
        let s = Strategy::Optimal { nodes: NodeRule::Fixed(100) };
        let p = plan_for(&f, 100, Kind::FirstKind, &s).unwrap();
        assert_eq!(p.m(), 101);
        assert_eq!(p.rho(), 201.0);
        let p = plan_for(&f, 99, Kind::SecondKind, &s).unwrap();
        assert_eq!(p.m(), 102);
    }

    #[test]
    fn heuristic_nodes_follow_the_radius() {
        let f = registry_lookup("pole", &[2.0]).unwrap();
        let eps = 1e-14;
        let optimal = Strategy::Optimal { nodes: NodeRule::Heuristic { eps } };
        let p = plan_for(&f, 30, Kind::FirstKind, &optimal).unwrap();
        assert_eq!(p.m(), nodes_estimate(30, eps, f.node_class()));

        let auto = Strategy::Auto { nodes: NodeRule::Heuristic { eps }, tol: 1e-3 };
        let p = plan_for(&f, 30, Kind::FirstKind, &auto).unwrap();
        assert!((p.rho() / f.rho_max()).powi(p.m() as i32) <= eps);
        let a = coeff_t(&f, 30, p).unwrap().re();
        let exact = f.exact_coeff(30).unwrap();
        assert!(((a - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn optimal_exp_is_relatively_accurate() {
        let f = registry_lookup("exp", &[]).unwrap();
        let s = Strategy::Optimal { nodes: NodeRule::Fixed(100) };
        let coeffs = compute_coefficients(&f, 60, Kind::FirstKind, &s, 1).unwrap();
        for c in coeffs {
            let exact = f.exact_coeff(c.n).unwrap();
            assert!(((c.re() - exact) / exact).abs() < 5e-14, "n={}", c.n);
        }
    }
}
