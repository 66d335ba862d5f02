//! Roots of Chebyshev series from the eigenvalues of the colleague matrix.

mod eigen;

use num_complex::Complex64;

pub use eigen::eigenvalues;

use crate::chebcore::{ChebSeries, Kind};
use crate::error::{Error, Result};
use crate::expansion::{compute_coefficients, to_series, Strategy};
use crate::funcspace::AnalyticFn;

/// Colleague matrix of `p = sum_{k<=n} c_k T_k`, `c_n != 0`. Its
/// eigenvalues are the roots of `p`, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct ColleagueMatrix {
    rows: Vec<Vec<f64>>,
}

impl ColleagueMatrix {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Real roots in `[-1 - tol, 1 + tol]`, ascending.
    pub roots: Vec<f64>,
    /// `|p(root)|` for each root.
    pub residuals: Vec<f64>,
    /// Degree of the input minus the number of accepted roots.
    pub discarded: usize,
    /// The series is identically zero, so every point is a root.
    pub everywhere_zero: bool,
}

impl RootSet {
    fn empty(discarded: usize, everywhere_zero: bool) -> Self {
        Self {
            roots: Vec::new(),
            residuals: Vec::new(),
            discarded,
            everywhere_zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub imag_tol: f64,
    pub interval_tol: f64,
    /// Trailing coefficients with `|c_k| <= trim_rel * max |c|` are dropped.
    pub trim_rel: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            imag_tol: 1e-8,
            interval_tol: 1e-8,
            trim_rel: 1e-13,
        }
    }
}

fn require_first_kind(series: &ChebSeries) -> Result<()> {
    if series.kind() != Kind::FirstKind {
        return Err(Error::KindMismatch {
            expected: Kind::FirstKind,
            found: series.kind(),
        });
    }
    Ok(())
}

/// Plain coefficients `c_k` of `p = sum c_k T_k` (the stored `a_0` halved),
/// with trailing entries at or below `trim_rel * max |c|` removed.
fn plain_trimmed(series: &ChebSeries, trim_rel: f64) -> Vec<f64> {
    let mut c = series.coeffs().to_vec();
    c[0] *= 0.5;
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    while c.len() > 1 && c.last().is_some_and(|v| v.abs() <= trim_rel * scale) {
        c.pop();
    }
    c
}

fn colleague_from_plain(c: &[f64]) -> Result<ColleagueMatrix> {
    let n = c.len() - 1;
    let lead = c[n];
    if n == 0 || lead == 0.0 {
        return Err(Error::NoPolynomial);
    }
    if n == 1 {
        return Ok(ColleagueMatrix {
            rows: vec![vec![-c[0] / lead]],
        });
    }
    let mut rows = vec![vec![0.0; n]; n];
    rows[0][1] = 1.0;
    for j in 1..n {
        rows[j][j - 1] = 0.5;
        if j + 1 < n {
            rows[j][j + 1] = 0.5;
        }
    }
    for (k, ck) in c[..n].iter().enumerate() {
        rows[n - 1][k] -= ck / (2.0 * lead);
    }
    Ok(ColleagueMatrix { rows })
}

/// Colleague matrix of a first-kind series after removing exactly-zero
/// trailing coefficients.
pub fn build_colleague(series: &ChebSeries) -> Result<ColleagueMatrix> {
    require_first_kind(series)?;
    let plain = plain_trimmed(series, 0.0);
    if plain.iter().all(|&v| v == 0.0) {
        return Err(Error::NoPolynomial);
    }
    colleague_from_plain(&plain)
}

/// All eigenvalues of the colleague matrix.
pub fn eigen_roots(matrix: &ColleagueMatrix) -> Result<Vec<Complex64>> {
    eigenvalues(&matrix.rows)
}

/// Real roots of a first-kind series on `[-1, 1]`.
pub fn roots_in_interval(series: &ChebSeries, opts: &RootOptions) -> Result<RootSet> {
    require_first_kind(series)?;
    let degree = series.degree();
    if series.coeffs().iter().all(|&v| v == 0.0) {
        return Ok(RootSet::empty(0, true));
    }
    let plain = plain_trimmed(series, opts.trim_rel);
    if plain.len() == 1 {
        return Ok(RootSet::empty(degree, false));
    }
    let eig = eigen_roots(&colleague_from_plain(&plain)?)?;
    let reach = 1.0 + opts.interval_tol;
    let mut roots: Vec<f64> = eig
        .iter()
        .filter(|l| l.im.abs() <= opts.imag_tol && l.re.abs() <= reach)
        .map(|l| l.re)
        .collect();
    roots.sort_by(f64::total_cmp);
    let residuals = roots.iter().map(|&r| series.eval(r).abs()).collect();
    Ok(RootSet {
        discarded: degree - roots.len(),
        roots,
        residuals,
        everywhere_zero: false,
    })
}

/// Roots on `[-1, 1]` of the `s`-th derivative of the degree-`big_n`
/// Chebyshev approximation of `f`.
pub fn roots_of_derivative(
    f: &AnalyticFn,
    s: usize,
    big_n: usize,
    strategy: &Strategy,
    opts: &RootOptions,
) -> Result<RootSet> {
    if s > big_n {
        return Err(Error::InvalidArgument(format!(
            "derivative order {s} exceeds degree {big_n}"
        )));
    }
    let coeffs = compute_coefficients(f, big_n, Kind::FirstKind, strategy, 1)?;
    let series = to_series(Kind::FirstKind, &coeffs)?.differentiate(s)?;
    roots_in_interval(&series, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::NodeRule;
    use crate::funcspace::registry_lookup;
    use std::f64::consts::PI;

    fn t(coeffs: &[f64]) -> ChebSeries {
        ChebSeries::first_kind(coeffs.to_vec()).unwrap()
    }

    #[test]
    fn colleague_of_x_and_t2() {
        let m = build_colleague(&t(&[0.0, 1.0])).unwrap();
        assert_eq!(m.rows(), &[vec![0.0]]);
        let m = build_colleague(&t(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(m.rows(), &[vec![0.0, 1.0], vec![0.5, 0.0]]);
        let mut ev: Vec<f64> = eigen_roots(&m).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        let r = 0.5f64.sqrt();
        assert!((ev[0] + r).abs() < 1e-15 && (ev[1] - r).abs() < 1e-15);
    }

    #[test]
    fn colleague_trims_zero_leading_coefficient() {
        let m = build_colleague(&t(&[0.0, 0.0, 1.0, 0.0])).unwrap();
        assert_eq!(m.order(), 2);
        assert_eq!(build_colleague(&t(&[0.0, 0.0])), Err(Error::NoPolynomial));
        assert_eq!(build_colleague(&t(&[3.0])), Err(Error::NoPolynomial));
    }

    #[test]
    fn t5_eigenvalues() {
        let m = build_colleague(&t(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        let mut ev: Vec<f64> = eigen_roots(&m).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        let mut want: Vec<f64> = (1..=5).map(|j| ((2 * j - 1) as f64 * PI / 10.0).cos()).collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn double_root() {
        // (x - 0.3)^2 = x^2 - 0.6x + 0.09 = 0.59 T0 - 0.6 T1 + 0.5 T2
        let m = build_colleague(&t(&[1.18, -0.6, 0.5])).unwrap();
        for z in eigen_roots(&m).unwrap() {
            assert!((z - 0.3).norm() < 1e-6, "{z}");
        }
    }

    #[test]
    fn roots_of_simple_series() {
        let r = roots_in_interval(&t(&[0.0, 1.0]), &RootOptions::default()).unwrap();
        assert_eq!(r.roots, vec![0.0]);
        let r = roots_in_interval(&t(&[0.0, 0.0, 0.0, 0.0, 1.0]), &RootOptions::default()).unwrap();
        let want = [
            -(PI / 8.0).cos(),
            -(3.0 * PI / 8.0).cos(),
            (3.0 * PI / 8.0).cos(),
            (PI / 8.0).cos(),
        ];
        assert_eq!(r.roots.len(), 4);
        for (a, b) in r.roots.iter().zip(want) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(r.residuals.iter().all(|&v| v < 1e-14));
    }

    #[test]
    fn degenerate_series() {
        let r = roots_in_interval(&t(&[2.0, 0.0, 0.0]), &RootOptions::default()).unwrap();
        assert!(r.roots.is_empty() && !r.everywhere_zero);
        let r = roots_in_interval(&t(&[0.0, 0.0]), &RootOptions::default()).unwrap();
        assert!(r.everywhere_zero);
        assert!(roots_in_interval(&ChebSeries::second_kind(vec![1.0, 1.0]).unwrap(), &RootOptions::default()).is_err());
    }

    #[test]
    fn exp_has_no_roots() {
        let f = registry_lookup("exp", &[]).unwrap();
        let series = t(&(0..=30).map(|n| f.exact_coeff(n).unwrap()).collect::<Vec<_>>());
        let r = roots_in_interval(&series, &RootOptions::default()).unwrap();
        assert!(r.roots.is_empty());
        assert_eq!(r.discarded, 30);
    }

    #[test]
    fn derivative_of_t3() {
        let f = registry_lookup("poly", &[0.0, 0.0, 0.0, 1.0]).unwrap();
        let s = Strategy::FixedRho { rho: 1.5, m: 16 };
        let r = roots_of_derivative(&f, 1, 3, &s, &RootOptions::default()).unwrap();
        assert_eq!(r.roots.len(), 2);
        assert!((r.roots[0] + 0.5).abs() < 1e-13 && (r.roots[1] - 0.5).abs() < 1e-13);
        assert!(roots_of_derivative(&f, 4, 3, &s, &RootOptions::default()).is_err());
    }

    #[test]
    fn exp_second_derivative_has_no_roots() {
        let f = registry_lookup("exp", &[]).unwrap();
        let s = Strategy::Optimal { nodes: NodeRule::Heuristic { eps: 1e-14 } };
        let r = roots_of_derivative(&f, 2, 40, &s, &RootOptions::default()).unwrap();
        assert!(r.roots.is_empty());
    }
}
