//! Table builders for `coeffs`, `cond`, `diff` and `roots`.

use chebcontour::conditioning::{kappa_t, kappa_u, nodes_estimate, select_radius};
use chebcontour::contour::{coeff_t, coeff_u};
use chebcontour::{
    compute_coefficients, roots_of_derivative, to_series, AnalyticFn, ChebSeries, CoeffResult,
    ContourPlan, Error, Kind, RootOptions, Strategy,
};

use crate::args::{CoeffsArgs, CondArgs, DiffArgs, KindArg, RootsArgs};
use crate::table::{Cell, Table};
use crate::{build_function, build_strategy, default_degree, usage, CliError, CliResult};

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::T => Kind::FirstKind,
            KindArg::U => Kind::SecondKind,
        }
    }
}

/// Exact coefficient `n` of the requested kind, if `f` has an oracle.
pub fn reference(f: &AnalyticFn, kind: Kind, n: usize) -> CliResult<Option<f64>> {
    let a = |k: usize| match f.exact_coeff(k) {
        Ok(v) => Ok(Some(v)),
        Err(Error::NoOracle(_)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(match kind {
        Kind::FirstKind => a(n)?,
        Kind::SecondKind => match (a(n)?, a(n + 2)?) {
            (Some(x), Some(y)) => Some(0.5 * (x - y)),
            _ => None,
        },
    })
}

/// `|got - want| / |want|`, infinite when only `want` is zero.
pub fn relative_error(got: f64, want: f64) -> f64 {
    let diff = (got - want).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / want.abs()
    }
}

/// `rho^n |err|` without overflowing the power first.
pub fn normalized(err: f64, rho: f64, n: usize) -> f64 {
    let p = rho.powi(n as i32);
    if p.is_finite() {
        p * err
    } else if err == 0.0 {
        0.0
    } else {
        (err.ln() + n as f64 * rho.ln()).exp()
    }
}

/// One row per coefficient; oracle columns only when an oracle exists.
pub fn coefficient_table(f: &AnalyticFn, kind: Kind, results: &[CoeffResult]) -> CliResult<Table> {
    let has_oracle = f.oracle().is_some();
    let mut cols = vec!["n", "rho", "m", "coeff", "imag_diag"];
    if has_oracle {
        cols.extend(["ref", "rel_err", "norm_abs_err"]);
    }
    let mut table = Table::new(cols);
    for r in results {
        let mut row: Vec<Cell> = vec![
            r.n.into(),
            r.plan.rho().into(),
            r.plan.m().into(),
            r.re().into(),
            r.imag_diagnostic.into(),
        ];
        if has_oracle {
            let want = reference(f, kind, r.n)?.unwrap_or(f64::NAN);
            row.push(want.into());
            row.push(relative_error(r.re(), want).into());
            row.push(normalized((r.re() - want).abs(), r.plan.rho(), r.n).into());
        }
        table.push(row);
    }
    Ok(table)
}

pub fn coeffs(a: &CoeffsArgs, threads: usize) -> CliResult<Table> {
    let f = build_function(&a.func)?;
    let strategy = build_strategy(&a.strategy)?;
    let kind = Kind::from(a.kind);
    let results = compute_coefficients(&f, a.big_n, kind, &strategy, threads)?;
    coefficient_table(&f, kind, &results)
}

/// `LO:HI:COUNT`, equispaced and inclusive.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return usage(format!("--rho-grid wants LO:HI:COUNT, got `{spec}`"));
    };
    let bad = || CliError::Usage(format!("bad --rho-grid `{spec}`"));
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect())
}

/// `ln |a_k|` from the oracle, cached. Once the coefficients underflow the
/// last observed decay rate is extended, which never underestimates
/// geometric or faster decay.
struct LogCoeffs<'a> {
    f: &'a AnalyticFn,
    logs: Vec<f64>,
    normal: Vec<(usize, f64)>,
}

impl<'a> LogCoeffs<'a> {
    const TINY: f64 = 1e-250;

    fn new(f: &'a AnalyticFn) -> Self {
        Self { f, logs: Vec::new(), normal: Vec::new() }
    }

    fn get(&mut self, k: usize) -> CliResult<f64> {
        while self.logs.len() <= k {
            let j = self.logs.len();
            let v = self.f.exact_coeff(j)?.abs();
            // the slope spans ten steps so alternating phases cannot steepen it
            let log = match self.normal.last() {
                Some(&(k2, l2)) if v < Self::TINY && l2.exp() < 1e-200 && self.normal.len() > 10 => {
                    let (k1, l1) = self.normal[self.normal.len() - 11];
                    l2 + (l2 - l1) / (k2 - k1) as f64 * (j - k2) as f64
                }
                _ => v.ln(),
            };
            if v >= Self::TINY {
                self.normal.push((j, log));
            }
            self.logs.push(log);
        }
        Ok(self.logs[k])
    }
}

/// Smallest `m` above the sampling minimum whose leading aliasing terms
/// `|a_(m+n)| rho^m + |a_(m-n)| rho^-m` stay below `tol |a_n|`, from the
/// exact coefficients. More nodes than this only add rounding error, which
/// grows like `sqrt(m)` and would hide the `kappa` trend.
pub fn alias_free_nodes(f: &AnalyticFn, kind: Kind, n: usize, rho: f64, tol: f64) -> CliResult<usize> {
    const CAP: usize = 1 << 16;
    let mut logs = LogCoeffs::new(f);
    let target = logs.get(n)? + tol.ln();
    let start = match kind {
        Kind::FirstKind => n + 1,
        Kind::SecondKind => n + 3,
    };
    for m in start..CAP {
        let shift = m as f64 * rho.ln();
        let above = logs.get(m + n)? + shift;
        let below = logs.get(m - n)? - shift;
        if above.max(below) + std::f64::consts::LN_2 <= target {
            return Ok(m);
        }
    }
    Ok(CAP)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlayPoint {
    pub n: usize,
    pub rho: f64,
    pub m_rho: f64,
    pub kappa: f64,
    pub m: usize,
    pub coeff: f64,
    pub reference: f64,
    pub rel_err: f64,
}

impl OverlayPoint {
    pub fn rel_err_over_eps(&self) -> f64 {
        self.rel_err / f64::EPSILON
    }
}

/// Condition number next to the measured relative error at each radius,
/// using the exact coefficient as reference. `m = None` measures each radius
/// with [`alias_free_nodes`] at 1% of the rounding level `kappa * eps`.
pub fn overlay(f: &AnalyticFn, kind: Kind, n: usize, rhos: &[f64], m: Option<usize>) -> CliResult<Vec<OverlayPoint>> {
    let Some(reference) = reference(f, kind, n)? else {
        return Err(Error::NoOracle(f.name().to_string()).into());
    };
    rhos.iter()
        .map(|&rho| {
            let est = match kind {
                Kind::FirstKind => kappa_t(f, n, rho, reference)?,
                Kind::SecondKind => kappa_u(f, n, rho, reference)?,
            };
            let m = match m {
                Some(m) => m,
                None => alias_free_nodes(f, kind, n, rho, 0.01 * est.kappa.max(1.0) * f64::EPSILON)?,
            };
            let plan = ContourPlan::new(rho, m)?;
            let got = match kind {
                Kind::FirstKind => coeff_t(f, n, plan)?,
                Kind::SecondKind => coeff_u(f, n, plan)?,
            };
            Ok(OverlayPoint {
                n,
                rho,
                m_rho: est.m_rho,
                kappa: est.kappa,
                m,
                coeff: got.re(),
                reference,
                rel_err: relative_error(got.re(), reference),
            })
        })
        .collect()
}

/// Best available `a_n` without an oracle: the coefficient on the
/// function's own radius with generous sampling.
fn probe_reference(f: &AnalyticFn, kind: Kind, n: usize) -> CliResult<f64> {
    let rho = select_radius(f, n).unwrap_or(1.0);
    let plan = ContourPlan::new(rho, nodes_estimate(n, 1e-16, f.node_class()).max(4 * n + 64))?;
    Ok(match kind {
        Kind::FirstKind => coeff_t(f, n, plan)?.re(),
        Kind::SecondKind => coeff_u(f, n, plan)?.re(),
    })
}

pub fn cond(a: &CondArgs) -> CliResult<Table> {
    let f = build_function(&a.func)?;
    let kind = Kind::from(a.kind);
    let rhos = parse_grid(&a.rho_grid)?;
    if f.oracle().is_some() {
        let mut table = Table::new([
            "n", "rho", "m_rho", "kappa", "m", "coeff", "ref", "rel_err", "rel_err_over_eps",
        ]);
        for &n in &a.n {
            for p in overlay(&f, kind, n, &rhos, a.m)? {
                table.push(vec![
                    p.n.into(),
                    p.rho.into(),
                    p.m_rho.into(),
                    p.kappa.into(),
                    p.m.into(),
                    p.coeff.into(),
                    p.reference.into(),
                    p.rel_err.into(),
                    p.rel_err_over_eps().into(),
                ]);
            }
        }
        return Ok(table);
    }
    let mut table = Table::new(["n", "rho", "m_rho", "kappa", "ref"]);
    for &n in &a.n {
        let reference = probe_reference(&f, kind, n)?;
        for &rho in &rhos {
            let est = match kind {
                Kind::FirstKind => kappa_t(&f, n, rho, reference)?,
                Kind::SecondKind => kappa_u(&f, n, rho, reference)?,
            };
            table.push(vec![n.into(), rho.into(), est.m_rho.into(), est.kappa.into(), reference.into()]);
        }
    }
    Ok(table)
}

/// `points` equispaced abscissae including both endpoints.
pub fn equispaced(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Values of the `s`-th derivatives of `series` next to the exact ones.
pub fn derivative_table(f: &AnalyticFn, series: &ChebSeries, orders: &[usize], points: usize) -> CliResult<Table> {
    let exact = f.has_derivative();
    let mut cols = vec!["s", "x", "value"];
    if exact {
        cols.extend(["exact", "abs_err"]);
    }
    let mut table = Table::new(cols);
    let xs = equispaced(points);
    for &s in orders {
        let d = series.differentiate(s)?;
        for &x in &xs {
            let v = d.eval(x);
            let mut row: Vec<Cell> = vec![s.into(), x.into(), v.into()];
            if let Some(e) = f.derivative(x, s) {
                row.push(e.into());
                row.push((v - e).abs().into());
            }
            table.push(row);
        }
    }
    Ok(table)
}

/// Degree-`big_n` first-kind expansion under `strategy`.
pub fn expansion(f: &AnalyticFn, big_n: usize, strategy: &Strategy, threads: usize) -> CliResult<ChebSeries> {
    let results = compute_coefficients(f, big_n, Kind::FirstKind, strategy, threads)?;
    Ok(to_series(Kind::FirstKind, &results)?)
}

pub fn diff(a: &DiffArgs, threads: usize) -> CliResult<Table> {
    let f = build_function(&a.func)?;
    let strategy = build_strategy(&a.strategy)?;
    let big_n = a.big_n.unwrap_or_else(|| default_degree(&a.func));
    if let Some(&s) = a.s.iter().find(|&&s| s > big_n) {
        return usage(format!("derivative order {s} exceeds degree {big_n}"));
    }
    let series = expansion(&f, big_n, &strategy, threads)?;
    derivative_table(&f, &series, &a.s, a.points)
}

fn bisect(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of `g` on a 4000-cell grid of `[-1, 1]`, each refined by
/// bisection. Roots of even multiplicity are not seen.
pub fn bisection_roots(g: &dyn Fn(f64) -> f64) -> Vec<f64> {
    let cells = 4000;
    let xs: Vec<f64> = (0..=cells).map(|i| -1.0 + 2.0 * i as f64 / cells as f64).collect();
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (g(w[0]), g(w[1]));
        if a == 0.0 {
            out.push(w[0]);
        } else if b != 0.0 && (a < 0.0) != (b < 0.0) {
            out.push(bisect(g, w[0], w[1]));
        }
    }
    if g(1.0) == 0.0 {
        out.push(1.0);
    }
    out
}

/// Exact roots of `f^(s)` when `f` or its derivative oracle is available.
pub fn oracle_roots(f: &AnalyticFn, s: usize) -> Option<Vec<f64>> {
    if s == 0 {
        return Some(bisection_roots(&|x| f.eval_real(x).unwrap_or(f64::NAN)));
    }
    if !f.has_derivative() {
        return None;
    }
    Some(bisection_roots(&|x| f.derivative(x, s).unwrap_or(f64::NAN)))
}

fn strategy_label(s: &Strategy) -> String {
    match s {
        Strategy::FixedRho { rho, .. } => format!("fixed:{rho:?}"),
        Strategy::Optimal { .. } => "optimal".into(),
        Strategy::Auto { .. } => "auto".into(),
    }
}

/// Root rows for each strategy; `oracle`/`abs_err` columns when exact
/// roots are known.
pub fn roots_table(
    f: &AnalyticFn,
    s: usize,
    big_n: usize,
    strategies: &[Strategy],
    oracle: Option<&[f64]>,
) -> CliResult<Table> {
    let mut cols = vec!["strategy", "N", "s", "root", "residual"];
    if oracle.is_some() {
        cols.extend(["oracle", "abs_err"]);
    }
    let mut table = Table::new(cols);
    for strategy in strategies {
        let set = roots_of_derivative(f, s, big_n, strategy, &RootOptions::default())?;
        for (&r, &res) in set.roots.iter().zip(&set.residuals) {
            let mut row: Vec<Cell> = vec![
                strategy_label(strategy).into(),
                big_n.into(),
                s.into(),
                r.into(),
                res.into(),
            ];
            if let Some(exact) = oracle {
                let nearest = exact
                    .iter()
                    .copied()
                    .min_by(|a, b| (a - r).abs().total_cmp(&(b - r).abs()));
                row.push(nearest.into());
                row.push(nearest.map(|e| (e - r).abs()).into());
            }
            table.push(row);
        }
    }
    Ok(table)
}

pub fn roots(a: &RootsArgs) -> CliResult<Table> {
    let f = build_function(&a.func)?;
    let strategy = build_strategy(&a.strategy)?;
    let big_n = a.big_n.unwrap_or_else(|| default_degree(&a.func));
    if a.s > big_n {
        return usage(format!("derivative order {} exceeds degree {big_n}", a.s));
    }
    let mut strategies = vec![strategy];
    if a.compare {
        let m = a.strategy.m.unwrap_or(100).max(big_n + 1);
        strategies.push(Strategy::FixedRho { rho: 1.0, m });
    }
    let oracle = oracle_roots(&f, a.s);
    roots_table(&f, a.s, big_n, &strategies, oracle.as_deref())
}
