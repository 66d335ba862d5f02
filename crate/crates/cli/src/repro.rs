//! Bundled experiments. Each id produces one deterministic table whose
//! leading columns identify the series a plot would draw.

use chebcontour::conditioning::optimal_radius;
use chebcontour::contour::coeff_t;
use chebcontour::{
    compute_coefficients, registry_lookup, select_radius, AnalyticFn, ContourPlan, Kind, NodeRule,
    Strategy,
};

use crate::args::Experiment;
use crate::commands::{
    derivative_table, expansion, normalized, oracle_roots, overlay, reference,
    relative_error, roots_table,
};
use crate::table::{Cell, Table};
use crate::CliResult;

fn lookup(name: &str, params: &[f64]) -> AnalyticFn {
    registry_lookup(name, params).expect("bundled registry entry")
}

/// `count` radii equispaced in `ln rho` on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Radius grid for the condition-number overlays: up to twice the optimal
/// radius for entire functions, up to 0.99 rho_max otherwise.
pub fn overlay_grid(f: &AnalyticFn, n: usize) -> CliResult<Vec<f64>> {
    let top = if f.rho_max().is_finite() {
        0.99 * f.rho_max()
    } else {
        2.0 * optimal_radius(f.radius_rule(), n)?
    };
    Ok(log_grid(1.0, top, 100))
}

fn condition_overlays(fns: &[AnalyticFn]) -> CliResult<Table> {
    let mut table = Table::new([
        "fn", "n", "rho", "m", "m_rho", "kappa", "rel_err", "rel_err_over_eps",
    ]);
    for f in fns {
        for n in [20, 60] {
            let rhos = overlay_grid(f, n)?;
            for p in overlay(f, Kind::FirstKind, n, &rhos, None)? {
                table.push(vec![
                    f.name().into(),
                    n.into(),
                    p.rho.into(),
                    p.m.into(),
                    p.m_rho.into(),
                    p.kappa.into(),
                    p.rel_err.into(),
                    p.rel_err_over_eps().into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn fixed_radius_errors(f: &AnalyticFn, big_n: usize, m: usize, rhos: &[f64]) -> CliResult<Table> {
    let mut table = Table::new([
        "rho", "n", "coeff", "ref", "abs_err", "norm_abs_err", "rel_err",
    ]);
    for &rho in rhos {
        let results = compute_coefficients(f, big_n, Kind::FirstKind, &Strategy::FixedRho { rho, m }, 1)?;
        for r in results {
            let want = f.exact_coeff(r.n)?;
            let err = (r.re() - want).abs();
            table.push(vec![
                rho.into(),
                r.n.into(),
                r.re().into(),
                want.into(),
                err.into(),
                normalized(err, rho, r.n).into(),
                relative_error(r.re(), want).into(),
            ]);
        }
    }
    Ok(table)
}

fn relative_optimal(threads: usize) -> CliResult<Table> {
    let big_n = 100;
    let mut table = Table::new(["fn", "n", "rho", "m", "coeff", "ref", "rel_err"]);
    let exp = lookup("exp", &[]);
    let pole = lookup("pole", &[2.0]);
    let runs = [
        (&exp, Strategy::Optimal { nodes: NodeRule::Fixed(2 * big_n + 1) }),
        (&pole, Strategy::Optimal { nodes: NodeRule::Heuristic { eps: 1e-14 } }),
    ];
    for (f, strategy) in runs {
        for r in compute_coefficients(f, big_n, Kind::FirstKind, &strategy, threads)? {
            let want = f.exact_coeff(r.n)?;
            table.push(vec![
                f.name().into(),
                r.n.into(),
                r.plan.rho().into(),
                r.plan.m().into(),
                r.re().into(),
                want.into(),
                relative_error(r.re(), want).into(),
            ]);
        }
    }
    Ok(table)
}

fn differentiation(f: &AnalyticFn, nodes: NodeRule, orders: &[usize], threads: usize) -> CliResult<Table> {
    let series = expansion(f, 100, &Strategy::Optimal { nodes }, threads)?;
    derivative_table(f, &series, orders, 100)
}

fn derivative_roots() -> CliResult<Table> {
    let f = lookup("exp2cos", &[]);
    let strategies = [
        Strategy::Optimal { nodes: NodeRule::Fixed(100) },
        Strategy::FixedRho { rho: 1.0, m: 100 },
    ];
    let mut out: Option<Table> = None;
    for s in [1, 2, 4, 5] {
        let exact = oracle_roots(&f, s).expect("exp2cos has derivative oracles");
        for big_n in (10..=90).step_by(10) {
            let t = roots_table(&f, s, big_n, &strategies, Some(&exact))?;
            match &mut out {
                None => out = Some(t),
                Some(acc) => acc.rows.extend(t.rows),
            }
        }
    }
    Ok(out.unwrap_or_default())
}

/// `a_100` of `1/(x - 4)` with the node count of the heuristic at 1e-13.
fn m_epsilon() -> CliResult<Table> {
    let f = lookup("pole", &[4.0]);
    let n = 100;
    let rho = select_radius(&f, n)?;
    let r = coeff_t(&f, n, ContourPlan::new(rho, 20010)?)?;
    let want = reference(&f, Kind::FirstKind, n)?.expect("pole oracle");
    let mut table = Table::new(["n", "rho", "m", "coeff", "ref", "rel_err"]);
    table.push(vec![
        n.into(),
        rho.into(),
        Cell::from(20010usize),
        r.re().into(),
        want.into(),
        relative_error(r.re(), want).into(),
    ]);
    Ok(table)
}

pub fn run(id: Experiment, threads: usize) -> CliResult<Table> {
    match id {
        Experiment::FigCondEntire => condition_overlays(&[lookup("exp", &[]), lookup("cos_affine", &[2.0, 2.0])]),
        Experiment::FigCondPole => condition_overlays(&[lookup("pole", &[2.0]), lookup("rational_runge", &[])]),
        Experiment::FigAbsRelExp => fixed_radius_errors(&lookup("exp", &[]), 50, 101, &[1.0, 4.0, 10.0, 40.0]),
        Experiment::FigAbsRelPole => fixed_radius_errors(&lookup("pole", &[2.0]), 50, 202, &[1.0, 2.0, 3.0, 3.7]),
        Experiment::FigRelopt => relative_optimal(threads),
        Experiment::FigDiffExp => differentiation(&lookup("exp", &[]), NodeRule::Fixed(100), &[5, 20, 80], threads),
        Experiment::FigDiffCos => differentiation(&lookup("cos", &[]), NodeRule::Fixed(100), &[10, 40, 80], threads),
        Experiment::FigDiffRat4 => differentiation(
            &lookup("rational4", &[]),
            NodeRule::Heuristic { eps: 1e-16 },
            &[4, 8, 12],
            threads,
        ),
        Experiment::FigRootsExp2cos => derivative_roots(),
        Experiment::ExMEpsilon => m_epsilon(),
    }
}
