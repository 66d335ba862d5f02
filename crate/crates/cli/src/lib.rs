//! Library half of the `chebcontour` binary: argument handling, the table
//! builders behind each subcommand and the bundled experiments.
//!
//! Every command returns a [`Table`]; `main` only chooses the output format
//! and maps [`CliError`] to the exit-code contract (0 success, 2 usage,
//! 3 numeric failure).

pub mod args;
pub mod commands;
pub mod repro;
pub mod table;

use std::fmt;

use chebcontour::{registry_lookup, AnalyticFn, Error, NodeRule, RadiusRule, Strategy};

use args::{Command, FnArgs, StrategyArgs, StrategyKind};
pub use table::{Cell, Table};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Numeric(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Errors the caller could have avoided by choosing other arguments count
/// as usage errors; the rest are numeric failures.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSeries(_)
            | Error::KindMismatch { .. }
            | Error::InvalidArgument(_)
            | Error::SamplingCondition { .. }
            | Error::Analyticity { .. }
            | Error::Registry(_)
            | Error::Parse { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Worker count from `CHEB_THREADS`; absent or 0 means sequential.
pub fn threads_from_env() -> CliResult<usize> {
    match std::env::var("CHEB_THREADS") {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => Ok(n.max(1)),
            Err(_) => usage(format!("CHEB_THREADS must be a non-negative integer, got `{v}`")),
        },
    }
}

fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .or_else(|_| usage(format!("bad number `{p}` in radius rule")))
        })
        .collect()
}

fn single(kind: &str, s: &str) -> CliResult<f64> {
    match parse_list(s)?.as_slice() {
        [v] => Ok(*v),
        _ => usage(format!("radius rule `{kind}` takes one value")),
    }
}

/// Parses a `--radius-rule` value against the function's `rho_max`.
pub fn parse_radius_rule(spec: &str, rho_max: f64) -> CliResult<RadiusRule> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let rule = match kind {
        "auto" => RadiusRule::Auto {
            rho_max_hint: rho_max,
            tolerance: if rest.is_empty() { 1e-3 } else { single(kind, rest)? },
        },
        "fixed" => RadiusRule::Fixed(single(kind, rest)?),
        "entire" => match parse_list(rest)?.as_slice() {
            &[mu, nu, varsigma] if mu > 0.0 && nu > 0.0 => RadiusRule::Entire { mu, nu, varsigma },
            _ => return usage("entire rule takes MU,NU,VARSIGMA with MU, NU > 0"),
        },
        "pole" | "pole-refined" => {
            let a = single(kind, rest)?;
            if !(a > 1.0) {
                return usage("pole rule needs A > 1");
            }
            RadiusRule::Pole {
                a,
                refined: kind == "pole-refined",
            }
        }
        "branch" => {
            if !rho_max.is_finite() {
                return usage("branch rule needs a finite --rho-max");
            }
            RadiusRule::BranchLimit { rho_max }
        }
        _ => return usage(format!("unknown radius rule `{spec}`")),
    };
    Ok(rule)
}

/// Resolves `--fn`/`--expr` into a function.
pub fn build_function(a: &FnArgs) -> CliResult<AnalyticFn> {
    match (&a.name, &a.expr) {
        (Some(name), None) => {
            let f = registry_lookup(name, &a.param)?;
            match &a.radius_rule {
                Some(spec) => {
                    let rule = parse_radius_rule(spec, f.rho_max())?;
                    Ok(f.with_radius_rule(rule))
                }
                None => Ok(f),
            }
        }
        (None, Some(src)) => {
            if !a.param.is_empty() {
                return usage("--param applies only to registry functions");
            }
            if a.rho_max.is_none() && a.radius_rule.is_none() {
                return usage("--expr requires --rho-max or --radius-rule");
            }
            let rho_max = a.rho_max.unwrap_or(f64::INFINITY);
            let rule = a
                .radius_rule
                .as_deref()
                .map(|s| parse_radius_rule(s, rho_max))
                .transpose()?;
            Ok(chebcontour::from_expr(src, rho_max, rule)?)
        }
        _ => usage("give exactly one of --fn and --expr"),
    }
}

/// Default expansion degree: a polynomial's own degree, otherwise 100.
pub fn default_degree(a: &FnArgs) -> usize {
    match a.name.as_deref() {
        Some("poly") | Some("poly_mono") => a.param.len().saturating_sub(1),
        _ => 100,
    }
}

pub fn build_strategy(s: &StrategyArgs) -> CliResult<Strategy> {
    let nodes = s.m.map_or(NodeRule::Heuristic { eps: s.eps }, NodeRule::Fixed);
    if !(s.eps > 0.0 && s.eps < 1.0) {
        return usage("--eps must lie in (0, 1)");
    }
    match s.strategy {
        StrategyKind::Fixed => match (s.rho, s.m) {
            (Some(rho), Some(m)) => Ok(Strategy::FixedRho { rho, m }),
            _ => usage("--strategy fixed needs --rho and --m"),
        },
        _ if s.rho.is_some() => usage("--rho applies only to --strategy fixed"),
        StrategyKind::Optimal => Ok(Strategy::Optimal { nodes }),
        StrategyKind::Auto => Ok(Strategy::Auto { nodes, tol: s.tol }),
    }
}

/// Runs one parsed command line.
pub fn run(command: &Command) -> CliResult<Table> {
    let threads = threads_from_env()?;
    match command {
        Command::Coeffs(a) => commands::coeffs(a, threads),
        Command::Cond(a) => commands::cond(a),
        Command::Diff(a) => commands::diff(a, threads),
        Command::Roots(a) => commands::roots(a),
        Command::Repro(a) => repro::run(a.id, threads),
    }
}

/// The output options of whichever command was parsed.
pub fn output_args(command: &Command) -> &args::OutputArgs {
    match command {
        Command::Coeffs(a) => &a.out,
        Command::Cond(a) => &a.out,
        Command::Diff(a) => &a.out,
        Command::Roots(a) => &a.out,
        Command::Repro(a) => &a.out,
    }
}
