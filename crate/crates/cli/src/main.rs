use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use lebesgue_core::convexity1d::min_degree_for_convexity;
use lebesgue_core::extrema1d::{
    boundary_exclusion_check, max_set, rescaling_invariance_check, separation_bound_a, DEFAULT_MAX_SET_TOL,
};
use lebesgue_core::io::{write_grid_csv, write_samples_csv};
use lebesgue_core::lebesgue1d::{sample, uniform_grid};
use lebesgue_core::lebesgue2d::{lebesgue_constant2, surface, zero_curves, CardinalEvaluator};
use lebesgue_core::maxima2d::{
    count_maxima_for, excess_maxima_report, lower_bound_check, Boundary, MaximaOptions, Method,
};
use lebesgue_core::nodes1d::{self, Family1D, NodeSet1D};
use lebesgue_core::nodes2d::{Family2D, NodeSet2D};
use lebesgue_core::tables::{reproduce_table, RowCheck, LONG_DEGREE};
use lebesgue_core::Error;

mod output;

use output::{Output, UsageError};

#[derive(Parser, Debug)]
#[command(name = "lebesgue", version, about = "Lebesgue functions of interpolation on [-1,1] and [-1,1]^2")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Write the result here instead of stdout (plus a `.meta.json` beside it).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Working precision in bits for extended-precision output and decisions.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the `random` node family.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Allow degrees above 600 and the long table rows.
    #[arg(long, global = true)]
    long: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct Nodes1DArgs {
    /// equidistant, chebyshev1, chebyshev2, lobatto, extended, custom or random.
    #[arg(long)]
    family: String,
    #[arg(long)]
    degree: Option<usize>,
    /// Comma-separated nodes for the custom family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    nodes: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
struct Nodes2DArgs {
    /// padua or morrow_patterson (mp).
    #[arg(long)]
    family: String,
    #[arg(long)]
    degree: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One-dimensional node set as JSON.
    Nodes(Nodes1DArgs),
    /// Two-dimensional point set as JSON.
    Nodes2d(Nodes2DArgs),
    /// Lebesgue function sampled on a uniform grid.
    Eval {
        #[command(flatten)]
        nodes: Nodes1DArgs,
        #[arg(long, default_value_t = 1001)]
        grid_size: usize,
    },
    /// Lebesgue constant and the set where it is attained.
    Maxset {
        #[command(flatten)]
        nodes: Nodes1DArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_SET_TOL)]
        tol: f64,
    },
    /// Whether the endpoints leave the maximum set once the nodes are pulled in.
    CheckTheorem {
        #[command(flatten)]
        nodes: Nodes1DArgs,
        /// Scale the nodes by this factor first.
        #[arg(long, conflicts_with = "at_threshold")]
        scale: Option<f64>,
        /// Scale by `1 - a(n)/n²`.
        #[arg(long)]
        at_threshold: bool,
    },
    /// Minimal degree for convexity near the right node of the first m intervals.
    Convexity {
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = LONG_DEGREE)]
        n_max: usize,
        /// Fixed starting precision; chosen per degree when absent.
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Lebesgue function on a `(res+1)²` grid, `x,y,lambda` rows.
    Surface2d {
        #[command(flatten)]
        nodes: Nodes2DArgs,
        #[arg(long, default_value_t = 100)]
        res: usize,
    },
    /// Zero curves of the cardinal functions.
    Curves {
        #[command(flatten)]
        nodes: Nodes2DArgs,
        #[arg(long, default_value_t = 200)]
        res: usize,
        /// Only this node (0-based); all nodes when absent.
        #[arg(long)]
        node: Option<usize>,
    },
    /// Local maxima of the two-dimensional Lebesgue function.
    Maxima2d {
        #[command(flatten)]
        nodes: Nodes2DArgs,
        #[arg(long)]
        res: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        refine_tol: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Edge)]
        boundary: BoundaryArg,
        #[arg(long)]
        report_excess: bool,
    },
    /// Recompute the reference tables and diff them.
    Reproduce {
        /// 1 to 4; all tables when absent.
        #[arg(long)]
        table: Vec<u8>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundaryArg {
    Edge,
    Full,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() || is_input_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn is_input_error(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(Error::InvalidDegree { .. } | Error::InvalidInput(_) | Error::DomainViolation(_) | Error::OutOfDomain(_))
    )
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("thread pool")?;
    }
    if let Some(b) = g.precision {
        if !(53..=lebesgue_core::precision::DEFAULT_CAP_BITS).contains(&b) {
            return Err(usage("--precision must lie in 53..=4096"));
        }
    }
    let out = Output::new(g.output.clone(), std::env::args().collect());
    match &cli.command {
        Command::Nodes(a) => {
            json_only(g, "nodes")?;
            let ns = nodes_1d(a, g)?;
            match g.precision {
                Some(bits) => out.json(&json!({
                    "degree": ns.degree(),
                    "family": ns.family(),
                    "nodes": ns.to_decimal_strings(bits),
                    "precision": bits,
                }))?,
                None => out.json(&ns)?,
            }
        }
        Command::Nodes2d(a) => {
            json_only(g, "nodes2d")?;
            out.json(&nodes_2d(a, g)?)?;
        }
        Command::Eval { nodes, grid_size } => {
            if *grid_size < 2 {
                return Err(usage("--grid-size must be at least 2"));
            }
            let ns = nodes_1d(nodes, g)?;
            let s = sample(&ns, &uniform_grid(*grid_size));
            match g.format.unwrap_or(Format::Csv) {
                Format::Csv => out.bytes(|w| Ok(write_samples_csv(w, &s)?))?,
                Format::Json => out.json(&s.iter().map(|&(x, lambda)| json!({"x": x, "lambda": lambda})).collect::<Vec<_>>())?,
            }
        }
        Command::Maxset { nodes, tol } => {
            json_only(g, "maxset")?;
            if !(*tol > 0.0) {
                return Err(usage("--tol must be positive"));
            }
            out.json(&max_set(&nodes_1d(nodes, g)?, *tol)?)?;
        }
        Command::CheckTheorem { nodes, scale, at_threshold } => {
            json_only(g, "check-theorem")?;
            let mut ns = nodes_1d(nodes, g)?;
            let c = match (scale, at_threshold) {
                (Some(c), _) => Some(*c),
                (None, true) => {
                    let n = ns.degree() as f64;
                    Some(1.0 - separation_bound_a(ns.degree())? / (n * n))
                }
                _ => None,
            };
            let rescaling = match c {
                Some(c) => {
                    let r = rescaling_invariance_check(&ns, c)?;
                    ns = nodes1d::scale(&ns, c)?;
                    Some(r)
                }
                None => None,
            };
            let report = boundary_exclusion_check(&ns)?;
            out.json(&json!({ "scale": c, "report": report, "rescaling": rescaling }))?;
        }
        Command::Convexity { family, m, n_max, bits } => {
            json_only(g, "convexity")?;
            let family: Family1D = family.parse().map_err(|e: Error| usage(e.to_string()))?;
            if !matches!(family, Family1D::Chebyshev1 | Family1D::Chebyshev2) {
                return Err(usage("convexity supports chebyshev1 and chebyshev2"));
            }
            if *m == 0 {
                return Err(usage("--m must be at least 1"));
            }
            if *n_max > LONG_DEGREE && !g.long {
                return Err(usage(format!("--n-max above {LONG_DEGREE} needs --long")));
            }
            let bits = bits.or(g.precision);
            out.json(&min_degree_for_convexity(family, *m, bits, *n_max)?)?;
        }
        Command::Surface2d { nodes, res } => {
            if *res < 2 {
                return Err(usage("--res must be at least 2"));
            }
            let ce = CardinalEvaluator::new(&nodes_2d(nodes, g)?)?;
            let pts = surface(&ce, *res);
            match g.format.unwrap_or(Format::Csv) {
                Format::Csv => out.bytes(|w| Ok(write_grid_csv(w, &pts)?))?,
                Format::Json => out.json(&pts)?,
            }
        }
        Command::Curves { nodes, res, node } => {
            json_only(g, "curves")?;
            if *res < 4 {
                return Err(usage("--res must be at least 4"));
            }
            let ce = CardinalEvaluator::new(&nodes_2d(nodes, g)?)?;
            let which: Vec<usize> = match node {
                Some(a) if *a >= ce.len() => return Err(usage(format!("--node must be below {}", ce.len()))),
                Some(a) => vec![*a],
                None => (0..ce.len()).collect(),
            };
            let curves = which.iter().map(|&a| zero_curves(&ce, a, *res)).collect::<Result<Vec<_>, _>>()?;
            out.json(&curves)?;
        }
        Command::Maxima2d { nodes, res, refine_tol, method, boundary, report_excess } => {
            json_only(g, "maxima2d")?;
            let ns = nodes_2d(nodes, g)?;
            let n = ns.degree();
            if n < 2 {
                return Err(usage("maxima2d needs --degree at least 2"));
            }
            if !(*refine_tol > 0.0) {
                return Err(usage("--refine-tol must be positive"));
            }
            let mut opts = MaximaOptions::for_degree(n);
            if let Some(r) = res {
                if *r < 4 {
                    return Err(usage("--res must be at least 4"));
                }
                opts.grid_res = *r;
            }
            opts.refine_tol = *refine_tol;
            opts.method = match method {
                MethodArg::Exact => Method::Exact,
                MethodArg::Grid => Method::GridPattern,
            };
            opts.boundary = match boundary {
                BoundaryArg::Edge => Boundary::Edge,
                BoundaryArg::Full => Boundary::Full,
            };
            let ce = CardinalEvaluator::new(&ns)?;
            let rep = count_maxima_for(&ce, &opts)?;
            let excess = if *report_excess {
                Some(excess_maxima_report(&ce, &rep.records, 8 * opts.grid_res)?)
            } else {
                None
            };
            let constant = lebesgue_constant2(&ce, 16 * (n + 1))?;
            out.json(&json!({
                "family": rep.family,
                "degree": n,
                "method": rep.method,
                "interior": rep.counts.interior,
                "edge": rep.counts.edge,
                "corner": rep.counts.corner,
                "total": rep.counts.total,
                "stable": rep.stable,
                "grid_res": rep.grid_res,
                "history": rep.history,
                "bounds_check": lower_bound_check(n, rep.counts.interior, rep.counts.total),
                "lebesgue_constant": constant,
                "records": rep.records,
                "excess": excess,
            }))?;
        }
        Command::Reproduce { table } => {
            json_only(g, "reproduce")?;
            let tables: Vec<u8> = if table.is_empty() { vec![1, 2, 3, 4] } else { table.clone() };
            if let Some(t) = tables.iter().find(|t| !(1..=4).contains(*t)) {
                return Err(usage(format!("no table {t}; expected 1 to 4")));
            }
            let mut rows: Vec<RowCheck> = Vec::new();
            for t in tables {
                rows.extend(reproduce_table(t, g.long)?);
            }
            let mismatches: Vec<&RowCheck> = rows.iter().filter(|r| !r.skipped && !r.matches()).collect();
            for r in &mismatches {
                eprintln!(
                    "table {} row {}: expected {:?}, computed {}",
                    r.table,
                    r.key,
                    r.expected,
                    r.computed.as_ref().map_or_else(|| r.note.clone().unwrap_or_default(), |c| format!("{c:?}"))
                );
            }
            let report = Report {
                rows: &rows,
                matched: rows.iter().filter(|r| r.matches()).count(),
                mismatched: mismatches.len(),
                skipped: rows.iter().filter(|r| r.skipped).count(),
            };
            out.json(&report)?;
            if !mismatches.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Report<'a> {
    rows: &'a [RowCheck],
    matched: usize,
    mismatched: usize,
    skipped: usize,
}

fn json_only(g: &Global, cmd: &str) -> anyhow::Result<()> {
    if g.format == Some(Format::Csv) {
        return Err(usage(format!("{cmd} only writes JSON")));
    }
    Ok(())
}

fn nodes_1d(a: &Nodes1DArgs, g: &Global) -> anyhow::Result<NodeSet1D> {
    if a.family.eq_ignore_ascii_case("random") {
        let n = a.degree.ok_or_else(|| usage("--degree is required"))?;
        if n < 1 {
            return Err(usage("random node sets need --degree at least 1"));
        }
        return Ok(random_nodes(n, g.seed)?);
    }
    let family: Family1D = a.family.parse().map_err(|e: Error| usage(e.to_string()))?;
    if family == Family1D::Custom {
        if a.nodes.is_empty() {
            return Err(usage("the custom family needs --nodes"));
        }
        if a.degree.is_some_and(|n| n + 1 != a.nodes.len()) {
            return Err(usage("--degree does not match the number of --nodes"));
        }
        return Ok(nodes1d::custom(&a.nodes)?);
    }
    if !a.nodes.is_empty() {
        return Err(usage("--nodes only applies to the custom family"));
    }
    let n = a.degree.ok_or_else(|| usage("--degree is required"))?;
    if n < family.min_degree() {
        return Err(usage(format!("{family} needs --degree at least {}", family.min_degree())));
    }
    check_long(n, g)?;
    Ok(family.generate(n)?)
}

fn nodes_2d(a: &Nodes2DArgs, g: &Global) -> anyhow::Result<NodeSet2D> {
    let family: Family2D = a.family.parse().map_err(|e: Error| usage(e.to_string()))?;
    if family == Family2D::Custom {
        return Err(usage("the custom 2D family is library-only"));
    }
    check_long(a.degree, g)?;
    Ok(family.generate(a.degree)?)
}

fn check_long(n: usize, g: &Global) -> anyhow::Result<()> {
    if n > LONG_DEGREE && !g.long {
        bail!(UsageError(format!("degrees above {LONG_DEGREE} need --long")));
    }
    Ok(())
}

/// `n+1` sorted uniform draws from `(-1, 1)`, redrawn until distinct.
fn random_nodes(n: usize, seed: u64) -> lebesgue_core::Result<NodeSet1D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut v: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[0] < w[1]) {
            return nodes1d::custom(&v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_nodes_are_reproducible() {
        let a = random_nodes(6, 11).unwrap();
        assert_eq!(a, random_nodes(6, 11).unwrap());
        assert_ne!(a, random_nodes(6, 12).unwrap());
        assert_eq!(a.len(), 7);
    }

    #[test]
    fn parser_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
