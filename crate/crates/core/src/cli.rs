//! The `leja` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 a checked bound or identity failed.

use std::fs::File;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bivariate::{leja_bidisk_array, shape_of};
use crate::error::{LejaError, Result};
use crate::experiments::{
    alper_study, bidisk_leja_check, bivariate_lebesgue_sweep, bounds_sweep, decay_sweep,
    delta_suite, envelope_sweep, factorization_suite, identity_transport_gap, node_bound_sweep,
    oracle_suite, reproduction_suite, schiffer_siciak_suite, special_sweep, transport_sweep,
};
use crate::flip::DEFAULT_REFINE;
use crate::io::{array_to_json, section_to_json, write_records_csv, write_section_csv};
use crate::leja::{canonical_disk_leja, greedy_leja, validate_leja, BoundarySamples, CompactTag, LejaSection};
use crate::math::cis;
use crate::transport::{ellipse_exterior_map, loglog_slope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "leja", version, about = "Leja points, Lagrange bases and Lebesgue constants")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Output file (default: stdout)
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for random evaluation points
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Worker threads (default: all cores)
    #[arg(long, env = "LEJA_THREADS", global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Leja section and validate it against boundary samples.
    ///
    /// CSV columns: index, re, im.
    Leja(LejaArgs),
    /// Sup norms and Lebesgue constants of canonical disk sections.
    ///
    /// CSV columns: N, max_sup, lebesgue, sup_margin, lebesgue_over_n; with
    /// --special-n: p, N, lebesgue, sum_sup, avg_sup, max_sup, min_over_k.
    Bounds(BoundsArgs),
    /// Bivariate identities on arrays of two disk Leja sequences.
    ///
    /// Each experiment writes its own CSV table; tables are separated by a
    /// blank line. Lebesgue, node-bound and decay tables have columns n, N,
    /// value (decay: n, N, sup_error); the others N, value.
    Bivariate(BivariateArgs),
    /// Disk sections pushed through the exterior map of an ellipse.
    ///
    /// CSV columns: N, max_sup, lebesgue; with --alper: w_grid, t_grid,
    /// value; with --envelope: N, max_ratio, envelope.
    Transport(TransportArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("compact").args(["disk", "ellipse"])))]
pub struct LejaArgs {
    /// Unit disk (default)
    #[arg(long)]
    pub disk: bool,

    /// Ellipse with semi-axes A >= B > 0 (requires --greedy)
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub ellipse: Option<Vec<f64>>,

    /// Greedy construction on boundary samples instead of the explicit formula
    #[arg(long)]
    pub greedy: bool,

    /// Number of points
    #[arg(short = 'N', long = "count", value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,

    /// Boundary samples used for construction and validation (default max(4096, 64 N))
    #[arg(long)]
    pub samples: Option<usize>,

    /// Angle of the first point on the circle
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub origin_angle: f64,

    /// Sample index of the first greedy point
    #[arg(long, default_value_t = 0)]
    pub seed_index: usize,

    /// Relative tolerance of the validation (default 1e-6, greedy 10 / samples)
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Largest N of the sweep
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_n: u64,

    /// Sweep N = 2^p - 1 instead
    #[arg(long)]
    pub special_n: bool,

    /// Range of p for --special-n, e.g. 2..8
    #[arg(long, default_value = "2..8", value_parser = parse_range)]
    pub p: RangeInclusive<usize>,

    /// With --special-n: require average sups above 1 and decreasing
    #[arg(long)]
    pub avg: bool,

    /// Coarse angle grid (default max(4096, 64 N) rounded to a power of two)
    #[arg(long)]
    pub grid: Option<usize>,

    /// Golden-section iterations
    #[arg(long, default_value_t = DEFAULT_REFINE)]
    pub refine: usize,

    /// Absolute slack on bounds; relative tolerance on Lebesgue identities
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("experiment").multiple(true).required(true)))]
pub struct BivariateArgs {
    /// Delta property, coefficient support and branch coverage (default N <= 15)
    #[arg(long, group = "experiment")]
    pub delta: bool,
    /// Closed form against the determinant ratio (default N <= 21)
    #[arg(long, group = "experiment")]
    pub oracle: bool,
    /// Factored extension ratio against determinants (default N <= 15)
    #[arg(long, group = "experiment")]
    pub factorization: bool,
    /// Product formula for full arrays (default n = 0..4)
    #[arg(long, group = "experiment")]
    pub schiffer_siciak: bool,
    /// Leja property on the bidisk (default N <= 20)
    #[arg(long = "verify-2d-leja", group = "experiment")]
    pub verify_2d_leja: bool,
    /// Torus-grid Lebesgue constants of full arrays (default n = 2..10)
    #[arg(long, group = "experiment")]
    pub lebesgue: bool,
    /// Per-node sup norms against their explicit bounds (default n = 1..8)
    #[arg(long, group = "experiment")]
    pub node_bound: bool,
    /// Interpolation error of exp(z + w) (default n = 2..12)
    #[arg(long, group = "experiment")]
    pub decay: bool,
    /// Reproduction of random polynomials (default N <= 15)
    #[arg(long, group = "experiment")]
    pub reproduce: bool,
    /// Write the array of size N as JSON and exit
    #[arg(long, group = "experiment", value_parser = clap::value_parser!(u64).range(1..))]
    pub array: Option<u64>,

    /// Largest N for the N-indexed experiments
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: Option<u64>,

    /// Range of n for the degree-indexed experiments, e.g. 2..12
    #[arg(long, value_parser = parse_range)]
    pub n: Option<RangeInclusive<usize>>,

    /// Torus grid points per axis
    #[arg(long, default_value_t = 64)]
    pub grid: usize,

    /// Circle samples per factor for the Leja check
    #[arg(long, default_value_t = 512)]
    pub samples: usize,

    /// Random evaluation points per N
    #[arg(long, default_value_t = 16)]
    pub points: usize,

    /// Random polynomials per N for --reproduce
    #[arg(long, default_value_t = 20)]
    pub polys: usize,

    /// Override every experiment's tolerance
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TransportArgs {
    /// Semi-axes A >= B > 0
    #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
    pub ellipse: Vec<f64>,

    /// Largest N of the sweep
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_n: u64,

    /// Estimate the Alper constant at the given grids and at doubled grids
    #[arg(long, conflicts_with = "envelope")]
    pub alper: bool,

    /// Compare transported and source basis moduli against their envelope
    #[arg(long)]
    pub envelope: bool,

    #[arg(long, default_value_t = 256)]
    pub w_grid: usize,

    #[arg(long, default_value_t = 512)]
    pub t_grid: usize,

    /// Coarse angle grid (default max(4096, 64 N) rounded to a power of two)
    #[arg(long)]
    pub grid: Option<usize>,

    #[arg(long, default_value_t = DEFAULT_REFINE)]
    pub refine: usize,
}

/// Parses `a..b` or `a..=b` (both inclusive) or a single `a`.
pub fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad bound {t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(lo..=hi)
}

/// Collected output of one command.
#[derive(Default)]
struct Report {
    tables: Vec<(String, Vec<u8>, Value)>,
    summary: Map<String, Value>,
    violations: Vec<String>,
}

impl Report {
    fn table<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let mut csv = Vec::new();
        write_records_csv(rows, &mut csv)?;
        let json = serde_json::to_value(rows).map_err(|e| LejaError::Invalid(e.to_string()))?;
        self.tables.push((name.to_string(), csv, json));
        Ok(())
    }

    fn note(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }

    fn check(&mut self, violations: Vec<String>) {
        self.violations.extend(violations);
    }

    fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => {
                let mut out = Vec::new();
                for (i, (_, csv, _)) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push(b'\n');
                    }
                    out.extend_from_slice(csv);
                }
                out
            }
            Format::Json => {
                let mut doc = Map::new();
                for (name, _, json) in &self.tables {
                    doc.insert(name.clone(), json.clone());
                }
                doc.insert("summary".into(), Value::Object(self.summary.clone()));
                doc.insert("violations".into(), json!(self.violations));
                let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).unwrap_or_default();
                out.push(b'\n');
                out
            }
        }
    }
}

fn write_output(cli: &Cli, bytes: &[u8]) -> io::Result<()> {
    match &cli.output {
        Some(path) => File::create(path)?.write_all(bytes),
        None => io::stdout().lock().write_all(bytes),
    }
}

const SUBCOMMANDS: [&str; 5] = ["leja", "bounds", "bivariate", "transport", "help"];

/// Inserts the `leja` subcommand when none is named, so `leja --disk -N 16`
/// works as written.
fn with_default_command<I, T>(args: I) -> Vec<std::ffi::OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut v: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let named = v.iter().skip(1).any(|a| SUBCOMMANDS.iter().any(|s| a == s));
    let help = v
        .iter()
        .skip(1)
        .any(|a| ["-h", "--help", "-V", "--version"].iter().any(|s| a == s));
    if v.len() > 1 && !named && !help {
        v.insert(1, "leja".into());
    }
    v
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(with_default_command(args)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(&cli));
    match result {
        Ok(out) => {
            if let Err(e) = write_output(&cli, &out.bytes) {
                eprintln!("error: writing output: {e}");
                return EXIT_USAGE;
            }
            for line in &out.messages {
                eprintln!("{line}");
            }
            if out.violations.is_empty() {
                EXIT_OK
            } else {
                for v in &out.violations {
                    eprintln!("violation: {v}");
                }
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

struct Outcome {
    bytes: Vec<u8>,
    messages: Vec<String>,
    violations: Vec<String>,
}

fn finish(report: Report, format: Format) -> Outcome {
    let messages = report
        .summary
        .iter()
        .map(|(k, v)| format!("{k}: {v}"))
        .collect();
    Outcome {
        bytes: report.render(format),
        messages,
        violations: report.violations,
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Leja(a) => cmd_leja(cli, a),
        Command::Bounds(a) => cmd_bounds(cli, a),
        Command::Bivariate(a) => cmd_bivariate(cli, a),
        Command::Transport(a) => cmd_transport(cli, a),
    }
}

fn axes(v: &[f64]) -> Result<(f64, f64)> {
    match v {
        [a, b] => Ok((*a, *b)),
        _ => Err(LejaError::Invalid("--ellipse takes two values".into())),
    }
}

fn cmd_leja(cli: &Cli, a: &LejaArgs) -> Result<Outcome> {
    let n = a.count as usize;
    let samples = a.samples.unwrap_or_else(|| (64 * n).max(4096));
    let (boundary, section): (BoundarySamples, LejaSection) = match &a.ellipse {
        Some(v) => {
            let (ea, eb) = axes(v)?;
            if !a.greedy {
                return Err(LejaError::Invalid("--ellipse requires --greedy".into()));
            }
            ellipse_exterior_map(ea, eb)?;
            let b = BoundarySamples::ellipse(ea, eb, samples)?;
            let s = greedy_leja(&b, n, a.seed_index)?;
            (b, s)
        }
        None => {
            let b = BoundarySamples::circle(samples)?;
            let s = if a.greedy {
                greedy_leja(&b, n, a.seed_index)?
            } else {
                canonical_disk_leja(n, cis(a.origin_angle))?
            };
            (b, s)
        }
    };
    let tol = a
        .tol
        .unwrap_or(if a.greedy { 10.0 / samples as f64 } else { 1e-6 });
    positive(tol)?;
    let report = validate_leja(&section, &boundary, tol);
    let bytes = match cli.format {
        Format::Csv => {
            let mut out = Vec::new();
            write_section_csv(&section, &mut out)?;
            out
        }
        Format::Json => {
            let mut doc = serde_json::to_value(section_to_json(&section))
                .map_err(|e| LejaError::Invalid(e.to_string()))?;
            doc["validation"] = serde_json::to_value(&report).map_err(|e| LejaError::Invalid(e.to_string()))?;
            let mut out = serde_json::to_vec_pretty(&doc).unwrap_or_default();
            out.push(b'\n');
            out
        }
    };
    let tag = match section.compact_tag() {
        CompactTag::UnitDisk => "unit_disk",
        CompactTag::SampledCompact => "sampled_compact",
    };
    let mut violations = Vec::new();
    if !report.passed {
        violations.push(format!(
            "Leja property violated at k={} by relative {:e}",
            report.worst_k, report.max_violation
        ));
    }
    Ok(Outcome {
        bytes,
        messages: vec![format!(
            "leja: N={n} compact={tag} samples={samples} max_violation={:e} worst_k={} tol={tol:e}",
            report.max_violation, report.worst_k
        )],
        violations,
    })
}

fn positive(tol: f64) -> Result<f64> {
    if tol > 0.0 {
        Ok(tol)
    } else {
        Err(LejaError::Invalid("tolerance must be positive".into()))
    }
}

fn cmd_bounds(cli: &Cli, a: &BoundsArgs) -> Result<Outcome> {
    positive(a.tol)?;
    let mut rep = Report::default();
    if a.special_n {
        let ps: Vec<u32> = a.p.clone().map(|p| p as u32).collect();
        if ps.iter().any(|&p| p == 0 || p > 20) {
            return Err(LejaError::Invalid("p must lie in 1..=20".into()));
        }
        let r = special_sweep(ps, a.grid, a.refine, a.tol, a.avg)?;
        rep.table("special_n", &r.rows)?;
        rep.check(r.violations);
    } else {
        let r = bounds_sweep(1..=a.max_n as usize, a.grid, a.refine, a.tol)?;
        let worst = r.rows.iter().map(|x| x.max_sup).fold(0.0, f64::max);
        let worst_ratio = r.rows.iter().map(|x| x.lebesgue_over_n).fold(0.0, f64::max);
        rep.note("max_sup_overall", json!(worst));
        rep.note("max_lebesgue_over_n", json!(worst_ratio));
        rep.table("bounds", &r.rows)?;
        rep.check(r.violations);
    }
    Ok(finish(rep, cli.format))
}

fn cmd_bivariate(cli: &Cli, a: &BivariateArgs) -> Result<Outcome> {
    if let Some(total) = a.array {
        let array = leja_bidisk_array(total as usize)?;
        let mut out = serde_json::to_vec_pretty(&array_to_json(&array))
            .map_err(|e| LejaError::Invalid(e.to_string()))?;
        out.push(b'\n');
        let (n, m) = shape_of(total as usize)?;
        return Ok(Outcome {
            bytes: out,
            messages: vec![format!("array: N={total} n={n} m={m}")],
            violations: Vec::new(),
        });
    }
    if let Some(t) = a.tol {
        positive(t)?;
    }
    let n_max = |d: usize| a.n_max.map_or(d, |v| v as usize);
    let n_range = |d: RangeInclusive<usize>| a.n.clone().unwrap_or(d);
    let tol = |d: f64| a.tol.unwrap_or(d);
    let mut rep = Report::default();
    if a.delta {
        let s = delta_suite(n_max(15), tol(1e-10))?;
        rep.table("delta", &s.rows)?;
        rep.note("branch_counts", json!(s.coverage.counts));
        rep.note("degree_violations", json!(s.degree_violations));
        rep.check(s.violations);
    }
    if a.oracle {
        let s = oracle_suite(n_max(21), a.points, cli.seed, tol(1e-8))?;
        rep.note("oracle_max_rel", json!(s.rows.iter().map(|r| r.value).fold(0.0, f64::max)));
        rep.table("oracle", &s.rows)?;
        rep.check(s.violations);
    }
    if a.factorization {
        let s = factorization_suite(n_max(15), a.points, cli.seed, tol(1e-8))?;
        rep.table("factorization", &s.rows)?;
        rep.check(s.violations);
    }
    if a.schiffer_siciak {
        let r = n_range(0..=4);
        let s = schiffer_siciak_suite(*r.end(), tol(1e-8))?;
        rep.table("schiffer_siciak", &s.rows)?;
        rep.check(s.violations);
    }
    if a.verify_2d_leja {
        let r = bidisk_leja_check(n_max(20), a.samples, tol(1e-6))?;
        let rows: Vec<_> = r
            .per_n
            .iter()
            .map(|&(n, v)| crate::experiments::ErrorRow { n, value: v })
            .collect();
        rep.table("leja_2d", &rows)?;
        rep.note("leja_2d_worst_shortfall", json!(r.worst_shortfall));
        if !r.passed {
            rep.check(vec![format!(
                "2D Leja shortfall {:e} at N={}",
                r.worst_shortfall, r.worst_n
            )]);
        }
    }
    if a.lebesgue {
        let s = bivariate_lebesgue_sweep(n_range(2..=10), a.grid)?;
        let xs: Vec<f64> = s.rows.iter().map(|r| r.total as f64).collect();
        let ys: Vec<f64> = s.rows.iter().map(|r| r.value).collect();
        if xs.len() > 1 {
            rep.note("lebesgue_loglog_slope", json!(loglog_slope(&xs, &ys)));
        }
        rep.table("lebesgue", &s.rows)?;
        rep.check(s.violations);
    }
    if a.node_bound {
        let s = node_bound_sweep(n_range(1..=8), a.grid)?;
        rep.table("node_bound", &s.rows)?;
        rep.check(s.violations);
    }
    if a.decay {
        let s = decay_sweep(n_range(2..=12), a.grid)?;
        rep.table("decay", &s.rows)?;
        rep.check(s.violations);
    }
    if a.reproduce {
        let s = reproduction_suite(n_max(15), a.polys, a.points, cli.seed, tol(1e-10))?;
        rep.table("reproduce", &s.rows)?;
        rep.check(s.violations);
    }
    Ok(finish(rep, cli.format))
}

fn cmd_transport(cli: &Cli, a: &TransportArgs) -> Result<Outcome> {
    let (ea, eb) = axes(&a.ellipse)?;
    let map = ellipse_exterior_map(ea, eb)?;
    let ns = 1..=a.max_n as usize;
    let mut rep = Report::default();
    if a.alper {
        let rows = alper_study(&map, a.w_grid, a.t_grid)?;
        let gap = (rows[1].value - rows[0].value).abs();
        rep.note("alper_constant", json!(rows[1].value));
        rep.note("grid_doubling_change", json!(gap));
        if map.is_identity() && rows.iter().any(|r| r.value.abs() > 1e-6) {
            rep.check(vec![format!("Alper constant of the circle is {}", rows[1].value)]);
        }
        if !rows.iter().all(|r| r.value.is_finite()) || gap > 1e-3 {
            rep.check(vec![format!("Alper estimate not converged: change {gap:e}")]);
        }
        rep.table("alper", &rows)?;
    } else if a.envelope {
        let s = envelope_sweep(map, ns, a.grid.unwrap_or(4096))?;
        rep.table("envelope", &s.rows)?;
        rep.check(s.violations);
    } else {
        let s = transport_sweep(map, ns.clone(), a.grid, a.refine)?;
        let pts: Vec<(f64, f64)> = s
            .rows
            .iter()
            .filter(|r| r.n >= 2)
            .map(|r| (r.n as f64, r.max_sup))
            .collect();
        if pts.len() > 1 {
            let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            rep.note("max_sup_loglog_slope", json!(loglog_slope(&xs, &ys)));
        }
        if map.is_identity() {
            let gap = identity_transport_gap(ns, a.refine)?;
            rep.note("identity_gap", json!(gap));
            if gap > 1e-9 {
                rep.check(vec![format!("identity transport differs from disk by {gap:e}")]);
            }
        }
        rep.table("transport", &s.rows)?;
        rep.check(s.violations);
    }
    Ok(finish(rep, cli.format))
}
