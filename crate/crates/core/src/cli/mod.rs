//! The `hyproots` command-line tool.
//!
//! Exit codes: 0 on success, 2 when an analysis finished but the
//! hypotheses behind its guarantees are not met (the report is still
//! written), 1 on any error.

pub mod spec;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::arrangement::{arrange, default_grid, local_matching, ProbeVerdict, Strategy};
use crate::arrangement::arrange::{local_radius, perm_string};
use crate::critical::{locate_critical_points, CriticalPoint};
use crate::curves::Mode;
use crate::desing::{desing_at, DesingReport};
use crate::error::{Error, Result};
use crate::regularity::smoothness_report;
use crate::scalar::{parse_rational, to_f64, Rational};
use crate::selfcheck::{run_all, SuiteSizes};

pub use spec::{Curve, CurveSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_HYPOTHESES: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hyproots", version, about = "Regularity of roots of one-parameter polynomial families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical points, reduction trees, regularity budgets and guarantees.
    Analyze {
        spec: PathBuf,
        /// Extra point to analyze (repeatable).
        #[arg(long = "point", value_parser = parse_q)]
        points: Vec<Rational>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], value_parser = parse_q)]
        interval: Option<Vec<Rational>>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled root trajectories.
    Roots {
        spec: PathBuf,
        /// Uniform sample count; refinements near critical points are added.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum, default_value_t = Strategy::Smooth)]
        strategy: Strategy,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Per-branch smoothness orders of the glued branches at a point.
    Probe {
        spec: PathBuf,
        #[arg(long, value_parser = parse_q)]
        point: Rational,
        #[arg(long = "max-order")]
        max_order: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Desingularization exponents (complex mode).
    Desing {
        spec: PathBuf,
        #[arg(long = "point", value_parser = parse_q)]
        points: Vec<Rational>,
        #[arg(long)]
        json: bool,
    },
    /// Exact identity suites on seeded random instances.
    Selfcheck {
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_q(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Text of a command's primary output and its exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

/// Writes through a temporary file in the same directory, renamed into
/// place only once complete.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn load(path: &Path) -> Result<(CurveSpec, Curve, crate::config::Config)> {
    let spec = CurveSpec::load(path)?;
    let curve = spec.curve()?;
    let cfg = spec.config()?;
    Ok((spec, curve, cfg))
}

fn critical_points(curve: &Curve, declared: &[Rational], cfg: &crate::config::Config) -> Result<Vec<CriticalPoint>> {
    let (lo, hi) = curve.domain().clone();
    match curve {
        Curve::Real(p) => locate_critical_points(p, &lo, &hi, declared, cfg),
        Curve::Complex(_) => Ok(Vec::new()),
    }
}

fn verdict_text(v: &ProbeVerdict) -> String {
    match v {
        ProbeVerdict::Smooth => "smooth to the probed order".into(),
        ProbeVerdict::Mismatch { order, jump } => format!("one-sided limits differ at order {order} (jump {jump:e})"),
        ProbeVerdict::Divergent { order, side } => format!("order {order} diverges on the {side:?} side").to_lowercase(),
        ProbeVerdict::Indeterminate { order } => format!("order {order} indeterminate"),
    }
}

fn analyze(spec: &Path, points: &[Rational], interval: Option<&[Rational]>, json: bool, out: Option<&Path>) -> Result<Outcome> {
    let (s, curve, cfg) = load(spec)?;
    if curve.mode() != Mode::Hyperbolic {
        return Err(Error::ModeMismatch("analyze needs a hyperbolic spec".into()));
    }
    let p = curve.real()?;
    let (lo, hi) = match interval {
        Some([lo, hi]) => (lo.clone(), hi.clone()),
        _ => p.domain().clone(),
    };
    let mut declared = s.declared_points();
    declared.extend(points.iter().cloned());
    let report = smoothness_report(p, &lo, &hi, &declared, &cfg)?;
    let text = if json { to_json(&report)? } else { report.render_text() };
    let code = if report.hypotheses_met { EXIT_OK } else { EXIT_HYPOTHESES };
    match out {
        Some(path) => {
            write_atomic(path, &text)?;
            Ok(Outcome { stdout: String::new(), code })
        }
        None => Ok(Outcome { stdout: text, code }),
    }
}

fn roots(spec: &Path, grid: Option<usize>, strategy: Strategy, out: Option<&Path>, svg: Option<&Path>) -> Result<Outcome> {
    let (s, curve, cfg) = load(spec)?;
    let p = curve.real()?;
    let crit = critical_points(&curve, &s.declared_points(), &cfg)?;
    let (lo, hi) = p.domain();
    let g = default_grid(to_f64(lo), to_f64(hi), grid.unwrap_or(cfg.grid), &crit);
    let tr = arrange(p, &g, strategy, &crit, &cfg)?;
    let csv = tr.to_csv();
    // render everything before touching the filesystem
    let picture = svg.map(|_| tr.to_svg(800, 500));
    if let (Some(path), Some(pic)) = (svg, &picture) {
        write_atomic(path, pic)?;
    }
    match out {
        Some(path) => {
            write_atomic(path, &csv)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(csv)),
    }
}

fn probe(spec: &Path, point: &Rational, max_order: Option<usize>, json: bool) -> Result<Outcome> {
    let (s, curve, cfg) = load(spec)?;
    let q_max = max_order.unwrap_or(cfg.q_max);
    let crit = critical_points(&curve, &s.declared_points(), &cfg)?;
    let m = match &curve {
        Curve::Real(p) => local_matching(p, point, local_radius(p, to_f64(point), &crit), q_max, &cfg)?,
        Curve::Complex(p) => local_matching(p, point, local_radius(p, to_f64(point), &crit), q_max, &cfg)?,
    };
    if json {
        return Ok(Outcome::ok(to_json(&m)?));
    }
    let mut t = String::new();
    let _ = writeln!(t, "t0 = {}", m.t0);
    let _ = writeln!(t, "gluing = {}{}", perm_string(&m.tau), if m.tie { " (tied)" } else { "" });
    let _ = writeln!(t, "branch\tq_hat\tverdict");
    for (b, pr) in m.probes.iter().enumerate() {
        let q = pr.q_hat.map_or_else(|| "none".to_string(), |q| q.to_string());
        let _ = writeln!(t, "{}\t{q}\t{}", b + 1, verdict_text(&pr.verdict));
    }
    if m.non_differentiable {
        let _ = writeln!(t, "some branch is not differentiable at t0");
    }
    Ok(Outcome::ok(t))
}

fn desing(spec: &Path, points: &[Rational], json: bool) -> Result<Outcome> {
    let (s, curve, cfg) = load(spec)?;
    if curve.mode() != Mode::Complex {
        return Err(Error::ModeMismatch("desing needs a complex-mode spec".into()));
    }
    let mut at: Vec<Rational> = points.to_vec();
    if at.is_empty() {
        at = s.declared_points();
        for c in critical_points(&curve, &[], &cfg)? {
            match c.exact {
                Some(t) => at.push(t),
                None => return Err(Error::Unsupported(format!("critical point {} is not rational; pass --point", c.label()))),
            }
        }
        at.sort();
        at.dedup();
    }
    let pc = curve.complexified();
    let reports: Vec<DesingReport> = at.iter().map(|t| desing_at(&pc, t, &cfg)).collect::<Result<_>>()?;
    if json {
        return Ok(Outcome::ok(to_json(&reports)?));
    }
    let mut t = String::from("t0\tN_left\tN_right\n");
    for r in &reports {
        let _ = writeln!(t, "{}\t{}\t{}", r.t0, r.n_left, r.n_right);
    }
    Ok(Outcome::ok(t))
}

fn selfcheck(n_max: usize, seed: u64, json: bool) -> Result<Outcome> {
    if n_max == 0 || n_max > 8 {
        return Err(Error::Invalid("--n-max must be in 1..=8".into()));
    }
    let results = run_all(n_max, SuiteSizes::default(), seed);
    let ok = results.iter().all(|r| r.passed());
    let text = if json {
        to_json(&results)?
    } else {
        let mut t = String::new();
        for r in &results {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(t, "{status} {} ({} cases, {} failures)", r.name, r.cases, r.failures);
            if let Some(e) = &r.example {
                let _ = writeln!(t, "  first failure: {e}");
            }
        }
        t
    };
    Ok(Outcome { stdout: text, code: if ok { EXIT_OK } else { EXIT_ERROR } })
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze { spec, points, interval, json, out } => analyze(spec, points, interval.as_deref(), *json, out.as_deref()),
        Command::Roots { spec, grid, strategy, out, svg } => roots(spec, *grid, *strategy, out.as_deref(), svg.as_deref()),
        Command::Probe { spec, point, max_order, json } => probe(spec, point, *max_order, *json),
        Command::Desing { spec, points, json } => desing(spec, points, *json),
        Command::Selfcheck { n_max, seed, json } => selfcheck(*n_max, *seed, *json),
    }
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

