//! linkoid: bracket and Jones polynomials of linkoid diagrams, and
//! sphere-averaged polynomials of open/closed curves in 3-space.
//!
//! Exit codes: 0 success, 2 unreadable/malformed input, 3 crossing cap
//! exceeded, 4 geometric degeneracy under --strict.

mod manifest;
mod selftest;

use clap::{Parser, Subcommand, ValueEnum};
use linkoid::bracket::{BracketEngine, BracketOptions};
use linkoid::diagram::{parse_diagram, parse_diagram_json, print_diagram_json, DiagramError, LinkoidDiagram};
use linkoid::projection::{project, CurveSet, ProjectionOutcome, DEFAULT_PROJECTION_EPS};
use linkoid::sphere::{
    estimate_bracket_with, estimate_jones_with, SamplerConfig, SamplerMode, SphereError,
    SphereEstimate,
};
use manifest::RunManifest;
use serde_json::json;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            msg: msg.into(),
        }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        let code = match e {
            DiagramError::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<SphereError> for Failure {
    fn from(e: SphereError) -> Self {
        let code = match &e {
            SphereError::Bracket { source, .. } => match source {
                DiagramError::CapExceeded { .. } => EXIT_CAP,
                _ => EXIT_INPUT,
            },
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(name = "linkoid", version, about = "Kauffman bracket and Jones polynomials of open-ended link diagrams and of curves in 3-space")]
struct Cli {
    /// Worker threads for sphere sampling (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Var {
    A,
    T,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// deterministic Fibonacci lattice
    Fib,
    /// seeded uniform random directions
    Rand,
}

#[derive(Subcommand)]
enum Cmd {
    /// Jones polynomial (and bracket, writhe) of a diagram file
    Jones {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, value_enum, default_value_t = Var::A)]
        var: Var,
        /// decimal places for t-presentation of real coefficients
        #[arg(long, default_value_t = 2)]
        decimals: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kauffman bracket of a diagram file
    Bracket {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project curves along a direction and write the diagram
    Project {
        #[arg(long)]
        curves: PathBuf,
        /// direction as x,y,z (normalized internally)
        #[arg(long)]
        xi: String,
        /// closure parameter applied before projecting
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_PROJECTION_EPS)]
        eps: f64,
        /// fail (exit 4) on a degenerate direction instead of jittering
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sphere-averaged Jones polynomial of a curve collection
    SphereJones {
        #[command(flatten)]
        sphere: SphereArgs,
    },
    /// Sphere-averaged (un-normalized) bracket polynomial
    SphereBracket {
        #[command(flatten)]
        sphere: SphereArgs,
    },
    /// Closure sweep: estimate at each s and write a CSV of t-coefficients
    Sweep {
        #[arg(long)]
        curves: PathBuf,
        /// comma-separated closure parameters, e.g. 0,0.22,0.44,1
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 50_000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Mode::Fib)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PROJECTION_EPS)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in golden test suite
    Selftest,
}

#[derive(clap::Args)]
struct SphereArgs {
    #[arg(long)]
    curves: PathBuf,
    #[arg(long, default_value_t = 50_000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Mode::Fib)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_PROJECTION_EPS)]
    eps: f64,
    /// closure parameter applied before estimating
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<LinkoidDiagram, Failure> {
    let text = read_file(path)?;
    let d = if path.extension().is_some_and(|e| e == "json") {
        let v: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        parse_diagram_json(&v)?
    } else {
        parse_diagram(&text)?
    };
    Ok(d)
}

fn load_curves(path: &Path, s: Option<f64>) -> Result<CurveSet, Failure> {
    let text = read_file(path)?;
    let curves = if path.extension().is_some_and(|e| e == "json") {
        CurveSet::parse_json(&text)
    } else {
        CurveSet::parse_text(&text)
    }
    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    match s {
        Some(s) => curves
            .interpolate_closure(s)
            .map_err(|e| Failure::input(e.to_string())),
        None => Ok(curves),
    }
}

fn engine_from_env() -> BracketEngine {
    let mut options = BracketOptions::sphere_default();
    if let Ok(cap) = std::env::var("LINKOID_CACHE_CAP") {
        if let Ok(cap) = cap.parse() {
            options.cache_cap = cap;
        }
    }
    BracketEngine::new(options)
}

fn write_output(path: &Path, contents: &str, manifest: &mut RunManifest) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    manifest.record_output(path);
    Ok(())
}

fn parse_xi(text: &str) -> Result<[f64; 3], Failure> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::input(format!("bad direction '{text}': expected x,y,z")))?;
    if parts.len() != 3 {
        return Err(Failure::input("direction needs exactly three components"));
    }
    let n = (parts[0] * parts[0] + parts[1] * parts[1] + parts[2] * parts[2]).sqrt();
    if n == 0.0 {
        return Err(Failure::input("direction must be nonzero"));
    }
    Ok([parts[0] / n, parts[1] / n, parts[2] / n])
}

fn sampler_config(samples: usize, mode: Mode, seed: u64, eps: f64) -> SamplerConfig {
    SamplerConfig {
        mode: match mode {
            Mode::Fib => SamplerMode::FibonacciLattice,
            Mode::Rand => SamplerMode::UniformRandom,
        },
        sample_count: samples,
        seed,
        eps,
        max_redraws: 8,
    }
}

fn estimate_json(est: &SphereEstimate, engine: &BracketEngine) -> serde_json::Value {
    let stats = engine.cache_stats();
    let census: Vec<serde_json::Value> = est
        .type_census
        .iter()
        .map(|(sig, e)| {
            json!({
                "signature": sig,
                "count": e.count,
                "value_A": e.value.to_json(),
                "value_t_pretty": e.value.to_t().pretty(2),
                "representative_direction": e.representative,
            })
        })
        .collect();
    json!({
        "mean_A": est.mean.to_json(),
        "mean_t": est.mean_t().to_json(),
        "mean_t_pretty": est.mean_t().pretty(2),
        "samples_used": est.samples_used,
        "degenerate_count": est.degenerate_count,
        "distinct_types": est.type_census.len(),
        "type_cache_hit_rate": est.hit_rate(),
        "stderr_by_A_exponent": est.stderr,
        "engine_cache": {
            "entries": stats.entries,
            "hits": stats.hits,
            "misses": stats.misses,
        },
        "census": census,
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Jones {
            diagram,
            var,
            decimals,
            json: as_json,
            out,
        } => {
            let mut manifest = RunManifest::new("jones");
            manifest.record_input(&diagram);
            let d = load_diagram(&diagram)?;
            let engine = engine_from_env();
            let r = engine.jones(&d)?;
            let stats = engine.cache_stats();
            let body = if as_json {
                serde_json::to_string_pretty(&json!({
                    "bracket": r.bracket.to_json(),
                    "writhe": r.writhe,
                    "jones_A": r.jones_a.to_json(),
                    "jones_t": r.jones_a.to_t().to_json(),
                    "jones_t_pretty": r.jones_a.to_t().pretty(decimals),
                    "states_evaluated": r.states_evaluated,
                    "cache_hit": r.cache_hit,
                    "engine_cache": {"entries": stats.entries, "hits": stats.hits, "misses": stats.misses},
                }))
                .unwrap()
            } else {
                match var {
                    Var::A => format!("{}", r.jones_a),
                    Var::T => r.jones_a.to_t().pretty(decimals),
                }
            };
            emit(body, out.as_deref(), &mut manifest)
        }
        Cmd::Bracket {
            diagram,
            json: as_json,
            out,
        } => {
            let mut manifest = RunManifest::new("bracket");
            manifest.record_input(&diagram);
            let d = load_diagram(&diagram)?;
            let engine = engine_from_env();
            let r = engine.jones(&d)?;
            let body = if as_json {
                serde_json::to_string_pretty(&json!({
                    "bracket": r.bracket.to_json(),
                    "writhe": r.writhe,
                    "states_evaluated": r.states_evaluated,
                }))
                .unwrap()
            } else {
                format!("{}", r.bracket)
            };
            emit(body, out.as_deref(), &mut manifest)
        }
        Cmd::Project {
            curves,
            xi,
            s,
            eps,
            strict,
            out,
        } => {
            let mut manifest = RunManifest::new("project");
            manifest.record_input(&curves);
            let set = load_curves(&curves, s)?;
            let dir = parse_xi(&xi)?;
            let outcome = project(&set, dir, eps).map_err(|e| Failure::input(e.to_string()))?;
            match outcome {
                ProjectionOutcome::Diagram(d) => {
                    let summary = format!(
                        "# open {}, closed walks {}, loops {}, crossings {}, writhe {}\n",
                        d.open_count(),
                        d.closed_walk_count(),
                        d.free_loop_count(),
                        d.crossing_count(),
                        d.writhe()
                    );
                    let body = if out
                        .as_deref()
                        .is_some_and(|p| p.extension().is_some_and(|e| e == "json"))
                    {
                        serde_json::to_string_pretty(&print_diagram_json(&d)).unwrap()
                    } else {
                        format!("{summary}{d}")
                    };
                    emit(body, out.as_deref(), &mut manifest)
                }
                ProjectionOutcome::Degenerate(deg) => {
                    let msg = format!(
                        "degenerate direction ({:?}): {}; offending segments {:?}",
                        deg.reason, deg.detail, deg.segments
                    );
                    if strict {
                        return Err(Failure {
                            code: EXIT_DEGENERATE,
                            msg,
                        });
                    }
                    // redraw via the sphere policy: jitter deterministically
                    let cfg = sampler_config(1, Mode::Fib, 0, eps);
                    let est = estimate_jones_with(&set, &cfg, &engine_from_env());
                    match est {
                        Ok(_) => {
                            eprintln!("note: {msg}; retry with a jittered direction succeeded");
                            Err(Failure::input(
                                "direction degenerate; rerun with a nearby direction or use sphere-jones",
                            ))
                        }
                        Err(e) => Err(Failure::input(format!("{msg}; jitter also failed: {e}"))),
                    }
                }
            }
        }
        Cmd::SphereJones { sphere } => run_sphere(sphere, true),
        Cmd::SphereBracket { sphere } => run_sphere(sphere, false),
        Cmd::Sweep {
            curves,
            s,
            samples,
            mode,
            seed,
            eps,
            out,
        } => {
            let mut manifest = RunManifest::new("sweep");
            manifest.record_input(&curves);
            manifest.set_config(json!({
                "s": s, "samples": samples, "seed": seed, "eps": eps,
                "mode": matches!(mode, Mode::Fib).then_some("fib").unwrap_or("rand"),
            }));
            let set = load_curves(&curves, None)?;
            let s_values: Vec<f64> = s
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::input(format!("bad s list '{s}'")))?;
            let cfg = sampler_config(samples, mode, seed, eps);
            let engine = engine_from_env();
            let mut rows = Vec::new();
            for &sv in &s_values {
                let closed = set
                    .interpolate_closure(sv)
                    .map_err(|e| Failure::input(e.to_string()))?;
                let est = estimate_jones_with(&closed, &cfg, &engine)?;
                rows.push((sv, est));
            }
            let csv = sweep_csv(&rows);
            write_output(&out, &csv, &mut manifest)?;
            manifest.finish(&out)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(())
        }
        Cmd::Selftest => selftest::run().map_err(|msg| Failure { code: 1, msg }),
    }
}

fn run_sphere(args: SphereArgs, jones: bool) -> Result<(), Failure> {
    let mut manifest = RunManifest::new(if jones { "sphere-jones" } else { "sphere-bracket" });
    manifest.record_input(&args.curves);
    manifest.set_config(json!({
        "samples": args.samples,
        "mode": matches!(args.mode, Mode::Fib).then_some("fib").unwrap_or("rand"),
        "seed": args.seed,
        "eps": args.eps,
        "s": args.s,
    }));
    let set = load_curves(&args.curves, args.s)?;
    let cfg = sampler_config(args.samples, args.mode, args.seed, args.eps);
    let engine = engine_from_env();
    let est = if jones {
        estimate_jones_with(&set, &cfg, &engine)?
    } else {
        estimate_bracket_with(&set, &cfg, &engine)?
    };
    println!(
        "mean ({} samples, {} types, hit rate {:.4}):",
        est.samples_used,
        est.type_census.len(),
        est.hit_rate()
    );
    println!("  {}", est.mean_t().pretty(2));
    if let Some(out) = &args.out {
        let body = serde_json::to_string_pretty(&estimate_json(&est, &engine)).unwrap();
        write_output(out, &body, &mut manifest)?;
        manifest.finish(out)?;
    }
    Ok(())
}

fn emit(body: String, out: Option<&Path>, manifest: &mut RunManifest) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let with_newline = if body.ends_with('\n') {
                body
            } else {
                format!("{body}\n")
            };
            write_output(path, &with_newline, manifest)?;
            manifest.finish(path)?;
            Ok(())
        }
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

/// CSV with one row per closure parameter: first column s, then one column
/// per t-exponent (quarter-integer header), values are coefficients.
fn sweep_csv(rows: &[(f64, SphereEstimate)]) -> String {
    let mut quarters: BTreeSet<i64> = BTreeSet::new();
    for (_, est) in rows {
        quarters.extend(est.mean_t().quarter_exponents());
    }
    let header: Vec<String> = std::iter::once("s".to_string())
        .chain(quarters.iter().map(|q| {
            let g = gcd(q.unsigned_abs(), 4);
            let (n, d) = (q / g as i64, 4 / g as i64);
            if d == 1 {
                format!("{n}")
            } else {
                format!("{n}/{d}")
            }
        }))
        .collect();
    let mut out = header.join(",");
    out.push('\n');
    for (s, est) in rows {
        let t = est.mean_t();
        let mut row = vec![format!("{s}")];
        for q in &quarters {
            row.push(format!("{}", t.coeff_f64(*q)));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
