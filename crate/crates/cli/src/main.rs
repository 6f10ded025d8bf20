//! `logsurf`: command-line front end for series evaluation, special
//! functions, level curves, domain coloring and invariant suites.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod complex;
mod probe;
mod verify;

use std::f64::consts::PI;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use logsurf::curves::{trace_arg_level, trace_g_level, trace_mod_level, Quadrant, TraceConfig, Window};
use logsurf::gamma::{classify_un, classify_un_tilde, classify_vn, find_x0, g_tilde, gamma, log_gamma, RegionSpec};
use logsurf::genseries::{eval_series, series_norm, zeta_continued, zeta_eval, MixedSeries};
use logsurf::render::{
    domain_color, write_image, Mask, Predicate, RenderSpec, Style, REGION_FIGURE_ALPHA, REGION_FIGURE_RADIUS,
    REGION_FIGURE_WINDOW,
};
use logsurf::stirling::{phi, phi_asymptotic, phi_binet, Truncation};
use logsurf::surface::LogPoint;

use complex::{format_complex, format_real, parse_complex};

const DEFAULT_SEED: u64 = 20_240_601;
const THREADS_VAR: &str = "LOGSURF_THREADS";

#[derive(Parser, Debug)]
#[command(name = "logsurf", version, about = "Holomorphic functions on the Riemann surface of the logarithm")]
struct Cli {
    /// Significant digits for printed numbers.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=17))]
    digits: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a generalized power series read from JSON.
    Eval {
        /// JSON file, or `-` for stdin.
        #[arg(long)]
        series: PathBuf,
        /// Surface point `modulus@argument`, one per generalized variable.
        #[arg(long = "x", value_parser = parse_log_point, allow_hyphen_values = true)]
        x: Vec<LogPoint>,
        /// Complex value, one per standard variable.
        #[arg(long = "y", value_parser = parse_complex, allow_hyphen_values = true)]
        y: Vec<Complex64>,
        /// Also print the absolute coefficient sum at the moduli of the point.
        #[arg(long)]
        norm: bool,
    },
    /// Riemann zeta function.
    Zeta {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_enum, default_value_t = ZetaMethod::Auto)]
        method: ZetaMethod,
        /// Tail tolerance of the series path.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Gamma function.
    Gamma {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        /// Print log Gamma instead.
        #[arg(long)]
        log: bool,
    },
    /// Stirling remainder phi.
    Phi {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_enum, default_value_t = PhiMethod::Auto)]
        method: PhiMethod,
        /// Laplace direction for the integral method.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        /// Number of terms for the asymptotic method; least-term truncation if absent.
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Trace a level curve and write CSV `x,y,residual,A,|Gamma|`.
    Trace {
        #[arg(long, value_enum)]
        kind: TraceKind,
        /// Level: the modulus r, or the phase theta.
        #[arg(long, allow_hyphen_values = true)]
        value: Option<f64>,
        /// Take the modulus level through this point instead of `--value`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        through: Option<Complex64>,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true)]
        x1: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        y0: f64,
        #[arg(long, default_value_t = 80.0, allow_hyphen_values = true)]
        y1: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long, value_enum)]
        quadrant: Option<QuadrantArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Domain-colored PNG of a function, optionally with region overlays.
    Render {
        #[arg(long = "fn", value_enum)]
        function: RenderFn,
        /// `x_min,x_max,y_min,y_max`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(f64, f64, f64, f64)>,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        #[arg(long, value_enum, default_value_t = StyleArg::Gradient)]
        style: StyleArg,
        /// `S` for the sector (white), `Un=k` for a phase strip (black).
        #[arg(long, value_parser = parse_overlay)]
        overlay: Vec<OverlayArg>,
        #[arg(long = "radius", visible_alias = "R", default_value_t = REGION_FIGURE_RADIUS)]
        radius: f64,
        #[arg(long, default_value_t = REGION_FIGURE_ALPHA)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Strip index n of a point, or `outside`.
    Classify {
        #[arg(long = "fn", value_enum, default_value_t = ClassifyFn::Gamma)]
        function: ClassifyFn,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long = "radius", visible_alias = "R")]
        radius: f64,
        #[arg(long)]
        alpha: f64,
        /// For Gamma, restrict to the part right of the critical point.
        #[arg(long)]
        right_of_x0: bool,
    },
    /// Run a randomized invariant suite; exits 1 on any violation.
    Verify {
        #[arg(long, value_enum)]
        suite: verify::Suite,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Print experiment tables.
    Probe {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Real-axis crossings of the normalized series along argument rays.
    Crossings {
        /// JSON series file; the built-in examples if absent.
        #[arg(long)]
        series: Option<PathBuf>,
        /// Modulus for a series given by file.
        #[arg(long, default_value_t = 1.0)]
        modulus: f64,
        /// Window ends as multiples of pi.
        #[arg(long, value_delimiter = ',', default_values_t = [100.0, 200.0])]
        turns: Vec<f64>,
        /// Samples per unit of argument.
        #[arg(long, default_value_t = 64.0)]
        density: f64,
    },
    /// Phase of Gamma along a ray against its lower bound.
    Phase {
        /// Ray angle in units of pi.
        #[arg(long, default_value_t = 0.75, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long, default_value_t = 10.0)]
        t_min: f64,
        #[arg(long, default_value_t = 1e4)]
        t_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ZetaMethod {
    /// Euler-Maclaurin continuation, accurate to rounding everywhere but the pole.
    Auto,
    /// Generalized series with a certified tail below `--tol`; needs Re z > 1.
    Series,
    Continued,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PhiMethod {
    Auto,
    Binet,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TraceKind {
    /// |Gamma| = value.
    Mod,
    /// A = value.
    Arg,
    /// A_g = value, in Im z >= 2.
    #[value(alias = "bg")]
    G,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuadrantArg {
    UpperRight,
    UpperLeft,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RenderFn {
    Gamma,
    Zeta,
    Gtilde,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StyleArg {
    Gradient,
    Contour,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassifyFn {
    Gamma,
    G,
}

#[derive(Clone, Copy, Debug)]
enum OverlayArg {
    Sector,
    Strip(i64),
}

fn parse_log_point(text: &str) -> Result<LogPoint, String> {
    let (m, a) = text.split_once('@').ok_or_else(|| format!("expected modulus@argument, got '{text}'"))?;
    let m: f64 = m.trim().parse().map_err(|_| format!("bad modulus in '{text}'"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad argument in '{text}'"))?;
    LogPoint::new(m, a).map_err(|e| e.to_string())
}

fn parse_window(text: &str) -> Result<(f64, f64, f64, f64), String> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("expected four numbers x_min,x_max,y_min,y_max, got '{text}'"))?;
    match v[..] {
        [a, b, c, d] if a < b && c < d => Ok((a, b, c, d)),
        [_, _, _, _] => Err(format!("window '{text}' is empty")),
        _ => Err(format!("expected four numbers, got {}", v.len())),
    }
}

fn parse_overlay(text: &str) -> Result<OverlayArg, String> {
    if text.eq_ignore_ascii_case("s") {
        return Ok(OverlayArg::Sector);
    }
    let n = text
        .strip_prefix("Un=")
        .or_else(|| text.strip_prefix("un="))
        .ok_or_else(|| format!("overlay must be S or Un=k, got '{text}'"))?;
    n.parse().map(OverlayArg::Strip).map_err(|_| format!("bad strip index in '{text}'"))
}

/// Input the user can fix: reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<logsurf::Error>() {
        Some(logsurf::Error::Parameter(_) | logsurf::Error::DimensionMismatch { .. } | logsurf::Error::Json(_)) => 2,
        _ => 1,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize =
        raw.trim().parse().map_err(|_| usage(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
    if n == 0 {
        return Err(usage(format!("{THREADS_VAR} must be positive")));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    Ok(())
}

fn read_series(path: &PathBuf) -> Result<MixedSeries> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(MixedSeries::from_json(&text)?)
}

fn run(cli: Cli) -> Result<()> {
    let digits = cli.digits as usize;
    let show = |z: Complex64| format_complex(z, digits);
    match cli.command {
        Command::Eval { series, x, y, norm } => {
            let f = read_series(&series)?;
            let out = eval_series(&f, &x, &y)?;
            println!("{}", show(out.value));
            if let Some(tail) = out.tail_bound {
                println!("tail bound {}", format_real(tail, digits));
            }
            if norm {
                let r: Vec<f64> = x.iter().map(LogPoint::modulus).collect();
                let s: Vec<f64> = y.iter().map(|v| v.norm()).collect();
                println!("norm {}", format_real(series_norm(&f, &r, &s)?, digits));
            }
        }
        Command::Zeta { z, method, tol } => {
            if !(tol > 0.0) {
                return Err(usage("--tol must be positive"));
            }
            let value = match method {
                ZetaMethod::Series => zeta_eval(z, tol)?,
                ZetaMethod::Auto | ZetaMethod::Continued => zeta_continued(z)?,
            };
            println!("{}", show(value));
        }
        Command::Gamma { z, log } => {
            let value = if log { log_gamma(z)? } else { gamma(z)? };
            println!("{}", show(value));
        }
        Command::Phi { z, method, theta, terms } => match method {
            PhiMethod::Auto => println!("{}", show(phi(z)?)),
            PhiMethod::Binet => {
                let theta = theta.unwrap_or_else(|| logsurf::stirling::default_direction(z));
                println!("{}", show(phi_binet(z, theta)?));
            }
            PhiMethod::Asymptotic => {
                let truncation = terms.map_or(Truncation::Optimal, Truncation::Order);
                let v = phi_asymptotic(z, truncation)?;
                println!("{}", show(v.value));
                println!("error bound {} with {} terms", format_real(v.err_bound, digits), v.terms);
            }
        },
        Command::Trace { kind, value, through, x0, x1, y0, y1, step, quadrant, out } => {
            let cfg = TraceConfig { x_step: step, ..TraceConfig::default() };
            let curve = match kind {
                TraceKind::Mod => {
                    let r = match (value, through) {
                        (Some(r), None) => r,
                        (None, Some(z)) => gamma(z)?.norm(),
                        _ => return Err(usage("modulus trace needs exactly one of --value and --through")),
                    };
                    trace_mod_level(r, x0, x1, &cfg)?
                }
                TraceKind::Arg | TraceKind::G => {
                    let theta = value.ok_or_else(|| usage("phase traces need --value"))?;
                    let window = Window::new(x0, x1, y0, y1)?;
                    if matches!(kind, TraceKind::G) {
                        trace_g_level(theta, &window, &cfg)?
                    } else {
                        let q = match quadrant {
                            Some(QuadrantArg::UpperRight) => Quadrant::UpperRight,
                            Some(QuadrantArg::UpperLeft) => Quadrant::UpperLeft,
                            None if x1 <= 0.0 => Quadrant::UpperLeft,
                            None => Quadrant::UpperRight,
                        };
                        trace_arg_level(theta, q, &window, &cfg)?
                    }
                }
            };
            match out {
                Some(path) => {
                    curve.write_csv(&path)?;
                    eprintln!("{} samples written to {}", curve.samples.len(), path.display());
                }
                None => print!("{}", curve.to_csv()?),
            }
        }
        Command::Render { function, window, width, height, style, overlay, radius, alpha, out } => {
            let style = match style {
                StyleArg::Gradient => Style::Gradient,
                StyleArg::Contour => Style::Contour,
            };
            let mut spec = RenderSpec::new(window.unwrap_or(REGION_FIGURE_WINDOW), width, height, style)?;
            let mut masks = Vec::new();
            for o in &overlay {
                let (predicate, shade, opacity, name): (Predicate, _, _, String) = match *o {
                    OverlayArg::Sector => {
                        let region = RegionSpec::new(radius, alpha, 0)?;
                        (Arc::new(move |z| region.in_sector(z)), [255, 255, 255], 0.6, "S".into())
                    }
                    OverlayArg::Strip(n) => {
                        if !matches!(function, RenderFn::Gamma) {
                            return Err(usage("strip overlays are defined for --fn gamma"));
                        }
                        let region = RegionSpec::new(radius, alpha, n)?;
                        let p: Predicate =
                            Arc::new(move |z| matches!(classify_un_tilde(z, &region), Ok(Some(k)) if k == n));
                        (p, [0, 0, 0], 0.85, format!("Un={n}"))
                    }
                };
                masks.push((name, predicate.clone()));
                spec = spec.with_overlay(predicate, shade, opacity);
            }
            let img = match function {
                RenderFn::Gamma => domain_color(gamma, &spec),
                RenderFn::Zeta => domain_color(zeta_continued, &spec),
                RenderFn::Gtilde => domain_color(g_tilde, &spec),
            };
            write_image(&img, &out)?;
            println!("wrote {}x{} image to {}", width, height, out.display());
            for (name, predicate) in masks {
                let mask = Mask::from_predicate(&spec, &predicate);
                println!("overlay {name}: {} pixels, {} components", mask.count(), mask.components());
            }
        }
        Command::Classify { function, z, radius, alpha, right_of_x0 } => {
            let region = RegionSpec::new(radius, alpha, 0)?;
            let class = match function {
                ClassifyFn::Gamma if right_of_x0 => classify_un(z, &region, find_x0()?)?,
                ClassifyFn::Gamma => classify_un_tilde(z, &region)?,
                ClassifyFn::G => classify_vn(z, &region)?,
            };
            match class {
                Some(n) => println!("{n}"),
                None => println!("outside"),
            }
        }
        Command::Verify { suite, samples, seed } => {
            let samples = samples.unwrap_or_else(|| suite.default_samples());
            if samples == 0 {
                return Err(usage("--samples must be positive"));
            }
            let report = verify::run(suite, samples, seed)?;
            let status = if report.passed() { "PASS" } else { "FAIL" };
            println!("{status} {:?} (seed {seed}): {}", suite, report.summary);
            for f in report.failures.iter().take(20) {
                println!("  {f}");
            }
            if !report.passed() {
                bail!("{} of {} checks failed", report.failures.len(), report.checks);
            }
        }
        Command::Probe { experiment } => match experiment {
            Experiment::Crossings { series, modulus, turns, density } => {
                if turns.iter().any(|t| !(*t > 0.0)) || !(density > 0.0) {
                    return Err(usage("--turns and --density must be positive"));
                }
                let list = match series {
                    Some(path) => vec![(path.display().to_string(), read_series(&path)?, modulus)],
                    None => probe::builtin_series()?,
                };
                println!("{:<28} {:>12} {:>10}", "series", "arg max/pi", "crossings");
                for row in probe::crossings(&list, &turns, density)? {
                    println!("{:<28} {:>12} {:>10}", row.name, format_real(row.arg_max / PI, 6), row.crossings);
                }
            }
            Experiment::Phase { angle, t_min, t_max, points } => {
                let table = probe::phase(angle * PI, t_min, t_max, points).map_err(|e| usage(e.to_string()))?;
                println!(
                    "ray angle {} pi, sup |phi| = {}",
                    format_real(table.angle / PI, 6),
                    format_real(table.phi_bound, digits)
                );
                println!("{:>14} {:>18} {:>18}", "t", "A", "lower bound");
                for row in &table.rows {
                    println!(
                        "{:>14} {:>18} {:>18}",
                        format_real(row.t, 6),
                        format_real(row.phase, digits),
                        format_real(row.lower_bound, digits)
                    );
                }
                let bad = table.violations();
                if bad > 0 {
                    bail!("lower bound violated at {bad} points");
                }
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
