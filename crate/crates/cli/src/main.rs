//! `schroeder` command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 certification
//! failed at the requested tolerance.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand as ClapSubcommand};
use schroeder::config::{
    default_viewport, parse_complex, parse_method, parse_pixels, parse_viewport, ConfigError, RunConfig, Sidecar,
    Subcommand,
};
use schroeder::julia::schroeder_julia_set;
use schroeder::validation::{boundary_report, convergence_report, seeds_near_roots, BoundarySettings, ValidationError};
use schroeder::{classify_grid, render_ppm};

/// Relative output paths are resolved against this directory when set.
const OUT_DIR_ENV: &str = "SCHROEDER_OUT_DIR";

#[derive(Parser)]
#[command(name = "schroeder", version, about = "Schröder / Newton basins on (z-a)^m (z-b)^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Classify a viewport into basins and write a PPM image plus JSON sidecar.
    Render(Flags),
    /// Locate the basin boundary by bisection and compare with the analytic Julia set.
    Certify(Flags),
    /// Estimate the convergence order from seeds around each root.
    Converge(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// JSON run configuration (a render sidecar works too); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// newton | schroeder | chebyshev | halley | chebyshev-halley:<alpha>
    #[arg(long)]
    method: Option<String>,
    /// Multiplicity of root a.
    #[arg(long)]
    m: Option<u32>,
    /// Multiplicity of root b (0 for a single root).
    #[arg(long)]
    n: Option<u32>,
    /// Root a as "re[,im]".
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Root b as "re[,im]".
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// "center_re,center_im,width,height".
    #[arg(long, allow_hyphen_values = true)]
    viewport: Option<String>,
    /// Image size, "N" or "WxH".
    #[arg(long)]
    px: Option<String>,
    #[arg(long)]
    conv_tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<u32>,
    #[arg(long)]
    escape_radius: Option<f64>,
    /// Draw the analytic Schröder Julia set in white.
    #[arg(long)]
    overlay: bool,
    /// Output file (image for render, JSON report otherwise; stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the boundary probes as CSV (certify).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Number of rays (certify).
    #[arg(long)]
    rays: Option<usize>,
    #[arg(long)]
    bisect_tol: Option<f64>,
    /// Maximum allowed deviation from the analytic locus (certify).
    #[arg(long)]
    tol: Option<f64>,
    /// Number of seeds (converge).
    #[arg(long)]
    samples: Option<usize>,
    /// Seeds are drawn within this distance of the roots (converge).
    #[arg(long)]
    radius: Option<f64>,
    /// RNG seed for randomized sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker thread cap; never changes the output.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug)]
enum Failure {
    Usage(&'static str),
    Config(String),
    Io(String),
    Certification(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (sub, flags) = match cli.command {
        Command::Render(f) => (Subcommand::Render, f),
        Command::Certify(f) => (Subcommand::Certify, f),
        Command::Converge(f) => (Subcommand::Converge, f),
    };
    match run(sub, &flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(name)) => {
            let mut cmd = Cli::command();
            let help = cmd
                .find_subcommand_mut(name)
                .map(|c| c.render_help().to_string())
                .unwrap_or_default();
            eprintln!("error: --m, --n, --a (and --b when n >= 1) or --config are required\n\n{help}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) | Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Certification(msg)) => {
            eprintln!("certification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn subcommand_name(sub: Subcommand) -> &'static str {
    match sub {
        Subcommand::Render => "render",
        Subcommand::Certify => "certify",
        Subcommand::Converge => "converge",
    }
}

/// Config file (or defaults) with explicit flags applied on top.
fn build_config(sub: Subcommand, f: &Flags) -> Result<RunConfig, Failure> {
    let from_file = f.config.is_some();
    let mut cfg = match &f.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => {
            let needs_b = f.n.is_some_and(|n| n >= 1);
            if f.m.is_none() || f.n.is_none() || f.a.is_none() || (needs_b && f.b.is_none()) {
                return Err(Failure::Usage(subcommand_name(sub)));
            }
            RunConfig::default()
        }
    };
    cfg.subcommand = sub;
    if let Some(s) = &f.method {
        cfg.method = parse_method(s)?;
    }
    if let Some(m) = f.m {
        cfg.m = m;
    }
    if let Some(n) = f.n {
        cfg.n = n;
    }
    if let Some(s) = &f.a {
        cfg.a = parse_complex(s)?;
    }
    if let Some(s) = &f.b {
        cfg.b = parse_complex(s)?;
    } else if !from_file && cfg.n == 0 {
        // unused; keep it distinct from a
        cfg.b = cfg.a + 1.0;
    }
    let (px_w, px_h) = match &f.px {
        Some(s) => parse_pixels(s)?,
        None if from_file => (cfg.viewport.px_w, cfg.viewport.px_h),
        None => (512, 512),
    };
    cfg.viewport = match &f.viewport {
        Some(s) => parse_viewport(s, px_w, px_h)?,
        None if from_file => schroeder::Viewport {
            px_w,
            px_h,
            ..cfg.viewport
        },
        None => default_viewport(&cfg.poly()?, px_w, px_h),
    };
    if let Some(v) = f.conv_tol {
        cfg.orbit.conv_tol = v;
    }
    if let Some(v) = f.max_iter {
        cfg.orbit.max_iter = v;
    }
    if let Some(v) = f.escape_radius {
        cfg.orbit.escape_radius = v;
    }
    cfg.overlay |= f.overlay;
    if f.out.is_some() {
        cfg.out = f.out.clone();
    }
    if f.csv.is_some() {
        cfg.csv = f.csv.clone();
    }
    if let Some(v) = f.rays {
        cfg.n_rays = v;
    }
    if let Some(v) = f.bisect_tol {
        cfg.bisect_tol = v;
    }
    if let Some(v) = f.tol {
        cfg.tolerance = v;
    }
    if let Some(v) = f.samples {
        cfg.samples = v;
    }
    if let Some(v) = f.radius {
        cfg.seed_radius = v;
    }
    if let Some(v) = f.seed {
        cfg.seed = v;
    }
    Ok(cfg)
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let path = resolve(path);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Failure::Io(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(&path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(sub: Subcommand, flags: &Flags) -> Result<(), Failure> {
    let cfg = build_config(sub, flags)?;
    let poly = cfg.validate()?;
    let threads = flags.threads;
    if threads == Some(0) {
        return Err(Failure::Config("--threads must be at least 1".into()));
    }
    match sub {
        Subcommand::Render => {
            let grid = classify_grid(&poly, cfg.method, &cfg.viewport, &cfg.orbit, threads)
                .map_err(|e| Failure::Config(e.to_string()))?;
            let overlay = if cfg.overlay { schroeder_julia_set(&poly) } else { None };
            let image = render_ppm(&grid, &cfg.palette, overlay.as_ref());
            let out = cfg
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{}_m{}_n{}.ppm", cfg.method.name(), cfg.m, cfg.n)));
            write(&out, &image)?;
            write(&out.with_extension("json"), Sidecar::new(&cfg).to_json().as_bytes())?;
        }
        Subcommand::Certify => {
            let ordered = if poly.m() >= poly.n() { poly } else { poly.swapped() };
            let locus = schroeder_julia_set(&ordered).expect("validated: two distinct roots");
            let settings = BoundarySettings {
                orbit: cfg.orbit,
                bisect_tol: cfg.bisect_tol,
                n_rays: cfg.n_rays,
            };
            let report = match boundary_report(&ordered, cfg.method, &locus, &settings, threads) {
                Ok(r) => r,
                Err(e @ ValidationError::TooManyFailures { .. }) => return Err(Failure::Certification(e.to_string())),
                Err(e) => return Err(Failure::Config(e.to_string())),
            };
            emit(cfg.out.as_deref(), &report.to_json())?;
            if let Some(csv) = &cfg.csv {
                write(csv, report.probes_csv().as_bytes())?;
            }
            let max_dev = report.max_dev.unwrap_or(f64::INFINITY);
            if max_dev > cfg.tolerance {
                return Err(Failure::Certification(format!(
                    "max deviation {max_dev:e} exceeds tolerance {:e}",
                    cfg.tolerance
                )));
            }
        }
        Subcommand::Converge => {
            let seeds = seeds_near_roots(&poly, cfg.samples, cfg.seed_radius, cfg.seed);
            let report = convergence_report(&poly, cfg.method, &seeds, &cfg.orbit, threads)
                .map_err(|e| Failure::Config(e.to_string()))?;
            emit(cfg.out.as_deref(), &report.to_json())?;
        }
    }
    Ok(())
}
