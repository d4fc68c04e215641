//! `arsm`: spectra, critical points and gap fits from the command line.

mod commands;
mod config;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use arsm_core::exec::configure_threads;
use arsm_core::{Error, Execution};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Format, Sink};

#[derive(Debug, Parser)]
#[command(
    name = "arsm",
    version,
    about = "Spectra of the anisotropic Rabi-Stark model"
)]
pub struct Cli {
    /// JSON file of flag values; keys are flag names (`g1_min` or `g1-min`).
    /// Flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "JSON")]
    config: Option<PathBuf>,

    /// Output directory; without it tables are printed to standard output.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads for sweeps; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Energy tolerance of root searches (ED: convergence tolerance).
    #[arg(long, global = true, env = "ARSM_DEFAULT_TOL")]
    tol: Option<f64>,

    /// Also write SVG plots (requires --out).
    #[arg(long, global = true)]
    plot: bool,

    #[command(subcommand)]
    command: Command,
}

/// Δ, U and the couplings of a single model point.
#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("coupling").required(true).args(["g2", "r"]))]
pub struct ModelArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub g1: f64,
    #[arg(long)]
    pub g2: Option<f64>,
    /// Anisotropy g2/g1.
    #[arg(long)]
    pub r: Option<f64>,
    /// Stark coupling U.
    #[arg(long = "u", visible_alias = "stark-u", default_value_t = 0.0)]
    pub u: f64,
}

/// Δ, U and r with g1 free.
#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long = "u", visible_alias = "stark-u", default_value_t = 0.0)]
    pub u: f64,
    #[arg(long)]
    pub r: f64,
}

/// Unity-Stark point, U = ±1.
#[derive(Debug, Clone, Args)]
pub struct UnityArgs {
    /// +1 or -1.
    #[arg(long = "u", visible_alias = "stark-u")]
    pub u: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Lower,
    Upper,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// G-functions of both parities on an energy grid, with pole positions.
    #[command(allow_negative_numbers = true)]
    Gcurve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = -2.0)]
        e_min: f64,
        #[arg(long, default_value_t = 3.0)]
        e_max: f64,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        /// Half-height of the plotted G window.
        #[arg(long, default_value_t = 4.0)]
        ylim: f64,
    },
    /// Levels of both parities along g1, with pole lines, crossings and the
    /// lowest gap.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0.01)]
        g1_min: f64,
        #[arg(long, default_value_t = 1.5)]
        g1_max: f64,
        #[arg(long, default_value_t = 60)]
        g1_points: usize,
        #[arg(long, default_value_t = -3.0)]
        e_min: f64,
        #[arg(long, default_value_t = 2.0)]
        e_max: f64,
        /// Highest pole index searched for lifted (crossing) points.
        #[arg(long, default_value_t = 3)]
        m_max: usize,
    },
    /// Pole ladder of the G-functions.
    #[command(allow_negative_numbers = true)]
    Poles {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10)]
        m_max: usize,
    },
    /// First-order critical coupling from the closed form and from ED.
    #[command(allow_negative_numbers = true)]
    Critical {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 200)]
        ed_n: usize,
        #[arg(long, default_value_t = 0.05)]
        g1_min: f64,
        #[arg(long, default_value_t = 1.5)]
        g1_max: f64,
        #[arg(long, default_value_t = 60)]
        scan: usize,
    },
    /// Couplings where pole m hosts a doubly degenerate level.
    #[command(allow_negative_numbers = true)]
    Crossing {
        #[command(flatten)]
        family: FamilyArgs,
        /// Pole index; 0 is the first-order crossing.
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0.01)]
        g1_min: f64,
        #[arg(long, default_value_t = 2.0)]
        g1_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Exact diagonalisation in a truncated Fock space.
    #[command(allow_negative_numbers = true)]
    Ed {
        #[command(flatten)]
        model: ModelArgs,
        /// Photon cutoff; defaults to 200, or 600 at |U| = 1.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 20)]
        levels: usize,
    },
    /// Unity-Stark branches against alpha.
    #[command(allow_negative_numbers = true)]
    U1 {
        #[command(flatten)]
        unity: UnityArgs,
        /// Single coupling; otherwise a sweep over --alpha-min..--alpha-max.
        #[arg(long, conflicts_with_all = ["alpha_min", "alpha_max"])]
        alpha: Option<f64>,
        #[arg(long)]
        alpha_min: Option<f64>,
        #[arg(long)]
        alpha_max: Option<f64>,
        #[arg(long, default_value_t = 100)]
        alpha_points: usize,
        #[arg(long, value_enum, default_value_t = BranchArg::Both)]
        branch: BranchArg,
        #[arg(long, default_value_t = 5)]
        levels: usize,
    },
    /// Log-log fit of the lower-branch gap against the distance to alpha_c.
    #[command(allow_negative_numbers = true)]
    Gapfit {
        #[command(flatten)]
        unity: UnityArgs,
        /// Closest distance below alpha_c.
        #[arg(long, default_value_t = 1e-5)]
        dist_min: f64,
        /// Farthest distance below alpha_c.
        #[arg(long, default_value_t = 1e-2)]
        dist_max: f64,
        #[arg(long, default_value_t = 24)]
        samples: usize,
    },
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit 2.
    Config(String),
    /// The numerics produced no output: exit 3.
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

/// Short variant name, e.g. `NoRealSolution`.
pub fn kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split([' ', '{', '('])
        .next()
        .unwrap_or_default()
        .to_string()
}

pub fn describe(e: &Error) -> String {
    format!("[{}] {e}", kind(e))
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::Domain { .. } | Error::DegenerateCoupling => {
                Failure::Config(describe(&e))
            }
            _ => Failure::Numerical(describe(&e)),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(format!("output: {e}"))
    }
}

/// Settings shared by every subcommand.
pub struct Context {
    pub sink: Sink,
    pub exec: Execution,
    pub jobs: Option<usize>,
    pub tol: Option<f64>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::Config(format!(
                "--tol must be positive, got {tol}"
            )));
        }
    }
    let exec = match cli.jobs {
        Some(0) => return Err(Failure::Config("--jobs must be at least 1".into())),
        Some(1) => Execution::Sequential,
        Some(n) => {
            configure_threads(n);
            Execution::Parallel
        }
        None => Execution::Parallel,
    };
    if cli.plot && cli.out.is_none() {
        return Err(Failure::Config("--plot needs --out".into()));
    }
    let sink = Sink {
        out: cli.out,
        format: cli.format,
        plot: cli.plot,
    };
    sink.prepare()?;
    let ctx = Context {
        sink,
        exec,
        jobs: cli.jobs,
        tol: cli.tol,
    };
    match cli.command {
        Command::Gcurve {
            model,
            e_min,
            e_max,
            points,
            ylim,
        } => commands::gcurve(&ctx, &model, (e_min, e_max), points, ylim),
        Command::Spectrum {
            family,
            g1_min,
            g1_max,
            g1_points,
            e_min,
            e_max,
            m_max,
        } => commands::spectrum(
            &ctx,
            &family,
            (g1_min, g1_max),
            g1_points,
            (e_min, e_max),
            m_max,
        ),
        Command::Poles { model, m_max } => commands::poles(&ctx, &model, m_max),
        Command::Critical {
            family,
            ed_n,
            g1_min,
            g1_max,
            scan,
        } => commands::critical(&ctx, &family, ed_n, (g1_min, g1_max), scan),
        Command::Crossing {
            family,
            m,
            g1_min,
            g1_max,
            points,
        } => commands::crossing(&ctx, &family, m, (g1_min, g1_max), points),
        Command::Ed { model, n, levels } => commands::ed(&ctx, &model, n, levels),
        Command::U1 {
            unity,
            alpha,
            alpha_min,
            alpha_max,
            alpha_points,
            branch,
            levels,
        } => commands::u1(
            &ctx,
            &unity,
            alpha,
            (alpha_min, alpha_max),
            alpha_points,
            branch,
            levels,
        ),
        Command::Gapfit {
            unity,
            dist_min,
            dist_max,
            samples,
        } => commands::gapfit(&ctx, &unity, (dist_min, dist_max), samples),
    }
}

fn main() -> ExitCode {
    let args = match config::expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
