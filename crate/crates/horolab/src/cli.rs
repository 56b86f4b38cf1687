//! Argument parsing and dispatch. Exit codes: 0 on success, 1 when a check
//! fails, 2 on usage or configuration errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, CommandError};
use crate::config::{load, BoundaryFile, EquidistFile, HeightFile, KernelFile};
use crate::exec::PoolExecutor;
use crate::output::{write_outputs, Report, RunManifest};
use crate::ConfigError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "horolab",
    version,
    about = "Horosphere equidistribution experiments",
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML run file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for the CSV and JSON outputs.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Factor applied to every numerical tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the enveloping-algebra identities and the centrality of Ω₁, Ω₂.
    VerifyUea,
    /// Invariant height of points.
    Height {
        #[arg(long)]
        d: Option<u32>,
        /// `identity`, `iwasawa x y t`, `point x y r` or `matrix ar ai br bi cr ci dr di`.
        #[arg(long = "point")]
        points: Vec<String>,
        /// Add this many seeded random points.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Line integrals of the height along translated boundary curves.
    BoundaryIntegral,
    /// Kernel envelopes and the representation formula against the ODE.
    Kernels {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        nu_re: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        nu_im: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Error curve of horospherical averages against the Haar integral.
    Equidist,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::VerifyUea => "verify-uea",
            Self::Height { .. } => "height",
            Self::BoundaryIntegral => "boundary-integral",
            Self::Kernels { .. } => "kernels",
            Self::Equidist => "equidist",
        }
    }
}

fn require_config(config: &Option<PathBuf>, name: &str) -> Result<PathBuf, ConfigError> {
    config
        .clone()
        .ok_or_else(|| ConfigError::Invalid(format!("{name} needs --config <file>")))
}

fn optional<T: serde::de::DeserializeOwned + Default>(
    path: Option<&Path>,
) -> Result<T, ConfigError> {
    path.map(load).transpose().map(Option::unwrap_or_default)
}

fn execute(cli: &Cli) -> Result<Report, CommandError> {
    let common = &cli.common;
    if !(common.tolerance_scale > 0.0 && common.tolerance_scale.is_finite()) {
        return Err(ConfigError::Invalid("--tolerance-scale must be positive".into()).into());
    }
    let pool = || {
        PoolExecutor::new(common.jobs)
            .map_err(|e| CommandError::Config(ConfigError::Invalid(e.to_string())))
    };
    match &cli.command {
        Command::VerifyUea => Ok(commands::verify_uea()),
        Command::Height { d, points, random } => {
            let file: HeightFile = optional(common.config.as_deref())?;
            let mut all = file.points.clone();
            all.extend(points.iter().cloned());
            all.extend(commands::random_points(*random, common.seed));
            commands::height(d.or(file.d).unwrap_or(1), &all)
        }
        Command::BoundaryIntegral => {
            let file: BoundaryFile = load(&require_config(&common.config, "boundary-integral")?)?;
            commands::boundary_integral(&file, common.tolerance_scale, &pool()?)
        }
        Command::Kernels {
            n,
            nu_re,
            nu_im,
            grid,
        } => {
            let mut file = match common.config.as_deref() {
                Some(path) => load(path)?,
                None => KernelFile {
                    n: n.ok_or_else(|| {
                        ConfigError::Invalid("kernels needs --n or --config".into())
                    })?,
                    nu_re: None,
                    nu_im: None,
                    t_max: None,
                    t_span: None,
                    grid: None,
                    t_check: None,
                },
            };
            file.n = n.unwrap_or(file.n);
            file.nu_re = nu_re.or(file.nu_re);
            file.nu_im = nu_im.or(file.nu_im);
            file.grid = grid.or(file.grid);
            commands::kernels(&file, common.tolerance_scale)
        }
        Command::Equidist => {
            let file: EquidistFile = load(&require_config(&common.config, "equidist")?)?;
            let config = file.resolve(common.tolerance_scale)?;
            commands::equidist(&config, &pool()?)
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(CommandError::Config(e)) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
        Err(CommandError::Run(e)) => {
            eprintln!("FAIL: {e}");
            return EXIT_FAIL;
        }
    };
    for line in &report.lines {
        println!("{line}");
    }
    if let Some(dir) = &cli.common.out {
        let mut manifest = RunManifest::new(
            cli.command.name(),
            cli.common.config.as_deref(),
            cli.common.seed,
        );
        if let Err(e) = write_outputs(dir, &mut manifest, &report) {
            eprintln!("error: cannot write outputs to {}: {e}", dir.display());
            return EXIT_USAGE;
        }
    }
    if report.passed {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}
