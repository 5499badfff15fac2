//! Command-line driver: simulations, peak and transfer-time extraction,
//! supremum sweeps, transfer optimization and oracle verification, each
//! emitting CSV or JSON plot data.

pub mod output;

use std::f64::consts::{FRAC_PI_4, PI};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use cavity_transfer::analysis::{
    complete_transfer_times, find_peaks, invariant_suite, optimize_transfer, sample_trajectory,
    sup_sweep, CheckOutcome, DEFAULT_TRANSFER_THRESHOLD,
};
use cavity_transfer::{Error as ModelError, ModelParams, PairId};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use output::{csv_json_parity, trajectory_table, Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Model(ModelError::InvalidArgument(_) | ModelError::InvalidParameter(_)) => {
                EXIT_USAGE
            }
            CliError::Model(ModelError::Internal(_)) => EXIT_INTERNAL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cavity-transfer",
    version,
    about = "Entanglement transfer between two atoms and two single-mode cavities",
    long_about = "Entanglement transfer between two atoms and two single-mode cavities.\n\n\
        Frequencies are in units of a reference coupling (usually max(ga, gb)) and times in its inverse. \
        --delta is the HALF detuning: 2*delta = omega_0 - omega_c."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample concurrences, norm and quartet sum on a uniform time grid
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// End of the time window
        #[arg(long, default_value_t = PI)]
        tmax: f64,
        /// Number of samples, endpoints included
        #[arg(long, default_value_t = 1001)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Local maxima of one pair's concurrence
    Peaks {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = PI)]
        tmax: f64,
        #[arg(long, default_value_t = 1001)]
        n: usize,
        /// Qubit pair: AB, ab, Aa, Ab, Ba or Bb
        #[arg(long, default_value = "ab")]
        pair: PairId,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Times at which a pair's concurrence peaks above a threshold
    TransferTimes {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "ab")]
        pair: PairId,
        #[arg(long, default_value_t = DEFAULT_TRANSFER_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = 2.0 * PI)]
        horizon: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Supremum of a pair's concurrence over a (theta, gb/ga) grid
    Sweep {
        /// Half detuning
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, default_value = "ab")]
        pair: PairId,
        #[command(flatten)]
        ranges: RangeArgs,
        #[arg(long, default_value_t = 41)]
        theta_steps: usize,
        #[arg(long, default_value_t = 41)]
        ratio_steps: usize,
        /// Time window per point [default: 12 pi / Omega]
        #[arg(long)]
        horizon: Option<f64>,
        /// Samples per point
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Maximize a pair's peak concurrence over theta and gb/ga at resonance
    Optimize {
        #[arg(long, default_value = "Aa")]
        pair: PairId,
        #[command(flatten)]
        ranges: RangeArgs,
        #[arg(long, default_value_t = 100.0)]
        horizon: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cross-check closed form against the oracle and run the invariant suite
    Verify {
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Initial atomic state angle: cos(theta)|eg> + sin(theta)|ge>
    #[arg(long, default_value_t = FRAC_PI_4)]
    theta: f64,
    /// HALF detuning delta, with 2*delta = omega_0 - omega_c
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
    /// Coupling of the atoms to cavity a
    #[arg(long, default_value_t = 1.0)]
    ga: f64,
    /// Coupling of the atoms to cavity b
    #[arg(long, default_value_t = 1.0)]
    gb: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(self.theta, self.delta, self.ga, self.gb)?)
    }
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = FRAC_PI_4)]
    theta_max: f64,
    /// Smallest gb/ga
    #[arg(long, default_value_t = 0.01)]
    ratio_min: f64,
    /// Largest gb/ga
    #[arg(long, default_value_t = 1.0)]
    ratio_max: f64,
}

impl RangeArgs {
    fn check(&self) -> Result<(), CliError> {
        if self.theta_min > self.theta_max {
            return Err(CliError::Usage(format!(
                "--theta-min {} exceeds --theta-max {}",
                self.theta_min, self.theta_max
            )));
        }
        if self.ratio_min > self.ratio_max {
            return Err(CliError::Usage(format!(
                "--ratio-min {} exceeds --ratio-max {}",
                self.ratio_min, self.ratio_max
            )));
        }
        Ok(())
    }

    fn echo(&self, table: Table) -> Table {
        table
            .param("theta_min", self.theta_min)
            .param("theta_max", self.theta_max)
            .param("ratio_min", self.ratio_min)
            .param("ratio_max", self.ratio_max)
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file [default: standard output]
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, table: &Table, stdout: &mut dyn Write) -> Result<(), CliError> {
        match &self.output {
            Some(path) => {
                let io_err = |source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                };
                let mut file = BufWriter::new(File::create(path).map_err(io_err)?);
                table.write(self.format, &mut file).map_err(io_err)?;
                file.flush().map_err(io_err)
            }
            None => table
                .write(self.format, stdout)
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                }),
        }
    }
}

fn model_echo(table: Table, p: &ModelParams) -> Table {
    table
        .param("theta", p.theta())
        .param("delta", p.delta())
        .param("g_a", p.g_a())
        .param("g_b", p.g_b())
}

fn log_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    lin_axis(lo.ln(), hi.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

fn lin_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || lo == hi {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// CSV/JSON agreement on the equal-coupling resonant trajectory.
fn parity_check() -> Result<CheckOutcome, CliError> {
    let traj = sample_trajectory(&ModelParams::default(), PI, 1001)?;
    let measured = csv_json_parity(&trajectory_table(&traj));
    let tolerance = 1e-14;
    Ok(CheckOutcome {
        name: "CSV/JSON parity".into(),
        measured,
        tolerance,
        passed: measured < tolerance,
    })
}

/// Runs one command; returns the table to write and whether verification
/// passed.
fn execute(command: &Command) -> Result<(Table, bool, &OutputArgs), CliError> {
    match command {
        Command::Simulate {
            model,
            tmax,
            n,
            out,
        } => {
            let traj = sample_trajectory(&model.params()?, *tmax, *n)?;
            Ok((trajectory_table(&traj), true, out))
        }
        Command::Peaks {
            model,
            tmax,
            n,
            pair,
            out,
        } => {
            let p = model.params()?;
            let traj = sample_trajectory(&p, *tmax, *n)?;
            let mut table = model_echo(Table::new("peaks", &["index", "t_peak", "value"]), &p)
                .param("t_max", *tmax)
                .param("n_points", *n)
                .param("pair", pair.as_str());
            for peak in find_peaks(&traj, *pair)? {
                table.push_row(vec![
                    peak.index.into(),
                    peak.t_peak.into(),
                    peak.value.into(),
                ]);
            }
            Ok((table, true, out))
        }
        Command::TransferTimes {
            model,
            pair,
            threshold,
            horizon,
            out,
        } => {
            let p = model.params()?;
            let mut table = model_echo(Table::new("transfer-times", &["k", "t"]), &p)
                .param("pair", pair.as_str())
                .param("threshold", *threshold)
                .param("horizon", *horizon);
            for (k, t) in complete_transfer_times(&p, *pair, *threshold, *horizon)?
                .into_iter()
                .enumerate()
            {
                table.push_row(vec![k.into(), t.into()]);
            }
            Ok((table, true, out))
        }
        Command::Sweep {
            delta,
            pair,
            ranges,
            theta_steps,
            ratio_steps,
            horizon,
            n,
            out,
        } => {
            ranges.check()?;
            if *theta_steps == 0 || *ratio_steps == 0 {
                return Err(CliError::Usage(
                    "--theta-steps and --ratio-steps must be positive".into(),
                ));
            }
            let thetas = lin_axis(ranges.theta_min, ranges.theta_max, *theta_steps);
            if ranges.ratio_min <= 0.0 {
                return Err(CliError::Usage("--ratio-min must be positive".into()));
            }
            let ratios = log_axis(ranges.ratio_min, ranges.ratio_max, *ratio_steps);
            let points = sup_sweep(*pair, *delta, &thetas, &ratios, *horizon, *n)?;
            let mut table = ranges
                .echo(Table::new("sweep", &["theta", "ratio", "sup"]))
                .param("delta", *delta)
                .param("pair", pair.as_str())
                .param("theta_steps", *theta_steps)
                .param("ratio_steps", *ratio_steps)
                .param(
                    "horizon",
                    horizon
                        .map(Cell::Float)
                        .unwrap_or_else(|| "12pi/Omega".into()),
                )
                .param("n_points", *n);
            for pt in points {
                table.push_row(vec![pt.theta.into(), pt.ratio.into(), pt.sup.into()]);
            }
            Ok((table, true, out))
        }
        Command::Optimize {
            pair,
            ranges,
            horizon,
            out,
        } => {
            ranges.check()?;
            let r = optimize_transfer(
                *pair,
                (ranges.theta_min, ranges.theta_max),
                (ranges.ratio_min, ranges.ratio_max),
                *horizon,
            )?;
            let mut table = ranges
                .echo(Table::new(
                    "optimize",
                    &[
                        "theta_best",
                        "ratio_best",
                        "t_best",
                        "value_best",
                        "evaluations",
                    ],
                ))
                .param("pair", pair.as_str())
                .param("delta", 0.0)
                .param("horizon", *horizon);
            table.push_row(vec![
                r.theta_best.into(),
                r.ratio_best.into(),
                r.t_best.into(),
                r.value_best.into(),
                r.evaluations.into(),
            ]);
            Ok((table, true, out))
        }
        Command::Verify { cases, seed, out } => {
            if *cases == 0 {
                return Err(CliError::Usage("--cases must be at least 1".into()));
            }
            let mut checks = invariant_suite(*cases, *seed)?;
            checks.push(parity_check()?);
            let passed = checks.iter().all(|c| c.passed);
            let mut table = Table::new("verify", &["check", "measured", "tolerance", "passed"])
                .param("cases", *cases)
                .param("seed", Cell::Int(*seed));
            for c in checks {
                table.push_row(vec![
                    c.name.as_str().into(),
                    c.measured.into(),
                    c.tolerance.into(),
                    c.passed.into(),
                ]);
            }
            Ok((table, passed, out))
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code: 0 on success, 2 for argument or output errors, 3 when
/// `verify` finds a tolerance violation.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return EXIT_USAGE;
        }
    };
    let result = execute(&cli.command).and_then(|(table, passed, out)| {
        out.emit(&table, stdout)?;
        Ok(passed)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(stderr, "error: verification failed");
            EXIT_VERIFY_FAILED
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
