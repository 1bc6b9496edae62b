use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cvtele::protocol::Protocol;
use cvtele::runner::output::{report_values, write_table, REPORT_COLUMNS};
use cvtele::runner::{
    coefficient_table, fmt_f64, run_metadata, run_sweep, run_validation, write_coeffs_csv, write_plot_data,
    write_sweep_csv, Preset, RunConfig, ValidateOptions,
};
use cvtele::trajectory::Trajectory;
use cvtele::Error;

#[derive(Debug, Parser)]
#[command(name = "cvtele", version, about = "Teleportation fidelity with a moving cavity")]
struct Cli {
    /// Parameter preset: fig3 or experiment.
    #[arg(long, global = true, default_value = "fig3")]
    preset: String,
    /// `key = value` configuration file applied on top of the preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Number of cavity modes kept.
    #[arg(long, global = true)]
    nmax: Option<usize>,
    /// Worker threads for sweeps (0: all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fidelity report for one trajectory.
    Fidelity {
        /// Trajectory file (`inertial <s>` / `accel <m/s^2> <s>` lines); omitted means no motion.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        /// Also write the report as a CSV row.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fidelities over a grid of proper times and accelerations.
    Sweep {
        /// CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// gnuplot data file of F_opt over the grid.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Switch-on coefficients and their first-order parts.
    Coeffs {
        /// Dimensionless acceleration aL/c^2.
        #[arg(long)]
        h: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in consistency checks.
    Validate {
        /// Test hook: corrupt one column of beta before the oracle checks.
        #[arg(long, hide = true)]
        inject_beta_flip: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Numeric(String),
    Io(String),
    Validation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Io(_) => 4,
            Failure::Validation(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Numeric(m) | Failure::Io(m) | Failure::Validation(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Parse(e.to_string()),
            Error::Io(_) => Failure::Io(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::Io(m) => Failure::Io(format!("{}: {m}", path.display())),
        other => other.into(),
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let preset: Preset = cli.preset.parse().map_err(|e: Error| Failure::Parse(e.to_string()))?;
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::parse(&read_text(path)?, preset)
            .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
        None => RunConfig::from_preset(preset),
    };
    if let Some(n) = cli.nmax {
        cfg = cfg.with_n_max(n);
    }
    Ok(cfg)
}

fn cmd_fidelity(cfg: &RunConfig, trajectory: Option<&Path>, out: Option<&Path>) -> Result<(), Failure> {
    let protocol = Protocol::new(cfg.params)?;
    let geometry = cfg.params.geometry;
    let traj = match trajectory {
        Some(path) => Trajectory::parse(&read_text(path)?, geometry)
            .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
        None => Trajectory::at_rest(geometry),
    };
    let report = protocol.consistency_report(&traj)?;
    let rest = cfg.params.rest_fidelity();
    let mut stdout = io::stdout().lock();
    let lines = [
        ("preset", cfg.preset.to_string()),
        ("h", fmt_f64(report.h)),
        ("phi", fmt_f64(report.phi)),
        ("F_raw", fmt_f64(report.f_raw)),
        ("F_corrected", fmt_f64(report.f_corrected)),
        ("F_opt_numeric", fmt_f64(report.f_opt_numeric)),
        ("F_pert", fmt_f64(report.f_pert)),
        ("F_pert_opt", fmt_f64(report.f_pert_opt)),
        ("nu", fmt_f64(report.nu)),
        ("residual_pert", fmt_f64(report.residual_pert)),
        ("f_alpha", fmt_f64(report.f_sums.f_alpha)),
        ("f_beta", fmt_f64(report.f_sums.f_beta)),
        ("opt_relative_deficit", fmt_f64((rest - report.f_opt_numeric) / rest)),
        ("truncation_defect", fmt_f64(report.truncation_defect)),
    ];
    for (k, v) in lines {
        writeln!(stdout, "{k:<22}{v}").map_err(|e| Failure::Io(e.to_string()))?;
    }
    if let Some(path) = out {
        let mut md = run_metadata(&protocol, cfg.preset.name());
        md.push("truncation_defect", fmt_f64(report.truncation_defect));
        let mut header = vec!["h"];
        header.extend(REPORT_COLUMNS);
        let row: Vec<String> = std::iter::once(report.h)
            .chain(report_values(&report))
            .map(fmt_f64)
            .collect();
        write_table(create(path)?, &md, &header, &[row]).map_err(with_path(path))?;
    }
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig, jobs: usize, out: Option<&Path>, plot: Option<&Path>) -> Result<(), Failure> {
    let protocol = Protocol::new(cfg.params)?;
    let grid = cfg.sweep_grid().map_err(|e| Failure::Parse(e.to_string()))?;
    // open outputs first so an unwritable path fails before the computation
    let out_file = out.map(create).transpose()?;
    let plot_file = plot.map(create).transpose()?;
    let result = run_sweep(&protocol, &grid, jobs)?;
    let default_grid = cfg.uses_default_grid();
    match (out_file, out) {
        (Some(f), Some(path)) => {
            write_sweep_csv(f, &protocol, cfg.preset.name(), default_grid, &result).map_err(with_path(path))?
        }
        _ => write_sweep_csv(io::stdout().lock(), &protocol, cfg.preset.name(), default_grid, &result)?,
    }
    if let (Some(f), Some(path)) = (plot_file, plot) {
        write_plot_data(f, &result).map_err(with_path(path))?;
    }
    let (deficit, row) = result.max_relative_deficit(cfg.params.rest_fidelity());
    log::info!(
        "max relative F_opt deficit {:.4}% at tau = {:e} s, a = {:e} m/s^2",
        100.0 * deficit,
        row.tau_s,
        row.a_m_s2
    );
    Ok(())
}

fn cmd_coeffs(cfg: &RunConfig, h: f64, out: Option<&Path>) -> Result<(), Failure> {
    let table = coefficient_table(h, &cfg.params.geometry, &Default::default())?;
    match out {
        Some(path) => write_coeffs_csv(create(path)?, &table).map_err(with_path(path))?,
        None => write_coeffs_csv(io::stdout().lock(), &table)?,
    }
    if !table.all_match() {
        log::warn!(
            "closed-form mismatch: worst relative deviation {:.3e}",
            table.first_order.ansatz_mismatch
        );
    }
    Ok(())
}

fn cmd_validate(cfg: &RunConfig, inject_beta_flip: bool) -> Result<(), Failure> {
    let summary = run_validation(&ValidateOptions {
        n_max: cfg.params.geometry.n_max,
        flip_beta: inject_beta_flip,
    });
    let mut stdout = io::stdout().lock();
    for c in &summary.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        writeln!(stdout, "{status}  {:<34}{}", c.name, c.detail).map_err(|e| Failure::Io(e.to_string()))?;
    }
    match summary.first_failure() {
        None => Ok(()),
        Some(c) => Err(Failure::Validation(format!("validation failed: {} ({})", c.name, c.detail))),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Fidelity { trajectory, out } => cmd_fidelity(&cfg, trajectory.as_deref(), out.as_deref()),
        Command::Sweep { out, plot_data } => cmd_sweep(&cfg, cli.jobs, out.as_deref(), plot_data.as_deref()),
        Command::Coeffs { h, out } => cmd_coeffs(&cfg, *h, out.as_deref()),
        Command::Validate { inject_beta_flip } => cmd_validate(&cfg, *inject_beta_flip),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("cvtele: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
