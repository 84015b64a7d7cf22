use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use radial_cli::commands::{self, CliResult};
use radial_cli::config::{parse_list, ConfigError, Format, RawConfig, RunConfig};

/// Bound-state spectra of central potentials under Dirichlet and free
/// origin conditions.
#[derive(Parser)]
#[command(name = "radial", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags that shadow config file values.
#[derive(Args, Clone, Default)]
struct Overrides {
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// analytic, dirichlet, neumann or full_line.
    #[arg(long)]
    bc: Option<String>,
    #[arg(long)]
    ell: Option<String>,
    #[arg(long)]
    hbar: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Energies and origin values of the first levels.
    Levels {
        #[arg(long)]
        config: PathBuf,
        /// Number of levels.
        #[arg(long)]
        n_max: Option<usize>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Samples of one radial eigenfunction.
    Wavefunction {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        grid_step: Option<String>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Levels of the config against those of a reference config.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Marks each closed-form level as an eigenvalue of H and H_d or of H_d only.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        tol: Option<String>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Point-supported terms of a Frobenius series at the origin.
    Qdelta {
        #[arg(long)]
        ell: u32,
        #[arg(long, allow_hyphen_values = true)]
        lambda: i32,
        /// a0,a1,...
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Dirichlet against full-line levels as the well moves away from the origin.
    BcSweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated ascending r_m values.
        #[arg(long)]
        rm_list: String,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn load(path: &Path, overrides: &Overrides, extra: &[(&str, Option<&String>)]) -> CliResult<RunConfig> {
    let mut raw = RawConfig::load(path)?;
    let flags = [
        ("format", overrides.format.as_ref()),
        ("bc", overrides.bc.as_ref()),
        ("ell", overrides.ell.as_ref()),
        ("hbar", overrides.hbar.as_ref()),
    ];
    for (key, value) in flags.iter().chain(extra) {
        if let Some(v) = value {
            raw.set(key, v.as_str());
        }
    }
    if let Some(out) = &overrides.output {
        raw.set("output", out.to_string_lossy());
    }
    Ok(RunConfig::from_raw(&raw)?)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Levels { config, n_max, overrides } => {
            let cfg = load(&config, &overrides, &[])?;
            let report = commands::levels_report(&cfg, n_max.or(cfg.n_max))?;
            commands::emit(cfg.output.as_deref(), &report.render(cfg.format))
        }
        Command::Wavefunction { config, n, grid_step, overrides } => {
            let cfg = load(&config, &overrides, &[("h", grid_step.as_ref())])?;
            let n = n
                .or(cfg.n)
                .ok_or_else(|| ConfigError { line: None, message: "missing level index: pass --n or set `n`".into() })?;
            let text = commands::wavefunction_output(&cfg, n)?;
            commands::emit(cfg.output.as_deref(), &text)
        }
        Command::Compare { config, reference, overrides } => {
            let cfg = load(&config, &overrides, &[])?;
            let reference = RunConfig::from_raw(&RawConfig::load(&reference)?)?;
            let report = commands::compare_report(&cfg, &reference)?;
            commands::emit(cfg.output.as_deref(), &commands::render_spectrum(&report, cfg.format))
        }
        Command::Classify { config, n_max, tol, overrides } => {
            let cfg = load(&config, &overrides, &[("tol", tol.as_ref())])?;
            let levels = commands::classify(&cfg, n_max.or(cfg.n_max))?;
            commands::emit(cfg.output.as_deref(), &commands::render_classes(&levels, cfg.format))
        }
        Command::Qdelta { ell, lambda, coeffs, hbar, mass, output, format } => {
            let format = Format::parse(&format).ok_or_else(|| ConfigError {
                line: None,
                message: format!("--format: expected csv or json, got {format:?}"),
            })?;
            let coeffs = parse_list(&coeffs)
                .map_err(|bad| ConfigError { line: None, message: format!("--coeffs: not a number: {bad:?}") })?;
            let report = commands::qdelta_report(ell, lambda, coeffs, hbar, mass)?;
            commands::emit(output.as_deref(), &report.render(format))
        }
        Command::BcSweep { config, rm_list, n, overrides } => {
            let cfg = load(&config, &overrides, &[])?;
            let values = parse_list(&rm_list)
                .map_err(|bad| ConfigError { line: None, message: format!("--rm-list: not a number: {bad:?}") })?;
            let n = n.or(cfg.n).unwrap_or(0);
            let rows = commands::sweep(&cfg, n, &values)?;
            commands::emit(cfg.output.as_deref(), &commands::render_sweep(&rows, cfg.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("radial: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

