//! Command bodies. Each one computes its whole report before anything is
//! written, so a failing run leaves no output behind.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use radial_core::analytic;
use radial_core::compare::{
    bc_sensitivity_sweep, classify_levels, compare_spectra, sweep_to_csv, ClassifiedLevel, LevelSource,
    SpectrumReport, SweepRow, DEFAULT_TOL,
};
use radial_core::format::{csv_num, to_json};
use radial_core::frobenius::{h_action_residual, q_delta, DeltaTerm, SeriesSolution};
use radial_core::numerov::{find_level, RadialGrid, SolverOptions};
use radial_core::{Error, PotentialModel};

use crate::config::{ConfigError, Criterion, Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Core(Error),
    Io(String),
}

impl CliError {
    /// 2 for configuration problems, 3 for solver failures, 4 for domain errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(Error::InvalidInput(_)) => 2,
            CliError::Core(e) if e.is_solver_error() => 3,
            CliError::Core(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => f.write_str(e),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn solver_options(cfg: &RunConfig) -> SolverOptions {
    SolverOptions {
        step: cfg.step,
        ..SolverOptions::default()
    }
}

// Number of levels when none is requested: every bound Morse level, else five.
fn default_count(cfg: &RunConfig) -> usize {
    cfg.n_max.unwrap_or(match &cfg.model {
        PotentialModel::Morse(p) => p.bound_level_count(cfg.hbar),
        _ => 5,
    })
}

fn require_radial_s_wave(cfg: &RunConfig) -> CliResult<()> {
    if cfg.ell != 0 {
        return Err(Error::Unsupported(format!(
            "closed-form levels exist for ell = 0 only, got ell = {}",
            cfg.ell
        ))
        .into());
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: usize,
    #[serde(rename = "E")]
    pub energy: f64,
    pub u0: f64,
    pub du0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelsReport {
    pub model: PotentialModel,
    pub ell: u32,
    pub hbar: f64,
    pub criterion: String,
    pub levels: Vec<LevelRow>,
}

impl LevelsReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self) + "\n",
            Format::Csv => {
                let mut out = String::from("n,E,u0,du0,bc\n");
                for row in &self.levels {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        row.n,
                        csv_num(row.energy),
                        csv_num(row.u0),
                        csv_num(row.du0),
                        self.criterion
                    ));
                }
                out
            }
        }
    }
}

pub fn levels_report(cfg: &RunConfig, count: Option<usize>) -> CliResult<LevelsReport> {
    let count = count.unwrap_or_else(|| default_count(cfg));
    let opts = solver_options(cfg);
    let levels = (0..count)
        .map(|n| -> CliResult<LevelRow> {
            let (energy, u0, du0) = match cfg.criterion {
                Criterion::Analytic => {
                    require_radial_s_wave(cfg)?;
                    let p = analytic::eigenpair(&cfg.model, cfg.hbar, n)?;
                    (p.energy, p.u0, p.du0)
                }
                Criterion::Numerov(bc) => {
                    let r = find_level(&cfg.model, cfg.ell, cfg.hbar, bc, n, &opts)?;
                    (r.energy, r.u0, r.du0)
                }
            };
            Ok(LevelRow { n, energy, u0, du0 })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(LevelsReport {
        model: cfg.model.clone(),
        ell: cfg.ell,
        hbar: cfg.hbar,
        criterion: cfg.criterion.as_str().into(),
        levels,
    })
}

#[derive(Serialize)]
struct WaveSummary<'a> {
    n: usize,
    #[serde(rename = "E")]
    energy: f64,
    u0: f64,
    du0: f64,
    bc: &'a str,
    grid: RadialGrid,
}

/// Samples of `u_n` as `r,u` CSV, or the `{n, E, u0, du0, bc, grid}` summary.
pub fn wavefunction_output(cfg: &RunConfig, n: usize) -> CliResult<String> {
    let (energy, u0, du0, grid, samples) = match cfg.criterion {
        Criterion::Analytic => {
            require_radial_s_wave(cfg)?;
            let pair = analytic::eigenpair(&cfg.model, cfg.hbar, n)?;
            let (inner, outer) = cfg.model.turning_points(pair.energy)?;
            let width = outer - inner;
            let grid = RadialGrid::with_step(0.0, outer + 8.0 * width, cfg.step.unwrap_or(width / 1000.0))?;
            let samples = grid.points().into_iter().map(|r| pair.u(r)).collect::<Vec<_>>();
            (pair.energy, pair.u0, pair.du0, grid, samples)
        }
        Criterion::Numerov(bc) => {
            let r = find_level(&cfg.model, cfg.ell, cfg.hbar, bc, n, &solver_options(cfg))?;
            (r.energy, r.u0, r.du0, r.grid, r.samples)
        }
    };
    Ok(match cfg.format {
        Format::Json => {
            to_json(&WaveSummary {
                n,
                energy,
                u0,
                du0,
                bc: cfg.criterion.as_str(),
                grid,
            }) + "\n"
        }
        Format::Csv => {
            let mut out = String::from("r,u\n");
            for (i, u) in samples.iter().enumerate() {
                out.push_str(&format!("{},{}\n", csv_num(grid.r(i)), csv_num(*u)));
            }
            out
        }
    })
}

fn level_source(cfg: &RunConfig) -> CliResult<LevelSource> {
    match cfg.criterion {
        Criterion::Numerov(bc) => Ok(LevelSource::Numerov {
            model: cfg.model.clone(),
            bc,
            ell: cfg.ell,
        }),
        Criterion::Analytic => {
            require_radial_s_wave(cfg)?;
            match &cfg.model {
                PotentialModel::Morse(p) => Ok(LevelSource::AnalyticMorse(*p)),
                PotentialModel::Taylor { .. } => {
                    Err(Error::Unsupported("taylor potentials have no closed-form levels".into()).into())
                }
                harmonic => Ok(LevelSource::AnalyticHarmonic(harmonic.parabolic_fit()?)),
            }
        }
    }
}

/// Levels of `approx` against those of `reference`.
pub fn compare_report(approx: &RunConfig, reference: &RunConfig) -> CliResult<SpectrumReport> {
    let count = approx.n_max.or(reference.n_max).unwrap_or_else(|| default_count(reference));
    Ok(compare_spectra(&level_source(reference)?, &level_source(approx)?, count, approx.hbar)?)
}

pub fn render_spectrum(report: &SpectrumReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    }
}

pub fn classify(cfg: &RunConfig, count: Option<usize>) -> CliResult<Vec<ClassifiedLevel>> {
    require_radial_s_wave(cfg)?;
    let count = count.unwrap_or_else(|| default_count(cfg));
    Ok(classify_levels(&cfg.model, cfg.hbar, count, cfg.tol.unwrap_or(DEFAULT_TOL))?)
}

pub fn render_classes(levels: &[ClassifiedLevel], format: Format) -> String {
    match format {
        Format::Json => to_json(&levels) + "\n",
        Format::Csv => {
            let mut out = String::from("n,E,u0,max_abs,class\n");
            for c in levels {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.n,
                    csv_num(c.energy),
                    csv_num(c.u0),
                    csv_num(c.max_abs),
                    c.classification
                ));
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QDeltaReport {
    pub ell: u32,
    pub lambda: i32,
    pub coeffs: Vec<f64>,
    /// Terms of `Q_{λ,ℓ}(δ)`.
    pub terms: Vec<DeltaTerm>,
    pub rendered: String,
    /// Terms of `H Pf.Ψ − E Pf.Ψ = −(ħ²/2m) Q`.
    pub residual_terms: Vec<DeltaTerm>,
    pub hbar: f64,
    pub mass: f64,
    /// For `ℓ = 0`, the coefficient of `δ` once `Y_0^0` is substituted.
    pub delta_coefficient: Option<f64>,
    pub note: Option<String>,
}

pub fn qdelta_report(ell: u32, lambda: i32, coeffs: Vec<f64>, hbar: f64, mass: f64) -> CliResult<QDeltaReport> {
    for (name, v) in [("hbar", hbar), ("mass", mass)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")).into());
        }
    }
    let sol = SeriesSolution::from_coefficients(ell, lambda, 0.0, coeffs.clone())?;
    let q = q_delta(&sol);
    let residual = h_action_residual(&sol, hbar, mass);
    let delta_coefficient = q.delta_coefficient();
    let note = match delta_coefficient {
        Some(c) if !q.is_empty() => Some(format!(
            "equals -sqrt(4 pi) * u(0) * delta after Y00 = 1/sqrt(4 pi), i.e. {} * delta with u(0) = {}",
            c, coeffs[0]
        )),
        _ => None,
    };
    Ok(QDeltaReport {
        ell,
        lambda,
        coeffs,
        rendered: q.render("Q"),
        terms: q.terms,
        residual_terms: residual.terms,
        hbar,
        mass,
        delta_coefficient,
        note,
    })
}

impl QDeltaReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self) + "\n",
            Format::Csv => {
                let mut out = String::from("p,coeff,residual_coeff\n");
                for (t, r) in self.terms.iter().zip(&self.residual_terms) {
                    out.push_str(&format!("{},{},{}\n", t.p, csv_num(t.coeff), csv_num(r.coeff)));
                }
                out
            }
        }
    }
}

pub fn sweep(cfg: &RunConfig, n: usize, r_m_values: &[f64]) -> CliResult<Vec<SweepRow>> {
    let (mass, omega) = match &cfg.model {
        PotentialModel::ShiftedHarmonic(p) => (p.mass, p.omega),
        PotentialModel::CenteredHarmonic(p) => (p.mass, p.omega),
        other => {
            return Err(Error::Unsupported(format!(
                "bc-sweep varies r_m of a shifted harmonic well; got type {}",
                other.name()
            ))
            .into())
        }
    };
    Ok(bc_sensitivity_sweep(mass, omega, cfg.hbar, n, r_m_values)?)
}

pub fn render_sweep(rows: &[SweepRow], format: Format) -> String {
    match format {
        Format::Json => to_json(&rows) + "\n",
        Format::Csv => sweep_to_csv(rows),
    }
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}
