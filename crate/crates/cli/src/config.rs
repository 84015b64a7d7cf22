//! Flat `key = value` run configuration.
//!
//! ```text
//! # Morse well, closed-form levels
//! type = morse
//! m = 1
//! V_m = 8
//! a = 1
//! r_m = 1
//! bc = analytic
//! format = csv
//! ```
//!
//! Blank lines and text after `#` are ignored. Keys may appear once. Command
//! line flags shadow file values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use radial_core::potential::{
    CenteredHarmonic, HarmonicPlusLinear3D, Morse, PotentialModel, ShiftedHarmonic, TaylorSeries,
};
use radial_core::BoundaryCondition;

const MODEL_KEYS: &[&str] = &["type", "m", "omega", "r_m", "V_m", "a", "C", "taylor"];
const RUN_KEYS: &[&str] = &["ell", "hbar", "bc", "n", "n_max", "output", "format", "h", "tol"];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn new(line: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// How discrete levels are selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Analytic,
    Numerov(BoundaryCondition),
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::Analytic => "analytic",
            Criterion::Numerov(bc) => bc.as_str(),
        }
    }
}

/// Key/value pairs with the line each came from (`None` for flags).
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Option<usize>)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(ConfigError::new(Some(lineno), format!("expected `key = value`, got {body:?}")));
            };
            let key = key.trim();
            let value = value.trim();
            if !MODEL_KEYS.contains(&key) && !RUN_KEYS.contains(&key) {
                return Err(ConfigError::new(Some(lineno), format!("unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(ConfigError::new(Some(lineno), format!("`{key}` has no value")));
            }
            if let Some((_, Some(first))) = raw.entries.get(key) {
                return Err(ConfigError::new(
                    Some(lineno),
                    format!("`{key}` is already set on line {first}"),
                ));
            }
            raw.entries.insert(key.to_string(), (value.to_string(), Some(lineno)));
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(None, format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| ConfigError {
            line: e.line,
            message: format!("{}: {}", path.display(), e.message),
        })
    }

    /// Shadows a file value with a flag value.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), (value.into(), None));
    }

    fn get(&self, key: &str) -> Option<(&str, Option<usize>)> {
        self.entries.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    fn parse_as<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse()
                .map(Some)
                .map_err(|_| ConfigError::new(line, format!("field `{key}`: expected {what}, got {v:?}"))),
        }
    }

    fn real(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.parse_as(key, "a number")?;
        if let Some(x) = v {
            if !x.is_finite() {
                return Err(ConfigError::new(self.get(key).and_then(|e| e.1), format!("field `{key}` must be finite")));
            }
        }
        Ok(v)
    }

    fn required_real(&self, key: &str, model: &str) -> Result<f64, ConfigError> {
        self.real(key)?
            .ok_or_else(|| ConfigError::new(None, format!("missing field `{key}` for type {model}")))
    }

    /// The potential described by the model keys.
    pub fn model(&self) -> Result<PotentialModel, ConfigError> {
        let Some((kind, type_line)) = self.get("type") else {
            return Err(ConfigError::new(None, "missing field `type`"));
        };
        let allowed: &[&str] = match kind {
            "shifted_harmonic" => &["m", "omega", "r_m", "V_m"],
            "morse" => &["m", "V_m", "a", "r_m"],
            "centered_harmonic" => &["m", "omega"],
            "harmonic_plus_linear_3d" => &["m", "omega", "C"],
            "taylor" => &["m", "taylor"],
            other => {
                return Err(ConfigError::new(
                    type_line,
                    format!(
                        "unknown potential type {other:?} (expected shifted_harmonic, morse, centered_harmonic, harmonic_plus_linear_3d or taylor)"
                    ),
                ))
            }
        };
        for key in MODEL_KEYS.iter().filter(|k| **k != "type") {
            if let Some((_, line)) = self.get(key) {
                if !allowed.contains(key) {
                    return Err(ConfigError::new(line, format!("field `{key}` does not apply to type {kind}")));
                }
            }
        }
        let mass = self.required_real("m", kind)?;
        let model = match kind {
            "shifted_harmonic" => PotentialModel::ShiftedHarmonic(ShiftedHarmonic {
                mass,
                omega: self.required_real("omega", kind)?,
                r_m: self.required_real("r_m", kind)?,
                v_m: self.real("V_m")?.unwrap_or(0.0),
            }),
            "morse" => PotentialModel::Morse(Morse {
                mass,
                v_m: self.required_real("V_m", kind)?,
                a: self.required_real("a", kind)?,
                r_m: self.required_real("r_m", kind)?,
            }),
            "centered_harmonic" => PotentialModel::CenteredHarmonic(CenteredHarmonic {
                mass,
                omega: self.required_real("omega", kind)?,
            }),
            "harmonic_plus_linear_3d" => PotentialModel::HarmonicPlusLinear3D(HarmonicPlusLinear3D {
                mass,
                omega: self.required_real("omega", kind)?,
                c: self.required_real("C", kind)?,
            }),
            _ => {
                let Some((list, line)) = self.get("taylor") else {
                    return Err(ConfigError::new(None, "missing field `taylor` for type taylor"));
                };
                let coeffs = parse_list(list)
                    .map_err(|bad| ConfigError::new(line, format!("field `taylor`: not a number: {bad:?}")))?;
                PotentialModel::Taylor {
                    mass,
                    series: TaylorSeries::new(coeffs),
                }
            }
        };
        model
            .validate()
            .map_err(|e| ConfigError::new(None, format!("type {kind}: {e}")))?;
        Ok(model)
    }
}

/// Comma-separated reals; the offending item on failure.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| t.to_string()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: PotentialModel,
    pub ell: u32,
    pub hbar: f64,
    pub criterion: Criterion,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub step: Option<f64>,
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let model = raw.model()?;
        let ell: u32 = raw.parse_as("ell", "a non-negative integer")?.unwrap_or(0);
        let hbar = raw.real("hbar")?.unwrap_or(1.0);
        if hbar <= 0.0 {
            return Err(ConfigError::new(raw.get("hbar").and_then(|e| e.1), "field `hbar` must be positive"));
        }
        let criterion = match raw.get("bc") {
            None => match model {
                PotentialModel::Taylor { .. } => Criterion::Numerov(BoundaryCondition::DirichletOrigin),
                _ if ell > 0 => Criterion::Numerov(BoundaryCondition::DirichletOrigin),
                _ => Criterion::Analytic,
            },
            Some(("analytic", _)) => Criterion::Analytic,
            Some((v, line)) => Criterion::Numerov(v.parse().map_err(|_| {
                ConfigError::new(
                    line,
                    format!("field `bc`: expected analytic, dirichlet, neumann or full_line, got {v:?}"),
                )
            })?),
        };
        let format = match raw.get("format") {
            None => Format::Csv,
            Some((v, line)) => Format::parse(v)
                .ok_or_else(|| ConfigError::new(line, format!("field `format`: expected csv or json, got {v:?}")))?,
        };
        let step = raw.real("h")?;
        if let Some(h) = step {
            if h <= 0.0 {
                return Err(ConfigError::new(raw.get("h").and_then(|e| e.1), "field `h` must be positive"));
            }
        }
        let tol = raw.real("tol")?;
        if let Some(t) = tol {
            if t < 0.0 {
                return Err(ConfigError::new(raw.get("tol").and_then(|e| e.1), "field `tol` must be non-negative"));
            }
        }
        Ok(Self {
            model,
            ell,
            hbar,
            criterion,
            n: raw.parse_as("n", "a non-negative integer")?,
            n_max: raw.parse_as("n_max", "a non-negative integer")?,
            output: raw.get("output").map(|(v, _)| PathBuf::from(v)),
            format,
            step,
            tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_morse_with_comments() {
        let raw = RawConfig::parse("# well\ntype = morse\nm = 1\nV_m = 8  # depth\na = 1\nr_m = 1\n\nbc = analytic\n").unwrap();
        let cfg = RunConfig::from_raw(&raw).unwrap();
        assert_eq!(cfg.model, PotentialModel::Morse(Morse { mass: 1.0, v_m: 8.0, a: 1.0, r_m: 1.0 }));
        assert_eq!(cfg.criterion, Criterion::Analytic);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.hbar, 1.0);
    }

    #[test]
    fn reports_line_of_bad_value() {
        let err = RawConfig::parse("type = morse\nm = one\n")
            .and_then(|r| RunConfig::from_raw(&r))
            .unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("`m`"));
    }

    #[test]
    fn rejects_duplicates_and_unknown_keys() {
        assert_eq!(RawConfig::parse("m = 1\nm = 2\n").unwrap_err().line, Some(2));
        assert_eq!(RawConfig::parse("mass = 1\n").unwrap_err().line, Some(1));
        assert_eq!(RawConfig::parse("just words\n").unwrap_err().line, Some(1));
    }

    #[test]
    fn rejects_keys_of_other_models() {
        let raw = RawConfig::parse("type = centered_harmonic\nm = 1\nomega = 1\na = 2\n").unwrap();
        assert_eq!(raw.model().unwrap_err().line, Some(4));
    }

    #[test]
    fn model_invariants_checked_up_front() {
        let raw = RawConfig::parse("type = morse\nm = 1\nV_m = -8\na = 1\nr_m = 1\n").unwrap();
        assert!(RunConfig::from_raw(&raw).is_err());
        let raw = RawConfig::parse("type = shifted_harmonic\nm = 1\nomega = 1\n").unwrap();
        assert!(RunConfig::from_raw(&raw).unwrap_err().message.contains("r_m"));
    }

    #[test]
    fn flags_shadow_file_values() {
        let mut raw = RawConfig::parse("type = centered_harmonic\nm = 1\nomega = 1\nbc = neumann\n").unwrap();
        raw.set("bc", "full_line");
        raw.set("hbar", "2");
        let cfg = RunConfig::from_raw(&raw).unwrap();
        assert_eq!(cfg.criterion, Criterion::Numerov(BoundaryCondition::FullLine));
        assert_eq!(cfg.hbar, 2.0);
    }

    #[test]
    fn taylor_coefficients() {
        let raw = RawConfig::parse("type = taylor\nm = 1\ntaylor = 0, 0, 0.5\n").unwrap();
        let cfg = RunConfig::from_raw(&raw).unwrap();
        assert_eq!(cfg.criterion, Criterion::Numerov(BoundaryCondition::DirichletOrigin));
        let raw = RawConfig::parse("type = taylor\nm = 1\ntaylor = 0, x\n").unwrap();
        assert_eq!(raw.model().unwrap_err().line, Some(3));
    }
}
