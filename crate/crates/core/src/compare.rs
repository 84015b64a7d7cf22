//! Spectra of approximate potentials against a reference spectrum, the
//! `H` / `H_d` classification by the origin value, Hermite-zero tuning of the
//! linear force, and the Dirichlet-vs-full-line sensitivity sweep.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{Error, Result};
use crate::format::{csv_num, to_json};
use crate::numerov::{find_level, BoundaryCondition, SolverOptions};
use crate::potential::{Morse, PotentialModel, ShiftedHarmonic};
use crate::specfun::hermite_zeros;

/// Default threshold on `|u(0)| / max|u|` below which a level counts as an
/// eigenvalue of `H`.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    /// `u(0) = 0`: an eigenvalue of both `H` and `H_d`.
    #[serde(rename = "H-and-Hd")]
    HAndHd,
    /// `u(0) ≠ 0`: an eigenvalue of `H_d` only.
    #[serde(rename = "Hd-only")]
    HdOnly,
}

impl Classification {
    pub fn from_origin(u0: f64, max_abs: f64, tol: f64) -> Self {
        if u0.abs() < tol * max_abs {
            Classification::HAndHd
        } else {
            Classification::HdOnly
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::HAndHd => "H-and-Hd",
            Classification::HdOnly => "Hd-only",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a list of levels comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum LevelSource {
    AnalyticHarmonic(ShiftedHarmonic),
    AnalyticMorse(Morse),
    Numerov {
        model: PotentialModel,
        bc: BoundaryCondition,
        ell: u32,
    },
}

struct Level {
    energy: f64,
    u0: f64,
    max_abs: f64,
}

impl LevelSource {
    pub fn label(&self) -> String {
        match self {
            LevelSource::AnalyticHarmonic(_) => "analytic shifted_harmonic".into(),
            LevelSource::AnalyticMorse(_) => "analytic morse".into(),
            LevelSource::Numerov { model, bc, ell } => {
                format!("numerov {} bc={bc} ell={ell}", model.name())
            }
        }
    }

    /// Boundary condition that selects the discrete levels.
    pub fn criterion(&self) -> &'static str {
        match self {
            LevelSource::AnalyticHarmonic(_) | LevelSource::AnalyticMorse(_) => "analytic",
            LevelSource::Numerov { bc, .. } => bc.as_str(),
        }
    }

    // None once n exceeds the bound levels.
    fn level(&self, hbar: f64, n: usize) -> Result<Option<Level>> {
        let pair = match self {
            LevelSource::AnalyticHarmonic(p) => analytic::shifted_harmonic_eigenpair(p, hbar, n),
            LevelSource::AnalyticMorse(p) => analytic::morse_eigenpair(p, hbar, n),
            LevelSource::Numerov { model, bc, ell } => {
                find_level(model, *ell, hbar, *bc, n, &SolverOptions::default()).map(|r| r.to_eigen_pair())
            }
        };
        match pair {
            Ok(p) => Ok(Some(Level {
                energy: p.energy,
                u0: p.u0,
                max_abs: p.max_abs,
            })),
            Err(Error::NoBoundState { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: usize,
    #[serde(rename = "E_ref")]
    pub e_ref: f64,
    #[serde(rename = "E_approx")]
    pub e_approx: f64,
    pub abs_dev: f64,
    pub u0_approx: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub reference: String,
    pub approx: String,
    /// Discreteness criterion of the approximate levels.
    pub criterion: String,
    pub requested: usize,
    /// Set when either source ran out of bound levels before `requested`.
    pub truncated: bool,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,E_ref,E_approx,abs_dev,u0,class\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.n,
                csv_num(row.e_ref),
                csv_num(row.e_approx),
                csv_num(row.abs_dev),
                csv_num(row.u0_approx),
                row.classification
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Levels `0 .. count` of `approx` against `reference`.
pub fn compare_spectra(
    reference: &LevelSource,
    approx: &LevelSource,
    count: usize,
    hbar: f64,
) -> Result<SpectrumReport> {
    let mut rows = Vec::with_capacity(count);
    let mut truncated = false;
    for n in 0..count {
        let (Some(r), Some(a)) = (reference.level(hbar, n)?, approx.level(hbar, n)?) else {
            truncated = true;
            break;
        };
        rows.push(SpectrumRow {
            n,
            e_ref: r.energy,
            e_approx: a.energy,
            abs_dev: (r.energy - a.energy).abs(),
            u0_approx: a.u0,
            classification: Classification::from_origin(a.u0, a.max_abs, DEFAULT_TOL),
        });
    }
    Ok(SpectrumReport {
        reference: reference.label(),
        approx: approx.label(),
        criterion: approx.criterion().into(),
        requested: count,
        truncated,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedLevel {
    pub n: usize,
    #[serde(rename = "E")]
    pub energy: f64,
    pub u0: f64,
    pub max_abs: f64,
    pub classification: Classification,
}

/// Classifies the first `count` closed-form levels of `model` by `u_n(0)`.
pub fn classify_levels(model: &PotentialModel, hbar: f64, count: usize, tol: f64) -> Result<Vec<ClassifiedLevel>> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tolerance must be non-negative, got {tol}")));
    }
    (0..count)
        .map(|n| {
            let pair = analytic::eigenpair(model, hbar, n)?;
            Ok(ClassifiedLevel {
                n,
                energy: pair.energy,
                u0: pair.u0,
                max_abs: pair.max_abs,
                classification: Classification::from_origin(pair.u0, pair.max_abs, tol),
            })
        })
        .collect()
}

/// Linear force `C` that puts `β r_m` on a zero of `H_N`.
///
/// `zero_index` counts the non-negative zeros in ascending order, so for odd
/// `N` index 0 is the zero at the origin.
pub fn hermite_zero_tuning(mass: f64, omega: f64, hbar: f64, degree: usize, zero_index: usize) -> Result<f64> {
    for (name, v) in [("m", mass), ("omega", omega), ("hbar", hbar)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
        }
    }
    let zeros: Vec<f64> = hermite_zeros(degree).into_iter().filter(|z| *z >= 0.0).collect();
    let Some(zero) = zeros.get(zero_index) else {
        return Err(Error::Domain(format!(
            "H_{degree} has {} non-negative zeros; index {zero_index} is out of range",
            zeros.len()
        )));
    };
    let beta = (mass * omega / hbar).sqrt();
    Ok(mass * omega * omega * zero / beta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r_m: f64,
    pub beta_r_m: f64,
    pub e_dirichlet: Option<f64>,
    pub e_full_line: Option<f64>,
    /// `|E_Dirichlet − E_FullLine|`.
    pub gap: Option<f64>,
    /// Closed-form `|u_n(0)|`.
    pub u0_abs: Option<f64>,
    pub error: Option<String>,
}

/// Dirichlet and full-line level `n` of `ShiftedHarmonic(m, ω, r_m, 0)` for
/// each `r_m`. A failing row records its error and the sweep continues.
pub fn bc_sensitivity_sweep(mass: f64, omega: f64, hbar: f64, n: usize, r_m_values: &[f64]) -> Result<Vec<SweepRow>> {
    if r_m_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("r_m values must be strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(r_m_values.len());
    for &r_m in r_m_values {
        let p = ShiftedHarmonic { mass, omega, r_m, v_m: 0.0 };
        let model = PotentialModel::ShiftedHarmonic(p);
        let beta = p.beta(hbar);
        // one step for both conditions so their discretization errors cancel
        let opts = SolverOptions {
            step: Some(2.0 * (2.0 * n as f64 + 1.0).sqrt() / beta / 4000.0),
            ..SolverOptions::default()
        };
        let outcome = model.validate().and_then(|_| {
            let d = find_level(&model, 0, hbar, BoundaryCondition::DirichletOrigin, n, &opts)?;
            let f = find_level(&model, 0, hbar, BoundaryCondition::FullLine, n, &opts)?;
            let u0 = analytic::shifted_harmonic_eigenpair(&p, hbar, n)?.u0;
            Ok((d.energy, f.energy, u0))
        });
        rows.push(match outcome {
            Ok((d, f, u0)) => SweepRow {
                r_m,
                beta_r_m: beta * r_m,
                e_dirichlet: Some(d),
                e_full_line: Some(f),
                gap: Some((d - f).abs()),
                u0_abs: Some(u0.abs()),
                error: None,
            },
            Err(e) => SweepRow {
                r_m,
                beta_r_m: beta * r_m,
                e_dirichlet: None,
                e_full_line: None,
                gap: None,
                u0_abs: None,
                error: Some(e.to_string()),
            },
        });
    }
    Ok(rows)
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let opt = |v: Option<f64>| v.map(csv_num).unwrap_or_default();
    let mut out = String::from("r_m,beta_r_m,E_dirichlet,E_full_line,gap,u0_abs,error\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_num(row.r_m),
            csv_num(row.beta_r_m),
            opt(row.e_dirichlet),
            opt(row.e_full_line),
            opt(row.gap),
            opt(row.u0_abs),
            row.error.as_deref().unwrap_or("").replace([',', '\n'], ";")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{CenteredHarmonic, HarmonicPlusLinear3D};

    fn morse(a: f64, r_m: f64) -> Morse {
        Morse { mass: 1.0, v_m: 8.0, a, r_m }
    }

    fn parabola(p: &Morse) -> ShiftedHarmonic {
        PotentialModel::Morse(*p).parabolic_fit().unwrap()
    }

    #[test]
    fn morse_against_parabola() {
        let p = morse(1.0, 1.0);
        let rep = compare_spectra(
            &LevelSource::AnalyticMorse(p),
            &LevelSource::AnalyticHarmonic(parabola(&p)),
            2,
            1.0,
        )
        .unwrap();
        assert!((rep.rows[0].abs_dev - 0.125).abs() < 1e-12);
        assert!((rep.rows[1].abs_dev - 1.125).abs() < 1e-12);
        assert!(!rep.truncated);
    }

    #[test]
    fn identical_sources_agree() {
        let s = LevelSource::AnalyticMorse(morse(1.0, 1.0));
        let rep = compare_spectra(&s, &s, 4, 1.0).unwrap();
        assert!(rep.rows.iter().all(|r| r.abs_dev == 0.0));
    }

    #[test]
    fn truncates_at_last_bound_level() {
        let p = morse(1.0, 1.0);
        let rep = compare_spectra(
            &LevelSource::AnalyticMorse(p),
            &LevelSource::AnalyticHarmonic(parabola(&p)),
            10,
            1.0,
        )
        .unwrap();
        assert!(rep.truncated);
        assert_eq!(rep.rows.len(), 4);
        let csv = rep.to_csv();
        assert!(csv.starts_with("n,E_ref,E_approx,abs_dev,u0,class\n0,-6.125,-6,0.125,"));
    }

    #[test]
    fn numerov_source_reports_its_criterion() {
        let model = PotentialModel::CenteredHarmonic(CenteredHarmonic { mass: 1.0, omega: 1.0 });
        let src = LevelSource::Numerov { model, bc: BoundaryCondition::NeumannOrigin, ell: 0 };
        let rep = compare_spectra(&src, &src, 2, 1.0).unwrap();
        assert_eq!(rep.criterion, "neumann");
        assert_eq!(rep.rows[0].classification, Classification::HdOnly);
    }

    #[test]
    fn centered_levels_alternate() {
        let model = PotentialModel::CenteredHarmonic(CenteredHarmonic { mass: 1.0, omega: 1.0 });
        let classes: Vec<_> = classify_levels(&model, 1.0, 6, DEFAULT_TOL)
            .unwrap()
            .into_iter()
            .map(|c| c.classification)
            .collect();
        use Classification::*;
        assert_eq!(classes, vec![HdOnly, HAndHd, HdOnly, HAndHd, HdOnly, HAndHd]);
    }

    #[test]
    fn morse_levels_are_hd_only() {
        let model = PotentialModel::Morse(morse(1.0, 1.0));
        let levels = classify_levels(&model, 1.0, 4, DEFAULT_TOL).unwrap();
        assert!(levels.iter().all(|c| c.classification == Classification::HdOnly));
    }

    #[test]
    fn tuning_examples() {
        assert_eq!(hermite_zero_tuning(1.0, 1.0, 1.0, 1, 0).unwrap(), 0.0);
        assert!((hermite_zero_tuning(1.0, 1.0, 1.0, 2, 0).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((hermite_zero_tuning(1.0, 1.0, 1.0, 3, 1).unwrap() - 1.5f64.sqrt()).abs() < 1e-12);
        assert!(matches!(hermite_zero_tuning(1.0, 1.0, 1.0, 2, 1), Err(Error::Domain(_))));
        assert!(matches!(hermite_zero_tuning(1.0, 1.0, 1.0, 0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn tuned_level_becomes_h_eigenvalue() {
        let c = hermite_zero_tuning(1.0, 1.0, 1.0, 2, 0).unwrap();
        let model = PotentialModel::HarmonicPlusLinear3D(HarmonicPlusLinear3D { mass: 1.0, omega: 1.0, c });
        let levels = classify_levels(&model, 1.0, 3, DEFAULT_TOL).unwrap();
        assert_eq!(levels[2].classification, Classification::HAndHd);
        assert_eq!(levels[0].classification, Classification::HdOnly);
        assert_eq!(levels[1].classification, Classification::HdOnly);
    }

    #[test]
    fn sweep_gap_shrinks() {
        let rows = bc_sensitivity_sweep(1.0, 1.0, 1.0, 0, &[0.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((rows[0].gap.unwrap() - 1.0).abs() < 1e-8);
        for w in rows.windows(2) {
            assert!(w[1].gap.unwrap() < w[0].gap.unwrap());
        }
        assert!(sweep_to_csv(&rows).lines().count() == 5);
    }

    #[test]
    fn sweep_rejects_unsorted() {
        assert!(bc_sensitivity_sweep(1.0, 1.0, 1.0, 0, &[3.0, 2.0]).is_err());
    }

    #[test]
    fn sweep_keeps_going_after_a_bad_row() {
        let rows = bc_sensitivity_sweep(1.0, 1.0, 1.0, 0, &[-1.0, 3.0]).unwrap();
        assert!(rows[0].error.is_some());
        assert!(rows[1].gap.is_some());
    }
}
