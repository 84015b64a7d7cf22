//! Python bindings: potentials, closed-form and Numerov levels, the
//! origin-term algebra and the comparison helpers.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use radial_core::analytic;
use radial_core::compare::{self, LevelSource, DEFAULT_TOL};
use radial_core::frobenius::{self, SeriesSolution};
use radial_core::numerov::{self, BoundaryCondition, SolverOptions};
use radial_core::potential::{
    CenteredHarmonic, HarmonicPlusLinear3D, Morse, PotentialModel, ShiftedHarmonic, TaylorSeries,
};
use radial_core::{specfun, Error};

create_exception!(radial_spectra, DomainError, PyValueError);
create_exception!(radial_spectra, SolverError, PyRuntimeError);

fn to_py(err: Error) -> PyErr {
    match &err {
        Error::InvalidInput(_) => PyValueError::new_err(err.to_string()),
        e if e.is_solver_error() => SolverError::new_err(err.to_string()),
        _ => DomainError::new_err(err.to_string()),
    }
}

fn boundary(name: &str) -> PyResult<BoundaryCondition> {
    name.parse().map_err(to_py)
}

/// A radial potential `V(r)` with its mass.
#[pyclass(name = "Potential", module = "radial_spectra", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPotential {
    inner: PotentialModel,
}

fn checked(model: PotentialModel) -> PyResult<PyPotential> {
    model.validate().map_err(to_py)?;
    Ok(PyPotential { inner: model })
}

#[pymethods]
impl PyPotential {
    #[staticmethod]
    #[pyo3(signature = (m, omega, r_m, v_m = 0.0))]
    fn shifted_harmonic(m: f64, omega: f64, r_m: f64, v_m: f64) -> PyResult<Self> {
        checked(PotentialModel::ShiftedHarmonic(ShiftedHarmonic { mass: m, omega, r_m, v_m }))
    }

    #[staticmethod]
    fn morse(m: f64, v_m: f64, a: f64, r_m: f64) -> PyResult<Self> {
        checked(PotentialModel::Morse(Morse { mass: m, v_m, a, r_m }))
    }

    #[staticmethod]
    fn centered_harmonic(m: f64, omega: f64) -> PyResult<Self> {
        checked(PotentialModel::CenteredHarmonic(CenteredHarmonic { mass: m, omega }))
    }

    #[staticmethod]
    fn harmonic_plus_linear_3d(m: f64, omega: f64, c: f64) -> PyResult<Self> {
        checked(PotentialModel::HarmonicPlusLinear3D(HarmonicPlusLinear3D { mass: m, omega, c }))
    }

    #[staticmethod]
    fn taylor(m: f64, coeffs: Vec<f64>) -> PyResult<Self> {
        checked(PotentialModel::Taylor {
            mass: m,
            series: TaylorSeries::new(coeffs),
        })
    }

    /// Parses the JSON form produced by `to_json`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let model: PotentialModel = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        checked(model)
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.inner.mass()
    }

    fn __call__(&self, r: f64) -> f64 {
        self.inner.evaluate(r)
    }

    fn evaluate(&self, r: f64) -> f64 {
        self.inner.evaluate(r)
    }

    #[pyo3(signature = (ell, r, hbar = 1.0))]
    fn effective(&self, ell: u32, r: f64, hbar: f64) -> PyResult<f64> {
        self.inner.effective_potential(ell, hbar, r).map_err(to_py)
    }

    /// `(r_min, V_min)`.
    fn minimum(&self) -> PyResult<(f64, f64)> {
        self.inner.minimum().map_err(to_py)
    }

    fn parabolic_fit(&self) -> PyResult<Self> {
        let fit = self.inner.parabolic_fit().map_err(to_py)?;
        Ok(Self {
            inner: PotentialModel::ShiftedHarmonic(fit),
        })
    }

    fn turning_points(&self, energy: f64) -> PyResult<(f64, f64)> {
        self.inner.turning_points(energy).map_err(to_py)
    }

    fn to_json(&self) -> String {
        radial_core::format::to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Potential({})", self.to_json())
    }
}

/// A closed-form eigenpair, normalized on `r >= 0`.
#[pyclass(name = "EigenPair", module = "radial_spectra", frozen)]
struct PyEigenPair {
    inner: analytic::EigenPair,
}

#[pymethods]
impl PyEigenPair {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }

    #[getter]
    fn u0(&self) -> f64 {
        self.inner.u0
    }

    #[getter]
    fn du0(&self) -> f64 {
        self.inner.du0
    }

    #[getter]
    fn max_abs(&self) -> f64 {
        self.inner.max_abs
    }

    #[getter]
    fn norm_constant(&self) -> f64 {
        self.inner.norm_constant
    }

    fn u(&self, r: f64) -> f64 {
        self.inner.u(r)
    }

    fn du(&self, r: f64) -> f64 {
        self.inner.du(r)
    }

    /// `(u(0), u'(0), ħ²√π/m · u(0))`.
    fn origin_report(&self) -> (f64, f64, f64) {
        self.inner.origin_report()
    }
}

/// A Numerov level with its normalized samples.
#[pyclass(name = "ShootingResult", module = "radial_spectra", frozen)]
struct PyShootingResult {
    inner: numerov::ShootingResult,
}

#[pymethods]
impl PyShootingResult {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }

    #[getter]
    fn ell(&self) -> u32 {
        self.inner.ell
    }

    #[getter]
    fn bc(&self) -> &'static str {
        self.inner.bc.as_str()
    }

    #[getter]
    fn u0(&self) -> f64 {
        self.inner.u0
    }

    #[getter]
    fn du0(&self) -> f64 {
        self.inner.du0
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn r(&self) -> Vec<f64> {
        self.inner.grid.points()
    }

    #[getter]
    fn u(&self) -> Vec<f64> {
        self.inner.samples.clone()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __repr__(&self) -> String {
        format!(
            "ShootingResult(n={}, E={}, bc={}, points={})",
            self.inner.n, self.inner.energy, self.inner.bc, self.inner.grid.count
        )
    }
}

#[pyfunction]
fn hermite(n: usize, x: f64) -> f64 {
    specfun::hermite_eval(n, x)
}

#[pyfunction]
fn hermite_zeros(n: usize) -> Vec<f64> {
    specfun::hermite_zeros(n)
}

#[pyfunction]
fn laguerre(n: usize, b: f64, z: f64) -> f64 {
    specfun::laguerre_eval(n, b, z)
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<f64> {
    specfun::log_gamma(x).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (potential, n, hbar = 1.0))]
fn analytic_level(potential: &PyPotential, n: usize, hbar: f64) -> PyResult<f64> {
    analytic::level(&potential.inner, hbar, n).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (potential, n, hbar = 1.0))]
fn eigenpair(potential: &PyPotential, n: usize, hbar: f64) -> PyResult<PyEigenPair> {
    let inner = analytic::eigenpair(&potential.inner, hbar, n).map_err(to_py)?;
    Ok(PyEigenPair { inner })
}

/// Level `n` by Numerov shooting under `bc` (dirichlet, neumann, full_line).
#[pyfunction]
#[pyo3(signature = (potential, n, bc = "dirichlet", ell = 0, hbar = 1.0, step = None))]
fn find_level(
    py: Python<'_>,
    potential: &PyPotential,
    n: usize,
    bc: &str,
    ell: u32,
    hbar: f64,
    step: Option<f64>,
) -> PyResult<PyShootingResult> {
    let bc = boundary(bc)?;
    let opts = SolverOptions {
        step,
        ..SolverOptions::default()
    };
    let model = potential.inner.clone();
    let inner = py
        .detach(move || numerov::find_level(&model, ell, hbar, bc, n, &opts))
        .map_err(to_py)?;
    Ok(PyShootingResult { inner })
}

#[pyfunction]
fn wronskian_limit(a: &PyShootingResult, b: &PyShootingResult) -> PyResult<f64> {
    numerov::wronskian_limit(&a.inner, &b.inner).map_err(to_py)
}

fn series(ell: u32, lam: i32, coeffs: Vec<f64>) -> PyResult<SeriesSolution> {
    SeriesSolution::from_coefficients(ell, lam, 0.0, coeffs).map_err(to_py)
}

/// `[(p, coeff), ...]` of `Q_{λ,ℓ}(δ)`, each term `coeff · r^ℓ Y_ℓ^μ Δ^p δ`.
#[pyfunction]
fn q_delta(ell: u32, lam: i32, coeffs: Vec<f64>) -> PyResult<Vec<(u32, f64)>> {
    let q = frobenius::q_delta(&series(ell, lam, coeffs)?);
    Ok(q.terms.iter().map(|t| (t.p, t.coeff)).collect())
}

/// Terms of `H Pf.Ψ − E Pf.Ψ = −(ħ²/2m) Q`.
#[pyfunction]
#[pyo3(signature = (ell, lam, coeffs, hbar = 1.0, mass = 1.0))]
fn h_action_residual(ell: u32, lam: i32, coeffs: Vec<f64>, hbar: f64, mass: f64) -> PyResult<Vec<(u32, f64)>> {
    let q = frobenius::h_action_residual(&series(ell, lam, coeffs)?, hbar, mass);
    Ok(q.terms.iter().map(|t| (t.p, t.coeff)).collect())
}

#[pyfunction]
fn render_q_delta(ell: u32, lam: i32, coeffs: Vec<f64>) -> PyResult<String> {
    Ok(frobenius::q_delta(&series(ell, lam, coeffs)?).render("Q"))
}

/// Power-series coefficients of the radial solution at the origin.
#[pyfunction]
#[pyo3(signature = (potential, ell, lam, energy, a0 = 1.0, order = frobenius::DEFAULT_ORDER, hbar = 1.0))]
fn series_coefficients(
    potential: &PyPotential,
    ell: u32,
    lam: i32,
    energy: f64,
    a0: f64,
    order: usize,
    hbar: f64,
) -> PyResult<Vec<f64>> {
    let taylor = potential.inner.taylor_at_origin(order);
    let sol = frobenius::series_coefficients(&taylor, potential.inner.mass(), hbar, ell, lam, energy, a0, order)
        .map_err(to_py)?;
    Ok(sol.coeffs)
}

/// `"H-and-Hd"` or `"Hd-only"` for each of the first `count` closed-form levels.
#[pyfunction]
#[pyo3(signature = (potential, count, hbar = 1.0, tol = DEFAULT_TOL))]
fn classify_levels(potential: &PyPotential, count: usize, hbar: f64, tol: f64) -> PyResult<Vec<&'static str>> {
    let levels = compare::classify_levels(&potential.inner, hbar, count, tol).map_err(to_py)?;
    Ok(levels.iter().map(|c| c.classification.as_str()).collect())
}

#[pyfunction]
#[pyo3(signature = (m, omega, degree, zero_index = 0, hbar = 1.0))]
fn hermite_zero_tuning(m: f64, omega: f64, degree: usize, zero_index: usize, hbar: f64) -> PyResult<f64> {
    compare::hermite_zero_tuning(m, omega, hbar, degree, zero_index).map_err(to_py)
}

fn level_source(potential: &PyPotential, bc: &str) -> PyResult<LevelSource> {
    if bc != "analytic" {
        return Ok(LevelSource::Numerov {
            model: potential.inner.clone(),
            bc: boundary(bc)?,
            ell: 0,
        });
    }
    match &potential.inner {
        PotentialModel::Morse(p) => Ok(LevelSource::AnalyticMorse(*p)),
        PotentialModel::Taylor { .. } => Err(DomainError::new_err("taylor potentials have no closed-form levels")),
        other => Ok(LevelSource::AnalyticHarmonic(other.parabolic_fit().map_err(to_py)?)),
    }
}

/// Rows `{n, E_ref, E_approx, abs_dev, u0_approx, classification}`.
#[pyfunction]
#[pyo3(signature = (reference, approx, count, hbar = 1.0, reference_bc = "analytic", approx_bc = "analytic"))]
fn compare_spectra<'py>(
    py: Python<'py>,
    reference: &PyPotential,
    approx: &PyPotential,
    count: usize,
    hbar: f64,
    reference_bc: &str,
    approx_bc: &str,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let report = compare::compare_spectra(
        &level_source(reference, reference_bc)?,
        &level_source(approx, approx_bc)?,
        count,
        hbar,
    )
    .map_err(to_py)?;
    report
        .rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("n", row.n)?;
            d.set_item("E_ref", row.e_ref)?;
            d.set_item("E_approx", row.e_approx)?;
            d.set_item("abs_dev", row.abs_dev)?;
            d.set_item("u0_approx", row.u0_approx)?;
            d.set_item("classification", row.classification.as_str())?;
            Ok(d)
        })
        .collect()
}

/// Rows `{r_m, beta_r_m, E_dirichlet, E_full_line, gap, u0_abs, error}`.
#[pyfunction]
#[pyo3(signature = (m, omega, n, r_m_values, hbar = 1.0))]
fn bc_sensitivity_sweep<'py>(
    py: Python<'py>,
    m: f64,
    omega: f64,
    n: usize,
    r_m_values: Vec<f64>,
    hbar: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = py
        .detach(move || compare::bc_sensitivity_sweep(m, omega, hbar, n, &r_m_values))
        .map_err(to_py)?;
    rows.iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("r_m", row.r_m)?;
            d.set_item("beta_r_m", row.beta_r_m)?;
            d.set_item("E_dirichlet", row.e_dirichlet)?;
            d.set_item("E_full_line", row.e_full_line)?;
            d.set_item("gap", row.gap)?;
            d.set_item("u0_abs", row.u0_abs)?;
            d.set_item("error", row.error.clone())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn radial_spectra(m: &Bound<'_, PyModule>) -> PyResult<()> {
    init(m)
}

/// Registers the classes, functions and exceptions on `m`.
pub fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add("SolverError", m.py().get_type::<SolverError>())?;
    m.add_class::<PyPotential>()?;
    m.add_class::<PyEigenPair>()?;
    m.add_class::<PyShootingResult>()?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_level, m)?)?;
    m.add_function(wrap_pyfunction!(eigenpair, m)?)?;
    m.add_function(wrap_pyfunction!(find_level, m)?)?;
    m.add_function(wrap_pyfunction!(wronskian_limit, m)?)?;
    m.add_function(wrap_pyfunction!(q_delta, m)?)?;
    m.add_function(wrap_pyfunction!(h_action_residual, m)?)?;
    m.add_function(wrap_pyfunction!(render_q_delta, m)?)?;
    m.add_function(wrap_pyfunction!(series_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(classify_levels, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_zero_tuning, m)?)?;
    m.add_function(wrap_pyfunction!(compare_spectra, m)?)?;
    m.add_function(wrap_pyfunction!(bc_sensitivity_sweep, m)?)?;
    Ok(())
}
