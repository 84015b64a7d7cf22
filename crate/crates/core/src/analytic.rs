//! Closed-form levels and radial eigenfunctions of the shifted-harmonic and
//! Morse potentials for `ℓ = 0`.
//!
//! Eigenfunctions are normalized on the physical half-line `[0, ∞)`. The
//! closed-form full-line constant is kept alongside for comparison; the two
//! differ by terms of order `exp(−β²r_m²)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Morse, PotentialModel, ShiftedHarmonic};
use crate::specfun::{hermite_with_derivative, laguerre_eval, log_gamma, simpson_uniform};

/// A radial function `u(r)` that can be sampled anywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Wavefunction {
    Harmonic {
        model: ShiftedHarmonic,
        n: usize,
        beta: f64,
        norm: f64,
    },
    Morse {
        model: Morse,
        n: usize,
        d: f64,
        b: f64,
        norm: f64,
    },
    /// Uniform samples starting at `r_start` with step `h`; zero outside.
    Sampled {
        r_start: f64,
        h: f64,
        values: Vec<f64>,
    },
}

impl Wavefunction {
    pub fn value(&self, r: f64) -> f64 {
        match self {
            Wavefunction::Harmonic { model, n, beta, norm } => {
                let xi = beta * (r - model.r_m);
                norm * (-0.5 * xi * xi).exp() * hermite_with_derivative(*n, xi).0
            }
            Wavefunction::Morse { model, n, d, b, norm } => {
                let z = 2.0 * d * (-model.a * (r - model.r_m)).exp();
                norm * morse_envelope(z, *b) * laguerre_eval(*n, *b, z)
            }
            Wavefunction::Sampled { r_start, h, values } => {
                lagrange5(*r_start, *h, values, r).map_or(0.0, |(v, _)| v)
            }
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match self {
            Wavefunction::Harmonic { model, n, beta, norm } => {
                let xi = beta * (r - model.r_m);
                let (h, dh) = hermite_with_derivative(*n, xi);
                norm * beta * (-0.5 * xi * xi).exp() * (dh - xi * h)
            }
            Wavefunction::Morse { model, n, d, b, norm } => {
                let z = 2.0 * d * (-model.a * (r - model.r_m)).exp();
                let lag = laguerre_eval(*n, *b, z);
                // d/dz L_n^b = -L_{n-1}^{b+1}
                let dlag = if *n == 0 { 0.0 } else { -laguerre_eval(n - 1, b + 1.0, z) };
                let du_dz = norm * morse_envelope(z, *b) * ((0.5 * b / z - 0.5) * lag + dlag);
                du_dz * (-model.a * z)
            }
            Wavefunction::Sampled { r_start, h, values } => {
                lagrange5(*r_start, *h, values, r).map_or(0.0, |(_, d)| d)
            }
        }
    }
}

// z^{b/2} e^{-z/2}, formed in log space
fn morse_envelope(z: f64, b: f64) -> f64 {
    (0.5 * b * z.ln() - 0.5 * z).exp()
}

// Five-point Lagrange interpolation of value and slope; None outside the samples.
pub(crate) fn lagrange5(r_start: f64, h: f64, values: &[f64], r: f64) -> Option<(f64, f64)> {
    let n = values.len();
    if n < 5 {
        return None;
    }
    let t = (r - r_start) / h;
    if t < -1e-9 || t > (n - 1) as f64 + 1e-9 {
        return None;
    }
    let centre = (t.round() as isize).clamp(2, n as isize - 3) as usize;
    let s = t - centre as f64;
    let nodes = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let mut value = 0.0;
    let mut slope = 0.0;
    for (i, xi) in nodes.iter().enumerate() {
        let mut basis = 1.0;
        let mut dbasis = 0.0;
        let mut denom = 1.0;
        for (j, xj) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            denom *= xi - xj;
            dbasis = dbasis * (s - xj) + basis;
            basis *= s - xj;
        }
        let y = values[centre + i - 2];
        value += y * basis / denom;
        slope += y * dbasis / denom;
    }
    Some((value, slope / h))
}

/// One bound level with its normalized radial function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub n: usize,
    pub energy: f64,
    pub u0: f64,
    pub du0: f64,
    /// Normalization constant on `[0, ∞)`.
    pub norm_constant: f64,
    /// Closed-form normalization constant on the full line, when one exists.
    pub full_line_norm_constant: Option<f64>,
    /// `max |u|` over the normalization grid.
    pub max_abs: f64,
    pub mass: f64,
    pub hbar: f64,
    pub wave: Wavefunction,
}

impl EigenPair {
    pub fn u(&self, r: f64) -> f64 {
        self.wave.value(r)
    }

    pub fn du(&self, r: f64) -> f64 {
        self.wave.derivative(r)
    }

    /// `(u(0), u'(0), ħ²√π/m · u(0))`; the last entry is the coefficient of
    /// `δ` left over when `H` acts on the `ℓ = 0` function `u/(√(4π) r)`.
    pub fn origin_report(&self) -> (f64, f64, f64) {
        origin_report(self)
    }
}

/// See [`EigenPair::origin_report`].
pub fn origin_report(pair: &EigenPair) -> (f64, f64, f64) {
    let strength = pair.hbar * pair.hbar * std::f64::consts::PI.sqrt() / pair.mass * pair.u0;
    (pair.u0, pair.du0, strength)
}

/// `(n + ½)ħω − V_m`.
pub fn shifted_harmonic_level(model: &ShiftedHarmonic, hbar: f64, n: usize) -> f64 {
    (n as f64 + 0.5) * hbar * model.omega - model.v_m
}

/// Shifted-harmonic eigenpair normalized on `[0, ∞)`.
pub fn shifted_harmonic_eigenpair(model: &ShiftedHarmonic, hbar: f64, n: usize) -> Result<EigenPair> {
    let beta = model.beta(hbar);
    let raw = Wavefunction::Harmonic { model: *model, n, beta, norm: 1.0 };
    let energy = shifted_harmonic_level(model, hbar, n);
    let width = 2.0 * (2.0 * n as f64 + 1.0).sqrt() / beta;
    let outer = model.r_m + 0.5 * width;
    let (integral, max_raw) = half_line_norm(|r| raw.value(r), outer + 8.0 * width, width)?;
    let norm = 1.0 / integral.sqrt();

    let ln_fact = log_gamma(n as f64 + 1.0)?;
    let ln_full = 0.5 * (beta.ln() - 0.5 * std::f64::consts::PI.ln() - n as f64 * 2f64.ln() - ln_fact);

    let wave = Wavefunction::Harmonic { model: *model, n, beta, norm };
    Ok(EigenPair {
        n,
        energy,
        u0: wave.value(0.0),
        du0: wave.derivative(0.0),
        norm_constant: norm,
        full_line_norm_constant: Some(ln_full.exp()),
        max_abs: max_raw * norm,
        mass: model.mass,
        hbar,
        wave,
    })
}

fn morse_check(model: &Morse, hbar: f64, n: usize) -> Result<(f64, f64)> {
    let d = model.depth_parameter(hbar);
    let b = 2.0 * d - 1.0 - 2.0 * n as f64;
    if !(b > 0.0) {
        let count = model.bound_level_count(hbar);
        return Err(Error::NoBoundState {
            n,
            max_n: count.checked_sub(1),
        });
    }
    Ok((d, b))
}

/// `(n + ½)ħω − (n + ½)²ħ²ω²/(4V_m) − V_m` with `ω = a√(2V_m/m)`.
pub fn morse_level(model: &Morse, hbar: f64, n: usize) -> Result<f64> {
    morse_check(model, hbar, n)?;
    let x = n as f64 + 0.5;
    let hw = hbar * model.omega();
    Ok(x * hw - x * x * hw * hw / (4.0 * model.v_m) - model.v_m)
}

/// Morse eigenpair `N e^{−z/2} z^{b/2} L_n^{(b)}(z)`, normalized on `[0, ∞)`.
pub fn morse_eigenpair(model: &Morse, hbar: f64, n: usize) -> Result<EigenPair> {
    let (d, b) = morse_check(model, hbar, n)?;
    let energy = morse_level(model, hbar, n)?;
    let raw = Wavefunction::Morse { model: *model, n, d, b, norm: 1.0 };

    let pm = PotentialModel::Morse(*model);
    let (inner, outer) = pm.turning_points(energy)?;
    let width = outer - inner;
    let (integral, max_raw) = half_line_norm(|r| raw.value(r), outer + 8.0 * width, width)?;
    let norm = 1.0 / integral.sqrt();

    // ∫ u² dr over the whole line = Γ(n+b+1)/(a b n!)
    let ln_full = 0.5
        * (model.a.ln() + b.ln() + log_gamma(n as f64 + 1.0)? - log_gamma(n as f64 + b + 1.0)?);

    let wave = Wavefunction::Morse { model: *model, n, d, b, norm };
    Ok(EigenPair {
        n,
        energy,
        u0: wave.value(0.0),
        du0: wave.derivative(0.0),
        norm_constant: norm,
        full_line_norm_constant: Some(ln_full.exp()),
        max_abs: max_raw * norm,
        mass: model.mass,
        hbar,
        wave,
    })
}

/// Closed-form eigenpair for any analytic model (all but Taylor series).
pub fn eigenpair(model: &PotentialModel, hbar: f64, n: usize) -> Result<EigenPair> {
    match model {
        PotentialModel::ShiftedHarmonic(p) => shifted_harmonic_eigenpair(p, hbar, n),
        PotentialModel::CenteredHarmonic(p) => shifted_harmonic_eigenpair(&p.as_shifted(), hbar, n),
        PotentialModel::HarmonicPlusLinear3D(p) => shifted_harmonic_eigenpair(&p.as_shifted(), hbar, n),
        PotentialModel::Morse(p) => morse_eigenpair(p, hbar, n),
        PotentialModel::Taylor { .. } => Err(Error::Unsupported(
            "no closed-form eigenfunctions for a taylor-series potential".into(),
        )),
    }
}

/// Closed-form level for any analytic model.
pub fn level(model: &PotentialModel, hbar: f64, n: usize) -> Result<f64> {
    match model {
        PotentialModel::ShiftedHarmonic(p) => Ok(shifted_harmonic_level(p, hbar, n)),
        PotentialModel::CenteredHarmonic(p) => Ok(shifted_harmonic_level(&p.as_shifted(), hbar, n)),
        PotentialModel::HarmonicPlusLinear3D(p) => Ok(shifted_harmonic_level(&p.as_shifted(), hbar, n)),
        PotentialModel::Morse(p) => morse_level(p, hbar, n),
        PotentialModel::Taylor { .. } => Err(Error::Unsupported(
            "no closed-form levels for a taylor-series potential".into(),
        )),
    }
}

// ∫_0^{r_end} f² dr by Simpson with interval doubling until it settles,
// together with max |f| on the final grid.
fn half_line_norm(f: impl Fn(f64) -> f64, r_end: f64, width: f64) -> Result<(f64, f64)> {
    let mut intervals = ((r_end / width) * 50.0).ceil().max(64.0) as usize;
    intervals += intervals % 2;
    let mut previous: Option<f64> = None;
    loop {
        let h = r_end / intervals as f64;
        let samples: Vec<f64> = (0..=intervals).map(|i| f(i as f64 * h)).collect();
        let squares: Vec<f64> = samples.iter().map(|v| v * v).collect();
        let integral = simpson_uniform(h, &squares)?;
        let max_abs = samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if let Some(prev) = previous {
            if (integral - prev).abs() <= 1e-14 * integral || intervals >= 1 << 22 {
                return Ok((integral, max_abs));
            }
        }
        if !(integral > 0.0) || !integral.is_finite() {
            return Err(Error::Convergence(format!("normalization integral is {integral}")));
        }
        previous = Some(integral);
        intervals *= 2;
    }
}
