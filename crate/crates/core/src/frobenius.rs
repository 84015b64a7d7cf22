//! Power-series solutions of the radial equation at the origin and the
//! point-supported correction that distinguishes `H` from `H_d`.
//!
//! A radial solution `u(r) = r^λ Σ a_k r^k` with `λ ∈ {ℓ+1, −ℓ}` gives a
//! pseudofunction `Ψ = (u/r) Y_ℓ^μ`. Acting with the distributional
//! Hamiltonian leaves, besides `E Ψ`, the residual `−(ħ²/2m) Q_{λ,ℓ}(δ)`,
//!
//! ```text
//! Q_{λ,ℓ}(δ) = Σ_{k=0}^{−λ} a_k χ_p B_{ℓ,p} C_p  r^ℓ Y_ℓ^μ Δ^p δ,   p = −(k + λ − ℓ)/2
//! B_{ℓ,p}   = (1 − 2ℓ)/(4p + 1)
//! C_p       = −(4p + 1) π^{3/2} / (2^{2p−1} p! Γ(p + 3/2))
//! ```
//!
//! where `χ_p` keeps only non-negative integer `p`. The angular and
//! distributional factors stay symbolic in [`DeltaExpansion`].

use serde::{Deserialize, Serialize};

use crate::analytic::{EigenPair, Wavefunction};
use crate::error::{Error, Result};
use crate::potential::{PotentialModel, TaylorSeries};

/// Default series truncation order.
pub const DEFAULT_ORDER: usize = 24;

/// `Y_0^0 = 1/√(4π)`.
pub fn y00() -> f64 {
    1.0 / (4.0 * std::f64::consts::PI).sqrt()
}

/// `(ℓ + 1, −ℓ)`.
pub fn indicial_roots(ell: u32) -> (i32, i32) {
    (ell as i32 + 1, -(ell as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSolution {
    pub ell: u32,
    pub lambda: i32,
    pub energy: f64,
    /// `a_0 .. a_K`.
    pub coeffs: Vec<f64>,
}

impl SeriesSolution {
    /// A solution from explicitly given coefficients.
    pub fn from_coefficients(ell: u32, lambda: i32, energy: f64, coeffs: Vec<f64>) -> Result<Self> {
        check_root(ell, lambda)?;
        match coeffs.first() {
            Some(a0) if *a0 != 0.0 && a0.is_finite() => {}
            _ => return Err(Error::Domain("leading coefficient a_0 must be nonzero".into())),
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("series coefficients must be finite".into()));
        }
        Ok(Self { ell, lambda, energy, coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `r^λ Σ a_k r^k` for `r > 0` (or any `r` when `λ ≥ 0`).
    pub fn eval(&self, r: f64) -> f64 {
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c);
        poly * r.powi(self.lambda)
    }

    /// First derivative of [`eval`](Self::eval).
    pub fn derivative(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let power = k as i32 + self.lambda;
                if power == 0 {
                    0.0
                } else {
                    a * power as f64 * r.powi(power - 1)
                }
            })
            .sum()
    }

    /// True when the last retained term is not negligible at `r_eval`,
    /// i.e. `|a_K| r^K > 1e−12 |a_0|`.
    pub fn tail_exceeds(&self, r_eval: f64) -> bool {
        let k = self.order();
        self.coeffs[k].abs() * r_eval.abs().powi(k as i32) > 1e-12 * self.coeffs[0].abs()
    }
}

fn check_root(ell: u32, lambda: i32) -> Result<()> {
    let (regular, singular) = indicial_roots(ell);
    if lambda != regular && lambda != singular {
        return Err(Error::Domain(format!(
            "lambda = {lambda} is not an indicial root for ell = {ell} (expected {regular} or {singular})"
        )));
    }
    Ok(())
}

// w_j: Taylor coefficients of (2m/ħ²)(V(r) − E)
fn reduced_potential(taylor: &TaylorSeries, mass: f64, hbar: f64, energy: f64, len: usize) -> Vec<f64> {
    let scale = 2.0 * mass / (hbar * hbar);
    (0..len)
        .map(|j| {
            let v = taylor.coeff(j) - if j == 0 { energy } else { 0.0 };
            scale * v
        })
        .collect()
}

fn indicial_factor(k: usize, lambda: i32, ell: u32) -> f64 {
    let s = k as f64 + lambda as f64;
    let l = ell as f64;
    s * (s - 1.0) - l * (l + 1.0)
}

// Σ_j w_j a_{k−2−j} together with Σ |w_j a_{k−2−j}|
fn source_sum(w: &[f64], a: &[f64], k: usize) -> (f64, f64) {
    if k < 2 {
        return (0.0, 0.0);
    }
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (j, wj) in w.iter().enumerate().take(k - 1) {
        let term = wj * a[k - 2 - j];
        sum += term;
        scale += term.abs();
    }
    (sum, scale)
}

/// Frobenius coefficients `a_0 .. a_K` by the recursion
/// `[(k+λ)(k+λ−1) − ℓ(ℓ+1)] a_k = Σ_j w_j a_{k−2−j}`.
///
/// On the `λ = −ℓ` branch the factor vanishes at `k = 2ℓ + 1`. For `ℓ = 0`
/// the free coefficient `a_1` is set to zero, so `u'(0) = 0`. For `ℓ > 0`
/// the source sum there must vanish; otherwise no pure power series exists
/// and [`Error::LogResonance`] is returned.
#[allow(clippy::too_many_arguments)]
pub fn series_coefficients(
    taylor: &TaylorSeries,
    mass: f64,
    hbar: f64,
    ell: u32,
    lambda: i32,
    energy: f64,
    a0: f64,
    order: usize,
) -> Result<SeriesSolution> {
    check_root(ell, lambda)?;
    if a0 == 0.0 || !a0.is_finite() {
        return Err(Error::Domain("leading coefficient a_0 must be nonzero".into()));
    }
    let w = reduced_potential(taylor, mass, hbar, energy, order + 1);
    let mut a = vec![0.0; order + 1];
    a[0] = a0;
    let resonance = (lambda == -(ell as i32)).then_some(2 * ell as usize + 1);
    for k in 1..=order {
        let (rhs, scale) = source_sum(&w, &a, k);
        if Some(k) == resonance {
            if ell > 0 && rhs.abs() > 1e-12 * scale {
                return Err(Error::LogResonance { ell, k, residual: rhs });
            }
            a[k] = 0.0;
            continue;
        }
        a[k] = rhs / indicial_factor(k, lambda, ell);
    }
    Ok(SeriesSolution { ell, lambda, energy, coeffs: a })
}

/// Residual of the recursion at each `k = 1..K`, for verification.
pub fn recursion_residuals(sol: &SeriesSolution, taylor: &TaylorSeries, mass: f64, hbar: f64) -> Vec<f64> {
    let w = reduced_potential(taylor, mass, hbar, sol.energy, sol.coeffs.len());
    (1..sol.coeffs.len())
        .map(|k| {
            let (rhs, _) = source_sum(&w, &sol.coeffs, k);
            indicial_factor(k, sol.lambda, sol.ell) * sol.coeffs[k] - rhs
        })
        .collect()
}

/// `(p, coefficient)` of one term `coeff · r^ℓ Y_ℓ^μ Δ^p δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub p: u32,
    pub coeff: f64,
}

/// A finite combination `Σ coeff_p r^ℓ Y_ℓ^μ Δ^p δ`, terms ascending in `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaExpansion {
    pub terms: Vec<DeltaTerm>,
    pub ell: u32,
    pub lambda: i32,
}

impl DeltaExpansion {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> DeltaExpansion {
        DeltaExpansion {
            terms: self
                .terms
                .iter()
                .map(|t| DeltaTerm { p: t.p, coeff: t.coeff * factor })
                .filter(|t| t.coeff != 0.0)
                .collect(),
            ell: self.ell,
            lambda: self.lambda,
        }
    }

    /// For `ℓ = 0`, the coefficient of `δ` after substituting `Y_0^0 = 1/√(4π)`.
    pub fn delta_coefficient(&self) -> Option<f64> {
        if self.ell != 0 {
            return None;
        }
        Some(
            self.terms
                .iter()
                .filter(|t| t.p == 0)
                .map(|t| t.coeff * y00())
                .sum(),
        )
    }

    /// Canonical text form, e.g. `Q = (-12.566370614359172) * r^0 Y00 * delta`.
    pub fn render(&self, symbol: &str) -> String {
        if self.terms.is_empty() {
            return format!("{symbol} = 0");
        }
        let angular = if self.ell == 0 {
            "Y00".to_string()
        } else {
            format!("Y{}mu", self.ell)
        };
        let body: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let laplacian = if t.p == 0 {
                    String::new()
                } else {
                    format!("Delta^{} ", t.p)
                };
                format!("({:?}) * r^{} {} * {}delta", t.coeff, self.ell, angular, laplacian)
            })
            .collect();
        format!("{symbol} = {}", body.join(" + "))
    }
}

/// `B_{ℓ,p} = (1 − 2ℓ)/(4p + 1)`.
pub fn b_factor(ell: u32, p: u32) -> f64 {
    (1.0 - 2.0 * ell as f64) / (4.0 * p as f64 + 1.0)
}

/// `C_p = −(4p + 1) π^{3/2} / (2^{2p−1} p! Γ(p + 3/2))`.
///
/// With `Γ(p + 3/2) = (√π/2) Π_{i=1}^{p}(i + ½)` this is
/// `−4π (4p + 1) / (4^p p! Π_{i=1}^{p}(i + ½))`, evaluated in that form.
pub fn c_factor(p: u32) -> f64 {
    let mut denom = 1.0;
    for i in 1..=p {
        let i = i as f64;
        denom *= 4.0 * i * (i + 0.5);
    }
    -4.0 * std::f64::consts::PI * (4.0 * p as f64 + 1.0) / denom
}

/// `Q_{λ,ℓ}(δ)` for a series solution.
pub fn q_delta(sol: &SeriesSolution) -> DeltaExpansion {
    let upper = (-sol.lambda).max(0) as usize;
    let mut terms = Vec::new();
    for k in 0..=upper.min(sol.order()) {
        let twice_p = sol.ell as i64 - sol.lambda as i64 - k as i64;
        if twice_p < 0 || twice_p % 2 != 0 {
            continue;
        }
        let p = (twice_p / 2) as u32;
        let coeff = sol.coeffs[k] * b_factor(sol.ell, p) * c_factor(p);
        if coeff != 0.0 {
            terms.push(DeltaTerm { p, coeff });
        }
    }
    // k ascending gives p descending
    terms.reverse();
    DeltaExpansion {
        terms,
        ell: sol.ell,
        lambda: sol.lambda,
    }
}

/// `Ψ` built from `sol` is an eigenfunction of `H` exactly when `Q` vanishes.
pub fn is_h_eigenfunction(sol: &SeriesSolution) -> bool {
    q_delta(sol).is_empty()
}

/// The distributional residual `H Pf.Ψ − E Pf.Ψ = −(ħ²/2m) Q_{λ,ℓ}(δ)`.
pub fn h_action_residual(sol: &SeriesSolution, hbar: f64, mass: f64) -> DeltaExpansion {
    q_delta(sol).scaled(-hbar * hbar / (2.0 * mass))
}

/// Maximum normalized residual of the radial equation on `r > 0`,
/// `|−(ħ²/2m)u'' + (V_eff − E)u| / max|u|`, over 500 points spanning the
/// region where `u` lives. `u''` comes from a five-point stencil.
pub fn hd_residual_numeric(pair: &EigenPair, model: &PotentialModel, ell: u32, hbar: f64) -> Result<f64> {
    let (inner, outer) = model.turning_points(pair.energy)?;
    let width = (outer - inner).max(1e-3);
    let (stencil, lo, hi, sampled) = match &pair.wave {
        Wavefunction::Sampled { r_start, h, values } => {
            let r_end = r_start + h * (values.len() - 1) as f64;
            let lo = (r_start + 2.0 * h).max(1e-3 * width);
            let hi = (outer + 2.0 * width).min(r_end - 2.0 * h);
            (*h, lo, hi, Some((*r_start, *h, values)))
        }
        _ => (1e-3 * width, 1e-3 * width, outer + 2.0 * width, None),
    };
    if !(hi > lo) {
        return Err(Error::Domain("eigenfunction support does not reach r > 0".into()));
    }
    let coef = hbar * hbar / (2.0 * pair.mass);
    let points = 500;
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let target = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let (r, taps) = match sampled {
            Some((r_start, h, values)) => {
                let idx = ((target - r_start) / h).round() as usize;
                let idx = idx.clamp(2, values.len() - 3);
                let r = r_start + idx as f64 * h;
                if r <= 0.0 {
                    continue;
                }
                (r, [values[idx - 2], values[idx - 1], values[idx], values[idx + 1], values[idx + 2]])
            }
            None => {
                let r = target;
                let f = |x: f64| pair.u(x);
                (r, [f(r - 2.0 * stencil), f(r - stencil), f(r), f(r + stencil), f(r + 2.0 * stencil)])
            }
        };
        let d2 = (-taps[0] + 16.0 * taps[1] - 30.0 * taps[2] + 16.0 * taps[3] - taps[4])
            / (12.0 * stencil * stencil);
        let v_eff = model.effective_potential(ell, hbar, r)?;
        let res = -coef * d2 + (v_eff - pair.energy) * taps[2];
        worst = worst.max(res.abs());
    }
    Ok(worst / pair.max_abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{morse_eigenpair, shifted_harmonic_eigenpair};
    use crate::potential::{CenteredHarmonic, Morse, ShiftedHarmonic};
    use crate::specfun::log_gamma;
    use proptest::prelude::*;

    fn centered() -> PotentialModel {
        PotentialModel::CenteredHarmonic(CenteredHarmonic { mass: 1.0, omega: 1.0 })
    }

    fn c_factor_via_gamma(p: u32) -> f64 {
        let pf = p as f64;
        let ln_fact = log_gamma(pf + 1.0).unwrap();
        let ln_g = log_gamma(pf + 1.5).unwrap();
        -(4.0 * pf + 1.0) * std::f64::consts::PI.powf(1.5)
            / (2f64.powf(2.0 * pf - 1.0) * (ln_fact + ln_g).exp())
    }

    #[test]
    fn indicial_root_examples() {
        assert_eq!(indicial_roots(0), (1, 0));
        assert_eq!(indicial_roots(1), (2, -1));
        assert_eq!(indicial_roots(3), (4, -3));
    }

    #[test]
    fn constants() {
        assert_eq!(c_factor(0), -4.0 * std::f64::consts::PI);
        assert_eq!(b_factor(0, 0), 1.0);
        assert_eq!(b_factor(1, 1), -0.2);
        for p in 0..12 {
            let a = c_factor(p);
            let b = c_factor_via_gamma(p);
            assert!(((a - b) / b).abs() < 1e-12, "p={p}: {a} vs {b}");
        }
    }

    #[test]
    fn centered_ground_state_series() {
        let t = centered().taylor_at_origin(DEFAULT_ORDER);
        let sol = series_coefficients(&t, 1.0, 1.0, 0, 0, 0.5, 1.0, 4).unwrap();
        assert_eq!(sol.coeffs[0], 1.0);
        assert_eq!(sol.coeffs[1], 0.0);
        assert_eq!(sol.coeffs[2], -0.5);
        assert_eq!(sol.coeffs[3], 0.0);
        assert!((sol.coeffs[4] - 0.125).abs() < 1e-15);
        // u'(0) = a_1 on the λ = 0 branch
        assert_eq!(sol.derivative(0.0), 0.0);
    }

    #[test]
    fn regular_branch_runs_to_order() {
        let t = PotentialModel::Morse(Morse { mass: 1.0, v_m: 8.0, a: 1.0, r_m: 1.0 }).taylor_at_origin(30);
        for ell in 0..4 {
            let sol = series_coefficients(&t, 1.0, 1.0, ell, ell as i32 + 1, -3.0, 1.0, 30).unwrap();
            assert_eq!(sol.coeffs.len(), 31);
            let res = recursion_residuals(&sol, &t, 1.0, 1.0);
            let scale = sol.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
            assert!(res.iter().all(|r| r.abs() < 1e-12 * scale.max(1.0)));
        }
    }

    #[test]
    fn log_resonance_detected() {
        // a linear term feeds the odd index k = 3 on the ℓ = 1, λ = −1 branch
        let t = TaylorSeries::new(vec![0.0, -1.0, 0.5]);
        let err = series_coefficients(&t, 1.0, 1.0, 1, -1, 0.5, 1.0, 8).unwrap_err();
        assert!(matches!(err, Error::LogResonance { ell: 1, k: 3, .. }));
        // a pure even potential leaves the odd source sum at zero
        let t = TaylorSeries::new(vec![0.0, 0.0, 0.5]);
        let sol = series_coefficients(&t, 1.0, 1.0, 1, -1, 0.5, 1.0, 8).unwrap();
        assert_eq!(sol.coeffs[3], 0.0);
    }

    #[test]
    fn rejects_foreign_roots_and_zero_lead() {
        let t = TaylorSeries::new(vec![0.0]);
        assert!(matches!(series_coefficients(&t, 1.0, 1.0, 2, 1, 0.0, 1.0, 4), Err(Error::Domain(_))));
        assert!(matches!(series_coefficients(&t, 1.0, 1.0, 0, 0, 0.0, 0.0, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn q_delta_examples() {
        for ell in 0..=5u32 {
            let sol = SeriesSolution::from_coefficients(ell, ell as i32 + 1, 0.0, vec![1.0, 0.3, -0.2]).unwrap();
            assert!(q_delta(&sol).is_empty());
            assert!(is_h_eigenfunction(&sol));
        }

        let u0 = 0.37;
        let sol = SeriesSolution::from_coefficients(0, 0, 0.0, vec![u0, 0.0, 1.0]).unwrap();
        let q = q_delta(&sol);
        assert_eq!(q.terms.len(), 1);
        assert_eq!(q.terms[0].p, 0);
        let collapsed = q.delta_coefficient().unwrap();
        assert!((collapsed + (4.0 * std::f64::consts::PI).sqrt() * u0).abs() < 1e-12);
        assert!(!is_h_eigenfunction(&sol));

        let sol = SeriesSolution::from_coefficients(1, -1, 0.0, vec![2.0, 5.0, 1.0]).unwrap();
        let q = q_delta(&sol);
        assert_eq!(q.terms.len(), 1);
        assert_eq!(q.terms[0].p, 1);
        assert_eq!(q.terms[0].coeff, 2.0 * -0.2 * c_factor(1));

        let sol = SeriesSolution::from_coefficients(2, -2, 0.0, vec![1.0]).unwrap();
        assert!(!is_h_eigenfunction(&sol));
    }

    #[test]
    fn render_forms() {
        let sol = SeriesSolution::from_coefficients(0, 0, 0.0, vec![1.0]).unwrap();
        assert_eq!(q_delta(&sol).render("Q"), "Q = (-12.566370614359172) * r^0 Y00 * delta");
        let sol = SeriesSolution::from_coefficients(2, -2, 0.0, vec![1.0, 0.0, 1.0]).unwrap();
        let text = q_delta(&sol).render("Q");
        assert!(text.starts_with("Q = ("));
        assert!(text.contains("r^2 Y2mu * Delta^1 delta"));
        assert!(text.contains("r^2 Y2mu * Delta^2 delta"));
        let sol = SeriesSolution::from_coefficients(0, 1, 0.0, vec![1.0]).unwrap();
        assert_eq!(q_delta(&sol).render("Q"), "Q = 0");
    }

    #[test]
    fn residual_examples() {
        let sol = SeriesSolution::from_coefficients(0, 1, 0.0, vec![1.0]).unwrap();
        assert!(h_action_residual(&sol, 1.0, 1.0).is_empty());

        let sol = SeriesSolution::from_coefficients(0, 0, 0.0, vec![1.0]).unwrap();
        let r = h_action_residual(&sol, 1.0, 1.0);
        assert!((r.delta_coefficient().unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-12);

        let twice = SeriesSolution::from_coefficients(0, 0, 0.0, vec![2.0]).unwrap();
        let r2 = h_action_residual(&twice, 1.0, 1.0);
        assert_eq!(r2.terms[0].coeff, 2.0 * r.terms[0].coeff);
    }

    #[test]
    fn resummation_matches_ground_state() {
        let t = centered().taylor_at_origin(DEFAULT_ORDER);
        let sol = series_coefficients(&t, 1.0, 1.0, 0, 0, 0.5, 1.0, DEFAULT_ORDER).unwrap();
        let r: f64 = 0.05;
        assert!(!sol.tail_exceeds(r));
        assert!((sol.eval(r) - (-0.5 * r * r).exp()).abs() < 1e-10);
        // same against the normalized eigenfunction
        let pair = shifted_harmonic_eigenpair(
            &ShiftedHarmonic { mass: 1.0, omega: 1.0, r_m: 0.0, v_m: 0.0 },
            1.0,
            0,
        )
        .unwrap();
        assert!((pair.u0 * sol.eval(r) - pair.u(r)).abs() < 1e-10);
    }

    #[test]
    fn tail_warning_triggers_far_out() {
        let t = centered().taylor_at_origin(8);
        let sol = series_coefficients(&t, 1.0, 1.0, 0, 0, 0.5, 1.0, 8).unwrap();
        assert!(sol.tail_exceeds(3.0));
    }

    #[test]
    fn hd_residual_examples() {
        let sh = ShiftedHarmonic { mass: 1.0, omega: 1.0, r_m: 3.0, v_m: 0.0 };
        let model = PotentialModel::ShiftedHarmonic(sh);
        let pair = shifted_harmonic_eigenpair(&sh, 1.0, 0).unwrap();
        assert!(hd_residual_numeric(&pair, &model, 0, 1.0).unwrap() < 1e-6);

        let m = Morse { mass: 1.0, v_m: 8.0, a: 1.0, r_m: 1.0 };
        let model = PotentialModel::Morse(m);
        let pair = morse_eigenpair(&m, 1.0, 1).unwrap();
        assert!(hd_residual_numeric(&pair, &model, 0, 1.0).unwrap() < 1e-6);

        let mut wrong = pair.clone();
        wrong.energy += 0.1;
        assert!(hd_residual_numeric(&wrong, &model, 0, 1.0).unwrap() > 1e-2);
    }

    fn random_solution(ell: u32, regular: bool, seed: &[f64]) -> SeriesSolution {
        let lambda = if regular { ell as i32 + 1 } else { -(ell as i32) };
        let mut coeffs: Vec<f64> = seed.to_vec();
        if coeffs[0] == 0.0 {
            coeffs[0] = 1.0;
        }
        SeriesSolution::from_coefficients(ell, lambda, 0.0, coeffs).unwrap()
    }

    proptest! {
        #[test]
        fn eigenfunction_iff_empty(ell in 0u32..=5, regular: bool, seed in proptest::collection::vec(-5.0f64..5.0, 1..12)) {
            let sol = random_solution(ell, regular, &seed);
            prop_assert_eq!(is_h_eigenfunction(&sol), q_delta(&sol).terms.is_empty());
            if regular {
                prop_assert!(is_h_eigenfunction(&sol));
            } else {
                prop_assert!(!is_h_eigenfunction(&sol));
            }
        }

        #[test]
        fn parity_selection(ell in 0u32..=5, seed in proptest::collection::vec(-5.0f64..5.0, 1..12)) {
            let sol = random_solution(ell, false, &seed);
            let q = q_delta(&sol);
            for t in &q.terms {
                // k = 2ℓ − 2p must have the parity of 2ℓ and lie within 0..=ℓ
                let k = 2 * ell as i64 - 2 * t.p as i64;
                prop_assert!(k >= 0 && k <= ell as i64 && k % 2 == 0);
            }
            let ps: Vec<u32> = q.terms.iter().map(|t| t.p).collect();
            let mut sorted = ps.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(ps, sorted);
        }

        #[test]
        fn commutator_identity(ell in 0u32..=5, regular: bool, hbar in 0.1f64..3.0, mass in 0.1f64..5.0,
                               seed in proptest::collection::vec(-5.0f64..5.0, 1..12)) {
            let sol = random_solution(ell, regular, &seed);
            let residual = h_action_residual(&sol, hbar, mass);
            let q = q_delta(&sol);
            prop_assert_eq!(residual.terms.len(), q.terms.len());
            for (r, t) in residual.terms.iter().zip(&q.terms) {
                prop_assert_eq!(r.p, t.p);
                let expected = -hbar * hbar / (2.0 * mass) * t.coeff;
                prop_assert!((r.coeff - expected).abs() <= 1e-13 * expected.abs());
            }
        }
    }
}
