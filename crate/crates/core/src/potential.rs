//! Central potential models.
//!
//! All energies are in the reduced unit system of [`UnitSystem`]; the mass
//! lives in each model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ħ` for a computation. Defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { hbar: 1.0 }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { hbar })
    }
}

/// `½mω²(r − r_m)² − V_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftedHarmonic {
    #[serde(rename = "m")]
    pub mass: f64,
    pub omega: f64,
    pub r_m: f64,
    #[serde(rename = "V_m")]
    pub v_m: f64,
}

/// `V_m {exp[−2a(r − r_m)] − 2 exp[−a(r − r_m)]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Morse {
    #[serde(rename = "m")]
    pub mass: f64,
    #[serde(rename = "V_m")]
    pub v_m: f64,
    pub a: f64,
    pub r_m: f64,
}

/// Spherical oscillator `½mω²r²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenteredHarmonic {
    #[serde(rename = "m")]
    pub mass: f64,
    pub omega: f64,
}

/// Spherical oscillator plus a radial linear term, `½mω²r² − Cr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicPlusLinear3D {
    #[serde(rename = "m")]
    pub mass: f64,
    pub omega: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

/// Power-series coefficients `v_j` of `V(r) = Σ v_j r^j`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TaylorSeries {
    pub coeffs: Vec<f64>,
}

impl TaylorSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c)
    }

    /// Coefficient `v_j`, zero past the stored order.
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn derivative(&self) -> TaylorSeries {
        TaylorSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| j as f64 * c)
                .collect(),
        )
    }

    fn truncated(&self, order: usize) -> TaylorSeries {
        TaylorSeries::new((0..=order).map(|j| self.coeff(j)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialModel {
    ShiftedHarmonic(ShiftedHarmonic),
    Morse(Morse),
    CenteredHarmonic(CenteredHarmonic),
    HarmonicPlusLinear3D(HarmonicPlusLinear3D),
    Taylor {
        #[serde(rename = "m")]
        mass: f64,
        series: TaylorSeries,
    },
}

impl ShiftedHarmonic {
    pub fn evaluate(&self, r: f64) -> f64 {
        let x = r - self.r_m;
        0.5 * self.mass * self.omega * self.omega * x * x - self.v_m
    }

    /// `β = √(mω/ħ)`.
    pub fn beta(&self, hbar: f64) -> f64 {
        (self.mass * self.omega / hbar).sqrt()
    }
}

impl Morse {
    pub fn evaluate(&self, r: f64) -> f64 {
        let y = (-self.a * (r - self.r_m)).exp();
        self.v_m * (y * y - 2.0 * y)
    }

    /// Harmonic frequency at the well bottom, `a √(2V_m/m)`.
    pub fn omega(&self) -> f64 {
        self.a * (2.0 * self.v_m / self.mass).sqrt()
    }

    /// `d = √(2mV_m)/(aħ)`.
    pub fn depth_parameter(&self, hbar: f64) -> f64 {
        (2.0 * self.mass * self.v_m).sqrt() / (self.a * hbar)
    }

    /// Number of bound levels: all `n` with `2d − 1 − 2n > 0`.
    pub fn bound_level_count(&self, hbar: f64) -> usize {
        let d = self.depth_parameter(hbar);
        let limit = d - 0.5;
        if limit <= 0.0 {
            return 0;
        }
        limit.ceil() as usize
    }
}

impl HarmonicPlusLinear3D {
    /// The same potential written as `½mω²(r − r_m)² − V_m`.
    pub fn as_shifted(&self) -> ShiftedHarmonic {
        let k = self.mass * self.omega * self.omega;
        ShiftedHarmonic {
            mass: self.mass,
            omega: self.omega,
            r_m: self.c / k,
            v_m: self.c * self.c / (2.0 * k),
        }
    }
}

impl CenteredHarmonic {
    pub fn as_shifted(&self) -> ShiftedHarmonic {
        ShiftedHarmonic {
            mass: self.mass,
            omega: self.omega,
            r_m: 0.0,
            v_m: 0.0,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be non-negative and finite, got {v}")))
    }
}

impl PotentialModel {
    pub fn mass(&self) -> f64 {
        match self {
            PotentialModel::ShiftedHarmonic(p) => p.mass,
            PotentialModel::Morse(p) => p.mass,
            PotentialModel::CenteredHarmonic(p) => p.mass,
            PotentialModel::HarmonicPlusLinear3D(p) => p.mass,
            PotentialModel::Taylor { mass, .. } => *mass,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PotentialModel::ShiftedHarmonic(_) => "shifted_harmonic",
            PotentialModel::Morse(_) => "morse",
            PotentialModel::CenteredHarmonic(_) => "centered_harmonic",
            PotentialModel::HarmonicPlusLinear3D(_) => "harmonic_plus_linear_3d",
            PotentialModel::Taylor { .. } => "taylor",
        }
    }

    /// Checks the parameter invariants of the variant.
    pub fn validate(&self) -> Result<()> {
        positive("m", self.mass())?;
        match self {
            PotentialModel::ShiftedHarmonic(p) => {
                positive("omega", p.omega)?;
                non_negative("r_m", p.r_m)?;
                non_negative("V_m", p.v_m)
            }
            PotentialModel::Morse(p) => {
                positive("V_m", p.v_m)?;
                positive("a", p.a)?;
                non_negative("r_m", p.r_m)
            }
            PotentialModel::CenteredHarmonic(p) => positive("omega", p.omega),
            PotentialModel::HarmonicPlusLinear3D(p) => {
                positive("omega", p.omega)?;
                non_negative("C", p.c)
            }
            PotentialModel::Taylor { series, .. } => {
                if series.coeffs.is_empty() {
                    return Err(Error::InvalidInput("taylor series needs at least one coefficient".into()));
                }
                if series.coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidInput("taylor coefficients must be finite".into()));
                }
                Ok(())
            }
        }
    }

    /// `V(r)`. Negative `r` evaluates the analytic continuation.
    pub fn evaluate(&self, r: f64) -> f64 {
        match self {
            PotentialModel::ShiftedHarmonic(p) => p.evaluate(r),
            PotentialModel::Morse(p) => p.evaluate(r),
            PotentialModel::CenteredHarmonic(p) => 0.5 * p.mass * p.omega * p.omega * r * r,
            PotentialModel::HarmonicPlusLinear3D(p) => {
                0.5 * p.mass * p.omega * p.omega * r * r - p.c * r
            }
            PotentialModel::Taylor { series, .. } => series.eval(r),
        }
    }

    /// `V(r) + ℓ(ℓ+1)ħ²/(2mr²)`.
    pub fn effective_potential(&self, ell: u32, hbar: f64, r: f64) -> Result<f64> {
        if ell == 0 {
            return Ok(self.evaluate(r));
        }
        if r == 0.0 {
            return Err(Error::Singularity { ell });
        }
        if r < 0.0 {
            return Err(Error::Domain(format!("effective potential needs r > 0, got {r}")));
        }
        let l = ell as f64;
        Ok(self.evaluate(r) + l * (l + 1.0) * hbar * hbar / (2.0 * self.mass() * r * r))
    }

    /// Limit of `V(r)` as `r → +∞`, when finite.
    pub fn asymptote(&self) -> Option<f64> {
        match self {
            PotentialModel::Morse(_) => Some(0.0),
            _ => None,
        }
    }

    /// Location and value of the well minimum on `r ≥ 0`.
    pub fn minimum(&self) -> Result<(f64, f64)> {
        match self {
            PotentialModel::ShiftedHarmonic(p) => Ok((p.r_m, -p.v_m)),
            PotentialModel::Morse(p) => Ok((p.r_m, -p.v_m)),
            PotentialModel::CenteredHarmonic(_) => Ok((0.0, 0.0)),
            PotentialModel::HarmonicPlusLinear3D(p) => {
                let s = p.as_shifted();
                Ok((s.r_m, -s.v_m))
            }
            PotentialModel::Taylor { series, .. } => {
                let r = taylor_minimum(series)?;
                Ok((r, series.eval(r)))
            }
        }
    }

    /// Harmonic approximation at the well minimum.
    pub fn parabolic_fit(&self) -> Result<ShiftedHarmonic> {
        match self {
            PotentialModel::ShiftedHarmonic(p) => Ok(*p),
            PotentialModel::Morse(p) => Ok(ShiftedHarmonic {
                mass: p.mass,
                omega: p.omega(),
                r_m: p.r_m,
                v_m: p.v_m,
            }),
            PotentialModel::CenteredHarmonic(p) => Ok(p.as_shifted()),
            PotentialModel::HarmonicPlusLinear3D(p) => Ok(p.as_shifted()),
            PotentialModel::Taylor { mass, series } => {
                let r = taylor_minimum(series)?;
                let curvature = series.derivative().derivative().eval(r);
                if !(curvature > 0.0) {
                    return Err(Error::Unsupported("taylor minimum has no positive curvature".into()));
                }
                Ok(ShiftedHarmonic {
                    mass: *mass,
                    omega: (curvature / mass).sqrt(),
                    r_m: r,
                    v_m: -series.eval(r),
                })
            }
        }
    }

    /// Coefficients of the power series of `V` at `r = 0` through `order`.
    pub fn taylor_at_origin(&self, order: usize) -> TaylorSeries {
        let quadratic = |v0: f64, v1: f64, v2: f64| {
            TaylorSeries::new(
                (0..=order)
                    .map(|j| match j {
                        0 => v0,
                        1 => v1,
                        2 => v2,
                        _ => 0.0,
                    })
                    .collect(),
            )
        };
        match self {
            PotentialModel::ShiftedHarmonic(p) => {
                let k = p.mass * p.omega * p.omega;
                quadratic(0.5 * k * p.r_m * p.r_m - p.v_m, -k * p.r_m, 0.5 * k)
            }
            PotentialModel::CenteredHarmonic(p) => {
                quadratic(0.0, 0.0, 0.5 * p.mass * p.omega * p.omega)
            }
            PotentialModel::HarmonicPlusLinear3D(p) => {
                quadratic(0.0, -p.c, 0.5 * p.mass * p.omega * p.omega)
            }
            PotentialModel::Morse(p) => {
                // V_m [e^{2a r_m} e^{-2ar} - 2 e^{a r_m} e^{-ar}], expanded term by term
                let mut wide = p.v_m * (2.0 * p.a * p.r_m).exp();
                let mut narrow = -2.0 * p.v_m * (p.a * p.r_m).exp();
                let mut coeffs = Vec::with_capacity(order + 1);
                for j in 0..=order {
                    if j > 0 {
                        wide *= -2.0 * p.a / j as f64;
                        narrow *= -p.a / j as f64;
                    }
                    coeffs.push(wide + narrow);
                }
                TaylorSeries::new(coeffs)
            }
            PotentialModel::Taylor { series, .. } => series.truncated(order),
        }
    }

    /// The two roots of `V(r) = E` around the minimum; the inner one is
    /// clamped to `0`.
    pub fn turning_points(&self, energy: f64) -> Result<(f64, f64)> {
        let (r_min, v_min) = self.minimum()?;
        let outer = self.outer_turning_point(energy, r_min, v_min)?;
        if energy == v_min {
            return Ok((r_min, r_min));
        }
        let inner = if r_min == 0.0 || self.evaluate(0.0) <= energy {
            0.0
        } else {
            bisect_crossing(|r| self.evaluate(r) - energy, 0.0, r_min)
        };
        Ok((inner, outer))
    }

    /// Like [`turning_points`](Self::turning_points) but the inner root is
    /// sought on the analytic continuation to `r < 0`.
    pub fn turning_points_continued(&self, energy: f64) -> Result<(f64, f64)> {
        let (r_min, v_min) = self.minimum()?;
        let outer = self.outer_turning_point(energy, r_min, v_min)?;
        if energy == v_min {
            return Ok((r_min, r_min));
        }
        let mut step = length_seed(r_min);
        let mut near = r_min;
        for _ in 0..200 {
            let far = r_min - step;
            let v = self.evaluate(far);
            if v > energy {
                return Ok((bisect_crossing(|r| self.evaluate(r) - energy, far, near), outer));
            }
            if !v.is_finite() {
                break;
            }
            near = far;
            step *= 2.0;
        }
        Err(Error::Unsupported(format!(
            "{} does not confine on the continuation to r < 0 at E = {energy}",
            self.name()
        )))
    }

    fn outer_turning_point(&self, energy: f64, r_min: f64, v_min: f64) -> Result<f64> {
        if energy < v_min || !energy.is_finite() {
            return Err(Error::NoClassicalRegion {
                energy,
                minimum: v_min,
            });
        }
        if energy == v_min {
            return Ok(r_min);
        }
        if let Some(limit) = self.asymptote() {
            if energy >= limit {
                return Err(Error::Domain(format!(
                    "E = {energy} is not below the dissociation limit {limit}"
                )));
            }
        }
        let mut step = length_seed(r_min);
        let mut near = r_min;
        for _ in 0..200 {
            let far = r_min + step;
            if self.evaluate(far) > energy {
                return Ok(bisect_crossing(|r| self.evaluate(r) - energy, near, far));
            }
            near = far;
            step *= 2.0;
        }
        Err(Error::Unsupported(format!(
            "{} does not confine as r grows at E = {energy}",
            self.name()
        )))
    }
}

fn length_seed(r_min: f64) -> f64 {
    1e-3 * r_min.abs().max(1.0)
}

// Root of f on [a, b] with f changing sign, by bisection to f64 resolution.
fn bisect_crossing(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let f_lo_neg = f(lo) < 0.0;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == f_lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// Lowest interior minimum of a polynomial on r >= 0, found from sign changes
// of its derivative inside the Cauchy bound of the derivative's roots.
fn taylor_minimum(series: &TaylorSeries) -> Result<f64> {
    let d1 = series.derivative();
    let d2 = d1.derivative();
    let mut candidates = Vec::new();
    if d1.coeff(0) == 0.0 && d2.coeff(0) > 0.0 {
        candidates.push(0.0);
    }
    let lead = d1
        .coeffs
        .iter()
        .rposition(|c| *c != 0.0)
        .ok_or_else(|| Error::Unsupported("constant taylor potential has no minimum".into()))?;
    if lead > 0 {
        let top = d1.coeffs[lead];
        let bound = 1.0
            + d1.coeffs[..lead]
                .iter()
                .map(|c| (c / top).abs())
                .fold(0.0, f64::max);
        let steps = 4096;
        let h = bound / steps as f64;
        let mut prev = d1.eval(0.0);
        for i in 1..=steps {
            let r = i as f64 * h;
            let cur = d1.eval(r);
            if prev < 0.0 && cur >= 0.0 {
                candidates.push(bisect_crossing(|x| d1.eval(x), r - h, r));
            }
            prev = cur;
        }
    }
    candidates
        .into_iter()
        .min_by(|a, b| series.eval(*a).total_cmp(&series.eval(*b)))
        .ok_or_else(|| Error::Unsupported("taylor potential has no located minimum on r >= 0".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn shifted(m: f64, omega: f64, r_m: f64, v_m: f64) -> PotentialModel {
        PotentialModel::ShiftedHarmonic(ShiftedHarmonic { mass: m, omega, r_m, v_m })
    }

    fn morse(m: f64, v_m: f64, a: f64, r_m: f64) -> PotentialModel {
        PotentialModel::Morse(Morse { mass: m, v_m, a, r_m })
    }

    fn free(m: f64) -> PotentialModel {
        PotentialModel::Taylor { mass: m, series: TaylorSeries::new(vec![0.0]) }
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(shifted(1.0, 1.0, 2.0, 3.0).evaluate(2.0), -3.0);
        assert_eq!(morse(1.0, 8.0, 1.0, 1.0).evaluate(1.0), -8.0);
        assert!(morse(1.0, 8.0, 1.0, 1.0).evaluate(1e3).abs() < 1e-300);
    }

    #[test]
    fn effective_potential_examples() {
        let m = morse(1.0, 8.0, 1.0, 1.0);
        assert_eq!(m.effective_potential(0, 1.0, 0.7).unwrap(), m.evaluate(0.7));
        assert_eq!(free(1.0).effective_potential(1, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(free(1.0).effective_potential(2, 1.0, 2.0).unwrap(), 0.75);
        assert_eq!(
            free(1.0).effective_potential(1, 1.0, 0.0),
            Err(Error::Singularity { ell: 1 })
        );
    }

    #[test]
    fn parabolic_fit_examples() {
        let fit = morse(1.0, 8.0, 1.0, 1.0).parabolic_fit().unwrap();
        assert_eq!(fit, ShiftedHarmonic { mass: 1.0, omega: 4.0, r_m: 1.0, v_m: 8.0 });

        let s = ShiftedHarmonic { mass: 2.0, omega: 0.5, r_m: 3.0, v_m: 1.0 };
        assert_eq!(PotentialModel::ShiftedHarmonic(s).parabolic_fit().unwrap(), s);

        let hpl = PotentialModel::HarmonicPlusLinear3D(HarmonicPlusLinear3D { mass: 1.0, omega: 1.0, c: 2.0 });
        assert_eq!(
            hpl.parabolic_fit().unwrap(),
            ShiftedHarmonic { mass: 1.0, omega: 1.0, r_m: 2.0, v_m: 2.0 }
        );

        let c = PotentialModel::CenteredHarmonic(CenteredHarmonic { mass: 1.0, omega: 3.0 });
        assert_eq!(c.parabolic_fit().unwrap().r_m, 0.0);
    }

    #[test]
    fn parabolic_fit_on_taylor_series() {
        // 2(r - 1.5)^2 - 4 = 2r^2 - 6r + 0.5
        let t = PotentialModel::Taylor { mass: 1.0, series: TaylorSeries::new(vec![0.5, -6.0, 2.0]) };
        let fit = t.parabolic_fit().unwrap();
        assert!((fit.r_m - 1.5).abs() < 1e-12);
        assert!((fit.v_m - 4.0).abs() < 1e-12);
        assert!((fit.omega - 2.0).abs() < 1e-12);

        // monotone: no minimum
        let t = PotentialModel::Taylor { mass: 1.0, series: TaylorSeries::new(vec![0.0, 1.0]) };
        assert!(matches!(t.parabolic_fit(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn taylor_examples() {
        let t = shifted(1.0, 1.0, 2.0, 3.0).taylor_at_origin(3);
        assert_eq!(t.coeffs, vec![-1.0, -2.0, 0.5, 0.0]);
        let t = PotentialModel::CenteredHarmonic(CenteredHarmonic { mass: 1.0, omega: 2.0 }).taylor_at_origin(2);
        assert_eq!(t.coeffs, vec![0.0, 0.0, 2.0]);
        let t = morse(1.0, 8.0, 1.0, 0.0).taylor_at_origin(1);
        assert_eq!(t.coeffs, vec![-8.0, 0.0]);
    }

    #[test]
    fn morse_taylor_matches_potential_at_small_r() {
        let m = morse(1.0, 8.0, 1.0, 1.0);
        for order in [2usize, 4, 6] {
            let t = m.taylor_at_origin(order);
            let r1: f64 = 0.04;
            let r2: f64 = 0.02;
            let e1 = (m.evaluate(r1) - t.eval(r1)).abs();
            let e2 = (m.evaluate(r2) - t.eval(r2)).abs();
            // O(r^{order+1}): halving r shrinks the remainder by about 2^{order+1}
            let ratio = e1 / e2;
            let expect = 2f64.powi(order as i32 + 1);
            assert!(ratio > 0.8 * expect && ratio < 1.25 * expect, "order {order}: ratio {ratio}");
        }
    }

    #[test]
    fn turning_point_examples() {
        let (a, b) = shifted(1.0, 1.0, 5.0, 0.0).turning_points(0.5).unwrap();
        assert!((a - 4.0).abs() < 1e-14 && (b - 6.0).abs() < 1e-14);
        let c = PotentialModel::CenteredHarmonic(CenteredHarmonic { mass: 1.0, omega: 1.0 });
        let (a, b) = c.turning_points(0.5).unwrap();
        assert_eq!(a, 0.0);
        assert!((b - 1.0).abs() < 1e-14);
        assert_eq!(morse(1.0, 8.0, 1.0, 1.0).turning_points(-8.0).unwrap(), (1.0, 1.0));
        assert!(matches!(
            morse(1.0, 8.0, 1.0, 1.0).turning_points(-9.0),
            Err(Error::NoClassicalRegion { .. })
        ));
        assert!(morse(1.0, 8.0, 1.0, 1.0).turning_points(0.5).is_err());
    }

    #[test]
    fn continued_turning_points() {
        let c = PotentialModel::CenteredHarmonic(CenteredHarmonic { mass: 1.0, omega: 1.0 });
        let (a, b) = c.turning_points_continued(0.5).unwrap();
        assert!((a + 1.0).abs() < 1e-14 && (b - 1.0).abs() < 1e-14);
        let m = morse(1.0, 8.0, 1.0, 1.0);
        let (a, _) = m.turning_points_continued(-0.125).unwrap();
        assert!((m.evaluate(a) + 0.125).abs() < 1e-10);
        let line = PotentialModel::Taylor { mass: 1.0, series: TaylorSeries::new(vec![0.0, 0.0, 1.0, 1.0]) };
        assert!(matches!(line.turning_points_continued(1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn parabola_matches_morse_to_second_order() {
        let m = morse(1.0, 8.0, 1.0, 1.0);
        let fit = PotentialModel::ShiftedHarmonic(m.parabolic_fit().unwrap());
        let mut worst: f64 = 0.0;
        for i in 1..=20 {
            for sign in [-1.0, 1.0] {
                let dr = sign * 0.0005 * i as f64;
                let r = 1.0 + dr;
                let bound = (m.evaluate(r) - fit.evaluate(r)).abs() / dr.abs().powi(3);
                worst = worst.max(bound);
            }
        }
        // cubic coefficient of the Morse expansion is V_m a^3 = 8
        assert!(worst < 9.0, "worst ratio {worst}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(shifted(0.0, 1.0, 1.0, 1.0).validate().is_err());
        assert!(shifted(1.0, -1.0, 1.0, 1.0).validate().is_err());
        assert!(morse(1.0, 0.0, 1.0, 1.0).validate().is_err());
        assert!(morse(1.0, 8.0, 0.0, 1.0).validate().is_err());
        assert!(morse(1.0, 8.0, 1.0, 1.0).validate().is_ok());
    }

    #[test]
    fn morse_bound_level_count() {
        assert_eq!(Morse { mass: 1.0, v_m: 8.0, a: 1.0, r_m: 1.0 }.bound_level_count(1.0), 4);
        assert_eq!(Morse { mass: 1.0, v_m: 8.0, a: 0.25, r_m: 3.0 }.bound_level_count(1.0), 16);
        assert_eq!(Morse { mass: 1.0, v_m: 0.01, a: 1.0, r_m: 1.0 }.bound_level_count(1.0), 0);
    }

    proptest! {
        #[test]
        fn harmonic_plus_linear_is_shifted(m in 0.2f64..5.0, omega in 0.2f64..5.0, c in 0.0f64..5.0, r in 0.0f64..10.0) {
            let hpl = HarmonicPlusLinear3D { mass: m, omega, c };
            let a = PotentialModel::HarmonicPlusLinear3D(hpl).evaluate(r);
            let b = hpl.as_shifted().evaluate(r);
            let scale = 0.5 * m * omega * omega * r * r + c * r + hpl.as_shifted().v_m;
            prop_assert!((a - b).abs() <= 1e-12 * scale.max(1e-12));
        }

        #[test]
        fn taylor_reproduces_potential(order in 1usize..6, m in 0.5f64..2.0, a in 0.5f64..1.5, r_m in 0.0f64..2.0) {
            let model = morse(m, 4.0, a, r_m);
            let t = model.taylor_at_origin(order);
            let r: f64 = 1e-3;
            let remainder = (model.evaluate(r) - t.eval(r)).abs();
            let scale = 4.0 * (2.0 * a * r_m).exp() * (2.0 * a).powi(order as i32 + 1);
            prop_assert!(remainder <= 2.0 * scale * r.powi(order as i32 + 1) + 1e-13 * scale);
        }
    }
}
