//! Numerov shooting for bound states of `u'' = q(r) u` with
//! `q = (2m/ħ²)(V_eff(r) − E)`.
//!
//! Levels are bracketed by Sturm node counting and refined on the mismatch
//! of logarithmic derivatives at the outer turning point. The eigenvalue of
//! the finite box `[r_start, r_end]` with `u(r_end) = 0` is what is found;
//! the box is made wide enough that the truncation is below `e^{-50}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::{lagrange5, EigenPair, Wavefunction};
use crate::error::{Error, Result};
use crate::format::{csv_num, to_json};
use crate::frobenius::series_coefficients;
use crate::potential::PotentialModel;
use crate::specfun::simpson_uniform;

/// Uniform grid `r_i = r_start + i h`, `i = 0 .. count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_start: f64,
    pub r_end: f64,
    pub h: f64,
    pub count: usize,
}

impl RadialGrid {
    pub const MIN_POINTS: usize = 64;

    pub fn new(r_start: f64, r_end: f64, count: usize) -> Result<Self> {
        if !(r_start.is_finite() && r_end.is_finite() && r_end > r_start) {
            return Err(Error::InvalidInput(format!(
                "grid needs finite r_start < r_end, got [{r_start}, {r_end}]"
            )));
        }
        if count < Self::MIN_POINTS {
            return Err(Error::InvalidInput(format!(
                "grid needs at least {} points, got {count}",
                Self::MIN_POINTS
            )));
        }
        let h = (r_end - r_start) / (count - 1) as f64;
        Ok(Self { r_start, r_end, h, count })
    }

    /// Grid with step exactly `h`; `r_end` is moved to the nearest grid point.
    pub fn with_step(r_start: f64, r_end: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidInput(format!("grid step must be positive, got {h}")));
        }
        if !(r_start.is_finite() && r_end.is_finite() && r_end > r_start) {
            return Err(Error::InvalidInput(format!(
                "grid needs finite r_start < r_end, got [{r_start}, {r_end}]"
            )));
        }
        let intervals = ((r_end - r_start) / h).round();
        if intervals > 5e7 {
            return Err(Error::InvalidInput(format!("grid step {h} gives too many points")));
        }
        let count = intervals as usize + 1;
        if count < Self::MIN_POINTS {
            return Err(Error::InvalidInput(format!(
                "grid step {h} leaves only {count} points on [{r_start}, {r_end}]; at least {} are needed",
                Self::MIN_POINTS
            )));
        }
        Ok(Self {
            r_start,
            r_end: r_start + (count - 1) as f64 * h,
            h,
            count,
        })
    }

    pub fn r(&self, i: usize) -> f64 {
        self.r_start + i as f64 * self.h
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.r(i)).collect()
    }
}

/// Condition imposed at the left end of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// `u(0) = 0`.
    #[serde(rename = "dirichlet")]
    DirichletOrigin,
    /// `u'(0) = 0`.
    #[serde(rename = "neumann")]
    NeumannOrigin,
    /// Decay on both sides of the analytically continued potential.
    #[serde(rename = "full_line")]
    FullLine,
}

impl BoundaryCondition {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryCondition::DirichletOrigin => "dirichlet",
            BoundaryCondition::NeumannOrigin => "neumann",
            BoundaryCondition::FullLine => "full_line",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(BoundaryCondition::DirichletOrigin),
            "neumann" => Ok(BoundaryCondition::NeumannOrigin),
            "full_line" => Ok(BoundaryCondition::FullLine),
            other => Err(Error::InvalidInput(format!(
                "unknown boundary condition {other:?} (expected dirichlet, neumann or full_line)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Grid step; by default a quarter-thousandth of the classical width.
    pub step: Option<f64>,
    /// Largest accepted scaled log-derivative mismatch at convergence.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            step: None,
            tolerance: 1e-8,
            max_iterations: 200,
        }
    }
}

const POINTS_PER_WIDTH: f64 = 4000.0;
const PAD_WIDTHS: f64 = 8.0;
const PAD_DECAY: f64 = 50.0;
const SERIES_ORDER: usize = 12;

/// A converged level with its normalized samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    pub n: usize,
    pub energy: f64,
    pub ell: u32,
    pub bc: BoundaryCondition,
    pub grid: RadialGrid,
    pub samples: Vec<f64>,
    pub u0: f64,
    pub du0: f64,
    pub iterations: usize,
    /// Scaled log-derivative mismatch at the returned energy.
    pub mismatch: f64,
    pub mass: f64,
    pub hbar: f64,
}

#[derive(Serialize)]
struct ShootingSummary<'a> {
    n: usize,
    #[serde(rename = "E")]
    energy: f64,
    u0: f64,
    du0: f64,
    bc: BoundaryCondition,
    grid: &'a RadialGrid,
}

impl ShootingResult {
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, u| m.max(u.abs()))
    }

    pub fn to_eigen_pair(&self) -> EigenPair {
        EigenPair {
            n: self.n,
            energy: self.energy,
            u0: self.u0,
            du0: self.du0,
            norm_constant: 1.0,
            full_line_norm_constant: None,
            max_abs: self.max_abs(),
            mass: self.mass,
            hbar: self.hbar,
            wave: Wavefunction::Sampled {
                r_start: self.grid.r_start,
                h: self.grid.h,
                values: self.samples.clone(),
            },
        }
    }

    /// `r,u` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,u\n");
        for (i, u) in self.samples.iter().enumerate() {
            out.push_str(&csv_num(self.grid.r(i)));
            out.push(',');
            out.push_str(&csv_num(*u));
            out.push('\n');
        }
        out
    }

    /// `{n, E, u0, du0, bc, grid}`.
    pub fn to_json(&self) -> String {
        to_json(&ShootingSummary {
            n: self.n,
            energy: self.energy,
            u0: self.u0,
            du0: self.du0,
            bc: self.bc,
            grid: &self.grid,
        })
    }
}

/// Integrates `u'' = q(r) u` across `grid` from the two starting values.
pub fn numerov_integrate(q: impl Fn(f64) -> f64, grid: &RadialGrid, y0: f64, y1: f64) -> Result<Vec<f64>> {
    let factors: Vec<f64> = (0..grid.count)
        .map(|i| 1.0 - grid.h * grid.h * q(grid.r(i)) / 12.0)
        .collect();
    let first = if y0 == 0.0 { 1 } else { 0 };
    check_factors(&factors, first)?;
    Ok(propagate(&factors, &[y0, y1], false).0)
}

fn check_factors(factors: &[f64], first: usize) -> Result<()> {
    for (i, f) in factors.iter().enumerate().skip(first) {
        if !(f.is_finite() && *f > 0.0) {
            return Err(Error::InvalidInput(format!(
                "grid step too coarse for the potential: 1 - h^2 q / 12 = {f} at sample {i}"
            )));
        }
    }
    Ok(())
}

// Numerov recurrence on precomputed f_i = 1 − h² q_i / 12, continuing from
// the given leading samples. A zero sample contributes nothing even where q
// diverges. Returns the samples and the number of sign changes.
fn propagate(f: &[f64], prefix: &[f64], rescale: bool) -> (Vec<f64>, usize) {
    let n = f.len();
    let mut u = Vec::with_capacity(n);
    u.extend_from_slice(&prefix[..prefix.len().min(n)]);
    let fu = |f: f64, u: f64| if u == 0.0 { 0.0 } else { f * u };
    let start = u.len();
    let mut fu_prev = fu(f[start - 2], u[start - 2]);
    for i in start - 1..n - 1 {
        let fu_i = fu(f[i], u[i]);
        let next = (12.0 * u[i] - 10.0 * fu_i - fu_prev) / f[i + 1];
        fu_prev = fu_i;
        u.push(next);
        if rescale && next.abs() > 1e150 {
            for v in u.iter_mut() {
                *v *= 1e-150;
            }
            fu_prev *= 1e-150;
        }
    }
    let nodes = count_nodes(&u);
    (u, nodes)
}

fn count_nodes(u: &[f64]) -> usize {
    let mut nodes = 0;
    let mut last = 0.0;
    for v in u {
        if *v != 0.0 {
            if last != 0.0 && v.signum() != last {
                nodes += 1;
            }
            last = v.signum();
        }
    }
    nodes
}

struct Shooter<'a> {
    model: &'a PotentialModel,
    ell: u32,
    hbar: f64,
    bc: BoundaryCondition,
    grid: RadialGrid,
    // (2m/ħ²) V_eff(r_i); +∞ at r = 0 for ℓ > 0
    base: Vec<f64>,
    k: f64,
    length: f64,
}

impl<'a> Shooter<'a> {
    fn new(
        model: &'a PotentialModel,
        ell: u32,
        hbar: f64,
        bc: BoundaryCondition,
        e_ref: f64,
        opts: &SolverOptions,
    ) -> Result<Self> {
        model.validate()?;
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
        }
        if ell > 0 && bc != BoundaryCondition::DirichletOrigin {
            return Err(Error::Unsupported(format!(
                "{bc} boundary condition is only defined for ell = 0"
            )));
        }
        let (inner, outer) = match bc {
            BoundaryCondition::FullLine => model.turning_points_continued(e_ref)?,
            _ => model.turning_points(e_ref)?,
        };
        let width = (outer - inner).max(1e-6 * outer.abs().max(1.0));
        let k = 2.0 * model.mass() / (hbar * hbar);
        let v_eff = |r: f64| {
            if ell == 0 {
                model.evaluate(r)
            } else {
                let l = ell as f64;
                model.evaluate(r) + l * (l + 1.0) / (k * r * r)
            }
        };
        let pad = |from: f64, dir: f64| {
            let max_len = PAD_WIDTHS * width;
            let step = max_len / 4000.0;
            let mut integral = 0.0;
            let mut dist = 0.0;
            while dist < max_len {
                dist += step;
                let excess = v_eff(from + dir * dist) - e_ref;
                if excess > 0.0 {
                    integral += (k * excess).sqrt() * step;
                }
                if integral >= PAD_DECAY {
                    break;
                }
            }
            dist
        };
        let r_start = match bc {
            BoundaryCondition::FullLine => inner - pad(inner, -1.0),
            _ => 0.0,
        };
        let r_end = outer + pad(outer, 1.0);
        let h = opts.step.unwrap_or(width / POINTS_PER_WIDTH);
        let grid = RadialGrid::with_step(r_start, r_end, h)?;
        let base = (0..grid.count)
            .map(|i| {
                let r = grid.r(i);
                if ell > 0 && r <= 0.0 {
                    f64::INFINITY
                } else {
                    k * v_eff(r)
                }
            })
            .collect();
        Ok(Self {
            model,
            ell,
            hbar,
            bc,
            grid,
            base,
            k,
            length: width,
        })
    }

    fn factors(&self, e: f64) -> Result<Vec<f64>> {
        let c = self.grid.h * self.grid.h / 12.0;
        let ke = self.k * e;
        let f: Vec<f64> = self.base.iter().map(|b| 1.0 - c * (b - ke)).collect();
        check_factors(&f, self.prefix_len() - 2)?;
        Ok(f)
    }

    // Samples taken from the series before the recurrence starts. For ℓ > 0
    // the centrifugal term makes 1 − h²q/12 small or negative at the first
    // few points, so the series carries the solution past them.
    fn prefix_len(&self) -> usize {
        if self.ell == 0 {
            return 2;
        }
        let l = self.ell as f64;
        ((l * (l + 1.0) / 1.2).sqrt().ceil() as usize).max(2) + 1
    }

    // Series on the given branch with a_0 = 1.
    fn series(&self, lambda: i32, e: f64) -> Result<crate::frobenius::SeriesSolution> {
        let taylor = self.model.taylor_at_origin(SERIES_ORDER);
        series_coefficients(
            &taylor,
            self.model.mass(),
            self.hbar,
            self.ell,
            lambda,
            e,
            1.0,
            SERIES_ORDER,
        )
    }

    fn start(&self, e: f64) -> Result<Vec<f64>> {
        match self.bc {
            BoundaryCondition::DirichletOrigin => {
                let sol = self.series(self.ell as i32 + 1, e)?;
                Ok((0..self.prefix_len()).map(|i| sol.eval(self.grid.r(i))).collect())
            }
            BoundaryCondition::NeumannOrigin => {
                let sol = self.series(0, e)?;
                Ok(vec![1.0, sol.eval(self.grid.h)])
            }
            BoundaryCondition::FullLine => Ok(vec![0.0, 1.0]),
        }
    }

    fn nodes(&self, e: f64) -> Result<usize> {
        let f = self.factors(e)?;
        Ok(propagate(&f, &self.start(e)?, true).1)
    }

    // Last classically allowed sample, kept away from the ends.
    fn match_index(&self, e: f64) -> usize {
        let ke = self.k * e;
        let n = self.grid.count;
        let m = self.base.iter().rposition(|b| *b < ke).unwrap_or(n / 2);
        m.clamp(self.prefix_len() + 1, n - 4)
    }

    // Outward and inward solutions meeting at index m, inward scaled to agree there.
    fn solutions(&self, e: f64) -> Result<(usize, Vec<f64>, Vec<f64>)> {
        let f = self.factors(e)?;
        let prefix = self.start(e)?;
        let n = self.grid.count;
        let m = self.match_index(e);
        let (outward, _) = propagate(&f[..=m + 1], &prefix, true);
        let reversed: Vec<f64> = f[m - 1..].iter().rev().copied().collect();
        let (mut inward, _) = propagate(&reversed, &[0.0, 1.0], true);
        inward.reverse();
        // inward[j] is the sample at index m − 1 + j
        debug_assert_eq!(inward.len(), n - m + 1);
        Ok((m, outward, inward))
    }

    fn mismatch(&self, e: f64) -> Result<f64> {
        let (m, o, i) = self.solutions(e)?;
        let h2 = 2.0 * self.grid.h;
        let lo = (o[m + 1] - o[m - 1]) / (h2 * o[m]);
        let li = (i[2] - i[0]) / (h2 * i[1]);
        let g = self.length * (lo - li);
        if g.is_finite() {
            Ok(g)
        } else {
            Err(Error::Convergence(format!(
                "matching point coincides with a node at E = {e}"
            )))
        }
    }

    fn eigenfunction(&self, e: f64) -> Result<Vec<f64>> {
        let (m, o, i) = self.solutions(e)?;
        let scale = o[m] / i[1];
        let mut u: Vec<f64> = o[..=m].to_vec();
        u.extend(i[2..].iter().map(|v| v * scale));
        let u2: Vec<f64> = u.iter().map(|v| v * v).collect();
        let norm = simpson_uniform(self.grid.h, &u2)?.sqrt();
        let sign = if u[m] < 0.0 { -1.0 } else { 1.0 };
        for v in u.iter_mut() {
            *v *= sign / norm;
        }
        Ok(u)
    }

    fn origin_values(&self, e: f64, u: &[f64]) -> Result<(f64, f64)> {
        match self.bc {
            BoundaryCondition::DirichletOrigin => {
                let du0 = if self.ell == 0 {
                    u[1] / self.series(1, e)?.eval(self.grid.h)
                } else {
                    0.0
                };
                Ok((0.0, du0))
            }
            BoundaryCondition::NeumannOrigin => Ok((u[0], 0.0)),
            BoundaryCondition::FullLine => {
                Ok(lagrange5(self.grid.r_start, self.grid.h, u, 0.0).unwrap_or((0.0, 0.0)))
            }
        }
    }
}

/// Level `n` inside `[e_lo, e_hi]`. The grid is sized from the turning
/// points at `e_hi`; the bracket must satisfy `nodes(e_lo) ≤ n < nodes(e_hi)`.
#[allow(clippy::too_many_arguments)]
pub fn eigenvalue_search(
    model: &PotentialModel,
    ell: u32,
    hbar: f64,
    bc: BoundaryCondition,
    n: usize,
    e_lo: f64,
    e_hi: f64,
    opts: &SolverOptions,
) -> Result<ShootingResult> {
    if !(e_lo.is_finite() && e_hi.is_finite() && e_lo < e_hi) {
        return Err(Error::InvalidInput(format!(
            "energy bracket must satisfy E_lo < E_hi, got [{e_lo}, {e_hi}]"
        )));
    }
    let shooter = Shooter::new(model, ell, hbar, bc, e_hi, opts)?;
    let nodes_lo = shooter.nodes(e_lo)?;
    let nodes_hi = shooter.nodes(e_hi)?;
    if !(nodes_lo <= n && n < nodes_hi) {
        return Err(Error::Bracket { n, nodes_lo, nodes_hi });
    }

    let (mut lo, mut hi) = (e_lo, e_hi);
    let scale = (e_hi - e_lo).max(e_lo.abs()).max(e_hi.abs());
    let mut iterations = 0;
    let width_ok = |lo: f64, hi: f64, rel: f64| hi - lo <= rel * scale.max(lo.abs()).max(hi.abs());
    // node bisection until the bracket holds level n alone
    while !width_ok(lo, hi, 1e-9) {
        iterations += 1;
        if iterations > opts.max_iterations {
            return Err(Error::Convergence(format!("node bisection for n = {n} did not settle")));
        }
        let mid = 0.5 * (lo + hi);
        if shooter.nodes(mid)? <= n {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let (mut a, mut b) = (lo, hi);
    let mut fa = shooter.mismatch(a)?;
    let mut fb = shooter.mismatch(b)?;
    let (mut best, mut best_g) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    if fa > 0.0 && fb < 0.0 {
        // Illinois regula falsi
        let mut side = 0i8;
        while iterations < opts.max_iterations {
            iterations += 1;
            let mut c = (a * fb - b * fa) / (fb - fa);
            if !(c > a && c < b) {
                c = 0.5 * (a + b);
            }
            if c <= a || c >= b {
                break;
            }
            let fc = shooter.mismatch(c)?;
            if fc.abs() < best_g.abs() {
                best = c;
                best_g = fc;
            }
            if fc == 0.0 {
                break;
            }
            if fc < 0.0 {
                b = c;
                fb = fc;
                if side == -1 {
                    fa *= 0.5;
                }
                side = -1;
            } else {
                a = c;
                fa = fc;
                if side == 1 {
                    fb *= 0.5;
                }
                side = 1;
            }
            if width_ok(a, b, 4.0 * f64::EPSILON) {
                break;
            }
        }
    } else {
        // no clean sign change: fall back to node bisection at full precision
        while !width_ok(lo, hi, 4.0 * f64::EPSILON) && iterations < opts.max_iterations {
            iterations += 1;
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if shooter.nodes(mid)? <= n {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best = 0.5 * (lo + hi);
        best_g = shooter.mismatch(best)?;
    }
    if best_g.abs() > opts.tolerance && !width_ok(a.min(lo), b.max(hi), 1e-12) {
        return Err(Error::Convergence(format!(
            "log-derivative mismatch {best_g:e} above tolerance {:e} for n = {n}",
            opts.tolerance
        )));
    }

    let samples = shooter.eigenfunction(best)?;
    let found = count_nodes(&samples);
    if found != n {
        return Err(Error::Convergence(format!(
            "eigenfunction at E = {best} has {found} nodes, expected {n}"
        )));
    }
    let (u0, du0) = shooter.origin_values(best, &samples)?;
    Ok(ShootingResult {
        n,
        energy: best,
        ell,
        bc,
        grid: shooter.grid,
        samples,
        u0,
        du0,
        iterations,
        mismatch: best_g,
        mass: model.mass(),
        hbar,
    })
}

/// Level `n` with the bracket found automatically from the well minimum.
pub fn find_level(
    model: &PotentialModel,
    ell: u32,
    hbar: f64,
    bc: BoundaryCondition,
    n: usize,
    opts: &SolverOptions,
) -> Result<ShootingResult> {
    model.validate()?;
    let (_, v_min) = model.minimum()?;
    let quantum = model.parabolic_fit().map(|p| hbar * p.omega).unwrap_or(1.0).max(1e-300);
    let asymptote = model.asymptote();
    let e_lo = v_min;
    let mut step = quantum * (n as f64 + 1.0 + ell as f64);
    let mut e_hi = v_min + step;
    let mut last_nodes = None;
    for _ in 0..200 {
        if let Some(limit) = asymptote {
            if e_hi >= limit {
                let below = last_nodes.map_or(v_min, |(e, _)| e);
                e_hi = 0.5 * (below + limit);
                if e_hi >= limit || limit - e_hi <= 1e-14 * limit.abs().max(quantum) {
                    break;
                }
            }
        }
        let shooter = Shooter::new(model, ell, hbar, bc, e_hi, opts)?;
        let nodes = shooter.nodes(e_hi)?;
        if nodes > n {
            return eigenvalue_search(model, ell, hbar, bc, n, e_lo, e_hi, opts);
        }
        last_nodes = Some((e_hi, nodes));
        step *= 2.0;
        e_hi = v_min + step;
    }
    match asymptote {
        Some(_) => {
            let count = last_nodes.map_or(0, |(_, c)| c);
            Err(Error::NoBoundState {
                n,
                max_n: count.checked_sub(1),
            })
        }
        None => Err(Error::Convergence(format!("could not bracket level n = {n}"))),
    }
}

/// Levels `0 .. count`.
pub fn find_levels(
    model: &PotentialModel,
    ell: u32,
    hbar: f64,
    bc: BoundaryCondition,
    count: usize,
    opts: &SolverOptions,
) -> Result<Vec<ShootingResult>> {
    (0..count).map(|n| find_level(model, ell, hbar, bc, n, opts)).collect()
}

/// `lim_{r→0} [u₁ u₂' − u₂ u₁']` from the reported origin values.
pub fn wronskian_limit(a: &ShootingResult, b: &ShootingResult) -> Result<f64> {
    if a.bc == BoundaryCondition::FullLine || b.bc == BoundaryCondition::FullLine {
        return Err(Error::Domain(
            "the origin Wronskian is defined for half-line solutions only".into(),
        ));
    }
    Ok(a.u0 * b.du0 - b.u0 * a.du0)
}
