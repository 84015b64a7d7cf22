//! Radial Schrödinger eigenproblems for central potentials.
//!
//! The crate computes bound-state spectra with the origin condition either
//! imposed (`u(0) = 0`, the Hamiltonian `H`) or left free (the extended
//! operator `H_d`, realized numerically by a Neumann or full-line criterion),
//! together with the point-supported correction `Q_{λ,ℓ}(δ)` that separates
//! the two operators on singular radial solutions.
//!
//! Module map:
//!
//! * [`specfun`]: Hermite and generalized Laguerre polynomials, `ln Γ`, Simpson quadrature.
//! * [`potential`]: potential models, effective potential, parabolic fits, Taylor data.
//! * [`analytic`]: closed-form shifted-harmonic and Morse levels and eigenfunctions.
//! * [`frobenius`]: series solutions at the origin and the delta expansion.
//! * [`numerov`]: shooting solver under selectable origin boundary conditions.
//! * [`compare`]: spectrum comparisons, level classification, sweeps.
//! * [`format`]: deterministic CSV / JSON number formatting shared by the reports.

pub mod analytic;
pub mod compare;
pub mod error;
pub mod format;
pub mod frobenius;
pub mod numerov;
pub mod potential;
pub mod specfun;

pub use analytic::{EigenPair, Wavefunction};
pub use compare::{Classification, LevelSource, SpectrumReport, SpectrumRow, SweepRow};
pub use error::{Error, Result};
pub use frobenius::{DeltaExpansion, DeltaTerm, SeriesSolution};
pub use numerov::{BoundaryCondition, RadialGrid, ShootingResult, SolverOptions};
pub use potential::{
    CenteredHarmonic, HarmonicPlusLinear3D, Morse, PotentialModel, ShiftedHarmonic, TaylorSeries,
    UnitSystem,
};
