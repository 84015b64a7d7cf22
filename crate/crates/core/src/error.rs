use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("centrifugal term is singular at r = 0 for ell = {ell}")]
    Singularity { ell: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no classically permitted region at E = {energy} (potential minimum {minimum})")]
    NoClassicalRegion { energy: f64, minimum: f64 },

    #[error("no bound state with n = {n}{}", match .max_n { Some(m) => format!(": only n <= {m} are bound"), None => ": the well holds no bound level".to_string() })]
    NoBoundState { n: usize, max_n: Option<usize> },

    #[error("logarithmic resonance: ell = {ell}, lambda = -ell has a nonzero consistency sum {residual:e} at k = {k}; no pure power series exists")]
    LogResonance { ell: u32, k: usize, residual: f64 },

    #[error("energy bracket does not isolate level n = {n}: node counts {nodes_lo} at E_lo and {nodes_hi} at E_hi")]
    Bracket {
        n: usize,
        nodes_lo: usize,
        nodes_hi: usize,
    },

    #[error("solver failed to converge: {0}")]
    Convergence(String),
}

impl Error {
    /// True for failures of the iterative solver rather than of the problem
    /// statement itself.
    pub fn is_solver_error(&self) -> bool {
        matches!(self, Error::Bracket { .. } | Error::Convergence(_))
    }
}
