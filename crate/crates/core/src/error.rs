use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node count {0} is too small (need at least {1})")]
    TooFewNodes(usize, usize),
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("invalid radial extent: eps_min = {eps_min}, R = {r_max}")]
    InvalidRadialExtent { eps_min: f64, r_max: f64 },
    #[error("cutoff sequence needs at least {needed} entries, got {got}")]
    TooFewCutoffs { needed: usize, got: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("weighted trace `{component}` diverges as eps -> 0 (field outside the operator domain)")]
    DivergentTrace { component: &'static str },
    #[error("cutoff {0} is not resolvable by the grid")]
    UnresolvedCutoff(f64),
    #[error("need at least {needed} angular samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
