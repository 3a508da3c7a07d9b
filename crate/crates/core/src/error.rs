use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("length mismatch: expected {expected} values, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("grids are not nested: fine has {fine} cells, coarse has {coarse}")]
    NonNestedGrids { fine: usize, coarse: usize },
    #[error("trace lives on {found}, expected {expected}")]
    WrongPart { expected: &'static str, found: &'static str },
    #[error("coefficient {value} falls below the ellipticity bound {alpha} at ({x}, {y})")]
    NotElliptic { value: f64, alpha: f64, x: f64, y: f64 },
    #[error("singular system: no Dirichlet boundary part")]
    SingularSystem,
    #[error("linear solve reached relative residual {residual:e}, above the {tolerance:e} contract")]
    SolverNonConvergence { residual: f64, tolerance: f64 },
    #[error("matrix factorization failed at row {0} (matrix not positive definite)")]
    NotPositiveDefinite(usize),
    #[error("grid too large for dense assembly: {nodes} nodes on Gamma1 exceeds {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}
