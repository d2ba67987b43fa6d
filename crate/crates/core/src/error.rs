use thiserror::Error;

/// Errors surfaced by the numeric layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma pole at nonpositive integer {0}")]
    Pole(f64),
    #[error("field has wrong domain tag: expected {expected}, got {got}")]
    DomainTag { expected: &'static str, got: &'static str },
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("invalid potential spec: {0}")]
    Spec(String),
    #[error("input violates edge-decay precondition (edge sup {0:.3e})")]
    Decay(f64),
    #[error("derivative order {0} unsupported (max 4)")]
    UnsupportedOrder(usize),
    #[error("kernel evaluated at its singular point")]
    SingularPoint,
    #[error("dilation factor {0} does not map the grid to a grid (use a power of 2)")]
    GridIncompatible(f64),
    #[error("theorem hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("empty fit window")]
    EmptyWindow,
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(String),
}
