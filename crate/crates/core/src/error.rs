use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a circuit needs at least one port")]
    ZeroPorts,

    #[error("port count mismatch: {left} vs {right}")]
    PortMismatch { left: usize, right: usize },

    #[error("port {index} out of range for a {ports}-port model")]
    PortOutOfRange { index: usize, ports: usize },

    #[error("feedback needs at least 2 ports, model has {0}")]
    FeedbackArity(usize),

    #[error("singular feedback loop {k}->{l}: S[{k},{l}] = {s_kl}")]
    SingularLoop { k: usize, l: usize, s_kl: Complex64 },

    #[error("singular parameter point (phi = {phi}, mu = {mu})")]
    SingularPoint { phi: f64, mu: f64 },

    #[error("small-signal gain diverges at phi = {0}")]
    DivergentGain(f64),

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("malformed model: {0}")]
    Shape(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("control phase must be exactly 0 or pi, got {0}")]
    ControlPhaseDomain(f64),

    #[error("selector entry {index} is {value}, expected 0 or 1")]
    NonBinary { index: usize, value: i64 },

    #[error("output amplitudes need an undriven circuit (L = 0)")]
    DrivenCircuit,

    #[error("invalid circuit specification: {0}")]
    Spec(String),
}
