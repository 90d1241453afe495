use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed network document: {0}")]
    Malformed(String),

    #[error("invalid rational `{0}`")]
    BadRational(String),

    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("vertex id {id} out of range 1..={n}")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("vertex pair must be distinct, got ({0}, {0})")]
    DegeneratePair(usize),

    #[error("cannot delete the only vertex of a network")]
    LastVertex,

    #[error("bridge weight between {0} and {1} is zero")]
    ZeroBridge(usize, usize),

    #[error("sites {0} and {1} are not cospectral")]
    NotCospectral(usize, usize),

    #[error("inexact polynomial division: {0}")]
    InexactDivision(String),

    #[error("numerator and denominator of {0} share a root after cancellation")]
    SharedRoot(&'static str),

    #[error("polynomial must be non-constant")]
    ConstantPolynomial,

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("photon number mismatch: input {input}, output {output}")]
    PhotonNumber { input: usize, output: usize },

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("total intensity after background subtraction is not positive ({0})")]
    NoSignal(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
