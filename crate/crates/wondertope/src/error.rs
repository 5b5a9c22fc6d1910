use thiserror::Error;

/// Every failure mode of the library. Messages are stable: the CLI prints them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("map image inside pole locus")]
    ImageInPoleLocus,
    #[error("non-simple pole")]
    NonSimplePole,
    #[error("residue along a constant function")]
    ConstantDivisor,
    #[error("not affine-linear: {0}")]
    NotLinear(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("overlapping chart variables: {0}")]
    OverlappingCharts(String),
    #[error("polytope must avoid the hyperplane at infinity")]
    Unbounded,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("not a face: {0}")]
    NotAFace(String),
    #[error("normal triangulation undefined")]
    NormalTriangulationUndefined,
    #[error("blow-up is an isomorphism")]
    BlowupIsIsomorphism,
    #[error("chart path unsupported: {0}")]
    ChartPathUnsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
