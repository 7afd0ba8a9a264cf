use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate pencil: the two forms are linearly dependent")]
    DegeneratePencil,
    #[error("singular frame: the transform is not invertible")]
    SingularFrame,
    #[error("coincident parameters: tangent lines at the same point do not meet in a vertex")]
    CoincidentParameters,
    #[error("repeated root in polygon vertex list")]
    RepeatedRoot,
    #[error("biform is not symmetric")]
    Asymmetric,
    #[error("the zero form does not define a curve")]
    ZeroCurve,
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("degenerate conic pair: {0}")]
    DegenerateConicPair(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
