use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^16")]
    InvalidModulus(u32),
    #[error("presentation does not define a finite-dimensional algebra")]
    InfiniteDimensional,
    #[error("complex is not perfect: {0}")]
    NotPerfect(String),
    #[error("map is not a degreewise split monomorphism")]
    NotSplitMono,
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("composite of consecutive maps is not nullhomotopic")]
    CompositeNotNull,
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("square does not commute")]
    NotCommuting,
    #[error("layer triangle {0} is not exact")]
    InvalidTriangle(usize),
    #[error("retraction data does not compose to the identity up to homotopy")]
    InvalidRetract,
    #[error("endomorphism does not act on the object it was paired with")]
    EndomorphismObjectMismatch,
    #[error("complex is not minimal")]
    NotMinimal,
    #[error("unsupported algebra for this operation: {0}")]
    WrongAlgebra(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
