use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix does not preserve the Hermitian form (residual {0:e})")]
    NotFormPreserving(f64),
    #[error("determinant {re}+{im}i is not within tolerance of a cube root of unity")]
    BadDeterminant { re: f64, im: f64 },
    #[error("the point at infinity has no Heisenberg coordinates")]
    PointAtInfinity,
    #[error("points are projectively equal")]
    CoincidentPoints,
    #[error("parameters ({alpha1}, {alpha2}) lie outside the guarded open square")]
    OutOfDomain { alpha1: f64, alpha2: f64 },
    #[error("{0} is not unipotent")]
    NotUnipotent(&'static str),
    #[error("element fixes the point at infinity and has no isometric sphere")]
    FixesInfinity,
    #[error("w^2 = {w2} exceeds 2cos(alpha) = {bound}")]
    OffSphere { w2: f64, bound: f64 },
    #[error("parameters lie outside the closure of the discreteness region (D = {0})")]
    OutsideRegion(f64),
    #[error("sphere radius must be positive, got {0}")]
    BadRadius(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
