//! Charts, polynomial vector fields and polynomial maps between charts.

use alloc::string::String;

use crate::algebra::AlgebraError;

mod chart;
mod field;
mod map;

pub use chart::{Chart, RationalPoint};
pub use field::{lie_bracket, VectorField};
pub use map::{related_check, submersion_certificate, FlagStatus, MapAssertions, MapPattern, PolyMap, SubmersionCertificate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("expected chart {expected}, found {found}")]
    ChartMismatch { expected: String, found: String },
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point lies outside the domain of chart {chart}")]
    OutsideDomain { chart: String },
    #[error("variable {0} appears twice")]
    DuplicateVariable(String),
    #[error("the zero polynomial cannot be avoided")]
    ZeroAvoid,
    #[error("map {map} sends domain points into the avoided set of its target")]
    AvoidNotPreserved { map: String },
    #[error("map {map} declares {flag} structural but matches no known pattern")]
    UnrecognizedPattern { map: String, flag: &'static str },
    #[error("proposed inverse of {map} fails to compose to the identity")]
    InverseCheckFailed { map: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl GeometryError {
    pub fn is_cap(&self) -> bool {
        matches!(self, GeometryError::Algebra(e) if e.is_cap())
    }
}
