//! Error type shared across the geometry modules.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("vector is not a hyperboloid point: ⟨p,p⟩ = {inner}, p₀ = {time_component}")]
    NotAPoint { inner: f64, time_component: f64 },

    #[error("vector is not tangent at its base point: ⟨p,v⟩ = {0}")]
    NotTangent(f64),

    #[error("expected a unit vector: ⟨v,v⟩ = {0}")]
    NotUnit(f64),

    #[error("matrix does not preserve the Minkowski form (residual {0})")]
    NotIsometry(f64),

    #[error("coincident points give a degenerate direction")]
    DegenerateDirection,

    #[error("tangent vectors are based at different points (base distance {0})")]
    BaseMismatch(f64),

    #[error("frame is not orthonormal (Gram residual {0})")]
    NonOrthonormalFrame(f64),

    #[error("hyperplane normal is not unit spacelike: ⟨u,u⟩ = {0}")]
    BadHyperplaneNormal(f64),

    #[error("geodesic is contained in the hyperplane")]
    ContainedInHyperplane,

    #[error("hypercube construction failed: {0}")]
    DegenerateCube(String),

    #[error("cube faces are not planar (max vertex residual {0})")]
    NonPlanarFaces(f64),

    #[error("faces {0} and {1} are not adjacent")]
    NonAdjacentFaces(usize, usize),

    #[error("seed placement is not isometric on the seed face (defect {0})")]
    SeedNotIsometric(f64),

    #[error("polygon data does not close up (defect {0})")]
    NonRealizablePolygon(f64),

    #[error("chord ({i},{j}) is shorter than the curvature −1 model: {test} < {model}")]
    ComparisonHypothesisViolated { i: usize, j: usize, test: f64, model: f64 },

    #[error("arrangement contains a duplicate hyperplane (indices {0}, {1})")]
    DuplicateHyperplane(usize, usize),

    #[error("cube does not meet the geodesic in two boundary points")]
    CubeGeodesicIncidence,

    #[error("empty sample set")]
    EmptySamples,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
