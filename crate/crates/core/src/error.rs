use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("site count {0} outside the supported range 2..=20")]
    SiteCount(usize),

    #[error("sites {i} and {j} coincide (distance {distance:e})")]
    CoincidentSites { i: usize, j: usize, distance: f64 },

    #[error("interaction exponent must be positive and finite, got {0}")]
    InvalidExponent(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("cardinality {n} out of range for {k} sites")]
    CardinalityOutOfRange { n: usize, k: usize },

    #[error("occupation mask {mask:#b} does not fit {k} sites")]
    MaskOutOfRange { mask: u32, k: usize },

    #[error("ensemble probabilities sum to {total}, expected 1")]
    UnnormalizedEnsemble { total: f64 },

    #[error("infeasible density: {0}")]
    InfeasibleDensity(String),

    #[error("mean particle number {lambda} outside [0, {k}]")]
    MassOutOfRange { lambda: f64, k: usize },

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    #[error("pivot {pivot:e} below the breakdown threshold")]
    NumericalBreakdown { pivot: f64 },

    #[error("simplex did not terminate within {0} pivots")]
    IterationLimit(usize),

    #[error("vertex enumeration too large: {columns} columns, {bases} candidate bases")]
    ProblemTooLarge { columns: usize, bases: u128 },

    #[error("bad range: {0}")]
    BadRange(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("potential at site {site} is {value}, wells must be attractive")]
    NonAttractivePotential { site: usize, value: f64 },

    #[error("scale parameter must be positive and finite, got {0}")]
    InvalidScale(f64),

    #[error("invalid symmetry: {0}")]
    InvalidSymmetry(String),
}
