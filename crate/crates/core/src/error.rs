use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A floating-point predicate landed inside the guard band of its decision boundary.
    #[error("ambiguous predicate: {0}")]
    AmbiguousPredicate(String),

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("infeasible configuration: points {i} and {j} are at sup distance {dist} < 1")]
    Infeasible { i: usize, j: usize, dist: f64 },

    #[error("duplicate point at index {index}: ({x}, {y})")]
    DuplicatePoint { index: usize, x: f64, y: f64 },

    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },

    #[error("coordinate at index {index} is not a representable lattice integer")]
    NotLattice { index: usize },

    #[error("invalid face selection: {0}")]
    InvalidSelection(String),

    #[error("angle {0} outside (0, 2pi]")]
    OutOfRange(f64),

    #[error("vector is not a Euclidean unit vector (norm {0})")]
    NotUnit(f64),

    #[error("graph is not planar: edges {0} and {1} cross")]
    NotPlanar(usize, usize),

    #[error("vertex {vertex} has degree {degree} above the allowed {max}")]
    DegreeExceeded { vertex: usize, degree: usize, max: usize },

    #[error("graph is not admissible: {0}")]
    NotAdmissible(String),

    #[error("invalid edge list: {0}")]
    InvalidEdge(String),

    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("degenerate target shape: {0}")]
    DegenerateTarget(String),

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("identity violated: {0}")]
    IdentityViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
