use thiserror::Error;

/// Every domain failure the library can report.
///
/// Each variant maps to a stable machine-readable string through [`Error::code`],
/// which the command-line front end forwards verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("input must be non-negative (entry {index} is negative)")]
    NegativeInput { index: usize },
    #[error("could not parse {what}: {reason}")]
    Parse { what: &'static str, reason: String },

    #[error("no full-rank basis exists; the system is unbounded or rank deficient")]
    UnboundedOrRankDeficient,
    #[error("dimension {dim} exceeds the oracle limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("size n = {n} exceeds the enumeration limit {max}")]
    SizeTooLarge { n: usize, max: usize },
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("the candidate deformation is empty")]
    EmptyQ,
    #[error("inequality row {row} is never attained with equality")]
    NonTight { row: usize },
    #[error("facet intersection at vertex {vertex} of the base polytope is not a single vertex")]
    NonVertexIntersection { vertex: usize },

    #[error("matrix is not a vertex: {reason}")]
    NotAVertex { reason: String },
    #[error("row {row} is a zero row")]
    ZeroRow { row: usize },
    #[error("vertices are not adjacent")]
    NotAdjacent,
    #[error("edge formula violated: {0}")]
    FormulaViolation(String),

    #[error("deforming vector is outside the deformation cone (hook sum {index} too small)")]
    NotInCone { index: usize },

    #[error("net flow is infeasible (prefix sum {index} is negative)")]
    Infeasible { index: usize },
    #[error("critical position equals n; the flow polytope is a single point")]
    CriticalAtN,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::NegativeInput { .. } => "negative_input",
            Error::Parse { .. } => "parse_error",
            Error::UnboundedOrRankDeficient => "unbounded_or_rank_deficient",
            Error::DimensionTooLarge { .. } => "dimension_too_large",
            Error::SizeTooLarge { .. } => "size_too_large",
            Error::EmptyPolytope => "empty_polytope",
            Error::EmptyQ => "empty_q",
            Error::NonTight { .. } => "non_tight",
            Error::NonVertexIntersection { .. } => "non_vertex_intersection",
            Error::NotAVertex { .. } => "not_a_vertex",
            Error::ZeroRow { .. } => "zero_row",
            Error::NotAdjacent => "not_adjacent",
            Error::FormulaViolation(_) => "formula_violation",
            Error::NotInCone { .. } => "not_in_cone",
            Error::Infeasible { .. } => "infeasible",
            Error::CriticalAtN => "critical_at_n",
            Error::PreconditionViolated(_) => "precondition_violated",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
