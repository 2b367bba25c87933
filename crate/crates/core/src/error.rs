use thiserror::Error;

/// Every failure a core operation can report.
///
/// Variants split into two families: refutations (the input is well formed
/// but lacks the mathematical property an operation needs) and usage or
/// resource problems. [`Error::is_refutation`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema violation at `{pointer}`: {message}")]
    Schema { pointer: String, message: String },
    #[error("relations are not quadratic: relation {index} has degree {degree}")]
    NotQuadratic { index: usize, degree: usize },
    #[error("quiver has an oriented cycle through vertex `{0}`")]
    Cyclic(String),
    #[error("not properly graded: maximal bound paths of lengths {lengths:?} (e.g. {witnesses:?})")]
    NotProperlyGraded {
        lengths: Vec<usize>,
        witnesses: Vec<String>,
    },
    #[error("not nicely graded: arrow `{0}` breaks every degree function")]
    NotNicelyGraded(String),
    #[error("algebra is not finite dimensional within degree {0}")]
    Infinite(usize),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("trivial extension is not quadratic: dimensions differ in degree {degree}")]
    NonQuadraticExtension { degree: usize },
    #[error("internal verification failed: {0}")]
    Verification(String),
    #[error("not an n-slice: {0}")]
    NotSlice(String),
    #[error("not of finite type: {0}")]
    NotFiniteType(String),
    #[error("vertex {vertex} is not a {expected} of the slice: {witness}")]
    NotSourceOrSink {
        vertex: String,
        expected: &'static str,
        witness: String,
    },
    #[error("not a complete slice: {0}")]
    IncompleteSlice(String),
    #[error("dual translation unavailable: {0}")]
    NoDualTranslation(String),
    #[error("window [{lo},{hi}] too small: levels [{need_lo},{need_hi}] required")]
    Margin {
        lo: i64,
        hi: i64,
        need_lo: i64,
        need_hi: i64,
    },
    #[error("empty level range [{0},{1}]")]
    EmptyRange(i64, i64),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True when the error refutes a mathematical property of a valid input.
    pub fn is_refutation(&self) -> bool {
        matches!(
            self,
            Error::NotQuadratic { .. }
                | Error::Cyclic(_)
                | Error::NotProperlyGraded { .. }
                | Error::NotNicelyGraded(_)
                | Error::Infinite(_)
                | Error::NonQuadraticExtension { .. }
                | Error::NotSlice(_)
                | Error::NotFiniteType(_)
                | Error::NotSourceOrSink { .. }
                | Error::IncompleteSlice(_)
                | Error::NoDualTranslation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
