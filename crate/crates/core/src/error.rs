use thiserror::Error;

/// Errors surfaced by the exact-arithmetic engine.
///
/// Data-dependent failures carry enough context to be reported per record;
/// the CLI maps `Schema` to exit code 2 and `Inconsistent` to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    /// A presentation does not define a finite module.
    #[error("infinite module: relation lattice has rank {found}, need {need}")]
    InfiniteModule { found: usize, need: usize },

    /// An operation restricted to the minus part received a non-minus element.
    #[error("element is not in the minus part of the group ring")]
    NotMinus,

    /// An element lies outside the ring an operation is defined over.
    #[error("element does not lie in {ring}")]
    NotInRing { ring: &'static str },

    /// Idempotents of `Z_p[G]` only lift when `p` does not divide `|G|`.
    #[error("idempotent not liftable: {p} divides the group order {order}")]
    IdempotentNotLiftable { p: u64, order: u64 },

    /// The zero ideal has no finite-index generator.
    #[error("zero ideal")]
    ZeroIdeal,

    /// A lattice argument was rank-deficient where full rank is required.
    #[error("rank-deficient lattice: rank {found}, need {need}")]
    RankDeficient { found: usize, need: usize },

    /// Candidate unit whose group-ring orbit does not span the minus lattice.
    #[error("candidate does not generate the minus lattice over Q[G]^-")]
    NotAGenerator,

    /// The requested construction is only available for specific m.
    #[error("operation not supported for this group: {0}")]
    Unsupported(String),

    /// Input data contradicts an invariant it is required to satisfy.
    #[error("data inconsistency at {path}: {message}")]
    Inconsistent { path: String, message: String },

    /// Structural schema violation while reading a record file.
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    /// Two candidate units are not related by any group-ring element.
    #[error("candidates are not related by a group-ring element")]
    NotRelated,

    /// Brute-force enumeration exceeded its hard cap.
    #[error("enumeration cap exceeded: module has more than {cap} elements")]
    EnumerationCap { cap: u64 },
}

impl Error {
    pub fn inconsistent(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Inconsistent {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
