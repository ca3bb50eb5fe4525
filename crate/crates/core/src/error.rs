use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("degree cap must be at least 1")]
    NonPositiveCap,
    #[error("nilpotency order of `{0}` must be at least 1")]
    ZeroNilpotency(String),
    #[error("generator `{0}` is declared twice with different degree or nilpotency")]
    ConflictingGenerator(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("value assigned to `{name}` is not homogeneous of degree {degree}")]
    DegreeMismatch { name: String, degree: i32 },
    #[error("division by {0} is not allowed in an integer-only ring")]
    IntegerOnly(String),
    #[error("`{0}` is not invertible")]
    NotInvertible(String),
    #[error("`{0}` is not nilpotent")]
    NotNilpotent(String),
    #[error("`{0}` is not divisible by `{1}`")]
    NotDivisible(String, String),
    #[error("invalid formal group law: {0}")]
    InvalidFgl(String),
    #[error("universal law relations are incomplete at {0}")]
    LazardRelations(String),
    #[error("series is not an orientation morphism: {0}")]
    InvalidSeries(String),
    #[error("morphism compatibility fails; first defect `{0}`")]
    IncompatibleMorphism(String),
    #[error("Chern root `{0}` is not nilpotent")]
    InvalidRoot(String),
    #[error("negative rank {0}")]
    NegativeRank(i64),
    #[error("bundle is not effective")]
    NonEffectiveBundle,
    #[error("bundles `{0}` and `{1}` do not differ by an effective bundle")]
    NotSubBundle(String, String),
    #[error("element is not reduced modulo the projective bundle relation")]
    Unreduced,
    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),
    #[error("generator `{0}` is not tagged as a first Chern class")]
    UntaggedGenerator(String),
    #[error("internal identity violated: {0}")]
    Consistency(String),
    #[error("{0}")]
    InvalidArgument(String),
}
