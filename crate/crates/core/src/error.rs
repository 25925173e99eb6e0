use thiserror::Error;

/// Errors raised by the library. Each variant has a stable short code, used by
/// the command line front end and by validation reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("dangling id `{0}`")]
    DanglingId(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("nonpositive length on edge `{0}`")]
    NonpositiveLength(String),
    #[error("disconnected graph")]
    Disconnected,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("point off curve: {0}")]
    PointOffCurve(String),
    #[error("empty subgraph")]
    EmptySubgraph,
    #[error("invalid chip-firing source: {0}")]
    InvalidSource(String),
    #[error("the constant -inf function has no principal divisor")]
    NoPrincipalDivisor,
    #[error("non-integer slope {0}")]
    NonIntegerSlope(String),
    #[error("objects live on different curves")]
    CurveMismatch,
    #[error("not an isometry: {0}")]
    NotIsometry(String),
    #[error("group not finite at this bound ({0} elements)")]
    GroupNotFinite(usize),
    #[error("model is not stable under the group: {0}")]
    NotStable(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("morphism is not finite and harmonic")]
    NotHarmonic,
    #[error("empty linear system (negative degree)")]
    EmptyLinearSystem,
    #[error("membership precondition failed: {0}")]
    NotMember(String),
    #[error("identification with |D|^K requires invariant D")]
    DivisorNotInvariant,
    #[error("enumeration aborted: {0}")]
    Enumeration(String),
    #[error("search limit exceeded: {0}")]
    SearchLimit(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedRational(_) => "malformed-rational",
            Error::DanglingId(_) => "dangling-id",
            Error::DuplicateId(_) => "duplicate-id",
            Error::NonpositiveLength(_) => "nonpositive-length",
            Error::Disconnected => "disconnected",
            Error::InvalidCurve(_) => "invalid-curve",
            Error::PointOffCurve(_) => "point-off-curve",
            Error::EmptySubgraph => "empty-subgraph",
            Error::InvalidSource(_) => "invalid-source",
            Error::NoPrincipalDivisor => "no-principal-divisor",
            Error::NonIntegerSlope(_) => "non-integer-slope",
            Error::CurveMismatch => "curve-mismatch",
            Error::NotIsometry(_) => "non-isometry",
            Error::GroupNotFinite(_) => "group-not-finite",
            Error::NotStable(_) => "not-stable",
            Error::InvalidMorphism(_) => "invalid-morphism",
            Error::NotHarmonic => "not-harmonic",
            Error::EmptyLinearSystem => "empty-linear-system",
            Error::NotMember(_) => "not-member",
            Error::DivisorNotInvariant => "divisor-not-invariant",
            Error::Enumeration(_) => "enumeration",
            Error::SearchLimit(_) => "search-limit",
            Error::Invalid(_) => "invalid",
        }
    }

    /// True for errors caused by a failed membership precondition rather
    /// than malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::NotMember(_) | Error::DivisorNotInvariant | Error::EmptyLinearSystem)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
