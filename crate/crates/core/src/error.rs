use thiserror::Error;

/// Every failure the library reports. Messages are stable strings that end up
/// in CLI reports, so tests match on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("not in domain: {0}")]
    NotInDomain(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("base ring not a field")]
    NotAField,
    #[error("center factorization failed: {0}")]
    CenterFactorization(String),
    #[error("splitness undecidable")]
    SplitUndecidable,
    #[error("not invertible")]
    NotInvertible,
    #[error("c not a unit")]
    CNotUnit,
    #[error("c not in f̂(y)")]
    CNotInFhat,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("component not split-orthogonal")]
    NotSplitOrthogonal,
    #[error("residue field too small")]
    ResidueFieldTooSmall,
    #[error("Dickson obstruction")]
    DicksonObstruction,
    #[error("h not unimodular")]
    NotUnimodular,
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("unsupported spec: {0}")]
    UnsupportedSpec(String),
    #[error("not an idempotent")]
    NotIdempotent,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Short machine-readable tag used in structured error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PrecisionLoss(_) => "precision_loss",
            Error::NotInDomain(_) => "not_in_domain",
            Error::UnsupportedRing(_) => "unsupported_ring",
            Error::NotAField => "not_a_field",
            Error::CenterFactorization(_) => "center_factorization_failed",
            Error::SplitUndecidable => "splitness_undecidable",
            Error::NotInvertible => "not_invertible",
            Error::CNotUnit => "c_not_unit",
            Error::CNotInFhat => "c_not_in_fhat",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::NotSplitOrthogonal => "not_split_orthogonal",
            Error::ResidueFieldTooSmall => "residue_field_too_small",
            Error::DicksonObstruction => "dickson_obstruction",
            Error::NotUnimodular => "not_unimodular",
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::UnsupportedSpec(_) => "unsupported_spec",
            Error::NotIdempotent => "not_idempotent",
            Error::HypothesisViolated(_) => "hypothesis_violated",
            Error::Invalid(_) => "invalid_input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
