use alloc::string::String;


use crate::fsm::ValidationReport;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The caller asked for something that does not make sense for the input.
    Usage,
    /// The machine does not satisfy the standing assumptions of the operation.
    Precondition,
    /// An enumeration budget was exhausted.
    Resource,
    /// An observation stream that the machine cannot produce.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown output symbol `{0}`")]
    UnknownSymbol(String),
    #[error("not an execution: no transition between positions {position} and {}", position + 1)]
    InvalidExecution { position: usize },
    #[error("machine violates standing assumptions: {0}")]
    Invalid(ValidationReport),
    #[error("relation is not contained in the equal-output relation")]
    NotWithinOutputEquivalence,
    #[error("relation is not symmetric")]
    NotSymmetric,
    #[error("critical set is not contained in the initial set")]
    CriticalNotInitial,
    #[error("property `{0}` does not hold")]
    PropertyFails(&'static str),
    #[error("property `{0}` cannot drive an online estimator")]
    NoDetector(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("enumeration budget of {limit} exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("observation at step {step} is not producible by the machine")]
    InconsistentObservation { step: usize },
    #[error("estimator halted after an inconsistent observation")]
    Halted,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Invalid(_) | Error::Precondition(_) => ErrorClass::Precondition,
            Error::BudgetExceeded { .. } => ErrorClass::Resource,
            Error::InconsistentObservation { .. } | Error::Halted => ErrorClass::Inconsistent,
            _ => ErrorClass::Usage,
        }
    }
}
