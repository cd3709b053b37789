use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("arity {0} exceeds the configured cap of {1}")]
    ArityTooLarge(usize, usize),
    #[error("tuple '{0}' does not match arity {1}")]
    MalformedTuple(String, usize),
    #[error("coordinate index {0} out of range for arity {1}")]
    IndexOutOfRange(usize, usize),
    #[error("operation undefined on the empty relation")]
    EmptyRelation,
    #[error("relation is not definable over the requested clause kinds")]
    NotDefinable,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("instance cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invariant violated (likely an upstream bug): {0}")]
    Internal(String),
}

/// Verdict of a solver run. `Resource` is distinct from `No`: it reports that
/// a configured cap stopped the search before the branch space relevant to
/// completeness was exhausted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Yes(T),
    No,
    Resource(String),
}

impl<T> Outcome<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Outcome::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Outcome::No)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Yes(t) => Outcome::Yes(f(t)),
            Outcome::No => Outcome::No,
            Outcome::Resource(r) => Outcome::Resource(r),
        }
    }
}
