use thiserror::Error;

/// A caller violated an operation's precondition (unknown chain id,
/// degenerate statistical input, inapplicable perturbation, ...).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid input: {0}")]
pub struct InputError(pub String);

impl InputError {
    pub fn new(msg: impl Into<String>) -> Self {
        InputError(msg.into())
    }
}
