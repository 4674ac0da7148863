use alloc::string::String;

/// Errors raised by the transition-system machinery and the platforms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An agent set or community is outside the domain it was applied to.
    #[error("domain error: {0}")]
    Domain(String),
    /// The transaction's participants are not in the states it expects.
    #[error("transaction not enabled: {0}")]
    NotEnabled(String),
    /// A platform guard rejected the transaction.
    #[error("guard failed: {0}")]
    Guard(String),
    #[error("invalid participants: {0}")]
    InvalidParticipants(String),
    /// The transaction would not change any state.
    #[error("no-op transition: {0}")]
    NoOp(String),
    /// A federation join against the community order.
    #[error("order violation: {0}")]
    Order(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A checker guardrail was exceeded.
    #[error("limit exceeded: {0}")]
    Limit(String),
    #[error("validation failed at step {index}: {reason}")]
    Validation { index: usize, reason: String },
}
