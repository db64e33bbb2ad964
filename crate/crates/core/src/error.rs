use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A profile or graph is malformed (bad index, self-link, missing edge).
    #[error("structural error: {0}")]
    Structural(String),

    /// A UBBC profile exceeds some agent's edge budget.
    #[error("infeasible profile: agent {agent} declares {declared} links but its budget is {budget}")]
    Infeasible {
        agent: usize,
        declared: usize,
        budget: usize,
    },

    /// A parameter violates an operation's precondition.
    #[error("argument error: {0}")]
    Argument(String),

    /// A metric is undefined for the given input.
    #[error("domain error: {0}")]
    Domain(String),

    /// The enumeration space is larger than the configured cap.
    #[error("enumeration budget exceeded: {count} profiles ({reason})")]
    Budget { count: BigUint, reason: String },
}
