use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed caller input: zero terms, empty lists, bad parameters.
    #[error("input error: {0}")]
    Input(String),

    /// Consecutive blocks `first` and `first + 1` (1-based) overlap or are out of order.
    #[error("block order violation between H_{first} and H_{second}: max H_{first} = {max_prev} >= {min_next} = min H_{second}")]
    BlockOrder {
        first: usize,
        second: usize,
        max_prev: usize,
        min_next: usize,
    },

    #[error("index {index} out of range for a window of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// Membership asked outside the declared domain of a bounded bitmap.
    #[error("domain error: membership of {value} queried beyond bitmap bound {bound}")]
    Domain { value: BigUint, bound: BigUint },

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("brute force refused: {count} candidates exceeds the limit of {limit}")]
    BudgetTooLarge { count: u128, limit: u128 },

    #[error("semigroup of order {order} exceeds the ideal enumeration cap {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    Associativity { a: usize, b: usize, c: usize },

    #[error("malformed table: {0}")]
    Table(String),

    /// An algebraic identity that must always hold did not. Indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
