use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("word has length {got}, expected {expected}")]
    WrongLength { expected: usize, got: usize },

    #[error("symbol {symbol} at position {position} is outside [1, {m}]")]
    OutOfRangeSymbol {
        position: usize,
        symbol: usize,
        m: usize,
    },

    #[error("symbol {symbol} has multiplicity {count}, expected {expected}")]
    WrongMultiplicity {
        symbol: usize,
        count: usize,
        expected: usize,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("message has {got} bits, parameters expect {expected}")]
    MessageLength { expected: usize, got: usize },

    #[error("{what} has {size} elements, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: String,
        cap: u64,
    },

    #[error("matrix order {order} exceeds the limit {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("permanent {permanent} is not divisible by {divisor}")]
    NonDivisible { permanent: String, divisor: String },

    #[error("index {index} is outside [1, {k}]")]
    IndexOutOfRange { index: usize, k: usize },

    #[error("local decoder ran out of servers after {reads} reads")]
    ReadBudgetExhausted { reads: usize },

    #[error("local decoder exhausted all candidate positions without a decision")]
    Undecided,

    #[error("trial count must be positive")]
    EmptyTrials,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Guard errors (as opposed to bad user input).
    pub fn is_capability_guard(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::OrderTooLarge { .. }
        )
    }
}
