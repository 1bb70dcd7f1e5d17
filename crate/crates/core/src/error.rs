use thiserror::Error;

/// Errors raised by the arithmetic, search and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero polynomial: {0}")]
    ZeroPolynomial(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not coprime: {0}")]
    NotCoprime(&'static str),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("budget exceeded: {needed} nodes requested, cap is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Enumeration cap shared by every exhaustive routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Budget {
    pub const DEFAULT: Budget = Budget(50_000_000);

    pub fn check(self, needed: u128) -> Result<()> {
        if needed > self.0 {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// `base^exp`, saturating at `u128::MAX`.
pub(crate) fn sat_pow(base: u64, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

impl Error {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            Error::Invariant(_) => 4,
            _ => 1,
        }
    }
}
