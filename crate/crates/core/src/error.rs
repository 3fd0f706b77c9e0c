//! Error type shared by the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameters describe no valid structure (e.g. n < 2, empty range).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A documented precondition of an operation was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An element string was not "1", "x^a" or "x^a*y".
    #[error("cannot parse {0:?} as a group element")]
    ParseElement(String),

    /// The operation would need more primitive checks than allowed.
    #[error("budget exceeded: operation needs {required} primitive checks, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    /// Set-valued computations require 2n-bit subset masks; n is capped.
    #[error("group too large for enumeration: n = {n} exceeds the supported maximum {max}")]
    GroupTooLarge { n: u32, max: u32 },
}

impl Error {
    /// Process exit code the CLI maps this error to.
    /// 2 is a resource limit, 3 an invalid request.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } | Error::GroupTooLarge { .. } => 2,
            _ => 3,
        }
    }
}

/// Largest n for which subsets of H(n,m) fit the u128 bit masks used
/// by every enumeration routine (2n bits) and residue sets fit u64.
pub const MAX_ENUM_N: u32 = 64;

/// Default budget for analysis calls, in primitive checks.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Default budget for the permutation oracle, in multiplication folds.
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

/// Fails with `BudgetExceeded` unless `spent + required` fits the budget.
pub fn charge(spent: u64, required: u128, budget: u64) -> Result<u64> {
    let total = (spent as u128).saturating_add(required);
    if total > budget as u128 {
        Err(Error::BudgetExceeded {
            required: u64::try_from(total).unwrap_or(u64::MAX),
            budget,
        })
    } else {
        Ok(total as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charge_accumulates_and_rejects() {
        assert_eq!(charge(10, 5, 20).unwrap(), 15);
        assert_eq!(
            charge(10, 11, 20),
            Err(Error::BudgetExceeded { required: 21, budget: 20 })
        );
        // saturates instead of overflowing
        assert!(matches!(
            charge(u64::MAX, u128::MAX, u64::MAX),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Error::InvalidParams("x".into()).exit_code(), 3);
        assert_eq!(Error::Precondition("x".into()).exit_code(), 3);
        assert_eq!(Error::ParseElement("x".into()).exit_code(), 3);
        assert_eq!(Error::BudgetExceeded { required: 1, budget: 0 }.exit_code(), 2);
        assert_eq!(Error::GroupTooLarge { n: 99, max: 64 }.exit_code(), 2);
    }
}
