//! Deterministic replacement-path coverings and their applications.
//!
//! A replacement path `P(s,t,F)` is a shortest `s`-`t` path in `G \ F`. An
//! `(L,f)`-covering is a family of subgraphs such that every replacement path
//! with at most `L` edges avoiding at most `f` faults survives intact in some
//! subgraph that contains none of the faults. This crate builds such coverings
//! deterministically from hit-and-miss hash families (themselves derived from
//! Reed-Solomon codes or prime moduli), plus the three consumers that motivate
//! them:
//!
//! * [`dso`] — an exact distance sensitivity oracle built from fault-tolerant
//!   trees over the covering,
//! * [`spanner`] — vertex-fault-tolerant multiplicative and nearly-additive
//!   spanners obtained by running a fault-free spanner inside every subgraph,
//! * [`lowerbound`] — weighted instances on which any covering provably needs
//!   many subgraphs, with checkers for the properties the argument rests on.
//!
//! Every nontrivial construction is paired with a brute-force verifier so that
//! desk-scale instances can be checked exhaustively.

#![forbid(unsafe_code)]

pub mod codes;
pub mod dso;
pub mod graph;
pub mod hm;
pub mod lowerbound;
pub mod relaxed;
pub mod rpc;
pub mod spanner;

mod error;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Elementary-operation budget for exhaustive verifiers.
///
/// The verifiers in this crate enumerate all fault sets (or all disjoint set
/// pairs) and refuse to start when the estimated work exceeds the budget,
/// rather than silently running for hours. The default is sized for desk-scale
/// instances; `RPCOVER_BUDGET` overrides it process-wide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(2_000_000_000)
    }
}

impl Budget {
    /// Default budget, overridden by the `RPCOVER_BUDGET` environment
    /// variable when set to a positive integer.
    pub fn from_env() -> Self {
        match std::env::var("RPCOVER_BUDGET") {
            Ok(raw) => match raw.trim().parse::<u64>() {
                Ok(v) if v > 0 => Budget(v),
                _ => Budget::default(),
            },
            Err(_) => Budget::default(),
        }
    }

    pub fn check(&self, estimated: u64, what: &str) -> Result<()> {
        if estimated > self.0 {
            return Err(Error::BudgetExceeded {
                what: what.to_owned(),
                estimated,
                budget: self.0,
            });
        }
        Ok(())
    }
}
