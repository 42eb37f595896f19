//! Search engines: an exhaustive ILS oracle for small orders and an
//! integer outline-square solver.

mod brute;
mod outline_search;

pub use brute::{brute_force_ils, reduced_latin_squares, MAX_ORDER};
pub use outline_search::{solve_outline_square, OutlineSpec};

/// Default node budget, overridable through `ILS_NODE_BUDGET`.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

pub fn default_budget() -> u64 {
    std::env::var("ILS_NODE_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Result of a budgeted search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The whole space was exhausted.
    Infeasible,
    /// The node budget ran out first.
    Timeout,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// A search result together with the number of nodes visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Searched<T> {
    pub outcome: SearchOutcome<T>,
    pub nodes: u64,
}
