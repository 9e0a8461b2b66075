//! Evaluation limits and configuration.

use crate::universe::Universe;

/// Bounds on the SLD search. Both limits must be at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum SLD-tree depth explored by iterative deepening.
    pub max_depth: usize,
    /// Maximum number of rows collected for a single query, and the cap on
    /// facts derived during bottom-up evaluation.
    pub max_answers: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_depth: 64,
            max_answers: 10_000,
        }
    }
}

impl SearchLimits {
    pub fn new(max_depth: usize, max_answers: usize) -> Self {
        assert!(max_depth >= 1 && max_answers >= 1, "limits must be >= 1");
        SearchLimits {
            max_depth,
            max_answers,
        }
    }
}

/// Everything an evaluation needs besides the expression itself: the declared
/// universe (if any), search limits, and the fixpoint iteration cap.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub universe: Option<Universe>,
    pub limits: SearchLimits,
    pub fix_cap: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            universe: None,
            limits: SearchLimits::default(),
            fix_cap: 1000,
        }
    }
}

impl EvalConfig {
    pub fn new() -> Self {
        EvalConfig::default()
    }

    pub fn with_universe(mut self, u: Universe) -> Self {
        self.universe = Some(u);
        self
    }
}
