//! Iteration histories shared by both reconstruction methods.

use alloc::vec::Vec;
use core::fmt;

use crate::grid::TraceFn;

/// Consecutive near-zero velocity steps that count as stagnation.
pub const STAGNATION_STEPS: usize = 10;
/// Velocity sup-norm below which a step counts towards stagnation.
pub const STAGNATION_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    Discrepancy,
    MaxIters,
    TargetError,
    Stagnation,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Discrepancy => "discrepancy",
            StopReason::MaxIters => "max_iters",
            StopReason::TargetError => "target_error",
            StopReason::Stagnation => "stagnation",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationStats {
    pub iter: usize,
    /// Trace-L² norm of `L q_k - (g2 - z)`.
    pub residual: f64,
    /// `||q_k - q_true||` on Γ₂, when the truth is known.
    pub error: Option<f64>,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub iter: usize,
    pub phi: TraceFn,
    pub q: TraceFn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// One entry per visited iterate, including the initial one.
    pub history: Vec<IterationStats>,
    pub snapshots: Vec<Snapshot>,
    pub stop_reason: StopReason,
    pub final_phi: TraceFn,
    pub final_q: TraceFn,
    /// Discrete violation of the asymptotic-regularization identity
    /// `d/dt ||q - q_true||^2 = -2 ||L(q - q_true)||^2`, one entry per step
    /// (Hamilton-Jacobi method with known truth only).
    pub identity_violation: Vec<f64>,
}

impl RunRecord {
    /// Number of update steps performed.
    pub fn iterations(&self) -> usize {
        self.history.len() - 1
    }

    pub fn last(&self) -> &IterationStats {
        self.history.last().expect("history is never empty")
    }

    /// First iteration whose residual is at most `threshold`.
    pub fn first_iter_below(&self, threshold: f64) -> Option<usize> {
        self.history.iter().find(|s| s.residual <= threshold).map(|s| s.iter)
    }
}

/// Stop rules common to both methods, checked on every visited iterate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StopRule {
    pub discrepancy: Option<f64>,
    pub target_error: Option<f64>,
    pub max_iters: usize,
}

impl StopRule {
    pub fn check(&self, stats: &IterationStats) -> Option<StopReason> {
        if let Some(bound) = self.discrepancy {
            if stats.residual <= bound {
                return Some(StopReason::Discrepancy);
            }
        }
        if let (Some(target), Some(err)) = (self.target_error, stats.error) {
            if err <= target {
                return Some(StopReason::TargetError);
            }
        }
        if stats.iter >= self.max_iters {
            return Some(StopReason::MaxIters);
        }
        None
    }
}

/// Counts consecutive steps whose velocity is numerically zero.
#[derive(Debug, Default)]
pub(crate) struct StagnationMonitor {
    streak: usize,
}

impl StagnationMonitor {
    pub fn observe(&mut self, velocity_sup: f64) -> bool {
        if velocity_sup <= STAGNATION_TOLERANCE {
            self.streak += 1;
        } else {
            self.streak = 0;
        }
        self.streak >= STAGNATION_STEPS
    }
}
