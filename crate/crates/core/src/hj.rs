//! Hamilton-Jacobi level-set method.
//!
//! The flux iterate is the sharp projection `q = H(phi)`. The level-set
//! function is transported by `phi_t + V phi_x = 0` with `V = psi'` and
//!
//! ```text
//! -psi'' = 2 (2q - 1)^{-1} L*(L q - (g2 - z)),   psi = 0 at both ends of Γ₂,
//! ```
//!
//! so that `d/dt ||q - q_true||^2 = -2 ||L q - L q_true||^2` along the
//! continuous flow. Transport uses first-order upwinding with a CFL-limited
//! step.

use alloc::vec::Vec;

use crate::grid::TraceFn;
use crate::levelset::{component_count, heaviside};
use crate::linalg::solve_tridiagonal;
use crate::operator::{CauchyData, ForwardOperator};
use crate::run::{IterationStats, RunRecord, Snapshot, StagnationMonitor, StopReason, StopRule};
use crate::{data, Error};

/// Courant number of each outer step.
pub const OUTER_CFL: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct HjParams {
    /// Upper bound on the pseudo-time step of one outer iteration.
    pub dt: f64,
    /// Lower bound on `|2q - 1|` in the velocity source.
    pub eps_clamp: f64,
    pub tau: f64,
    pub max_iters: usize,
    /// Courant bound enforced by sub-stepping in [`hj_transport_step`].
    pub cfl_max: f64,
    pub target_error: Option<f64>,
    pub snapshot_iters: Vec<usize>,
}

impl Default for HjParams {
    fn default() -> Self {
        HjParams {
            dt: 1e3,
            eps_clamp: 0.1,
            tau: 1.5,
            max_iters: 5000,
            cfl_max: 0.9,
            target_error: None,
            snapshot_iters: Vec::new(),
        }
    }
}

impl HjParams {
    pub fn validate(&self, delta: f64) -> Result<(), Error> {
        let bad = |name, reason| Err(Error::InvalidParameter { name, reason });
        if !(self.dt > 0.0) {
            return bad("dt", "must be positive");
        }
        if !(self.eps_clamp > 0.0 && self.eps_clamp <= 1.0) {
            return bad("eps_clamp", "must lie in (0, 1]");
        }
        if delta > 0.0 && !(self.tau > 1.0) {
            return bad("tau", "discrepancy principle requires tau > 1 for noisy data");
        }
        if self.max_iters < 1 {
            return bad("max_iters", "must be at least 1");
        }
        if !(self.cfl_max > 0.0 && self.cfl_max <= 0.9) {
            return bad("cfl_max", "must lie in (0, 0.9]");
        }
        if let Some(t) = self.target_error {
            if !(t > 0.0) {
                return bad("target_error", "must be positive");
            }
        }
        Ok(())
    }
}

/// Solves `-psi'' = rhs` with `psi = 0` at both ends.
pub fn solve_potential(rhs: &TraceFn) -> TraceFn {
    let n = rhs.len();
    let h2 = rhs.spacing() * rhs.spacing();
    let m = n - 2;
    let lower = alloc::vec![-1.0; m];
    let upper = alloc::vec![-1.0; m];
    let diag = alloc::vec![2.0; m];
    let b: Vec<f64> = rhs.values()[1..n - 1].iter().map(|v| v * h2).collect();
    let inner = solve_tridiagonal(&lower, &diag, &upper, &b);
    let mut psi = alloc::vec![0.0; n];
    psi[1..n - 1].copy_from_slice(&inner);
    rhs.with_values(psi)
}

/// `psi'` by centered differences, set to zero at the two end nodes.
pub fn potential_gradient(psi: &TraceFn) -> TraceFn {
    let v = psi.values();
    let n = v.len();
    let h = psi.spacing();
    let out = (0..n)
        .map(|i| {
            if i == 0 || i + 1 == n {
                0.0
            } else {
                (v[i + 1] - v[i - 1]) / (2.0 * h)
            }
        })
        .collect();
    psi.with_values(out)
}

/// `2q - 1` pushed away from zero to magnitude `eps_clamp`; zero maps to `+eps_clamp`.
#[inline]
pub fn clamped_sign_factor(q: f64, eps_clamp: f64) -> f64 {
    let s = 2.0 * q - 1.0;
    if s.abs() >= eps_clamp {
        s
    } else if s < 0.0 {
        -eps_clamp
    } else {
        eps_clamp
    }
}

/// Velocity `V = psi'` for the current flux iterate and its residual.
pub fn hj_velocity(
    q: &TraceFn,
    residual: &TraceFn,
    op: &dyn ForwardOperator,
    p: &HjParams,
) -> Result<TraceFn, Error> {
    let grad = op.apply_adjoint(residual)?;
    let source: Vec<f64> = q
        .values()
        .iter()
        .zip(grad.values())
        .map(|(&qv, &g)| 2.0 * g / clamped_sign_factor(qv, p.eps_clamp))
        .collect();
    Ok(potential_gradient(&solve_potential(&q.with_values(source))))
}

/// First-order upwind step of `phi_t + V phi_x = 0` over time `dt`, split
/// into sub-steps of Courant number at most `cfl_max`. Outside the end nodes
/// the level-set function is extended by a constant.
pub fn hj_transport_step(phi: &TraceFn, v: &TraceFn, dt: f64, cfl_max: f64) -> TraceFn {
    let h = phi.spacing();
    let vmax = v.max_abs();
    let substeps = if vmax == 0.0 {
        return phi.clone();
    } else {
        libm::ceil(vmax * dt / (h * cfl_max)).max(1.0) as usize
    };
    let ds = dt / substeps as f64;
    let vel = v.values();
    let n = vel.len();
    let mut cur = phi.values().to_vec();
    let mut next = cur.clone();
    for _ in 0..substeps {
        for i in 0..n {
            let back = if i > 0 { (cur[i] - cur[i - 1]) / h } else { 0.0 };
            let fwd = if i + 1 < n { (cur[i + 1] - cur[i]) / h } else { 0.0 };
            next[i] = cur[i] - ds * (vel[i].max(0.0) * back + vel[i].min(0.0) * fwd);
        }
        core::mem::swap(&mut cur, &mut next);
    }
    phi.with_values(cur)
}

/// Runs the Hamilton-Jacobi method from `phi0`.
pub fn run_hj(
    phi0: &TraceFn,
    data: &CauchyData,
    op: &dyn ForwardOperator,
    p: &HjParams,
    truth: Option<&TraceFn>,
) -> Result<RunRecord, Error> {
    p.validate(data.delta)?;
    let rule = StopRule {
        discrepancy: (data.delta > 0.0).then_some(p.tau * data.delta),
        target_error: p.target_error,
        max_iters: p.max_iters,
    };
    let h = phi0.spacing();
    let mut phi = phi0.clone();
    let mut history = Vec::new();
    let mut snapshots = Vec::new();
    let mut violation = Vec::new();
    let mut stagnation = StagnationMonitor::default();
    let mut stagnated = false;
    let mut pending: Option<(f64, f64, f64)> = None; // (error^2, dt, ||L(q - truth)||^2)
    let mut k = 0;
    let (stop_reason, q) = loop {
        let q = phi.map(heaviside);
        let r = op.apply(&q)?.sub(&data.rhs);
        let error = truth.map(|t| data::l2_norm_trace(&q.sub(t)));
        if let (Some((e0, dt, lerr)), Some(e1)) = (pending.take(), error) {
            violation.push((e1 * e1 - e0) / dt + 2.0 * lerr);
        }
        let stats = IterationStats {
            iter: k,
            residual: data::l2_norm_trace(&r),
            error,
            components: component_count(&q, 0.5),
        };
        history.push(stats);
        if p.snapshot_iters.contains(&k) {
            snapshots.push(Snapshot {
                iter: k,
                phi: phi.clone(),
                q: q.clone(),
            });
        }
        if let Some(reason) = rule.check(&stats) {
            break (reason, q);
        }
        if stagnated {
            break (StopReason::Stagnation, q);
        }
        let v = hj_velocity(&q, &r, op, p)?;
        let vmax = v.max_abs();
        let dt = p.dt.min(OUTER_CFL * h / vmax.max(1e-12));
        if let (Some(t), Some(e)) = (truth, error) {
            let lq = data::l2_norm_trace(&op.apply(&q.sub(t))?);
            pending = Some((e * e, dt, lq * lq));
        }
        stagnated = stagnation.observe(vmax);
        phi = hj_transport_step(&phi, &v, dt, p.cfl_max);
        k += 1;
    };
    Ok(RunRecord {
        history,
        snapshots,
        stop_reason,
        final_phi: phi,
        final_q: q,
        identity_violation: violation,
    })
}
