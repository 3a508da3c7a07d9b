//! Level-set Tikhonov method: explicit time stepping of
//!
//! ```text
//! (I - Δ) dphi/dt = -H'_eps(phi) L*(L H_eps(phi) - (g2 - z))
//!                   + beta H'_eps(phi) d/dx( d/dx H_eps(phi) / |d/dx H_eps(phi)| )
//! ```
//!
//! with time step `1/alpha`. One iteration:
//!
//! 1. residual `r = L(H_eps(phi)) - (g2 - z)`;
//! 2. adjoint `L* r = -v|Γ₂` where `v = r` on Γ₁ and `v` has zero flux on Γ₂, Γ₃;
//! 3. velocity `w` from `(I - Δ) w = H'_eps(phi) [ -L* r + curvature ]`, `w' = 0` at the ends;
//! 4. `phi += w / alpha`.
//!
//! Step 3 uses `-L* r`, the steepest-descent sign of the least-squares
//! term. Substituting the Step 2 field trace `-v = L* r` instead produces an
//! ascent direction.

use alloc::vec::Vec;

use crate::grid::{Grid, TraceFn};
use crate::levelset::{
    component_count, curvature_term, heaviside_eps_deriv, solve_helmholtz_neumann, LevelSetState, DEFAULT_ETA,
};
use crate::operator::{CauchyData, ForwardOperator};
use crate::run::{IterationStats, RunRecord, Snapshot, StagnationMonitor, StopReason, StopRule};
use crate::{data, Error};

#[derive(Debug, Clone, PartialEq)]
pub struct TikhonovParams {
    /// Regularization parameter, the inverse time step.
    pub alpha: f64,
    /// Scale of the TV term.
    pub beta: f64,
    /// Width of the Heaviside ramp, in level-set units.
    pub eps: f64,
    /// Gradient regularization inside the TV term.
    pub eta: f64,
    /// Discrepancy constant, must exceed 1 for noisy data.
    pub tau: f64,
    pub max_iters: usize,
    /// Stop once `||q - q_true|| <= target_error` (needs the truth).
    pub target_error: Option<f64>,
    /// Iterations at which `(phi, q)` is recorded.
    pub snapshot_iters: Vec<usize>,
}

impl TikhonovParams {
    /// Defaults: `alpha = 100`, `beta = 1e-3`, `eps` two Γ₂ cells, `eta = 1e-6`,
    /// `tau = 1.5`, 5000 iterations.
    pub fn defaults_for(grid: &Grid) -> Self {
        TikhonovParams {
            alpha: 1e2,
            beta: 1e-3,
            eps: 2.0 * grid.hx(),
            eta: DEFAULT_ETA,
            tau: 1.5,
            max_iters: 5000,
            target_error: None,
            snapshot_iters: Vec::new(),
        }
    }

    pub fn validate(&self, delta: f64) -> Result<(), Error> {
        let bad = |name, reason| Err(Error::InvalidParameter { name, reason });
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad("alpha", "must be positive");
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad("beta", "must be nonnegative");
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad("eps", "must be positive");
        }
        if !(self.eta > 0.0) {
            return bad("eta", "must be positive");
        }
        if delta > 0.0 && !(self.tau > 1.0) {
            return bad("tau", "discrepancy principle requires tau > 1 for noisy data");
        }
        if self.max_iters < 1 {
            return bad("max_iters", "must be at least 1");
        }
        if let Some(t) = self.target_error {
            if !(t > 0.0) {
                return bad("target_error", "must be positive");
            }
        }
        Ok(())
    }
}

/// Result of one update.
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub state: LevelSetState,
    /// Residual `L(H_eps(phi_k)) - rhs` of the iterate the step started from.
    pub residual: TraceFn,
    /// Velocity `w_k`.
    pub velocity: TraceFn,
}

/// Residual `L(q) - rhs` for a flux iterate.
pub fn residual(op: &dyn ForwardOperator, q: &TraceFn, data: &CauchyData) -> Result<TraceFn, Error> {
    Ok(op.apply(q)?.sub(&data.rhs))
}

/// Velocity of Step 3 for a given residual.
pub fn velocity(
    state: &LevelSetState,
    residual: &TraceFn,
    op: &dyn ForwardOperator,
    p: &TikhonovParams,
) -> Result<TraceFn, Error> {
    let grad = op.apply_adjoint(residual)?;
    let curvature = curvature_term(&state.phi, state.eps, p.eta, p.beta);
    let forcing: Vec<f64> = state
        .phi
        .values()
        .iter()
        .zip(grad.values().iter().zip(curvature.values()))
        .map(|(&t, (&g, &c))| heaviside_eps_deriv(t, state.eps) * (c - g))
        .collect();
    Ok(solve_helmholtz_neumann(&state.phi.with_values(forcing)))
}

fn advance(state: &LevelSetState, w: &TraceFn, alpha: f64) -> LevelSetState {
    let phi = state.phi.axpy(1.0 / alpha, w);
    LevelSetState::new(phi, state.eps).expect("eps already validated")
}

/// One iteration of Steps 1-4.
pub fn tikhonov_step(
    state: &LevelSetState,
    data: &CauchyData,
    op: &dyn ForwardOperator,
    p: &TikhonovParams,
) -> Result<StepOutput, Error> {
    let r = residual(op, &state.q, data)?;
    let w = velocity(state, &r, op, p)?;
    Ok(StepOutput {
        state: advance(state, &w, p.alpha),
        residual: r,
        velocity: w,
    })
}

/// Iterates [`tikhonov_step`] from `phi0` until a stop rule fires.
pub fn run_tikhonov(
    phi0: &TraceFn,
    data: &CauchyData,
    op: &dyn ForwardOperator,
    p: &TikhonovParams,
    truth: Option<&TraceFn>,
) -> Result<RunRecord, Error> {
    p.validate(data.delta)?;
    let rule = StopRule {
        discrepancy: (data.delta > 0.0).then_some(p.tau * data.delta),
        target_error: p.target_error,
        max_iters: p.max_iters,
    };
    let mut state = LevelSetState::new(phi0.clone(), p.eps)?;
    let mut history = Vec::new();
    let mut snapshots = Vec::new();
    let mut stagnation = StagnationMonitor::default();
    let mut stagnated = false;
    let mut k = 0;
    let stop_reason = loop {
        let r = residual(op, &state.q, data)?;
        let stats = IterationStats {
            iter: k,
            residual: data::l2_norm_trace(&r),
            error: truth.map(|t| data::l2_norm_trace(&state.q.sub(t))),
            components: component_count(&state.q, 0.5),
        };
        history.push(stats);
        if p.snapshot_iters.contains(&k) {
            snapshots.push(Snapshot {
                iter: k,
                phi: state.phi.clone(),
                q: state.q.clone(),
            });
        }
        if let Some(reason) = rule.check(&stats) {
            break reason;
        }
        if stagnated {
            break StopReason::Stagnation;
        }
        let w = velocity(&state, &r, op, p)?;
        stagnated = stagnation.observe(w.max_abs());
        state = advance(&state, &w, p.alpha);
        k += 1;
    };
    Ok(RunRecord {
        history,
        snapshots,
        stop_reason,
        final_phi: state.phi,
        final_q: state.q,
        identity_violation: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryPart;
    use crate::levelset::{apply_helmholtz_neumann, init_phi, InitialShape};
    use crate::operator::{AssembledOperator, OperatorContext};
    use alloc::vec;

    fn setup(nx: usize) -> (OperatorContext, AssembledOperator) {
        let g = Grid::new(1.0, 0.5, nx, nx / 2).unwrap();
        let ctx = OperatorContext::laplace(&g).unwrap();
        let op = AssembledOperator::from_context(&ctx).unwrap();
        (ctx, op)
    }

    fn exact_data(ctx: &OperatorContext, q: &TraceFn) -> CauchyData {
        let g2 = ctx.apply_l(q).unwrap();
        CauchyData::new(ctx, TraceFn::zeros(ctx.grid(), BoundaryPart::Gamma1), g2, 0.0).unwrap()
    }

    #[test]
    fn zero_residual_without_tv_is_a_fixed_point() {
        let (ctx, op) = setup(32);
        let mut p = TikhonovParams::defaults_for(ctx.grid());
        p.beta = 0.0;
        let phi = init_phi(ctx.grid(), &InitialShape::Intervals(vec![(0.25, 0.75)]), p.eps).unwrap();
        let state = LevelSetState::new(phi, p.eps).unwrap();
        // Data generated from the iterate itself.
        let data = exact_data(&ctx, &state.q);
        let out = tikhonov_step(&state, &data, &op, &p).unwrap();
        assert!(out.velocity.max_abs() < 1e-12);
        assert!(out.state.phi.sub(&state.phi).max_abs() < 1e-13);
    }

    #[test]
    fn no_transition_band_means_no_motion() {
        let (ctx, op) = setup(32);
        let p = TikhonovParams::defaults_for(ctx.grid());
        let phi = TraceFn::constant(ctx.grid(), BoundaryPart::Gamma2, 1.0);
        let truth = init_phi(ctx.grid(), &InitialShape::Intervals(vec![(0.3, 0.5)]), p.eps)
            .unwrap()
            .map(crate::levelset::heaviside);
        let data = exact_data(&ctx, &truth);
        let rec = run_tikhonov(&phi, &data, &op, &p, None).unwrap();
        assert_eq!(rec.stop_reason, StopReason::Stagnation);
        assert_eq!(rec.iterations(), crate::run::STAGNATION_STEPS);
        assert_eq!(rec.history.len(), rec.iterations() + 1);
    }

    #[test]
    fn step_is_explicit_euler_of_the_flow() {
        let (ctx, op) = setup(32);
        let p = TikhonovParams::defaults_for(ctx.grid());
        let phi = TraceFn::from_fn(ctx.grid(), BoundaryPart::Gamma2, |x| 0.05 * libm::sin(7.0 * x) - 0.02);
        let state = LevelSetState::new(phi, p.eps).unwrap();
        let truth = TraceFn::from_fn(ctx.grid(), BoundaryPart::Gamma2, |x| (x > 0.4) as u8 as f64);
        let data = exact_data(&ctx, &truth);
        let out = tikhonov_step(&state, &data, &op, &p).unwrap();
        // alpha (I - Δ)(phi_{k+1} - phi_k) must equal the Step 3 forcing.
        let lhs = apply_helmholtz_neumann(&out.state.phi.sub(&state.phi).scaled(p.alpha));
        let grad = op.apply_adjoint(&out.residual).unwrap();
        let curv = curvature_term(&state.phi, p.eps, p.eta, p.beta);
        let forcing: Vec<f64> = (0..grad.len())
            .map(|i| heaviside_eps_deriv(state.phi.values()[i], p.eps) * (curv.values()[i] - grad.values()[i]))
            .collect();
        let scale = forcing.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        assert!(lhs.sub(&state.phi.with_values(forcing)).max_abs() < 1e-9 * scale);
    }

    #[test]
    fn velocity_is_linear_in_residual() {
        let (ctx, op) = setup(32);
        let mut p = TikhonovParams::defaults_for(ctx.grid());
        p.beta = 0.0;
        let phi = TraceFn::from_fn(ctx.grid(), BoundaryPart::Gamma2, |x| 0.1 * (x - 0.5));
        let state = LevelSetState::new(phi, p.eps).unwrap();
        let r = TraceFn::from_fn(ctx.grid(), BoundaryPart::Gamma1, |x| libm::cos(3.0 * x));
        let w1 = velocity(&state, &r, &op, &p).unwrap();
        let w3 = velocity(&state, &r.scaled(-3.0), &op, &p).unwrap();
        assert!(w3.sub(&w1.scaled(-3.0)).max_abs() < 1e-12 * (1.0 + w1.max_abs()));
    }

    #[test]
    fn rejects_tau_not_above_one_for_noisy_data() {
        let (ctx, op) = setup(16);
        let mut p = TikhonovParams::defaults_for(ctx.grid());
        p.tau = 1.0;
        let mut data = exact_data(&ctx, &TraceFn::zeros(ctx.grid(), BoundaryPart::Gamma2));
        data.delta = 0.1;
        let phi = TraceFn::zeros(ctx.grid(), BoundaryPart::Gamma2);
        assert!(matches!(
            run_tikhonov(&phi, &data, &op, &p, None),
            Err(Error::InvalidParameter { name: "tau", .. })
        ));
    }
}
