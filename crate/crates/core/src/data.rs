//! Synthetic Cauchy data, noise and trace norms.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{restrict_trace, BoundaryPart, TraceFn};
use crate::operator::{CauchyData, OperatorContext};
use crate::pde::neumann_trace;
use crate::Error;

/// Trapezoid-rule L² norm of a trace.
pub fn l2_norm_trace(t: &TraceFn) -> f64 {
    libm::sqrt(t.dot(t).max(0.0))
}

/// Approximate dual Sobolev norm `sqrt(sum_k (1 + (k pi / W)^2)^(-s) |t_k|^2)`
/// where `t_k` are coefficients in the orthonormal discrete sine basis
/// `sqrt(2/W) sin(k pi x / W)`, `k = 1..n-1`. End values are ignored.
pub fn sobolev_dual_norm(t: &TraceFn, s: f64) -> f64 {
    let v = t.values();
    let n = v.len() - 1;
    let h = t.spacing();
    let width = h * n as f64;
    let scale = libm::sqrt(2.0 / width);
    let mut total = 0.0;
    for k in 1..n {
        let coef: f64 = (1..n)
            .map(|i| v[i] * scale * libm::sin(core::f64::consts::PI * (k * i) as f64 / n as f64))
            .sum::<f64>()
            * h;
        let freq = k as f64 * core::f64::consts::PI / width;
        total += libm::pow(1.0 + freq * freq, -s) * coef * coef;
    }
    libm::sqrt(total)
}

/// Adds seeded uniform white noise scaled to relative trace-L² level `level`.
/// Returns the perturbed trace and `delta = level * ||g2||`.
pub fn add_noise(g2: &TraceFn, level: f64, seed: u64) -> Result<(TraceFn, f64), Error> {
    if !(level >= 0.0 && level.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "noise_level",
            reason: "must be nonnegative",
        });
    }
    if level == 0.0 {
        return Ok((g2.clone(), 0.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..g2.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let raw = g2.with_values(raw);
    let delta = level * l2_norm_trace(g2);
    let norm = l2_norm_trace(&raw);
    if norm == 0.0 {
        return Ok((g2.clone(), 0.0));
    }
    Ok((g2.axpy(delta / norm, &raw), delta))
}

/// Generates exact Cauchy data for the flux `true_q` on a fine grid and
/// transfers it to the inversion grid.
///
/// The forward problem `P u = f`, `u = g1` on Γ₁, `a u_nu = true_q` on Γ₂,
/// zero flux on Γ₃ is solved with `ctx_fine`; its Γ₁ conormal trace is `g2`.
/// Both traces are injected onto the grid of `ctx_inv`, where `z` is computed.
/// The fine grid must be nested in the inversion grid; passing the same grid
/// gives same-grid data.
pub fn synthesize_cauchy_data(
    true_q: &TraceFn,
    g1: &TraceFn,
    ctx_fine: &OperatorContext,
    ctx_inv: &OperatorContext,
) -> Result<CauchyData, Error> {
    let fine = ctx_fine.grid();
    let coarse = ctx_inv.grid();
    if !fine.nx().is_multiple_of(coarse.nx())
        || !fine.ny().is_multiple_of(coarse.ny())
        || (fine.height() - coarse.height()).abs() > 1e-12 * coarse.height()
    {
        return Err(Error::NonNestedGrids {
            fine: fine.nx(),
            coarse: coarse.nx(),
        });
    }
    let u = ctx_fine.solve_state(g1, true_q)?;
    let g2 = neumann_trace(&u, ctx_fine.coefficient(), BoundaryPart::Gamma1);
    let g1c = restrict_trace(g1, fine, coarse)?;
    let g2c = restrict_trace(&g2, fine, coarse)?;
    CauchyData::new(ctx_inv, g1c, g2c, 0.0)
}
