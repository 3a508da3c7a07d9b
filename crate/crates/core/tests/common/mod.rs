#![allow(dead_code)]

use cauchy_ls_core::data::synthesize_cauchy_data;
use cauchy_ls_core::{AssembledOperator, BoundaryPart, CauchyData, Grid, OperatorContext, TraceFn};

pub struct Problem {
    pub ctx: OperatorContext,
    pub op: AssembledOperator,
    pub data: CauchyData,
    pub truth: TraceFn,
}

pub fn indicator(grid: &Grid, d: &[(f64, f64)]) -> TraceFn {
    TraceFn::from_fn(grid, BoundaryPart::Gamma2, |x| {
        if d.iter().any(|&(a, b)| x >= a - 1e-12 && x <= b + 1e-12) {
            1.0
        } else {
            0.0
        }
    })
}

/// Exact data for the flux `χ_D`, synthesized on a grid twice as fine.
pub fn problem(height: f64, nx: usize, d: &[(f64, f64)]) -> Problem {
    let ny = (nx as f64 * height).round() as usize;
    let grid = Grid::new(1.0, height, nx, ny).unwrap();
    let fine = Grid::new(1.0, height, 2 * nx, 2 * ny).unwrap();
    let ctx_fine = OperatorContext::laplace(&fine).unwrap();
    let ctx = OperatorContext::laplace(&grid).unwrap();
    let g1 = TraceFn::zeros(&fine, BoundaryPart::Gamma1);
    let data = synthesize_cauchy_data(&indicator(&fine, d), &g1, &ctx_fine, &ctx).unwrap();
    let op = AssembledOperator::from_context(&ctx).unwrap();
    let truth = indicator(&grid, d);
    Problem { ctx, op, data, truth }
}
