use std::time::{Duration, Instant};

use cauchy_ls_core::data::{add_noise, l2_norm_trace, synthesize_cauchy_data};
use cauchy_ls_core::hj::run_hj;
use cauchy_ls_core::levelset::{init_phi, InitialShape};
use cauchy_ls_core::operator::{log_decay_slope, singular_values, ForwardOperator, MAX_DENSE_CELLS};
use cauchy_ls_core::tikhonov::run_tikhonov;
use cauchy_ls_core::{
    AssembledOperator, BoundaryPart, CauchyData, Coefficient, Field, Grid, OperatorContext, RunRecord, TraceFn,
};

use crate::config::{Intervals, Method, RunConfig};
use crate::CliError;

/// An inversion problem built from a configuration.
pub struct Problem {
    pub grid: Grid,
    pub ctx: OperatorContext,
    pub data: CauchyData,
    pub truth: TraceFn,
}

pub struct Outcome {
    pub problem: Problem,
    pub record: RunRecord,
    /// Level-set smoothing width actually used (zero for the sharp method).
    pub eps: f64,
    pub wall_time: Duration,
}

pub fn indicator(grid: &Grid, d: &Intervals) -> TraceFn {
    TraceFn::from_fn(grid, BoundaryPart::Gamma2, |x| {
        if d.iter().any(|&(a, b)| x >= a - 1e-12 && x <= b + 1e-12) {
            1.0
        } else {
            0.0
        }
    })
}

fn context(grid: &Grid, f: f64) -> Result<OperatorContext, CliError> {
    let source = (f != 0.0).then(|| Field::from_fn(grid, |_, _| f));
    Ok(OperatorContext::new(grid, Coefficient::unit(), source)?)
}

/// Synthesizes data on the refined grid, transfers it and adds noise.
pub fn build_problem(cfg: &RunConfig) -> Result<Problem, CliError> {
    let grid = Grid::new(cfg.width, cfg.height, cfg.nx, cfg.ny)?;
    let r = cfg.data_refinement_ratio;
    let fine = Grid::new(cfg.width, cfg.height, r * cfg.nx, r * cfg.ny)?;
    let ctx = context(&grid, cfg.f)?;
    let ctx_fine = context(&fine, cfg.f)?;
    let g1 = TraceFn::constant(&fine, BoundaryPart::Gamma1, cfg.g1);
    let exact = synthesize_cauchy_data(&indicator(&fine, &cfg.truth), &g1, &ctx_fine, &ctx)?;
    let data = if cfg.noise_level > 0.0 {
        let (g2, delta) = add_noise(&exact.g2, cfg.noise_level, cfg.seed)?;
        CauchyData::new(&ctx, exact.g1, g2, delta)?
    } else {
        exact
    };
    Ok(Problem {
        truth: indicator(&grid, &cfg.truth),
        grid,
        ctx,
        data,
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let problem = build_problem(cfg)?;
    let grid = &problem.grid;
    let assembled;
    let op: &dyn ForwardOperator = if grid.nx() <= MAX_DENSE_CELLS {
        assembled = AssembledOperator::from_context(&problem.ctx)?;
        &assembled
    } else {
        &problem.ctx
    };
    let shape = InitialShape::Intervals(cfg.init.clone());
    let (record, eps) = match cfg.method {
        Method::Tikhonov => {
            let p = cfg.tikhonov_params(grid);
            let phi0 = init_phi(grid, &shape, p.eps)?;
            (run_tikhonov(&phi0, &problem.data, op, &p, Some(&problem.truth))?, p.eps)
        }
        Method::Hj => {
            let p = cfg.hj_params();
            let phi0 = init_phi(grid, &shape, cfg.eps_cells * grid.hx())?;
            (run_hj(&phi0, &problem.data, op, &p, Some(&problem.truth))?, 0.0)
        }
    };
    Ok(Outcome {
        problem,
        record,
        eps,
        wall_time: start.elapsed(),
    })
}

/// Relative residual threshold used to compare convergence speed.
pub fn residual_threshold(problem: &Problem, relative: f64) -> f64 {
    relative * l2_norm_trace(&problem.data.rhs)
}

pub struct Spectrum {
    pub sigma: Vec<f64>,
    pub slope: f64,
    pub fit_range: (usize, usize),
}

/// Singular values of the assembled `L` and the fitted decay of `ln sigma_k`.
pub fn spectrum(cfg: &RunConfig) -> Result<Spectrum, CliError> {
    cfg.validate_svd()?;
    let grid = Grid::new(cfg.width, cfg.height, cfg.nx, cfg.ny)?;
    let ctx = OperatorContext::laplace(&grid)?;
    let sigma = singular_values(&ctx.assemble_l_matrix()?);
    let fit_range = (2, 15.min(sigma.len()));
    let slope = log_decay_slope(&sigma, fit_range.0, fit_range.1);
    Ok(Spectrum { sigma, slope, fit_range })
}
