use cauchy_ls_core::pde::{neumann_trace, solve_mixed_bvp};
use cauchy_ls_core::{BoundaryCondition, BoundaryPart, BvpSpec, Coefficient, Field, Grid, TraceFn};
use std::f64::consts::PI;

const HEIGHT: f64 = 0.5;

fn exact(x: f64, y: f64) -> f64 {
    (PI * x).sin() * (PI * y).sinh()
}

/// Max nodal error and Γ₁ conormal-trace error for sin(pi x) sinh(pi y)
/// with Dirichlet sides.
fn errors(nx: usize) -> (f64, f64) {
    let grid = Grid::new(1.0, HEIGHT, nx, nx / 2).unwrap();
    let spec = BvpSpec {
        grid: grid.clone(),
        coefficient: Coefficient::unit(),
        source: None,
        gamma1: BoundaryCondition::Dirichlet(TraceFn::zeros(&grid, BoundaryPart::Gamma1)),
        gamma2: BoundaryCondition::Neumann(TraceFn::from_fn(&grid, BoundaryPart::Gamma2, |x| {
            PI * (PI * x).sin() * (PI * HEIGHT).cosh()
        })),
        gamma3: BoundaryCondition::Dirichlet(TraceFn::zeros(&grid, BoundaryPart::Gamma3)),
    };
    let u = solve_mixed_bvp(&spec).unwrap();
    let reference = Field::from_fn(&grid, exact);
    let field_err = u
        .values()
        .iter()
        .zip(reference.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let trace = neumann_trace(&u, &Coefficient::unit(), BoundaryPart::Gamma1);
    let trace_exact = TraceFn::from_fn(&grid, BoundaryPart::Gamma1, |x| -PI * (PI * x).sin());
    (field_err, trace.sub(&trace_exact).max_abs())
}

#[test]
fn harmonic_solution_converges_at_second_order() {
    let (u32, t32) = errors(32);
    let (u64, t64) = errors(64);
    let field_order = (u32 / u64).log2();
    let trace_order = (t32 / t64).log2();
    assert!(field_order >= 1.8, "field order {field_order}: {u32:e} -> {u64:e}");
    assert!(trace_order >= 1.8, "trace order {trace_order}: {t32:e} -> {t64:e}");
}

#[test]
fn maximum_principle_for_dirichlet_data() {
    let grid = Grid::new(1.0, HEIGHT, 24, 12).unwrap();
    let bottom = TraceFn::from_fn(&grid, BoundaryPart::Gamma1, |x| (3.0 * x).sin());
    let top = TraceFn::from_fn(&grid, BoundaryPart::Gamma2, |x| x * x - 0.4);
    let side = TraceFn::from_fn(&grid, BoundaryPart::Gamma3, |y| 0.2 * y);
    let data: Vec<f64> = [&bottom, &top, &side].iter().flat_map(|t| t.values().to_vec()).collect();
    let (lo, hi) = data.iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
    let u = solve_mixed_bvp(&BvpSpec {
        grid: grid.clone(),
        coefficient: Coefficient::unit(),
        source: None,
        gamma1: BoundaryCondition::Dirichlet(bottom),
        gamma2: BoundaryCondition::Dirichlet(top),
        gamma3: BoundaryCondition::Dirichlet(side),
    })
    .unwrap();
    for &v in u.values() {
        assert!(v >= lo - 1e-10 && v <= hi + 1e-10, "{v} outside [{lo}, {hi}]");
    }
}
