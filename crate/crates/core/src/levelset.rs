//! Level-set calculus on the one-dimensional boundary part Γ₂.

use alloc::vec::Vec;

use crate::grid::{BoundaryPart, Grid, TraceFn};
use crate::linalg::solve_tridiagonal;
use crate::Error;

/// Default gradient regularization inside the TV term.
pub const DEFAULT_ETA: f64 = 1e-6;

/// Sharp Heaviside projector: 1 on `t >= 0`, 0 otherwise.
#[inline]
pub fn heaviside(t: f64) -> f64 {
    if t >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Piecewise-linear Heaviside: 0 below `-eps`, `1 + t/eps` on `[-eps, 0]`, 1 above.
#[inline]
pub fn heaviside_eps(t: f64, eps: f64) -> f64 {
    debug_assert!(eps > 0.0);
    if t < -eps {
        0.0
    } else if t <= 0.0 {
        1.0 + t / eps
    } else {
        1.0
    }
}

/// Derivative of [`heaviside_eps`]; the closed band `[-eps, 0]` gets `1/eps`.
#[inline]
pub fn heaviside_eps_deriv(t: f64, eps: f64) -> f64 {
    debug_assert!(eps > 0.0);
    if (-eps..=0.0).contains(&t) {
        1.0 / eps
    } else {
        0.0
    }
}

/// Level-set function on Γ₂ with its smoothed flux iterate `q = H_eps(phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetState {
    pub phi: TraceFn,
    pub eps: f64,
    pub q: TraceFn,
}

impl LevelSetState {
    pub fn new(phi: TraceFn, eps: f64) -> Result<Self, Error> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "eps",
                reason: "smoothing width must be positive",
            });
        }
        let q = phi.map(|t| heaviside_eps(t, eps));
        Ok(LevelSetState { phi, eps, q })
    }
}

/// `beta * d/dx [ g / sqrt(g^2 + eta^2) ]` with `g = d/dx H_eps(phi)`.
///
/// `g` and the normalized gradient live on cell faces; the divergence is
/// taken at nodes with zero normalized flux through the two ends, so the
/// endpoint rows are one-sided over the half cell.
pub fn curvature_term(phi: &TraceFn, eps: f64, eta: f64, beta: f64) -> TraceFn {
    let h = phi.spacing();
    let hv: Vec<f64> = phi.values().iter().map(|&t| heaviside_eps(t, eps)).collect();
    let n = hv.len();
    let normal: Vec<f64> = hv
        .windows(2)
        .map(|w| {
            let g = (w[1] - w[0]) / h;
            g / libm::sqrt(g * g + eta * eta)
        })
        .collect();
    let out = (0..n)
        .map(|i| {
            let right = if i + 1 < n { normal[i] } else { 0.0 };
            let left = if i > 0 { normal[i - 1] } else { 0.0 };
            let width = if i == 0 || i + 1 == n { 0.5 * h } else { h };
            beta * (right - left) / width
        })
        .collect();
    phi.with_values(out)
}

/// Solves `w - w'' = rhs` on Γ₂ with `w' = 0` at both ends (ghost nodes).
pub fn solve_helmholtz_neumann(rhs: &TraceFn) -> TraceFn {
    let n = rhs.len();
    let h2 = rhs.spacing() * rhs.spacing();
    let off = -1.0 / h2;
    let mut lower = alloc::vec![off; n];
    let mut upper = alloc::vec![off; n];
    let diag = alloc::vec![1.0 + 2.0 / h2; n];
    upper[0] = 2.0 * off;
    lower[n - 1] = 2.0 * off;
    let w = solve_tridiagonal(&lower, &diag, &upper, rhs.values());
    rhs.with_values(w)
}

/// The forward operator `w - w''` with the same ghost-node Neumann ends.
pub fn apply_helmholtz_neumann(w: &TraceFn) -> TraceFn {
    let v = w.values();
    let n = v.len();
    let h2 = w.spacing() * w.spacing();
    let out = (0..n)
        .map(|i| {
            let left = if i == 0 { v[1] } else { v[i - 1] };
            let right = if i + 1 == n { v[n - 2] } else { v[i + 1] };
            v[i] - (left - 2.0 * v[i] + right) / h2
        })
        .collect();
    w.with_values(out)
}

/// Initial shape of the level-set function.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialShape {
    /// Union of closed, disjoint intervals inside Γ₂.
    Intervals(Vec<(f64, f64)>),
    /// Constant level-set function.
    Constant(f64),
}

/// Signed distance to the boundary of `D` (positive inside), clipped to
/// `[-3 eps, 3 eps]`.
pub fn init_phi(grid: &Grid, shape: &InitialShape, eps: f64) -> Result<TraceFn, Error> {
    let clip = 3.0 * eps;
    match shape {
        InitialShape::Constant(c) => Ok(TraceFn::constant(grid, BoundaryPart::Gamma2, *c)),
        InitialShape::Intervals(ivs) => {
            for &(a, b) in ivs {
                if !(a <= b && a >= 0.0 && b <= grid.width()) {
                    return Err(Error::InvalidParameter {
                        name: "intervals",
                        reason: "each interval must satisfy 0 <= a <= b <= width",
                    });
                }
            }
            let width = grid.width();
            Ok(TraceFn::from_fn(grid, BoundaryPart::Gamma2, |x| {
                let inside = ivs.iter().find(|&&(a, b)| a <= x && x <= b);
                let d = match inside {
                    Some(&(a, b)) => {
                        // Distance to the complement within Γ₂.
                        let left = if a > 0.0 { x - a } else { f64::INFINITY };
                        let right = if b < width { b - x } else { f64::INFINITY };
                        left.min(right)
                    }
                    None => -ivs
                        .iter()
                        .map(|&(a, b)| if x < a { a - x } else { x - b })
                        .fold(f64::INFINITY, f64::min),
                };
                d.clamp(-clip, clip)
            }))
        }
    }
}

/// Number of maximal runs of consecutive nodes with `q > threshold`.
pub fn component_count(q: &TraceFn, threshold: f64) -> usize {
    let mut count = 0;
    let mut inside = false;
    for &v in q.values() {
        let now = v > threshold;
        if now && !inside {
            count += 1;
        }
        inside = now;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn gamma2(nx: usize) -> Grid {
        Grid::new(1.0, 0.5, nx, 4).unwrap()
    }

    #[test]
    fn heaviside_values() {
        let e = 0.1;
        assert_eq!(heaviside_eps(-2.0 * e, e), 0.0);
        assert_eq!(heaviside_eps(0.0, e), 1.0);
        assert!((heaviside_eps(-e / 2.0, e) - 0.5).abs() < 1e-15);
        assert!((heaviside_eps_deriv(-e / 2.0, e) - 1.0 / e).abs() < 1e-12);
        assert_eq!(heaviside_eps_deriv(e, e), 0.0);
        assert_eq!(heaviside_eps_deriv(-2.0 * e, e), 0.0);
        assert_eq!(heaviside_eps_deriv(0.0, e), 1.0 / e);
        assert_eq!(heaviside_eps_deriv(-e, e), 1.0 / e);
    }

    #[test]
    fn curvature_of_monotone_ramp_vanishes_inside_band() {
        let g = gamma2(200);
        let eps = 0.1;
        let phi = TraceFn::from_fn(&g, BoundaryPart::Gamma2, |x| x - 0.5);
        let k = curvature_term(&phi, eps, 1e-6, 1.0);
        // Band is x in [0.4, 0.5]; look strictly inside.
        for (i, v) in k.values().iter().enumerate() {
            let x = i as f64 * g.hx();
            if x > 0.41 && x < 0.49 {
                assert!(v.abs() < 1e-9, "x = {x}: {v}");
            }
        }
        let flat = curvature_term(&TraceFn::constant(&g, BoundaryPart::Gamma2, 0.3), eps, 1e-6, 1.0);
        assert!(flat.max_abs() == 0.0);
    }

    #[test]
    fn curvature_two_crossings_sign_pattern_and_integrals() {
        let g = gamma2(400);
        let eps = 0.05;
        let beta = 0.01;
        // Up-crossing at 0.3, down-crossing at 0.7, unit slope near both.
        let phi = TraceFn::from_fn(&g, BoundaryPart::Gamma2, |x| (x - 0.3).min(0.7 - x));
        let k = curvature_term(&phi, eps, 1e-6, beta);
        let h = g.hx();
        let window = |lo: f64, hi: f64| -> f64 {
            k.values()
                .iter()
                .enumerate()
                .map(|(i, v)| (i as f64 * h, v))
                .filter(|(x, _)| *x >= lo && *x <= hi)
                .map(|(x, v)| {
                    let w = if x == 0.0 || x == 1.0 { 0.5 * h } else { h };
                    v * w
                })
                .sum()
        };
        // Integral of the divergence over a window equals beta times the jump
        // of the normalized gradient across it: +1 entering the up-ramp band
        // [0.25, 0.3], -1 leaving it, -1 entering the down-ramp band [0.7, 0.75],
        // +1 leaving it.
        assert!((window(0.22, 0.275) - beta).abs() < 1e-6 * beta + 1e-9);
        assert!((window(0.276, 0.33) + beta).abs() < 1e-6 * beta + 1e-9);
        assert!((window(0.67, 0.725) + beta).abs() < 1e-6 * beta + 1e-9);
        assert!((window(0.726, 0.78) - beta).abs() < 1e-6 * beta + 1e-9);
        assert!(window(0.4, 0.6).abs() < 1e-12);
    }

    #[test]
    fn helmholtz_constants_and_zero() {
        let g = gamma2(16);
        let w = solve_helmholtz_neumann(&TraceFn::constant(&g, BoundaryPart::Gamma2, 2.0));
        assert!(w.values().iter().all(|v| (v - 2.0).abs() < 1e-13));
        let w = solve_helmholtz_neumann(&TraceFn::zeros(&g, BoundaryPart::Gamma2));
        assert!(w.max_abs() == 0.0);
    }

    #[test]
    fn helmholtz_cosine_mode() {
        let mut errs = vec![];
        for nx in [64usize, 128] {
            let g = gamma2(nx);
            let k = 3.0;
            let rhs = TraceFn::from_fn(&g, BoundaryPart::Gamma2, |x| libm::cos(k * PI * x));
            let w = solve_helmholtz_neumann(&rhs);
            let exact = rhs.scaled(1.0 / (1.0 + (k * PI) * (k * PI)));
            errs.push(w.sub(&exact).max_abs());
        }
        let order = libm::log2(errs[0] / errs[1]);
        assert!(order > 1.9, "order {order}");
    }

    #[test]
    fn helmholtz_forward_inverts_solve() {
        let g = gamma2(32);
        let rhs = TraceFn::from_fn(&g, BoundaryPart::Gamma2, |x| libm::exp(x) * (x - 0.3));
        let w = solve_helmholtz_neumann(&rhs);
        assert!(apply_helmholtz_neumann(&w).sub(&rhs).max_abs() < 1e-10);
    }

    #[test]
    fn init_phi_shapes() {
        let g = gamma2(100);
        let eps = 0.02;
        let phi = init_phi(&g, &InitialShape::Intervals(vec![(0.4, 0.6)]), eps).unwrap();
        let v = phi.values();
        assert!(v[50] > 0.0);
        assert!(v[10] < 0.0);
        assert_eq!(v[40], 0.0);
        assert_eq!(v[60], 0.0);
        assert!(v[39] < 0.0 && v[61] < 0.0);

        let empty = init_phi(&g, &InitialShape::Intervals(vec![]), eps).unwrap();
        assert!(empty.values().iter().all(|&t| t == -3.0 * eps));
        assert!(empty.values().iter().all(|&t| heaviside_eps(t, eps) == 0.0));

        let two = init_phi(&g, &InitialShape::Intervals(vec![(0.2, 0.4), (0.6, 0.8)]), eps).unwrap();
        let q = two.map(heaviside);
        for (i, v) in q.values().iter().enumerate() {
            let x = i as f64 / 100.0;
            let inside = (0.2..=0.4).contains(&x) || (0.6..=0.8).contains(&x);
            // Endpoints are compared on the node grid to avoid rounding of x.
            if ![20, 40, 60, 80].contains(&i) {
                assert_eq!(*v, inside as u8 as f64, "x = {x}");
            }
        }
        assert_eq!(component_count(&q, 0.5), 2);
    }

    #[test]
    fn component_counts() {
        let g = gamma2(100);
        let one = TraceFn::from_fn(&g, BoundaryPart::Gamma2, |x| ((0.4..=0.6).contains(&x)) as u8 as f64);
        assert_eq!(component_count(&one, 0.5), 1);
        let two = TraceFn::from_fn(&g, BoundaryPart::Gamma2, |x| {
            ((0.2..=0.4).contains(&x) || (0.6..=0.8).contains(&x)) as u8 as f64
        });
        assert_eq!(component_count(&two, 0.5), 2);
        assert_eq!(component_count(&TraceFn::zeros(&g, BoundaryPart::Gamma2), 0.5), 0);
    }
}
