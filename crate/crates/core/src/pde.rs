//! Mixed boundary-value problems for `-div(a grad u) = f` on a rectangle.
//!
//! The discretization is the node-centered 5-point scheme written in
//! finite-volume form: every node owns the dual cell `[x-hx/2, x+hx/2] x
//! [y-hy/2, y+hy/2]` clipped to the domain, fluxes between neighbours use the
//! coefficient at the face midpoint, and Neumann data enter through the
//! boundary edges of the dual cell. Dividing a row by its dual-cell area gives
//! the classical ghost-node scheme with the centered flux condition, so the
//! scheme is second order and reproduces linear solutions exactly. Dirichlet
//! nodes are eliminated symmetrically, which leaves a symmetric positive
//! definite banded matrix that is factored once by banded Cholesky.
//!
//! Corner nodes belong to Γ₁ (bottom) and Γ₂ (top). A corner owned by a
//! Neumann part that touches a Dirichlet Γ₃ becomes a Dirichlet node whose
//! value is extrapolated linearly from the two nearest Γ₃ nodes.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::grid::{BoundaryPart, Grid, TraceFn};
use crate::linalg::{norm2, BandCholesky, SymBand};
use crate::Error;

/// Relative residual every linear solve must reach.
pub const SOLVE_TOLERANCE: f64 = 1e-10;

const MAX_REFINEMENT_STEPS: usize = 3;

#[derive(Clone)]
enum CoefficientKind {
    Constant(f64),
    Function(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

/// Scalar diffusion coefficient `a(x, y)` with ellipticity bound `alpha`.
#[derive(Clone)]
pub struct Coefficient {
    kind: CoefficientKind,
    alpha: f64,
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CoefficientKind::Constant(a) => write!(f, "Coefficient::Constant({a})"),
            CoefficientKind::Function(_) => write!(f, "Coefficient::Function(alpha = {})", self.alpha),
        }
    }
}

impl Coefficient {
    pub fn constant(a: f64) -> Result<Self, Error> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: "constant coefficient must be positive and finite",
            });
        }
        Ok(Coefficient {
            kind: CoefficientKind::Constant(a),
            alpha: a,
        })
    }

    /// The Laplacian, `a = 1`.
    pub fn unit() -> Self {
        Coefficient {
            kind: CoefficientKind::Constant(1.0),
            alpha: 1.0,
        }
    }

    /// Variable coefficient; `a >= alpha` is checked wherever it is evaluated.
    pub fn from_fn(alpha: f64, a: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Result<Self, Error> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "ellipticity bound must be positive",
            });
        }
        Ok(Coefficient {
            kind: CoefficientKind::Function(Arc::new(a)),
            alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, CoefficientKind::Constant(_))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            CoefficientKind::Constant(a) => *a,
            CoefficientKind::Function(f) => f(x, y),
        }
    }

    fn checked(&self, x: f64, y: f64) -> Result<f64, Error> {
        let v = self.eval(x, y);
        if v >= self.alpha && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NotElliptic {
                value: v,
                alpha: self.alpha,
                x,
                y,
            })
        }
    }
}

/// Scalar grid function on all nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self, Error> {
        if values.len() != grid.node_count() {
            return Err(Error::ShapeMismatch {
                expected: grid.node_count(),
                found: values.len(),
            });
        }
        Ok(Field {
            grid: grid.clone(),
            values,
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Field {
            grid: grid.clone(),
            values: vec![0.0; grid.node_count()],
        }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.node_count());
        for j in 0..=grid.ny() {
            for i in 0..=grid.nx() {
                let (x, y) = grid.coords(i, j);
                values.push(f(x, y));
            }
        }
        Field {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// Values of the field on the nodes of a boundary part (Dirichlet trace).
    pub fn trace(&self, part: BoundaryPart) -> TraceFn {
        let values = self
            .grid
            .boundary_nodes(part)
            .into_iter()
            .map(|n| self.values[n])
            .collect();
        TraceFn::new(&self.grid, part, values).expect("trace length matches part")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet(TraceFn),
    Neumann(TraceFn),
}

impl BoundaryCondition {
    pub fn data(&self) -> &TraceFn {
        match self {
            BoundaryCondition::Dirichlet(t) | BoundaryCondition::Neumann(t) => t,
        }
    }
    pub fn is_dirichlet(&self) -> bool {
        matches!(self, BoundaryCondition::Dirichlet(_))
    }
}

/// A mixed BVP: coefficient, optional source and one condition per part.
#[derive(Debug, Clone)]
pub struct BvpSpec {
    pub grid: Grid,
    pub coefficient: Coefficient,
    pub source: Option<Field>,
    pub gamma1: BoundaryCondition,
    pub gamma2: BoundaryCondition,
    pub gamma3: BoundaryCondition,
}

impl BvpSpec {
    pub fn condition(&self, part: BoundaryPart) -> &BoundaryCondition {
        match part {
            BoundaryPart::Gamma1 => &self.gamma1,
            BoundaryPart::Gamma2 => &self.gamma2,
            BoundaryPart::Gamma3 => &self.gamma3,
        }
    }

    fn kinds(&self) -> ConditionKinds {
        ConditionKinds {
            dirichlet: [
                self.gamma1.is_dirichlet(),
                self.gamma2.is_dirichlet(),
                self.gamma3.is_dirichlet(),
            ],
        }
    }

    fn validate(&self) -> Result<(), Error> {
        for part in BoundaryPart::ALL {
            let t = self.condition(part).data();
            if t.part() != part {
                return Err(Error::WrongPart {
                    expected: part.name(),
                    found: t.part().name(),
                });
            }
            if t.len() != self.grid.part_len(part) {
                return Err(Error::ShapeMismatch {
                    expected: self.grid.part_len(part),
                    found: t.len(),
                });
            }
        }
        if let Some(f) = &self.source {
            if f.grid() != &self.grid {
                return Err(Error::ShapeMismatch {
                    expected: self.grid.node_count(),
                    found: f.values().len(),
                });
            }
        }
        Ok(())
    }
}

/// Which parts carry Dirichlet data; fixes the matrix of the discrete problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionKinds {
    pub dirichlet: [bool; 3],
}

impl ConditionKinds {
    /// Dirichlet on Γ₁, Neumann on Γ₂ and Γ₃: the layout of every problem
    /// the reconstruction methods solve.
    pub const CAUCHY: ConditionKinds = ConditionKinds {
        dirichlet: [true, false, false],
    };

    fn is_dirichlet(&self, part: BoundaryPart) -> bool {
        self.dirichlet[part as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum NodeKind {
    Free,
    /// Dirichlet node fed by the owning part's data.
    Dirichlet,
    /// Corner of a Neumann part touching a Dirichlet Γ₃.
    ExtrapolatedCorner,
}

#[inline]
fn half_if_end(k: usize, n: usize) -> f64 {
    if k == 0 || k == n {
        0.5
    } else {
        1.0
    }
}

/// Factored discrete operator for one grid, coefficient and condition layout.
///
/// Solving many problems that share the layout only costs two triangular
/// sweeps each.
#[derive(Debug, Clone)]
pub struct MixedBvpSolver {
    grid: Grid,
    coefficient: Coefficient,
    kinds: ConditionKinds,
    node_kind: Vec<NodeKind>,
    /// Full stiffness matrix (before Dirichlet elimination) in band form.
    stiffness: SymBand,
    /// Matrix with Dirichlet rows/columns replaced by identity.
    reduced: SymBand,
    factor: BandCholesky,
}

impl MixedBvpSolver {
    pub fn new(grid: &Grid, coefficient: &Coefficient, kinds: ConditionKinds) -> Result<Self, Error> {
        let (nx, ny) = (grid.nx(), grid.ny());
        let (hx, hy) = (grid.hx(), grid.hy());
        let n = grid.node_count();

        let mut node_kind = vec![NodeKind::Free; n];
        let mut any_dirichlet = false;
        for j in 0..=ny {
            for i in 0..=nx {
                if let Some(owner) = grid.owner(i, j) {
                    let corner = (i == 0 || i == nx) && (j == 0 || j == ny);
                    let kind = if kinds.is_dirichlet(owner) {
                        NodeKind::Dirichlet
                    } else if corner && kinds.is_dirichlet(BoundaryPart::Gamma3) {
                        NodeKind::ExtrapolatedCorner
                    } else {
                        NodeKind::Free
                    };
                    any_dirichlet |= kind != NodeKind::Free;
                    node_kind[grid.index(i, j)] = kind;
                }
            }
        }
        if !any_dirichlet {
            return Err(Error::SingularSystem);
        }

        // Boundary-node coefficient values are used by the conormal trace; check them too.
        for j in [0, ny] {
            for i in 0..=nx {
                let (x, y) = grid.coords(i, j);
                coefficient.checked(x, y)?;
            }
        }

        let bw = nx + 1;
        let mut stiffness = SymBand::zeros(n, bw);
        let mut reduced = SymBand::zeros(n, bw);
        let mut couple = |p: usize, q: usize, c: f64| {
            stiffness.add(p, p, c);
            stiffness.add(q, q, c);
            stiffness.add(p, q, -c);
            let fp = node_kind[p] == NodeKind::Free;
            let fq = node_kind[q] == NodeKind::Free;
            if fp {
                reduced.add(p, p, c);
            }
            if fq {
                reduced.add(q, q, c);
            }
            if fp && fq {
                reduced.add(p, q, -c);
            }
        };
        for j in 0..=ny {
            let wy = half_if_end(j, ny);
            for i in 0..nx {
                let (x, y) = grid.coords(i, j);
                let a = coefficient.checked(x + 0.5 * hx, y)?;
                couple(grid.index(i, j), grid.index(i + 1, j), a * hy * wy / hx);
            }
        }
        for j in 0..ny {
            for i in 0..=nx {
                let wx = half_if_end(i, nx);
                let (x, y) = grid.coords(i, j);
                let a = coefficient.checked(x, y + 0.5 * hy)?;
                couple(grid.index(i, j), grid.index(i, j + 1), a * hx * wx / hy);
            }
        }
        for (p, kind) in node_kind.iter().enumerate() {
            if *kind != NodeKind::Free {
                reduced.add(p, p, 1.0);
            }
        }
        let factor = reduced.cholesky()?;
        Ok(MixedBvpSolver {
            grid: grid.clone(),
            coefficient: coefficient.clone(),
            kinds,
            node_kind,
            stiffness,
            reduced,
            factor,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn coefficient(&self) -> &Coefficient {
        &self.coefficient
    }
    pub fn kinds(&self) -> ConditionKinds {
        self.kinds
    }

    /// Solves the problem with the given source and per-part data. The data
    /// kinds must match the layout the solver was built for.
    pub fn solve(
        &self,
        source: Option<&Field>,
        gamma1: &TraceFn,
        gamma2: &TraceFn,
        gamma3: &TraceFn,
    ) -> Result<Field, Error> {
        let grid = &self.grid;
        let (nx, ny) = (grid.nx(), grid.ny());
        let (hx, hy) = (grid.hx(), grid.hy());
        let n = grid.node_count();
        for (t, part) in [
            (gamma1, BoundaryPart::Gamma1),
            (gamma2, BoundaryPart::Gamma2),
            (gamma3, BoundaryPart::Gamma3),
        ] {
            if t.len() != grid.part_len(part) {
                return Err(Error::ShapeMismatch {
                    expected: grid.part_len(part),
                    found: t.len(),
                });
            }
        }

        // Dirichlet values (zero elsewhere).
        let mut fixed = vec![0.0; n];
        let side = ny - 1;
        for j in 0..=ny {
            for i in 0..=nx {
                let p = grid.index(i, j);
                match self.node_kind[p] {
                    NodeKind::Free => {}
                    NodeKind::Dirichlet => {
                        fixed[p] = match grid.owner(i, j).expect("boundary node") {
                            BoundaryPart::Gamma1 => gamma1.values()[i],
                            BoundaryPart::Gamma2 => gamma2.values()[i],
                            BoundaryPart::Gamma3 => gamma3.values()[side_index(i, j, nx, side)],
                        };
                    }
                    NodeKind::ExtrapolatedCorner => {
                        let g3 = gamma3.values();
                        let base = if i == 0 { 0 } else { side };
                        fixed[p] = if j == 0 {
                            2.0 * g3[base] - g3[base + 1]
                        } else {
                            2.0 * g3[base + side - 1] - g3[base + side - 2]
                        };
                    }
                }
            }
        }

        // Load vector for free nodes.
        let mut rhs = vec![0.0; n];
        if let Some(f) = source {
            if f.values().len() != n {
                return Err(Error::ShapeMismatch {
                    expected: n,
                    found: f.values().len(),
                });
            }
            for j in 0..=ny {
                for i in 0..=nx {
                    let area = hx * hy * half_if_end(i, nx) * half_if_end(j, ny);
                    rhs[grid.index(i, j)] = area * f.values()[grid.index(i, j)];
                }
            }
        }
        let g3n = !self.kinds.is_dirichlet(BoundaryPart::Gamma3);
        for i in 0..=nx {
            let len = hx * half_if_end(i, nx);
            if !self.kinds.is_dirichlet(BoundaryPart::Gamma1) {
                rhs[grid.index(i, 0)] += len * gamma1.values()[i];
            }
            if !self.kinds.is_dirichlet(BoundaryPart::Gamma2) {
                rhs[grid.index(i, ny)] += len * gamma2.values()[i];
            }
        }
        if g3n {
            let g3 = gamma3.values();
            for (k, &g) in g3.iter().enumerate() {
                let (i, j) = grid.part_node(BoundaryPart::Gamma3, k);
                rhs[grid.index(i, j)] += hy * g;
            }
            // Side half-edges of the corners: Γ₃ data extrapolated to the corner.
            for (i, base) in [(0usize, 0usize), (nx, side)] {
                let bottom = 2.0 * g3[base] - g3[base + 1];
                let top = 2.0 * g3[base + side - 1] - g3[base + side - 2];
                rhs[grid.index(i, 0)] += 0.5 * hy * bottom;
                rhs[grid.index(i, ny)] += 0.5 * hy * top;
            }
        }

        // Symmetric elimination of the Dirichlet values: rhs -= K_fd u_d.
        let mut kd = vec![0.0; n];
        self.stiffness.mul(&fixed, &mut kd);
        for p in 0..n {
            if self.node_kind[p] == NodeKind::Free {
                // K u_d restricted to free rows only involves Dirichlet columns,
                // since u_d vanishes on free nodes.
                rhs[p] -= kd[p];
            } else {
                rhs[p] = fixed[p];
            }
        }

        let mut u = rhs.clone();
        self.factor.solve_in_place(&mut u);

        let rhs_norm = norm2(&rhs);
        let mut residual = vec![0.0; n];
        let mut rel = 0.0;
        for step in 0..=MAX_REFINEMENT_STEPS {
            self.reduced.mul(&u, &mut residual);
            for (r, b) in residual.iter_mut().zip(&rhs) {
                *r = b - *r;
            }
            rel = if rhs_norm > 0.0 { norm2(&residual) / rhs_norm } else { norm2(&residual) };
            if rel <= SOLVE_TOLERANCE || step == MAX_REFINEMENT_STEPS {
                break;
            }
            self.factor.solve_in_place(&mut residual);
            for (x, d) in u.iter_mut().zip(&residual) {
                *x += d;
            }
        }
        if !(rel <= SOLVE_TOLERANCE) {
            return Err(Error::SolverNonConvergence {
                residual: rel,
                tolerance: SOLVE_TOLERANCE,
            });
        }
        Field::new(grid, u)
    }

    pub fn solve_spec(&self, spec: &BvpSpec) -> Result<Field, Error> {
        spec.validate()?;
        if spec.kinds() != self.kinds || spec.grid != self.grid {
            return Err(Error::Unsupported("solver layout differs from the problem"));
        }
        self.solve(
            spec.source.as_ref(),
            spec.gamma1.data(),
            spec.gamma2.data(),
            spec.gamma3.data(),
        )
    }
}

#[inline]
fn side_index(i: usize, j: usize, nx: usize, side: usize) -> usize {
    if i == 0 {
        j - 1
    } else {
        debug_assert_eq!(i, nx);
        side + j - 1
    }
}

/// Assembles, factors and solves one mixed BVP.
pub fn solve_mixed_bvp(spec: &BvpSpec) -> Result<Field, Error> {
    spec.validate()?;
    let solver = MixedBvpSolver::new(&spec.grid, &spec.coefficient, spec.kinds())?;
    solver.solve_spec(spec)
}

/// Outward conormal derivative `a du/dnu` on a boundary part, by the
/// second-order one-sided formula `(-3u0 + 4u1 - u2) / 2h` along the inward
/// normal (negated for the outward direction).
pub fn neumann_trace(u: &Field, a: &Coefficient, part: BoundaryPart) -> TraceFn {
    let g = u.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let values = (0..g.part_len(part))
        .map(|k| {
            let (i, j) = g.part_node(part, k);
            let (x, y) = g.coords(i, j);
            let (u0, u1, u2, h) = match part {
                BoundaryPart::Gamma1 => (u.at(i, 0), u.at(i, 1), u.at(i, 2), g.hy()),
                BoundaryPart::Gamma2 => (u.at(i, ny), u.at(i, ny - 1), u.at(i, ny - 2), g.hy()),
                BoundaryPart::Gamma3 => {
                    if i == 0 {
                        (u.at(0, j), u.at(1, j), u.at(2, j), g.hx())
                    } else {
                        (u.at(nx, j), u.at(nx - 1, j), u.at(nx - 2, j), g.hx())
                    }
                }
            };
            let inward = (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * h);
            -a.eval(x, y) * inward
        })
        .collect();
    TraceFn::new(g, part, values).expect("trace length matches part")
}

/// Conormal trace of a solved problem: the imposed data on Neumann parts,
/// the one-sided difference elsewhere.
pub fn conormal_trace(spec: &BvpSpec, u: &Field, part: BoundaryPart) -> TraceFn {
    match spec.condition(part) {
        BoundaryCondition::Neumann(t) => t.clone(),
        BoundaryCondition::Dirichlet(_) => neumann_trace(u, &spec.coefficient, part),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn strip(nx: usize, ny: usize) -> Grid {
        Grid::new(1.0, 0.5, nx, ny).unwrap()
    }

    fn cauchy_spec(grid: &Grid, g1: TraceFn, q: TraceFn) -> BvpSpec {
        BvpSpec {
            grid: grid.clone(),
            coefficient: Coefficient::unit(),
            source: None,
            gamma1: BoundaryCondition::Dirichlet(g1),
            gamma2: BoundaryCondition::Neumann(q),
            gamma3: BoundaryCondition::Neumann(TraceFn::zeros(grid, BoundaryPart::Gamma3)),
        }
    }

    #[test]
    fn linear_solution_is_exact() {
        let g = strip(16, 8);
        let spec = cauchy_spec(
            &g,
            TraceFn::zeros(&g, BoundaryPart::Gamma1),
            TraceFn::constant(&g, BoundaryPart::Gamma2, 1.0),
        );
        let u = solve_mixed_bvp(&spec).unwrap();
        for j in 0..=g.ny() {
            for i in 0..=g.nx() {
                assert!((u.at(i, j) - j as f64 * g.hy()).abs() < 1e-12);
            }
        }
        let t = neumann_trace(&u, &Coefficient::unit(), BoundaryPart::Gamma1);
        assert!(t.values().iter().all(|v| (v + 1.0).abs() < 1e-10));
    }

    #[test]
    fn zero_data_gives_zero() {
        let g = strip(8, 4);
        let spec = cauchy_spec(
            &g,
            TraceFn::zeros(&g, BoundaryPart::Gamma1),
            TraceFn::zeros(&g, BoundaryPart::Gamma2),
        );
        let u = solve_mixed_bvp(&spec).unwrap();
        assert!(u.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_field_has_zero_trace() {
        let g = strip(8, 4);
        let u = Field::from_fn(&g, |_, _| 3.5);
        for part in BoundaryPart::ALL {
            let t = neumann_trace(&u, &Coefficient::unit(), part);
            assert!(t.max_abs() < 1e-12);
        }
    }

    #[test]
    fn all_neumann_is_singular() {
        let g = strip(8, 4);
        let spec = BvpSpec {
            grid: g.clone(),
            coefficient: Coefficient::unit(),
            source: None,
            gamma1: BoundaryCondition::Neumann(TraceFn::zeros(&g, BoundaryPart::Gamma1)),
            gamma2: BoundaryCondition::Neumann(TraceFn::zeros(&g, BoundaryPart::Gamma2)),
            gamma3: BoundaryCondition::Neumann(TraceFn::zeros(&g, BoundaryPart::Gamma3)),
        };
        assert_eq!(solve_mixed_bvp(&spec), Err(Error::SingularSystem));
    }

    #[test]
    fn coefficient_below_bound_is_rejected() {
        let g = strip(8, 4);
        let a = Coefficient::from_fn(0.5, |x, _| if x > 0.5 { 0.1 } else { 1.0 }).unwrap();
        assert!(matches!(
            MixedBvpSolver::new(&g, &a, ConditionKinds::CAUCHY),
            Err(Error::NotElliptic { .. })
        ));
    }

    #[test]
    fn variable_coefficient_linear_in_y_flux() {
        // a = 1 + x depends only on x; u = y still solves -div(a grad u) = 0
        // with conormal flux a on top and -a on the bottom.
        let g = strip(16, 8);
        let a = Coefficient::from_fn(1.0, |x, _| 1.0 + x).unwrap();
        let spec = BvpSpec {
            grid: g.clone(),
            coefficient: a.clone(),
            source: None,
            gamma1: BoundaryCondition::Dirichlet(TraceFn::zeros(&g, BoundaryPart::Gamma1)),
            gamma2: BoundaryCondition::Neumann(TraceFn::from_fn(&g, BoundaryPart::Gamma2, |x| 1.0 + x)),
            gamma3: BoundaryCondition::Neumann(TraceFn::zeros(&g, BoundaryPart::Gamma3)),
        };
        let u = solve_mixed_bvp(&spec).unwrap();
        for j in 0..=g.ny() {
            for i in 0..=g.nx() {
                assert!((u.at(i, j) - j as f64 * g.hy()).abs() < 1e-11);
            }
        }
        let t = neumann_trace(&u, &a, BoundaryPart::Gamma1);
        for (k, v) in t.values().iter().enumerate() {
            assert!((v + 1.0 + k as f64 * g.hx()).abs() < 1e-9);
        }
    }

    #[test]
    fn source_term_quadratic_solution() {
        // u = y^2/2 - y*H solves -u'' = -1 with u(0) = 0, u'(H) = 0.
        let g = strip(8, 8);
        let h = g.height();
        let spec = BvpSpec {
            grid: g.clone(),
            coefficient: Coefficient::unit(),
            source: Some(Field::from_fn(&g, |_, _| -1.0)),
            gamma1: BoundaryCondition::Dirichlet(TraceFn::zeros(&g, BoundaryPart::Gamma1)),
            gamma2: BoundaryCondition::Neumann(TraceFn::zeros(&g, BoundaryPart::Gamma2)),
            gamma3: BoundaryCondition::Neumann(TraceFn::zeros(&g, BoundaryPart::Gamma3)),
        };
        let u = solve_mixed_bvp(&spec).unwrap();
        let err = (0..=g.ny())
            .map(|j| {
                let y = j as f64 * g.hy();
                (u.at(3, j) - (0.5 * y * y - y * h)).abs()
            })
            .fold(0.0, f64::max);
        // Quadratics are reproduced up to the O(h^2) boundary-row truncation.
        assert!(err < 0.05 * g.hy() * g.hy() + 1e-12, "err = {err}");
    }

    #[test]
    fn dirichlet_gamma3_variant_matches_harmonic_solution() {
        let g = strip(32, 16);
        let exact = |x: f64, y: f64| libm::sin(PI * x) * libm::sinh(PI * y);
        let spec = BvpSpec {
            grid: g.clone(),
            coefficient: Coefficient::unit(),
            source: None,
            gamma1: BoundaryCondition::Dirichlet(TraceFn::zeros(&g, BoundaryPart::Gamma1)),
            gamma2: BoundaryCondition::Neumann(TraceFn::from_fn(&g, BoundaryPart::Gamma2, |x| {
                PI * libm::sin(PI * x) * libm::cosh(PI * 0.5)
            })),
            gamma3: BoundaryCondition::Dirichlet(TraceFn::zeros(&g, BoundaryPart::Gamma3)),
        };
        let u = solve_mixed_bvp(&spec).unwrap();
        let err = u
            .values()
            .iter()
            .zip(Field::from_fn(&g, exact).values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 5e-3, "err = {err}");
    }
}
