//! The forward operator `L`, the data offset `z` and their adjoint.
//!
//! `L` sends a Γ₂ flux `q` to the Γ₁ conormal trace of the solution of
//!
//! ```text
//! -div(a grad v) = 0,  v = 0 on Γ₁,  a dv/dnu = q on Γ₂,  a dv/dnu = 0 on Γ₃.
//! ```
//!
//! The adjoint is applied through the continuum formula `L* r = -v|Γ₂` where
//! `v` solves the homogeneous problem with `v = r` on Γ₁ and zero flux on
//! Γ₂ and Γ₃. It is not the transpose of the discrete matrix; the two agree
//! up to discretization error.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::grid::{BoundaryPart, Grid, TraceFn};
use crate::pde::{neumann_trace, Coefficient, ConditionKinds, Field, MixedBvpSolver};
use crate::Error;

/// Largest Γ₁ cell count accepted for dense assembly.
pub const MAX_DENSE_CELLS: usize = 256;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }
}

/// Singular values in decreasing order.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    let a = DMatrix::from_row_slice(m.rows, m.cols, &m.data);
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    s
}

/// Least-squares slope of `ln sigma_k` against `k` for `k in from..=to`
/// (1-based indices into the decreasing list).
pub fn log_decay_slope(sigma: &[f64], from: usize, to: usize) -> f64 {
    assert!(from >= 1 && to > from && to <= sigma.len(), "fit range out of bounds");
    let pts: Vec<(f64, f64)> = (from..=to)
        .map(|k| (k as f64, libm::log(sigma[k - 1].max(f64::MIN_POSITIVE))))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Anything that can apply `L` and its adjoint to traces.
pub trait ForwardOperator {
    fn grid(&self) -> &Grid;
    /// `L q` for a Γ₂ flux `q`; returns a Γ₁ trace.
    fn apply(&self, q: &TraceFn) -> Result<TraceFn, Error>;
    /// `L* r` for a Γ₁ trace `r`; returns a Γ₂ trace.
    fn apply_adjoint(&self, r: &TraceFn) -> Result<TraceFn, Error>;
}

fn expect_part(t: &TraceFn, part: BoundaryPart, grid: &Grid) -> Result<(), Error> {
    if t.part() != part {
        return Err(Error::WrongPart {
            expected: part.name(),
            found: t.part().name(),
        });
    }
    if t.len() != grid.part_len(part) {
        return Err(Error::ShapeMismatch {
            expected: grid.part_len(part),
            found: t.len(),
        });
    }
    Ok(())
}

/// Grid, coefficient and source of a Cauchy problem, with the factored
/// discrete operator shared by every solve of the reconstruction.
#[derive(Debug, Clone)]
pub struct OperatorContext {
    source: Option<Field>,
    solver: MixedBvpSolver,
}

impl OperatorContext {
    pub fn new(grid: &Grid, coefficient: Coefficient, source: Option<Field>) -> Result<Self, Error> {
        if let Some(f) = &source {
            if f.grid() != grid {
                return Err(Error::ShapeMismatch {
                    expected: grid.node_count(),
                    found: f.values().len(),
                });
            }
        }
        let solver = MixedBvpSolver::new(grid, &coefficient, ConditionKinds::CAUCHY)?;
        Ok(OperatorContext { source, solver })
    }

    /// Laplacian without source.
    pub fn laplace(grid: &Grid) -> Result<Self, Error> {
        Self::new(grid, Coefficient::unit(), None)
    }

    pub fn grid(&self) -> &Grid {
        self.solver.grid()
    }
    pub fn coefficient(&self) -> &Coefficient {
        self.solver.coefficient()
    }
    pub fn source(&self) -> Option<&Field> {
        self.source.as_ref()
    }

    fn zeros(&self, part: BoundaryPart) -> TraceFn {
        TraceFn::zeros(self.grid(), part)
    }

    /// Solves the full mixed problem `P u = f`, `u = g1` on Γ₁, `a u_nu = q`
    /// on Γ₂, zero flux on Γ₃.
    pub fn solve_state(&self, g1: &TraceFn, q: &TraceFn) -> Result<Field, Error> {
        expect_part(g1, BoundaryPart::Gamma1, self.grid())?;
        expect_part(q, BoundaryPart::Gamma2, self.grid())?;
        self.solver
            .solve(self.source.as_ref(), g1, q, &self.zeros(BoundaryPart::Gamma3))
    }

    /// `z`: Γ₁ conormal trace of the problem with source `f`, `u = g1` on Γ₁
    /// and zero flux on Γ₂ and Γ₃.
    pub fn offset_z(&self, g1: &TraceFn) -> Result<TraceFn, Error> {
        expect_part(g1, BoundaryPart::Gamma1, self.grid())?;
        let v = self.solver.solve(
            self.source.as_ref(),
            g1,
            &self.zeros(BoundaryPart::Gamma2),
            &self.zeros(BoundaryPart::Gamma3),
        )?;
        Ok(neumann_trace(&v, self.coefficient(), BoundaryPart::Gamma1))
    }

    pub fn apply_l(&self, q: &TraceFn) -> Result<TraceFn, Error> {
        expect_part(q, BoundaryPart::Gamma2, self.grid())?;
        let v = self.solver.solve(
            None,
            &self.zeros(BoundaryPart::Gamma1),
            q,
            &self.zeros(BoundaryPart::Gamma3),
        )?;
        Ok(neumann_trace(&v, self.coefficient(), BoundaryPart::Gamma1))
    }

    pub fn apply_l_adjoint(&self, r: &TraceFn) -> Result<TraceFn, Error> {
        expect_part(r, BoundaryPart::Gamma1, self.grid())?;
        let v = self.solver.solve(
            None,
            r,
            &self.zeros(BoundaryPart::Gamma2),
            &self.zeros(BoundaryPart::Gamma3),
        )?;
        Ok(v.trace(BoundaryPart::Gamma2).scaled(-1.0))
    }

    fn check_dense_size(&self) -> Result<(), Error> {
        if self.grid().nx() > MAX_DENSE_CELLS {
            return Err(Error::TooLarge {
                nodes: self.grid().nx() + 1,
                limit: MAX_DENSE_CELLS + 1,
            });
        }
        Ok(())
    }

    /// Dense matrix of `L` on nodal values: column `j` is `L e_j`.
    pub fn assemble_l_matrix(&self) -> Result<DenseMatrix, Error> {
        self.check_dense_size()?;
        self.assemble_columns(BoundaryPart::Gamma2, |e| self.apply_l(e))
    }

    /// Dense matrix of the adjoint formula on nodal values.
    pub fn assemble_adjoint_matrix(&self) -> Result<DenseMatrix, Error> {
        self.check_dense_size()?;
        self.assemble_columns(BoundaryPart::Gamma1, |e| self.apply_l_adjoint(e))
    }

    fn assemble_columns(
        &self,
        input: BoundaryPart,
        apply: impl Fn(&TraceFn) -> Result<TraceFn, Error>,
    ) -> Result<DenseMatrix, Error> {
        let n_in = self.grid().part_len(input);
        let mut m: Option<DenseMatrix> = None;
        let mut e = self.zeros(input);
        for j in 0..n_in {
            e.values_mut()[j] = 1.0;
            let col = apply(&e)?;
            e.values_mut()[j] = 0.0;
            let m = m.get_or_insert_with(|| DenseMatrix::zeros(col.len(), n_in));
            for (i, v) in col.values().iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        Ok(m.unwrap_or_else(|| DenseMatrix::zeros(0, 0)))
    }
}

impl ForwardOperator for OperatorContext {
    fn grid(&self) -> &Grid {
        OperatorContext::grid(self)
    }
    fn apply(&self, q: &TraceFn) -> Result<TraceFn, Error> {
        self.apply_l(q)
    }
    fn apply_adjoint(&self, r: &TraceFn) -> Result<TraceFn, Error> {
        self.apply_l_adjoint(r)
    }
}

/// `L` and its adjoint formula precomputed as dense matrices. Agrees with
/// [`OperatorContext`] to solver tolerance and is far cheaper per application.
#[derive(Debug, Clone)]
pub struct AssembledOperator {
    grid: Grid,
    forward: DenseMatrix,
    adjoint: DenseMatrix,
}

impl AssembledOperator {
    pub fn from_context(ctx: &OperatorContext) -> Result<Self, Error> {
        Ok(AssembledOperator {
            grid: ctx.grid().clone(),
            forward: ctx.assemble_l_matrix()?,
            adjoint: ctx.assemble_adjoint_matrix()?,
        })
    }

    pub fn forward_matrix(&self) -> &DenseMatrix {
        &self.forward
    }
    pub fn adjoint_matrix(&self) -> &DenseMatrix {
        &self.adjoint
    }
}

impl ForwardOperator for AssembledOperator {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn apply(&self, q: &TraceFn) -> Result<TraceFn, Error> {
        expect_part(q, BoundaryPart::Gamma2, &self.grid)?;
        TraceFn::new(&self.grid, BoundaryPart::Gamma1, self.forward.matvec(q.values()))
    }
    fn apply_adjoint(&self, r: &TraceFn) -> Result<TraceFn, Error> {
        expect_part(r, BoundaryPart::Gamma1, &self.grid)?;
        TraceFn::new(&self.grid, BoundaryPart::Gamma2, self.adjoint.matvec(r.values()))
    }
}

/// Cauchy data on Γ₁ reduced to the right-hand side `g2 - z` of `L q = g2 - z`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    pub g1: TraceFn,
    pub g2: TraceFn,
    /// Noise level; zero means the data are declared exact.
    pub delta: f64,
    pub z: TraceFn,
    pub rhs: TraceFn,
}

impl CauchyData {
    pub fn new(ctx: &OperatorContext, g1: TraceFn, g2: TraceFn, delta: f64) -> Result<Self, Error> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: "noise level must be nonnegative and finite",
            });
        }
        expect_part(&g2, BoundaryPart::Gamma1, ctx.grid())?;
        let z = ctx.offset_z(&g1)?;
        let rhs = g2.sub(&z);
        Ok(CauchyData { g1, g2, delta, z, rhs })
    }

    pub fn is_exact(&self) -> bool {
        self.delta == 0.0
    }
}
