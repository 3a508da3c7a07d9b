//! Uniform node-centered grids on a rectangle and traces on its boundary parts.
//!
//! The rectangle is `(0, width) x (0, height)`. Boundary parts:
//!
//! * `Gamma1`: bottom edge `y = 0`, including both bottom corners.
//! * `Gamma2`: top edge `y = height`, including both top corners.
//! * `Gamma3`: the two vertical sides without corners, left side first
//!   (bottom to top), then right side (bottom to top).

use alloc::vec::Vec;

use crate::Error;

/// Smallest admissible cell count per direction.
pub const MIN_CELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryPart {
    Gamma1,
    Gamma2,
    Gamma3,
}

impl BoundaryPart {
    pub const ALL: [BoundaryPart; 3] = [BoundaryPart::Gamma1, BoundaryPart::Gamma2, BoundaryPart::Gamma3];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryPart::Gamma1 => "Gamma1",
            BoundaryPart::Gamma2 => "Gamma2",
            BoundaryPart::Gamma3 => "Gamma3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    width: f64,
    height: f64,
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
}

impl Grid {
    pub fn new(width: f64, height: f64, nx: usize, ny: usize) -> Result<Self, Error> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidGrid("width must be positive and finite"));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::InvalidGrid("height must be positive and finite"));
        }
        if nx < MIN_CELLS || ny < MIN_CELLS {
            return Err(Error::InvalidGrid("at least 4 cells are required in each direction"));
        }
        Ok(Grid {
            width,
            height,
            nx,
            ny,
            hx: width / nx as f64,
            hy: height / ny as f64,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }
    pub fn height(&self) -> f64 {
        self.height
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn hx(&self) -> f64 {
        self.hx
    }
    pub fn hy(&self) -> f64 {
        self.hy
    }

    /// Total number of nodes, `(nx+1)(ny+1)`.
    pub fn node_count(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    /// Linear index of node `(i, j)`; `i` runs fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    #[inline]
    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.hx, j as f64 * self.hy)
    }

    /// Number of nodes on a boundary part.
    pub fn part_len(&self, part: BoundaryPart) -> usize {
        match part {
            BoundaryPart::Gamma1 | BoundaryPart::Gamma2 => self.nx + 1,
            BoundaryPart::Gamma3 => 2 * (self.ny - 1),
        }
    }

    /// Grid spacing along a boundary part.
    pub fn part_spacing(&self, part: BoundaryPart) -> f64 {
        match part {
            BoundaryPart::Gamma1 | BoundaryPart::Gamma2 => self.hx,
            BoundaryPart::Gamma3 => self.hy,
        }
    }

    /// `(i, j)` of the `k`-th node of a part, in trace order.
    pub fn part_node(&self, part: BoundaryPart, k: usize) -> (usize, usize) {
        match part {
            BoundaryPart::Gamma1 => (k, 0),
            BoundaryPart::Gamma2 => (k, self.ny),
            BoundaryPart::Gamma3 => {
                let side = self.ny - 1;
                if k < side {
                    (0, k + 1)
                } else {
                    (self.nx, k - side + 1)
                }
            }
        }
    }

    /// Linear node indices of a boundary part in trace order.
    pub fn boundary_nodes(&self, part: BoundaryPart) -> Vec<usize> {
        (0..self.part_len(part))
            .map(|k| {
                let (i, j) = self.part_node(part, k);
                self.index(i, j)
            })
            .collect()
    }

    /// Which part owns boundary node `(i, j)`; `None` for interior nodes.
    pub fn owner(&self, i: usize, j: usize) -> Option<BoundaryPart> {
        if j == 0 {
            Some(BoundaryPart::Gamma1)
        } else if j == self.ny {
            Some(BoundaryPart::Gamma2)
        } else if i == 0 || i == self.nx {
            Some(BoundaryPart::Gamma3)
        } else {
            None
        }
    }

    /// Arc coordinates of the nodes of a horizontal part.
    pub fn x_coords(&self) -> Vec<f64> {
        (0..=self.nx).map(|i| i as f64 * self.hx).collect()
    }
}

/// Scalar function sampled on the nodes of one boundary part.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFn {
    part: BoundaryPart,
    spacing: f64,
    values: Vec<f64>,
}

impl TraceFn {
    pub fn new(grid: &Grid, part: BoundaryPart, values: Vec<f64>) -> Result<Self, Error> {
        if values.len() != grid.part_len(part) {
            return Err(Error::ShapeMismatch {
                expected: grid.part_len(part),
                found: values.len(),
            });
        }
        Ok(TraceFn {
            part,
            spacing: grid.part_spacing(part),
            values,
        })
    }

    pub fn zeros(grid: &Grid, part: BoundaryPart) -> Self {
        TraceFn {
            part,
            spacing: grid.part_spacing(part),
            values: alloc::vec![0.0; grid.part_len(part)],
        }
    }

    pub fn constant(grid: &Grid, part: BoundaryPart, c: f64) -> Self {
        TraceFn {
            part,
            spacing: grid.part_spacing(part),
            values: alloc::vec![c; grid.part_len(part)],
        }
    }

    /// Samples `f` at the arc coordinate of each node (x for Γ₁/Γ₂, y for Γ₃).
    pub fn from_fn(grid: &Grid, part: BoundaryPart, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.part_len(part))
            .map(|k| {
                let (i, j) = grid.part_node(part, k);
                let (x, y) = grid.coords(i, j);
                match part {
                    BoundaryPart::Gamma3 => f(y),
                    _ => f(x),
                }
            })
            .collect();
        TraceFn {
            part,
            spacing: grid.part_spacing(part),
            values,
        }
    }

    pub fn part(&self) -> BoundaryPart {
        self.part
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same part and spacing, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        TraceFn {
            part: self.part,
            spacing: self.spacing,
            values,
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &TraceFn) -> Self {
        debug_assert_eq!(self.values.len(), other.values.len());
        self.with_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &TraceFn) -> Self {
        self.axpy(-1.0, other)
    }

    /// Trapezoid quadrature weights (endpoint weight h/2).
    ///
    /// Γ₃ is two disjoint open segments without their corners; every node
    /// there gets weight `h`.
    pub fn weights(&self) -> Vec<f64> {
        trapezoid_weights(self.part, self.values.len(), self.spacing)
    }

    /// Trapezoid inner product with another trace on the same part.
    pub fn dot(&self, other: &TraceFn) -> f64 {
        debug_assert_eq!(self.part, other.part);
        self.weights()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn trapezoid_weights(part: BoundaryPart, n: usize, h: f64) -> Vec<f64> {
    let mut w = alloc::vec![h; n];
    if part != BoundaryPart::Gamma3 && n > 0 {
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
    }
    w
}

fn nesting_ratio(fine: &Grid, part: BoundaryPart, coarse: &Grid) -> Result<usize, Error> {
    let (nf, nc) = match part {
        BoundaryPart::Gamma3 => (fine.ny, coarse.ny),
        _ => (fine.nx, coarse.nx),
    };
    let same_extent = match part {
        BoundaryPart::Gamma3 => (fine.height - coarse.height).abs() <= 1e-12 * coarse.height,
        _ => (fine.width - coarse.width).abs() <= 1e-12 * coarse.width,
    };
    if !same_extent || nf < nc || nf % nc != 0 {
        return Err(Error::NonNestedGrids { fine: nf, coarse: nc });
    }
    Ok(nf / nc)
}

/// Injects a fine-grid trace onto a nested coarse grid (every k-th value).
pub fn restrict_trace(fine: &TraceFn, fine_grid: &Grid, coarse: &Grid) -> Result<TraceFn, Error> {
    if fine.len() != fine_grid.part_len(fine.part) {
        return Err(Error::ShapeMismatch {
            expected: fine_grid.part_len(fine.part),
            found: fine.len(),
        });
    }
    let k = nesting_ratio(fine_grid, fine.part, coarse)?;
    let values = (0..coarse.part_len(fine.part))
        .map(|c| match fine.part {
            BoundaryPart::Gamma3 => {
                // Side nodes are j = 1..ny-1 per side.
                let side_c = coarse.ny - 1;
                let side_f = fine_grid.ny - 1;
                let (offset, jc) = if c < side_c { (0, c + 1) } else { (side_f, c - side_c + 1) };
                fine.values[offset + jc * k - 1]
            }
            _ => fine.values[c * k],
        })
        .collect();
    TraceFn::new(coarse, fine.part, values)
}

/// Piecewise-linear prolongation of a coarse trace onto a nested fine grid.
///
/// Only horizontal parts are supported; Γ₃ traces are never prolonged.
pub fn prolong_trace(coarse: &TraceFn, coarse_grid: &Grid, fine: &Grid) -> Result<TraceFn, Error> {
    if coarse.part == BoundaryPart::Gamma3 {
        return Err(Error::Unsupported("prolongation of Gamma3 traces"));
    }
    let k = nesting_ratio(fine, coarse.part, coarse_grid)?;
    let cv = coarse.values();
    let values = (0..=fine.nx)
        .map(|f| {
            let c = f / k;
            let r = f % k;
            if r == 0 {
                cv[c]
            } else {
                let t = r as f64 / k as f64;
                (1.0 - t) * cv[c] + t * cv[c + 1]
            }
        })
        .collect();
    TraceFn::new(fine, coarse.part, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn spacings() {
        let g = Grid::new(1.0, 0.5, 8, 4).unwrap();
        assert_eq!(g.hx(), 0.125);
        assert_eq!(g.hy(), 0.125);
        let g = Grid::new(1.0, 1.0, 4, 4).unwrap();
        assert_eq!(g.hx(), 0.25);
        assert_eq!(g.hy(), 0.25);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(1.0, 0.5, 3, 4).is_err());
        assert!(Grid::new(1.0, 0.5, 4, 3).is_err());
        assert!(Grid::new(0.0, 0.5, 8, 4).is_err());
        assert!(Grid::new(1.0, -1.0, 8, 4).is_err());
    }

    #[test]
    fn boundary_node_lists() {
        let g = Grid::new(1.0, 0.5, 8, 4).unwrap();
        let b1 = g.boundary_nodes(BoundaryPart::Gamma1);
        assert_eq!(b1, (0..9).collect::<Vec<_>>());
        let b2 = g.boundary_nodes(BoundaryPart::Gamma2);
        assert_eq!(b2.len(), 9);
        assert!(b2.iter().all(|&n| n / 9 == 4));
        let b3 = g.boundary_nodes(BoundaryPart::Gamma3);
        assert_eq!(b3.len(), 6);
    }

    #[test]
    fn parts_partition_the_boundary() {
        let g = Grid::new(2.0, 1.0, 7, 5).unwrap();
        let mut seen = vec![0u8; g.node_count()];
        for p in BoundaryPart::ALL {
            for n in g.boundary_nodes(p) {
                seen[n] += 1;
            }
        }
        for j in 0..=g.ny() {
            for i in 0..=g.nx() {
                let on_boundary = i == 0 || j == 0 || i == g.nx() || j == g.ny();
                assert_eq!(seen[g.index(i, j)], on_boundary as u8, "node ({i},{j})");
                let owner = g.owner(i, j);
                assert_eq!(owner.is_some(), on_boundary);
            }
        }
    }

    #[test]
    fn restriction_by_injection() {
        let fine = Grid::new(1.0, 0.5, 16, 8).unwrap();
        let coarse = Grid::new(1.0, 0.5, 8, 4).unwrap();
        let t = TraceFn::new(&fine, BoundaryPart::Gamma1, (0..=16).map(|v| v as f64).collect()).unwrap();
        let r = restrict_trace(&t, &fine, &coarse).unwrap();
        assert_eq!(r.values(), &[0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0]);

        let same = restrict_trace(&t, &fine, &fine).unwrap();
        assert_eq!(same, t);

        let g12 = Grid::new(1.0, 0.5, 12, 6).unwrap();
        let t12 = TraceFn::zeros(&g12, BoundaryPart::Gamma1);
        assert!(restrict_trace(&t12, &g12, &coarse).is_err());
    }

    #[test]
    fn gamma3_restriction_picks_coincident_side_nodes() {
        let fine = Grid::new(1.0, 1.0, 8, 8).unwrap();
        let coarse = Grid::new(1.0, 1.0, 4, 4).unwrap();
        let t = TraceFn::from_fn(&fine, BoundaryPart::Gamma3, |y| y);
        let r = restrict_trace(&t, &fine, &coarse).unwrap();
        assert_eq!(r.values(), &[0.25, 0.5, 0.75, 0.25, 0.5, 0.75]);
    }

    #[test]
    fn trapezoid_dot_integrates_constants() {
        let g = Grid::new(1.0, 0.5, 8, 4).unwrap();
        let one = TraceFn::constant(&g, BoundaryPart::Gamma1, 1.0);
        assert!((one.dot(&one) - 1.0).abs() < 1e-15);
    }
}
