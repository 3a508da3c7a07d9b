//! Small dense-band kernels: symmetric banded Cholesky and tridiagonal solves.

use alloc::vec;
use alloc::vec::Vec;

use crate::Error;

/// Symmetric matrix stored by its lower band: `band[i*(bw+1) + d] = A[i][i-d]`.
#[derive(Debug, Clone)]
pub(crate) struct SymBand {
    n: usize,
    bw: usize,
    band: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        SymBand {
            n,
            bw,
            band: vec![0.0; n * (bw + 1)],
        }
    }

    /// Adds `v` to `A[i][j]` (and by symmetry `A[j][i]`); requires `|i-j| <= bw`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        debug_assert!(r - c <= self.bw);
        self.band[r * (self.bw + 1) + (r - c)] += v;
    }

    /// `y = A x`.
    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        let w = self.bw + 1;
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.n {
            let row = &self.band[i * w..(i + 1) * w];
            y[i] += row[0] * x[i];
            for d in 1..=self.bw.min(i) {
                let a = row[d];
                if a != 0.0 {
                    y[i] += a * x[i - d];
                    y[i - d] += a * x[i];
                }
            }
        }
    }

    /// Cholesky factor `A = L L^T`, keeping the band structure.
    pub fn cholesky(&self) -> Result<BandCholesky, Error> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let mut s = self.band[i * w + (i - j)];
                let klo = lo.max(j.saturating_sub(bw));
                for k in klo..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                if i == j {
                    if !(s > 0.0) {
                        return Err(Error::NotPositiveDefinite(i));
                    }
                    l[i * w] = libm::sqrt(s);
                } else {
                    l[i * w + (i - j)] = s / l[j * w];
                }
            }
        }
        Ok(BandCholesky { n, bw, l })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    /// Solves `L L^T x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[i * w + (i - k)] * x[k];
            }
            x[i] = s / self.l[i * w];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n.min(i + bw + 1) {
                s -= self.l[k * w + (k - i)] * x[k];
            }
            x[i] = s / self.l[i * w];
        }
    }
}

/// Solves a tridiagonal system by the Thomas algorithm.
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (`lower[0]` unused), `upper[i]`
/// multiplies `x[i+1]` (`upper[n-1]` unused). Stable for diagonally dominant
/// or symmetric positive definite systems.
pub(crate) fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    c[0] = if n > 1 { upper[0] / beta } else { 0.0 };
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - lower[i] * c[i - 1];
        if i + 1 < n {
            c[i] = upper[i] / beta;
        }
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / beta;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_cholesky_matches_dense_solution() {
        // 1D Laplacian plus identity, bandwidth 2 with a long-range coupling.
        let n = 12;
        let mut a = SymBand::zeros(n, 2);
        for i in 0..n {
            a.add(i, i, 4.0);
            if i >= 1 {
                a.add(i, i - 1, -1.0);
            }
            if i >= 2 {
                a.add(i, i - 2, -0.5);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut b = vec![0.0; n];
        a.mul(&x_true, &mut b);
        let f = a.cholesky().unwrap();
        let mut x = b.clone();
        f.solve_in_place(&mut x);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = SymBand::zeros(2, 1);
        a.add(0, 0, 1.0);
        a.add(1, 0, 2.0);
        a.add(1, 1, 1.0);
        assert!(matches!(a.cholesky(), Err(Error::NotPositiveDefinite(1))));
    }

    #[test]
    fn thomas_solves_tridiagonal() {
        let lower = [0.0, -1.0, -1.0, -1.0];
        let diag = [2.0, 2.0, 2.0, 2.0];
        let upper = [-1.0, -1.0, -1.0, 0.0];
        let x = solve_tridiagonal(&lower, &diag, &upper, &[1.0, 0.0, 0.0, 1.0]);
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }
}
