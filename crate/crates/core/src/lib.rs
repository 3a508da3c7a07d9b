//! Level-set regularization for elliptic Cauchy problems on rectangles.
//!
//! The Cauchy problem prescribes both Dirichlet data `g1` and Neumann data
//! `g2` on the accessible bottom edge Γ₁ of a rectangle and asks for the
//! unknown Neumann flux `q` on the inaccessible top edge Γ₂. Splitting the
//! mixed problem by superposition gives the linear operator equation
//!
//! ```text
//! L q = g2 - z
//! ```
//!
//! where `L` maps a Γ₂ flux to the resulting Γ₁ flux of the homogeneous
//! problem and `z` collects the contribution of `g1` and the source term.
//! The flux is assumed to be the characteristic function of a subset of Γ₂,
//! which is represented through a level-set function.
//!
//! Two reconstruction methods are provided:
//!
//! * [`tikhonov`]: explicit time stepping of the gradient flow of a
//!   smoothed level-set Tikhonov functional with TV-H¹ penalty.
//! * [`hj`]: Hamilton-Jacobi transport of the level-set function with a
//!   velocity designed to mimic asymptotic regularization.
//!
//! Both stop by the discrepancy principle for noisy data.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod data;
mod error;
pub mod grid;
pub mod hj;
pub mod levelset;
mod linalg;
pub mod operator;
pub mod pde;
pub mod run;
pub mod tikhonov;

pub use error::Error;
pub use grid::{BoundaryPart, Grid, TraceFn};
pub use operator::{AssembledOperator, CauchyData, DenseMatrix, ForwardOperator, OperatorContext};
pub use pde::{BoundaryCondition, BvpSpec, Coefficient, Field};
pub use run::{RunRecord, StopReason};
