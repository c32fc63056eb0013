//! Exact arithmetic in `Q(i)` and integer lattice algebra.

mod gaussian;
mod matrix;
mod snf;
mod torus;

pub use gaussian::{GaussianRational, RootResult};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use matrix::{normalize_sign, IntMatrix};
pub use snf::{
    cokernel_structure, hermite_rows, image_basis, kernel_basis, left_kernel_basis, rank, snf,
    solve_integer, CokernelStructure, ImageBasis, SnfDecomposition,
};
pub use torus::{
    monomial, solvable_over_torus, solve_over_gaussian, verify_solution, TorusSolution,
    TorusSolvability,
};

pub(crate) use matrix::to_i64;
