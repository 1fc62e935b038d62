//! Concrete bialgebra instances and constructors for their cocycles.

mod cocycles;
mod group;
mod sweedler;
mod symmetric;

pub use cocycles::{
    make_primitive_bilinear_cocycle, make_trivializing_functional, make_z_cubic_coboundary,
    make_z_polynomial_cocycle, make_z_polynomial_functional, make_zd_matrix_cocycle, ComplexMatrix,
};
pub use group::GroupAlgebraZd;
pub use sweedler::SweedlerH4;
pub use symmetric::SymmetricStarAlgebra;
