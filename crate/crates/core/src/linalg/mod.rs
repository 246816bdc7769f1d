//! Dense complex linear algebra for small optical transfer matrices.

mod io;
mod matrix;
mod permanent;
mod random;
mod svd;

pub use io::{format_complex, parse_complex, parse_matrix, ComplexMatrixJson};
pub use matrix::{ComplexMatrix, DEFAULT_TOL};
pub use permanent::{permanent, PERMANENT_MAX_SIZE};
pub use random::{random_contraction, random_matrix, random_unitary};
pub use svd::{svd, SvdFactors};

pub use num_complex::Complex64;
