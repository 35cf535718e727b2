//! Numerical kernels: tridiagonal and bidiagonal eigensolvers, sparse
//! matrices and an extremal Lanczos solver.

pub mod bidiag;
pub mod lanczos;
pub mod sparse;
pub mod tridiag;

pub use bidiag::{bidiagonal_svd, BidiagonalSvd};
pub use lanczos::{lowest_eigenpairs, LowestEigenpairs};
pub use sparse::CsrMatrix;
pub use tridiag::{SymTridiagonal, TridiagonalEigen};

use nalgebra::DMatrix;

/// Dense symmetric eigen-decomposition with eigenvalues sorted ascending.
pub fn sorted_symmetric_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}
