//! Restarted Lanczos iteration for the lowest eigenpairs of a large sparse
//! symmetric matrix.
//!
//! Full reorthogonalization keeps the Krylov basis orthonormal; on restart the
//! next start vector is the sum of the wanted Ritz vectors.  Exactly
//! degenerate eigenvalues are only found with the multiplicity present in the
//! start vector, so callers that need degeneracy information should prefer the
//! dense path when the dimension allows.

use nalgebra::{DMatrix, DVector};

use super::sparse::CsrMatrix;
use super::tridiag::SymTridiagonal;
use crate::error::{Error, Result};

const MAX_RESTARTS: usize = 60;

#[derive(Debug, Clone)]
pub struct LowestEigenpairs {
    pub values: Vec<f64>,
    /// Columns are the corresponding eigenvectors.
    pub vectors: DMatrix<f64>,
}

/// Lowest `count` eigenpairs of `a` to residual `tol·‖a‖`.
pub fn lowest_eigenpairs(a: &CsrMatrix, count: usize, tol: f64) -> Result<LowestEigenpairs> {
    let dim = a.dim();
    if count == 0 || count > dim {
        return Err(Error::InvalidParameter(format!(
            "cannot compute {count} eigenpairs of a {dim}-dimensional matrix"
        )));
    }
    let krylov = dim.min((4 * count + 60).max(120));
    let norm = a.norm_inf().max(f64::MIN_POSITIVE);

    // Deterministic, generic start vector.
    let mut start = DVector::from_fn(dim, |i, _| 1.0 + 0.37 * ((i as f64) * 0.731).sin());
    start.normalize_mut();

    let mut best_residual = f64::INFINITY;
    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(krylov);
        let mut alpha = Vec::with_capacity(krylov);
        let mut beta: Vec<f64> = Vec::with_capacity(krylov);
        let mut q = start.clone();
        let mut w = DVector::zeros(dim);
        let mut last_beta = 0.0;
        for j in 0..krylov {
            basis.push(q.clone());
            a.mul_vec_into(q.as_slice(), w.as_mut_slice());
            let aj = q.dot(&w);
            alpha.push(aj);
            // Two passes of classical Gram-Schmidt against the whole basis.
            for _ in 0..2 {
                for v in &basis {
                    let c = v.dot(&w);
                    w.axpy(-c, v, 1.0);
                }
            }
            let b = w.norm();
            last_beta = b;
            if j + 1 == krylov || b <= 1e-14 * norm {
                break;
            }
            beta.push(b);
            q = &w / b;
        }

        let m = alpha.len();
        let t = SymTridiagonal::new(alpha, beta)?;
        let rows: Vec<usize> = (0..m).collect();
        let ritz = t.eigen_ql(&rows)?;
        let wanted = count.min(m);
        let invariant = last_beta <= 1e-14 * norm;

        let mut vectors = DMatrix::zeros(dim, wanted);
        let mut worst: f64 = 0.0;
        for k in 0..wanted {
            let mut v = DVector::zeros(dim);
            for (i, bv) in basis.iter().enumerate() {
                v.axpy(ritz.vectors[(i, k)], bv, 1.0);
            }
            v.normalize_mut();
            let resid = (a.mul_vec(&v) - &v * ritz.values[k]).norm();
            worst = worst.max(resid);
            vectors.set_column(k, &v);
        }
        best_residual = best_residual.min(worst);
        if wanted == count && (worst <= tol * norm || invariant && m == dim) {
            return Ok(LowestEigenpairs {
                values: ritz.values[..count].to_vec(),
                vectors,
            });
        }
        let mut next = DVector::zeros(dim);
        for k in 0..wanted {
            next += vectors.column(k);
        }
        if next.norm() == 0.0 {
            break;
        }
        start = next.normalize();
    }
    Err(Error::NoConvergence {
        routine: "Lanczos",
        detail: format!("dimension {dim}, best residual {best_residual:.3e}"),
    })
}
