//! Non-Hermitian dense eigensolves, delegated to `faer`.

use faer::{Mat, Par};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

fn to_faer(m: &DMatrix<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigenvalues and (unit) eigenvectors of a general complex matrix.
pub(crate) fn eigen(m: &DMatrix<Complex64>) -> Result<(Vec<Complex64>, Vec<DVector<Complex64>>)> {
    if m.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    faer::set_global_parallelism(Par::Seq);
    let evd = to_faer(m)
        .eigen()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let n = m.nrows();
    let s = evd.S();
    let u = evd.U();
    let values = (0..n).map(|i| s[i]).collect();
    let vectors = (0..n).map(|j| DVector::from_fn(n, |i, _| u[(i, j)])).collect();
    Ok((values, vectors))
}

pub(crate) fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    faer::set_global_parallelism(Par::Seq);
    to_faer(m)
        .eigenvalues()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))
}
