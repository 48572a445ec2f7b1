//! Dense linear-algebra helpers with fixed, descending ordering so every
//! solver sees the same spectrum layout.

use nalgebra::{DMatrix, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
/// The input is symmetrized as `(m + mᴴ)/2` first.
pub fn hermitian_eigen_desc<T: Scalar>(m: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>) {
    let n = m.nrows();
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Thin SVD `m = U diag(s) Vᴴ` with singular values descending.
/// Returns `(U, s, V)` where `U` is `r×k`, `V` is `c×k`, `k = min(r, c)`.
pub fn svd_desc<T: Scalar>(m: &DMatrix<T>) -> Result<(DMatrix<T>, Vec<f64>, DMatrix<T>)> {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Ok((DMatrix::zeros(r, 0), Vec::new(), DMatrix::zeros(c, 0)));
    }
    let svd = SVD::try_new(m.clone(), true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Singular("SVD failed to converge".into()))?;
    let u = svd.u.expect("requested U");
    let v = svd.v_t.expect("requested Vᴴ").adjoint();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u = DMatrix::from_fn(r, k, |i, j| u[(i, order[j])]);
    let v = DMatrix::from_fn(c, k, |i, j| v[(i, order[j])]);
    Ok((u, s, v))
}

/// Singular values only, descending.
pub fn singular_values_desc<T: Scalar>(m: &DMatrix<T>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn max_abs_asymmetry<T: Scalar>(m: &DMatrix<T>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..=i {
            let d = (m[(i, j)] - m[(j, i)].conjugate()).modulus();
            worst = worst.max(d);
        }
    }
    worst
}

pub fn frobenius<T: Scalar>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|v| v.modulus_squared()).sum::<f64>().sqrt()
}

pub fn trace_re<T: Scalar>(m: &DMatrix<T>) -> f64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)].re()).sum()
}

/// `(m + ridge·I)^(-1/2)` for a Hermitian PSD `m`.
///
/// With `ridge = 0` the matrix must be numerically nonsingular.
pub fn inv_sqrt_psd<T: Scalar>(m: &DMatrix<T>, ridge: f64, what: &str) -> Result<DMatrix<T>> {
    let (vals, vecs) = hermitian_eigen_desc(m);
    let top = vals.first().copied().unwrap_or(0.0).max(0.0);
    let floor = top * 1e-12;
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let shifted = v.max(0.0) + ridge;
        if ridge == 0.0 && (v <= floor || top == 0.0) {
            return Err(Error::RankDeficient(format!(
                "{what} is singular (eigenvalue {v:.3e} vs largest {top:.3e}); use eps > 0"
            )));
        }
        if shifted <= 0.0 {
            return Err(Error::RankDeficient(format!("{what} is zero")));
        }
        scaled.column_mut(j).scale_mut(1.0 / shifted.sqrt());
    }
    Ok(&scaled * vecs.adjoint())
}

/// Index of the entry with the largest modulus (first one on ties).
pub fn argmax_modulus<T: Scalar>(col: impl Iterator<Item = T>) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (i, v) in col.enumerate() {
        match best {
            Some((_, b)) if v.modulus() <= b.modulus() => {}
            _ => best = Some((i, v)),
        }
    }
    best
}
