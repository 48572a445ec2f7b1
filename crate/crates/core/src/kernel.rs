//! Gram and RBF kernels over time samples (rows), centering and the
//! regularized inverse.
//!
//! Length scale and RBF rate are related by `γ = 1/(2σ²)`.

use nalgebra::{Cholesky, DMatrix};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::DataMatrix;
use crate::linalg::{frobenius, max_abs_asymmetry};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelKind {
    Linear,
    Rbf { gamma: f64 },
}

/// How the RBF rate is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// `σ` = median pairwise distance between samples.
    Median,
    Sigma(f64),
    Gamma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelChoice {
    Linear,
    Rbf(Bandwidth),
}

/// `n × n` Hermitian PSD similarity matrix between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix<T: Scalar = f64> {
    values: DMatrix<T>,
    kind: KernelKind,
    centered: bool,
}

impl<T: Scalar> KernelMatrix<T> {
    /// Validates squareness and Hermitian symmetry, then stores the exactly
    /// symmetrized matrix. Centering is detected from the row sums.
    pub fn new(values: DMatrix<T>, kind: KernelKind) -> Result<Self> {
        let (r, c) = values.shape();
        if r != c || r == 0 {
            return Err(Error::InvalidShape(format!("kernel must be square and non-empty, got {r}×{c}")));
        }
        let scale = values.iter().map(|v| v.modulus()).fold(1.0, f64::max);
        if max_abs_asymmetry(&values) > 1e-10 * scale {
            return Err(Error::InvalidShape("kernel is not Hermitian".into()));
        }
        if let Some(i) = values.iter().position(|v| !(v.re().is_finite() && v.im().is_finite())) {
            return Err(Error::NonFinite { row: i % r, col: i / r });
        }
        let values = hermitize(values);
        let centered = rows_centered(&values);
        Ok(Self {
            values,
            kind,
            centered,
        })
    }

    pub fn values(&self) -> &DMatrix<T> {
        &self.values
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }
}

fn hermitize<T: Scalar>(mut m: DMatrix<T>) -> DMatrix<T> {
    let n = m.nrows();
    let half = T::from_real(0.5);
    for i in 0..n {
        m[(i, i)] = T::from_real(m[(i, i)].re());
        for j in 0..i {
            let v = (m[(i, j)] + m[(j, i)].conjugate()) * half;
            m[(i, j)] = v;
            m[(j, i)] = v.conjugate();
        }
    }
    m
}

fn rows_centered<T: Scalar>(m: &DMatrix<T>) -> bool {
    let tol = 1e-8 * frobenius(m);
    m.row_iter().all(|r| r.sum().modulus() <= tol)
}

/// `X Xᴴ`: inner products between samples.
pub fn gram<T: Scalar>(m: &DataMatrix<T>) -> KernelMatrix<T> {
    let x = m.values();
    let values = hermitize(x * x.adjoint());
    let centered = m.is_centered() || rows_centered(&values);
    KernelMatrix {
        values,
        kind: KernelKind::Linear,
        centered,
    }
}

pub fn rbf<T: Scalar>(m: &DataMatrix<T>, gamma: f64) -> Result<KernelMatrix<T>> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::param("gamma", format!("must be positive and finite, got {gamma}")));
    }
    let d2 = squared_distances(m);
    let values = d2.map(|v| T::from_real((-gamma * v).exp()));
    Ok(KernelMatrix {
        centered: rows_centered(&values),
        values,
        kind: KernelKind::Rbf { gamma },
    })
}

/// `‖x_i − x_j‖²` with the complex Euclidean norm; zero diagonal.
pub fn squared_distances<T: Scalar>(m: &DataMatrix<T>) -> DMatrix<f64> {
    let x = m.values();
    let n = m.n();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let s: f64 = x.row(i).iter().zip(x.row(j).iter()).map(|(&a, &b)| (a - b).modulus_squared()).sum();
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    out
}

/// Median of the pairwise sample distances (`i < j`).
pub fn median_distance<T: Scalar>(m: &DataMatrix<T>) -> Result<f64> {
    let d2 = squared_distances(m);
    let n = m.n();
    let mut d: Vec<f64> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| d2[(i, j)].sqrt()).collect();
    d.sort_by(f64::total_cmp);
    let k = d.len();
    let med = if k % 2 == 1 { d[k / 2] } else { 0.5 * (d[k / 2 - 1] + d[k / 2]) };
    if med <= 0.0 {
        return Err(Error::ZeroVariance("pairwise distances (median is zero)"));
    }
    Ok(med)
}

pub fn gamma_from_sigma(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", format!("must be positive and finite, got {sigma}")));
    }
    Ok(1.0 / (2.0 * sigma * sigma))
}

pub fn sigma_from_gamma(gamma: f64) -> f64 {
    (0.5 / gamma).sqrt()
}

impl Bandwidth {
    pub fn gamma<T: Scalar>(self, m: &DataMatrix<T>) -> Result<f64> {
        match self {
            Bandwidth::Median => gamma_from_sigma(median_distance(m)?),
            Bandwidth::Sigma(s) => gamma_from_sigma(s),
            Bandwidth::Gamma(g) if g > 0.0 && g.is_finite() => Ok(g),
            Bandwidth::Gamma(g) => Err(Error::param("gamma", format!("must be positive and finite, got {g}"))),
        }
    }
}

pub fn build_kernel<T: Scalar>(m: &DataMatrix<T>, choice: KernelChoice) -> Result<KernelMatrix<T>> {
    match choice {
        KernelChoice::Linear => Ok(gram(m)),
        KernelChoice::Rbf(bw) => rbf(m, bw.gamma(m)?),
    }
}

/// `H K H` with `H = I − 11ᵀ/n`.
pub fn center_kernel<T: Scalar>(k: &KernelMatrix<T>) -> KernelMatrix<T> {
    let n = k.n();
    let inv_n = T::from_real(1.0 / n as f64);
    let v = &k.values;
    let row_means: Vec<T> = v.row_iter().map(|r| r.sum() * inv_n).collect();
    let col_means: Vec<T> = v.column_iter().map(|c| c.sum() * inv_n).collect();
    let grand = row_means.iter().fold(T::zero(), |a, &b| a + b) * inv_n;
    let values = DMatrix::from_fn(n, n, |i, j| v[(i, j)] - row_means[i] - col_means[j] + grand);
    KernelMatrix {
        values: hermitize(values),
        kind: k.kind,
        centered: true,
    }
}

/// `(K + n·eps·I)⁻¹` through a Cholesky factorization.
pub fn reg_inverse<T: Scalar>(k: &KernelMatrix<T>, eps: f64) -> Result<DMatrix<T>> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", format!("must be non-negative and finite, got {eps}")));
    }
    let n = k.n();
    let mut a = k.values.clone();
    let shift = n as f64 * eps;
    for i in 0..n {
        a[(i, i)] += T::from_real(shift);
    }
    let top = (0..n).map(|i| a[(i, i)].re()).fold(0.0, f64::max);
    let singular = || {
        Error::Singular(format!(
            "kernel + {shift:.3e}·I is not positive definite; increase eps (regularization)"
        ))
    };
    let chol = Cholesky::new(a).ok_or_else(singular)?;
    let l = chol.l_dirty();
    if (0..n).any(|i| l[(i, i)].re().powi(2) <= 1e-14 * top) {
        return Err(singular());
    }
    Ok(chol.inverse())
}
