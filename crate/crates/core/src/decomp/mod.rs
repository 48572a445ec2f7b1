//! MCA, CCA (primal and dual), kernel CCA, kernel PCA and the rotated
//! complex kernel PCA pipeline.
//!
//! Every solver returns a [`ModeSet`] whose columns are ordered by value,
//! descending, and whose phase is fixed: within each column of the key
//! matrix (`loadings_a`) the entry of largest modulus is real and positive,
//! and the same unit factor is applied to the paired columns.

mod dual;
mod linear;
mod rock;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::DataMatrix;
use crate::linalg::argmax_modulus;
use crate::scalar::Scalar;

pub(crate) use dual::Spectrum;
pub use dual::{cca_dual, dual_to_primal, kcca, kpca, DEFAULT_EPS_LINEAR, DEFAULT_EPS_RBF};
pub use linear::{auto_cov, cca_primal, cross_cov, mca_svd, CovMatrix};
pub use rock::{rock_pca, RockOptions, RockResult, RotateMethod, RotationTarget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Mca,
    Cca,
    CcaDual,
    Kcca,
    Kpca,
    RockPca,
}

/// Result of an eigen/singular decomposition.
///
/// `loadings_a` is `d_a × p` for primal methods and the `n × p` dual
/// coefficient matrix for dual and kernel methods (spatial maps for the
/// rotated ROCK-PCA modes).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet<T: Scalar = f64> {
    method: Method,
    loadings_a: DMatrix<T>,
    loadings_b: Option<DMatrix<T>>,
    temporal_a: DMatrix<T>,
    temporal_b: Option<DMatrix<T>>,
    values: Vec<f64>,
    explained_fraction: Vec<f64>,
}

impl<T: Scalar> ModeSet<T> {
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn p(&self) -> usize {
        self.values.len()
    }

    pub fn loadings_a(&self) -> &DMatrix<T> {
        &self.loadings_a
    }

    pub fn loadings_b(&self) -> Option<&DMatrix<T>> {
        self.loadings_b.as_ref()
    }

    pub fn temporal_a(&self) -> &DMatrix<T> {
        &self.temporal_a
    }

    pub fn temporal_b(&self) -> Option<&DMatrix<T>> {
        self.temporal_b.as_ref()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn explained_fraction(&self) -> &[f64] {
        &self.explained_fraction
    }
}

/// Raw solver output; `finish` fixes phases and orders the columns.
struct Modes<T: Scalar> {
    method: Method,
    key: DMatrix<T>,
    key_b: Option<DMatrix<T>>,
    temporal_a: DMatrix<T>,
    temporal_b: Option<DMatrix<T>>,
    values: Vec<f64>,
    explained: Vec<f64>,
}

impl<T: Scalar> Modes<T> {
    fn finish(mut self) -> ModeSet<T> {
        let p = self.values.len();
        for j in 0..p {
            let u = align_phase(&mut self.key, j);
            scale_column(&mut self.temporal_a, j, u);
            if let Some(m) = self.key_b.as_mut() {
                scale_column(m, j, u);
            }
            if let Some(m) = self.temporal_b.as_mut() {
                scale_column(m, j, u);
            }
        }
        let order = mode_order(&self.values, &self.key);
        let pick = |m: &DMatrix<T>| DMatrix::from_fn(m.nrows(), p, |r, c| m[(r, order[c])]);
        ModeSet {
            method: self.method,
            loadings_a: pick(&self.key),
            loadings_b: self.key_b.as_ref().map(pick),
            temporal_a: pick(&self.temporal_a),
            temporal_b: self.temporal_b.as_ref().map(pick),
            values: order.iter().map(|&i| self.values[i]).collect(),
            explained_fraction: order.iter().map(|&i| self.explained[i]).collect(),
        }
    }
}

pub(crate) fn scale_column<T: Scalar>(m: &mut DMatrix<T>, j: usize, u: T) {
    m.column_mut(j).apply(|v| *v *= u);
}

/// Multiplies column `j` by the unit factor that makes its largest-modulus
/// entry real and positive, and returns the factor (`1` for a zero column).
/// The peak entry is set to its modulus so it is exactly real.
pub(crate) fn align_phase<T: Scalar>(m: &mut DMatrix<T>, j: usize) -> T {
    let Some((i, v)) = argmax_modulus(m.column(j).iter().copied()).filter(|(_, v)| v.modulus() > 0.0) else {
        return T::one();
    };
    let u = v.conjugate() * T::from_real(1.0 / v.modulus());
    scale_column(m, j, u);
    m[(i, j)] = T::from_real(v.modulus());
    u
}

/// Descending by value; exact ties fall back to comparing key columns
/// entry by entry (real part, then imaginary part), larger first.
fn mode_order<T: Scalar>(values: &[f64], key: &DMatrix<T>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b].total_cmp(&values[a]).then_with(|| {
            for r in 0..key.nrows() {
                let (x, y) = (key[(r, a)], key[(r, b)]);
                let c = y.re().total_cmp(&x.re()).then(y.im().total_cmp(&x.im()));
                if c.is_ne() {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    order
}

pub(crate) fn check_same_n<T: Scalar, U: Scalar>(a: &DataMatrix<T>, b: &DataMatrix<U>) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!(
            "datasets have different sample counts ({} vs {})",
            a.n(),
            b.n()
        )));
    }
    Ok(())
}

pub(crate) fn check_p(p: usize, max: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::param("p", "must be at least 1"));
    }
    if p > max {
        return Err(Error::TooManyComponents { requested: p, max });
    }
    Ok(())
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", format!("must be non-negative and finite, got {eps}")));
    }
    Ok(())
}

/// `x²/Σx²` over all supplied values; zeros when the total vanishes.
pub(crate) fn squared_shares(top: &[f64], all: &[f64]) -> Vec<f64> {
    let total: f64 = all.iter().map(|v| v * v).sum();
    top.iter()
        .map(|v| if total > 0.0 { v * v / total } else { 0.0 })
        .collect()
}
