use nalgebra::DMatrix;

use super::{check_eps, check_p, check_same_n, squared_shares, Method, ModeSet, Modes};
use crate::error::Result;
use crate::io::DataMatrix;
use crate::linalg::{frobenius, inv_sqrt_psd, svd_desc, trace_re};
use crate::scalar::Scalar;

/// Covariance `ãᴴ b̃ / (n − 1)` of column-centered data.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix<T: Scalar = f64> {
    values: DMatrix<T>,
    n: usize,
}

impl<T: Scalar> CovMatrix<T> {
    pub fn values(&self) -> &DMatrix<T> {
        &self.values
    }

    /// Sample count behind the `1/(n − 1)` scale.
    pub fn n(&self) -> usize {
        self.n
    }
}

pub fn cross_cov<T: Scalar>(a: &DataMatrix<T>, b: &DataMatrix<T>) -> Result<CovMatrix<T>> {
    check_same_n(a, b)?;
    let (a, b) = (a.centered_view("cross_cov"), b.centered_view("cross_cov"));
    let scale = T::from_real(1.0 / (a.n() - 1) as f64);
    Ok(CovMatrix {
        values: a.values().adjoint() * b.values() * scale,
        n: a.n(),
    })
}

/// Auto-covariance, symmetrized exactly.
pub fn auto_cov<T: Scalar>(a: &DataMatrix<T>) -> CovMatrix<T> {
    let a = a.centered_view("auto_cov");
    let scale = T::from_real(1.0 / (a.n() - 1) as f64);
    let c = a.values().adjoint() * a.values() * scale;
    CovMatrix {
        values: (&c + c.adjoint()) * T::from_real(0.5),
        n: a.n(),
    }
}

/// Maximum covariance analysis: SVD of the cross-covariance.
///
/// `values` are singular values of `C_ab`; explained fractions are
/// `σ²/‖C_ab‖²_F`.
pub fn mca_svd<T: Scalar>(a: &DataMatrix<T>, b: &DataMatrix<T>, p: usize) -> Result<ModeSet<T>> {
    check_same_n(a, b)?;
    check_p(p, a.d().min(b.d()).min(a.n() - 1))?;
    let (a, b) = (a.centered_view("mca_svd"), b.centered_view("mca_svd"));
    let c = cross_cov(&a, &b)?;
    let (u, s, v) = svd_desc(c.values())?;
    let total = frobenius(c.values()).powi(2);
    let ua = u.columns(0, p).into_owned();
    let ub = v.columns(0, p).into_owned();
    Ok(Modes {
        method: Method::Mca,
        temporal_a: a.values() * &ua,
        temporal_b: Some(b.values() * &ub),
        key: ua,
        key_b: Some(ub),
        explained: s[..p].iter().map(|x| if total > 0.0 { x * x / total } else { 0.0 }).collect(),
        values: s[..p].to_vec(),
    }
    .finish())
}

/// Primal CCA in symmetric whitened form: SVD of
/// `(C_aa + r_a I)^(-1/2) C_ab (C_bb + r_b I)^(-1/2)` with ridge
/// `r = eps · trace(C)`.
///
/// Loadings are scaled so that each projected series has unit sample
/// variance (`uᴴ C_aa u = 1`). Explained fractions are `ρ²/Σρ²` over all
/// available correlations.
pub fn cca_primal<T: Scalar>(a: &DataMatrix<T>, b: &DataMatrix<T>, p: usize, eps: f64) -> Result<ModeSet<T>> {
    check_same_n(a, b)?;
    check_eps(eps)?;
    check_p(p, a.d().min(b.d()))?;
    let (a, b) = (a.centered_view("cca_primal"), b.centered_view("cca_primal"));
    let caa = auto_cov(&a);
    let cbb = auto_cov(&b);
    let cab = cross_cov(&a, &b)?;
    let wa = inv_sqrt_psd(caa.values(), eps * trace_re(caa.values()), "C_aa")?;
    let wb = inv_sqrt_psd(cbb.values(), eps * trace_re(cbb.values()), "C_bb")?;
    let t = &wa * cab.values() * &wb;
    let (x, rho, y) = svd_desc(&t)?;
    let rho: Vec<f64> = rho.into_iter().map(|r| r.max(0.0)).collect();
    let mut ua = &wa * x.columns(0, p);
    let mut ub = &wb * y.columns(0, p);
    unit_variance(&mut ua, caa.values());
    unit_variance(&mut ub, cbb.values());
    Ok(Modes {
        method: Method::Cca,
        temporal_a: a.values() * &ua,
        temporal_b: Some(b.values() * &ub),
        key: ua,
        key_b: Some(ub),
        explained: squared_shares(&rho[..p], &rho),
        values: rho[..p].to_vec(),
    }
    .finish())
}

fn unit_variance<T: Scalar>(u: &mut DMatrix<T>, c: &DMatrix<T>) {
    for j in 0..u.ncols() {
        let col = u.column(j).into_owned();
        let q = (col.adjoint() * c * &col)[(0, 0)].re();
        if q > 0.0 {
            u.column_mut(j).apply(|v| *v *= T::from_real(1.0 / q.sqrt()));
        }
    }
}
