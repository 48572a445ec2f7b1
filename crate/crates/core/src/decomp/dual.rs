//! Dual (sample-space) solvers. All kernel CCA variants share one core:
//!
//! with `K = V Λ Vᴴ` and shrinkage `s = √(λ/(λ+κ))`, the regularized
//! canonical correlations are the singular values of
//! `diag(s_a) V_aᴴ V_b diag(s_b)`; coefficients are
//! `α = V_a diag(1/√(λ(λ+κ))) x`. The ridge is `κ = eps · trace(K)`, which
//! for linear kernels is exactly the primal ridge `eps · trace(C)` scaled by
//! `n − 1`, so primal CCA, dual CCA and linear kCCA agree.

use nalgebra::DMatrix;

use super::{check_eps, check_p, check_same_n, squared_shares, Method, ModeSet, Modes};
use crate::error::{Error, Result};
use crate::io::DataMatrix;
use crate::kernel::{gram, KernelMatrix};
use crate::linalg::{hermitian_eigen_desc, svd_desc, trace_re};
use crate::scalar::Scalar;

pub const DEFAULT_EPS_LINEAR: f64 = 1e-6;
pub const DEFAULT_EPS_RBF: f64 = 1e-3;

/// Eigen-decomposition of a centered kernel restricted to its numerical
/// range, with the kCCA shrinkage already applied.
#[derive(Debug, Clone)]
pub(crate) struct Spectrum<T: Scalar> {
    pub vectors: DMatrix<T>,
    pub lambda: Vec<f64>,
    pub kappa: f64,
}

impl<T: Scalar> Spectrum<T> {
    pub fn new(k: &DMatrix<T>, eps: f64) -> Self {
        let n = k.nrows();
        let (vals, vecs) = hermitian_eigen_desc(k);
        let top = vals.first().copied().unwrap_or(0.0);
        let floor = top * n as f64 * f64::EPSILON;
        let r = vals.iter().take_while(|&&v| v > floor && v > 0.0).count();
        Self {
            vectors: vecs.columns(0, r).into_owned(),
            lambda: vals[..r].to_vec(),
            kappa: eps * trace_re(k),
        }
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// `V diag(s)`: the whitened basis whose inner products give the
    /// regularized correlations.
    pub fn shrunk(&self) -> DMatrix<T> {
        let mut m = self.vectors.clone();
        for (j, &l) in self.lambda.iter().enumerate() {
            let s = (l / (l + self.kappa)).sqrt();
            m.column_mut(j).apply(|v| *v *= T::from_real(s));
        }
        m
    }

    fn coefficients(&self, x: &DMatrix<T>) -> DMatrix<T> {
        let mut scaled = x.clone();
        for (i, &l) in self.lambda.iter().enumerate() {
            let w = 1.0 / (l * (l + self.kappa)).sqrt();
            scaled.row_mut(i).apply(|v| *v *= T::from_real(w));
        }
        &self.vectors * scaled
    }
}

struct DualFit<T: Scalar> {
    rho: Vec<f64>,
    alpha_a: DMatrix<T>,
    alpha_b: DMatrix<T>,
    temporal_a: DMatrix<T>,
    temporal_b: DMatrix<T>,
}

fn dual_core<T: Scalar>(sa: &Spectrum<T>, sb: &Spectrum<T>, p: usize, n: usize) -> Result<DualFit<T>> {
    check_p(p, sa.rank().min(sb.rank()))?;
    let (ua, ub) = (sa.shrunk(), sb.shrunk());
    let c = ua.adjoint() * &ub;
    let (x, rho, y) = svd_desc(&c)?;
    let (x, y) = (x.columns(0, p).into_owned(), y.columns(0, p).into_owned());
    let mut alpha_a = sa.coefficients(&x);
    let mut alpha_b = sb.coefficients(&y);
    let mut temporal_a = ua * &x;
    let mut temporal_b = ub * &y;
    let target = ((n - 1) as f64).sqrt();
    for j in 0..p {
        for (t, al) in [(&mut temporal_a, &mut alpha_a), (&mut temporal_b, &mut alpha_b)] {
            let norm = t.column(j).norm();
            if norm > 0.0 {
                let f = T::from_real(target / norm);
                t.column_mut(j).apply(|v| *v *= f);
                al.column_mut(j).apply(|v| *v *= f);
            }
        }
    }
    Ok(DualFit {
        rho: rho.into_iter().map(|r| r.clamp(0.0, 1.0)).collect(),
        alpha_a,
        alpha_b,
        temporal_a,
        temporal_b,
    })
}

fn fit_to_modes<T: Scalar>(fit: DualFit<T>, method: Method, p: usize) -> ModeSet<T> {
    Modes {
        method,
        key: fit.alpha_a,
        key_b: Some(fit.alpha_b),
        temporal_a: fit.temporal_a,
        temporal_b: Some(fit.temporal_b),
        explained: squared_shares(&fit.rho[..p], &fit.rho),
        values: fit.rho[..p].to_vec(),
    }
    .finish()
}

/// Dual (R-mode) CCA on the Gram matrices of the centered data; only
/// `n × n` problems are solved. Separate coefficient matrices are kept for
/// each view; primal loadings are `ãᴴ α` (see [`dual_to_primal`]).
///
/// `eps = 0` is accepted while each centered data matrix has full column
/// rank, exactly as for the primal solver.
pub fn cca_dual<T: Scalar>(a: &DataMatrix<T>, b: &DataMatrix<T>, p: usize, eps: f64) -> Result<ModeSet<T>> {
    check_same_n(a, b)?;
    check_eps(eps)?;
    check_p(p, a.d().min(b.d()))?;
    let (a, b) = (a.centered_view("cca_dual"), b.centered_view("cca_dual"));
    let sa = Spectrum::new(gram(&a).values(), eps);
    let sb = Spectrum::new(gram(&b).values(), eps);
    if eps == 0.0 {
        for (s, m, name) in [(&sa, &a, "a"), (&sb, &b, "b")] {
            if s.rank() < m.d() {
                return Err(Error::RankDeficient(format!(
                    "centered {name} has rank {} < {} columns; use eps > 0",
                    s.rank(),
                    m.d()
                )));
            }
        }
    }
    let fit = dual_core(&sa, &sb, p, a.n())?;
    Ok(fit_to_modes(fit, Method::CcaDual, p))
}

/// Kernel CCA on centered kernels with ridge `κ = eps · trace(K)`.
///
/// `eps = 0` projects onto the kernel ranges; for full-rank kernels this
/// yields trivial unit correlations, so a positive `eps` is the norm.
pub fn kcca<T: Scalar>(ka: &KernelMatrix<T>, kb: &KernelMatrix<T>, p: usize, eps: f64) -> Result<ModeSet<T>> {
    let n = check_kernel_pair(ka, kb)?;
    check_eps(eps)?;
    if eps == 0.0 {
        log::warn!("kcca: eps = 0 leaves the problem unregularized");
    }
    let sa = Spectrum::new(ka.values(), eps);
    let sb = Spectrum::new(kb.values(), eps);
    let fit = dual_core(&sa, &sb, p, n)?;
    Ok(fit_to_modes(fit, Method::Kcca, p))
}

pub(crate) fn check_kernel_pair<T: Scalar>(ka: &KernelMatrix<T>, kb: &KernelMatrix<T>) -> Result<usize> {
    if ka.n() != kb.n() {
        return Err(Error::DimensionMismatch(format!("kernels are {}×{0} and {}×{1}", ka.n(), kb.n())));
    }
    if !ka.is_centered() || !kb.is_centered() {
        return Err(Error::NotCentered);
    }
    if ka.n() < 2 {
        return Err(Error::TooFewSamples { need: 2, got: ka.n() });
    }
    Ok(ka.n())
}

/// Kernel PCA of a centered kernel.
///
/// Temporal components are the unit-norm eigenvectors `v`; coefficients are
/// `α = v/λ`, so that `K α = v`. Explained fractions are `λ/trace(K)`.
pub fn kpca<T: Scalar>(k: &KernelMatrix<T>, p: usize) -> Result<ModeSet<T>> {
    check_p(p, k.n())?;
    if !k.is_centered() {
        return Err(Error::NotCentered);
    }
    let (vals, vecs) = hermitian_eigen_desc(k.values());
    let trace = trace_re(k.values());
    let top = vals.first().copied().unwrap_or(0.0).max(0.0);
    let floor = top * k.n() as f64 * f64::EPSILON;
    let lambda: Vec<f64> = vals[..p].iter().map(|&l| l.max(0.0)).collect();
    let temporal = vecs.columns(0, p).into_owned();
    let mut alpha = temporal.clone();
    for (j, &l) in lambda.iter().enumerate() {
        let w = if l > floor { 1.0 / l } else { 0.0 };
        alpha.column_mut(j).apply(|v| *v *= T::from_real(w));
    }
    Ok(Modes {
        method: Method::Kpca,
        key: alpha,
        key_b: None,
        temporal_a: temporal,
        temporal_b: None,
        explained: lambda.iter().map(|&l| if trace > 0.0 { l / trace } else { 0.0 }).collect(),
        values: lambda,
    }
    .finish())
}

/// Primal loadings `ãᴴ α` from dual coefficients.
pub fn dual_to_primal<T: Scalar>(a: &DataMatrix<T>, coefficients: &DMatrix<T>) -> Result<DMatrix<T>> {
    if coefficients.nrows() != a.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficient rows for {} samples",
            coefficients.nrows(),
            a.n()
        )));
    }
    Ok(a.centered_view("dual_to_primal").values().adjoint() * coefficients)
}
