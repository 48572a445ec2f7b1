//! Varimax and Promax rotation of real or complex loading matrices.
//!
//! The varimax criterion acts on squared moduli:
//! `Σ_j [ mean_i |λ_ij|⁴ − (mean_i |λ_ij|²)² ]`.
//!
//! Varimax runs pairwise Jacobi sweeps. A pair `(j, k)` is rotated by the
//! planar unitary `G` with `G_jj = G_kk = cos θ`, `G_kj = sin θ·e^{iφ}`,
//! `G_jk = −sin θ·e^{−iφ}` (`φ = 0` for real data). The best `(θ, φ)` is found
//! by coordinate ascent; each 1-D step is a coarse scan followed by
//! golden-section refinement. A pair update is kept only if it strictly
//! raises the criterion.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarimaxOptions {
    /// Sweeps stop once the criterion rises by less than this.
    pub tol: f64,
    pub max_iter: usize,
    /// Row-normalize (Kaiser) before rotating.
    pub kaiser: bool,
}

impl Default for VarimaxOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 500,
            kaiser: false,
        }
    }
}

pub const DEFAULT_PROMAX_POWER: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RotationResult<T: Scalar = f64> {
    pub rotation: DMatrix<T>,
    pub rotated: DMatrix<T>,
    /// Criterion before the first sweep and after each sweep.
    pub criterion_trace: Vec<f64>,
    pub power: Option<f64>,
    pub converged: bool,
}

pub fn varimax_criterion<T: Scalar>(l: &DMatrix<T>) -> f64 {
    let m = l.nrows() as f64;
    l.column_iter()
        .map(|c| {
            let (s2, s4) = c.iter().fold((0.0, 0.0), |(a, b), v| {
                let q = v.modulus_squared();
                (a + q, b + q * q)
            });
            s4 / m - (s2 / m).powi(2)
        })
        .sum()
}

/// Pair criterion as a function of the rotation: with
/// `n = (cos 2θ, sin 2θ cos φ, sin 2θ sin φ)` the rotated squared moduli are
/// `(P ± w·n)/2`, so the pair criterion is `const + nᵀ Q n`.
struct PairForm {
    q: [[f64; 3]; 3],
}

impl PairForm {
    fn new<T: Scalar>(l: &DMatrix<T>, j: usize, k: usize) -> Self {
        let m = l.nrows() as f64;
        let mut q = [[0.0; 3]; 3];
        let mut mean = [0.0; 3];
        for i in 0..l.nrows() {
            let (x, y) = (l[(i, j)], l[(i, k)]);
            let xy = x.conjugate() * y;
            let w = [x.modulus_squared() - y.modulus_squared(), 2.0 * xy.re(), -2.0 * xy.im()];
            for a in 0..3 {
                mean[a] += w[a] / m;
                for b in 0..3 {
                    q[a][b] += w[a] * w[b] / (2.0 * m);
                }
            }
        }
        for a in 0..3 {
            for b in 0..3 {
                q[a][b] -= 0.5 * mean[a] * mean[b];
            }
        }
        Self { q }
    }

    fn eval(&self, theta: f64, phi: f64) -> f64 {
        let (s, c) = (2.0 * theta).sin_cos();
        let n = [c, s * phi.cos(), s * phi.sin()];
        let mut v = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                v += n[a] * self.q[a][b] * n[b];
            }
        }
        v
    }

    fn scale(&self) -> f64 {
        (0..3).map(|a| self.q[a][a].abs()).sum::<f64>()
    }
}

/// Maximizes `f` on `[lo, hi]`: a 32-point scan, then golden-section search
/// around the best scan point.
fn maximize_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const SCAN: usize = 32;
    let step = (hi - lo) / SCAN as f64;
    let mut best = (lo, f(lo));
    for i in 1..=SCAN {
        let x = lo + step * i as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let v = f(x);
    if v > best.1 {
        (x, v)
    } else {
        best
    }
}

fn best_pair_rotation(form: &PairForm, complex: bool) -> (f64, f64, f64) {
    let quarter = PI / 4.0;
    let (mut theta, mut phi) = (0.0, 0.0);
    let mut value = form.eval(0.0, 0.0);
    for _ in 0..50 {
        let before = value;
        let (t, v) = maximize_1d(|t| form.eval(t, phi), -quarter, quarter);
        if v > value {
            theta = t;
            value = v;
        }
        if complex {
            let (p, v) = maximize_1d(|p| form.eval(theta, p), -PI, PI);
            if v > value {
                phi = p;
                value = v;
            }
        }
        if !complex || value - before <= 1e-15 * form.scale().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    (theta, phi, value)
}

fn apply_pair<T: Scalar>(m: &mut DMatrix<T>, j: usize, k: usize, theta: f64, phi: f64) {
    let (s, c) = theta.sin_cos();
    let e = T::unit_phase(phi);
    let gkj = e * T::from_real(s);
    let gjk = -(e.conjugate() * T::from_real(s));
    let cc = T::from_real(c);
    for i in 0..m.nrows() {
        let (x, y) = (m[(i, j)], m[(i, k)]);
        m[(i, j)] = x * cc + y * gkj;
        m[(i, k)] = x * gjk + y * cc;
    }
}

fn row_norms<T: Scalar>(l: &DMatrix<T>) -> Vec<f64> {
    l.row_iter()
        .map(|r| r.iter().map(|v| v.modulus_squared()).sum::<f64>().sqrt())
        .collect()
}

fn scale_rows<T: Scalar>(l: &mut DMatrix<T>, w: &[f64], invert: bool) {
    for (i, &h) in w.iter().enumerate() {
        if h > 0.0 {
            let f = T::from_real(if invert { 1.0 / h } else { h });
            l.row_mut(i).apply(|v| *v *= f);
        }
    }
}

pub fn varimax<T: Scalar>(loadings: &DMatrix<T>, opts: VarimaxOptions) -> Result<RotationResult<T>> {
    let p = loadings.ncols();
    if p == 0 || loadings.nrows() == 0 {
        return Err(Error::InvalidShape("varimax needs a non-empty loading matrix".into()));
    }
    if !(opts.tol >= 0.0 && opts.tol.is_finite()) {
        return Err(Error::param("tol", "must be non-negative and finite"));
    }
    if loadings.iter().any(|v| !(v.re().is_finite() && v.im().is_finite())) {
        return Err(Error::param("loadings", "contain non-finite values"));
    }
    let mut l = loadings.clone();
    let weights = opts.kaiser.then(|| row_norms(&l));
    if let Some(w) = &weights {
        scale_rows(&mut l, w, true);
    }
    let mut rotation = DMatrix::<T>::identity(p, p);
    let mut trace = vec![varimax_criterion(&l)];
    let mut converged = p == 1;
    if p > 1 {
        for _ in 0..opts.max_iter {
            for j in 0..p {
                for k in j + 1..p {
                    let form = PairForm::new(&l, j, k);
                    let base = form.eval(0.0, 0.0);
                    let (theta, phi, value) = best_pair_rotation(&form, T::IS_COMPLEX);
                    if value - base > 1e-13 * form.scale().max(f64::MIN_POSITIVE) {
                        apply_pair(&mut l, j, k, theta, phi);
                        apply_pair(&mut rotation, j, k, theta, phi);
                    }
                }
            }
            let c = varimax_criterion(&l);
            let gain = c - trace[trace.len() - 1];
            trace.push(c);
            if gain < opts.tol {
                converged = true;
                break;
            }
        }
    }
    if let Some(w) = &weights {
        scale_rows(&mut l, w, false);
    }
    Ok(RotationResult {
        rotated: loadings * &rotation,
        rotation,
        criterion_trace: trace,
        power: None,
        converged,
    })
}

/// Promax: varimax, then a least-squares fit to the target
/// `x·|x|^(k−1)` with the transform rescaled so that
/// `diag((UᴴU)⁻¹) = 1`.
pub fn promax<T: Scalar>(loadings: &DMatrix<T>, power: f64, opts: VarimaxOptions) -> Result<RotationResult<T>> {
    if !(power >= 1.0 && power.is_finite()) {
        return Err(Error::param("power", format!("must be at least 1, got {power}")));
    }
    let vm = varimax(loadings, opts)?;
    let x = &vm.rotated;
    let target = x.map(|v| v * T::from_real(v.modulus().powf(power - 1.0)));
    let xtx = x.adjoint() * x;
    let u = xtx
        .lu()
        .solve(&(x.adjoint() * &target))
        .ok_or_else(|| Error::Singular("promax least-squares system".into()))?;
    let inv = (u.adjoint() * &u)
        .try_inverse()
        .ok_or_else(|| Error::Singular("promax normalization".into()))?;
    let mut u = u;
    for j in 0..u.ncols() {
        let d = inv[(j, j)].re();
        if d.is_nan() || d <= 0.0 {
            return Err(Error::Singular("promax normalization".into()));
        }
        u.column_mut(j).apply(|v| *v *= T::from_real(d.sqrt()));
    }
    Ok(RotationResult {
        rotated: x * &u,
        rotation: &vm.rotation * u,
        criterion_trace: vm.criterion_trace,
        power: Some(power),
        converged: vm.converged,
    })
}
