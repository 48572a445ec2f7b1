use nalgebra::DMatrix;
use proptest::prelude::*;
use rockpca::io::DataMatrix;
use rockpca::kernel::{center_kernel, gram, rbf, reg_inverse};
use rockpca::linalg::{frobenius, hermitian_eigen_desc, trace_re};

use super::{matrix, run, Property};

pub const SUITE: &[(&str, Property)] = &[
    ("gram_is_psd", gram_is_psd),
    ("rbf_scaling_identity", rbf_scaling_identity),
    ("centering_is_idempotent", centering_is_idempotent),
    ("large_sigma_limit", large_sigma_limit),
    ("reg_inverse_inverts", reg_inverse_inverts),
];

pub fn gram_is_psd(seed: u64) -> Result<(), String> {
    run(seed, matrix(2..25, 1..8), |m| {
        let k = gram(&DataMatrix::new(m).unwrap());
        let v = k.values();
        prop_assert!(v == &v.transpose());
        let (vals, _) = hermitian_eigen_desc(v);
        let floor = -1e-10 * trace_re(v).max(1.0);
        prop_assert!(vals.iter().all(|&l| l >= floor), "{vals:?}");
        Ok(())
    })
}

pub fn rbf_scaling_identity(seed: u64) -> Result<(), String> {
    run(seed, (matrix(2..20, 1..5), 0.1f64..4.0, 0.01f64..2.0), |(m, c, g)| {
        let x = DataMatrix::new(m.clone()).unwrap();
        let cx = DataMatrix::new(m * c).unwrap();
        let a = rbf(&cx, g).unwrap();
        let b = rbf(&x, g * c * c).unwrap();
        let err = (a.values() - b.values()).abs().max();
        prop_assert!(err <= 1e-12, "{err}");
        Ok(())
    })
}

pub fn centering_is_idempotent(seed: u64) -> Result<(), String> {
    run(seed, (matrix(3..20, 1..5), 0.05f64..2.0), |(m, g)| {
        let x = DataMatrix::new(m).unwrap();
        let k = center_kernel(&rbf(&x, g).unwrap());
        prop_assert!(k.is_centered());
        let twice = center_kernel(&k);
        let scale = frobenius(k.values()).max(1.0);
        prop_assert!(frobenius(&(twice.values() - k.values())) <= 1e-12 * scale);
        let lin = center_kernel(&gram(&x));
        let direct = gram(&x.center_columns());
        prop_assert!(frobenius(&(lin.values() - direct.values())) <= 1e-10 * frobenius(direct.values()).max(1.0));
        Ok(())
    })
}

/// `center(rbf(γ))/(2γ) = center(gram) + (γ/4)·center(D⁴) + O(γ²)` with `D`
/// the pairwise distances.
pub fn large_sigma_limit(seed: u64) -> Result<(), String> {
    run(seed, (3usize..20, 1usize..4, any::<u64>()), |(n, d, s)| {
        let x = DataMatrix::new(super::normal_matrix(n, d, s)).unwrap().center_columns();
        let lin = gram(&x);
        let target = lin.values();
        let err = |g: f64| frobenius(&(center_kernel(&rbf(&x, g).unwrap()).values() / (2.0 * g) - target));
        let (e4, e5) = (err(1e-4), err(1e-5));
        let g = target;
        let d4 = DMatrix::from_fn(n, n, |i, j| (g[(i, i)] + g[(j, j)] - 2.0 * g[(i, j)]).powi(2));
        let h = DMatrix::<f64>::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
        let c = frobenius(&(&h * d4 * &h)) / 4.0 * 1.5 + 1e-9;
        prop_assert!(e4 <= c * 1e-4 && e5 <= c * 1e-5, "{e4} {e5} {c}");
        let ratio = e5 / e4;
        prop_assert!((0.05..=0.2).contains(&ratio), "ratio {ratio}");
        Ok(())
    })
}

pub fn reg_inverse_inverts(seed: u64) -> Result<(), String> {
    run(seed, (matrix(2..20, 1..6), 1e-4f64..1e-1), |(m, eps)| {
        let x = DataMatrix::new(m).unwrap();
        let k = center_kernel(&gram(&x));
        let inv = reg_inverse(&k, eps).unwrap();
        let n = k.n();
        let shifted = k.values() + nalgebra::DMatrix::identity(n, n) * (n as f64 * eps);
        let resid = frobenius(&(shifted * inv - nalgebra::DMatrix::<f64>::identity(n, n)));
        prop_assert!(resid <= 1e-8, "{resid}");
        Ok(())
    })
}
