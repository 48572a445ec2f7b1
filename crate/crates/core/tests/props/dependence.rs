use proptest::prelude::*;
use rockpca::dependence::{hsic, kcca_stat, kgv};
use rockpca::io::DataMatrix;
use rockpca::kernel::{center_kernel, gram, median_distance, rbf, gamma_from_sigma};
use rockpca::rng::Rng;

use super::{matrix, rel, run, Property};

pub const SUITE: &[(&str, Property)] = &[
    ("hsic_non_negative", hsic_non_negative),
    ("hsic_symmetric", hsic_symmetric),
    ("hsic_linear_scaling", hsic_linear_scaling),
    ("kgv_kcca_permutation_invariant", kgv_kcca_permutation_invariant),
];

fn views() -> impl Strategy<Value = (DataMatrix<f64>, DataMatrix<f64>)> {
    (matrix(4..30, 1..4), matrix(4..30, 1..4), 0.0f64..1.0).prop_map(|(a, b, mix)| {
        let n = a.nrows().min(b.nrows());
        let a = a.rows(0, n).into_owned();
        let mut b = b.rows(0, n).into_owned();
        let cols = b.ncols().min(a.ncols());
        for j in 0..cols {
            let src = a.column(j).map(|v| v * v);
            b.column_mut(j).axpy(mix, &src, 1.0 - mix);
        }
        (DataMatrix::new(a).unwrap(), DataMatrix::new(b).unwrap())
    })
}

fn rbf_median(m: &DataMatrix<f64>) -> rockpca::kernel::KernelMatrix<f64> {
    let s = median_distance(m).unwrap_or(1.0).max(1e-6);
    rbf(m, gamma_from_sigma(s).unwrap()).unwrap()
}

pub fn hsic_non_negative(seed: u64) -> Result<(), String> {
    run(seed, views(), |(a, b)| {
        prop_assert!(hsic(&gram(&a), &gram(&b)).unwrap() >= -1e-12);
        prop_assert!(hsic(&rbf_median(&a), &rbf_median(&b)).unwrap() >= -1e-12);
        Ok(())
    })
}

pub fn hsic_symmetric(seed: u64) -> Result<(), String> {
    run(seed, views(), |(a, b)| {
        let (ka, kb) = (rbf_median(&a), gram(&b));
        prop_assert_eq!(hsic(&ka, &kb).unwrap().to_bits(), hsic(&kb, &ka).unwrap().to_bits());
        Ok(())
    })
}

pub fn hsic_linear_scaling(seed: u64) -> Result<(), String> {
    run(seed, (views(), 0.1f64..10.0, 0.1f64..10.0), |((a, b), ca, cb)| {
        let base = hsic(&gram(&a), &gram(&b)).unwrap();
        let sa = DataMatrix::new(a.values() * ca).unwrap();
        let sb = DataMatrix::new(b.values() * cb).unwrap();
        let scaled = hsic(&gram(&sa), &gram(&sb)).unwrap();
        let want = base * ca * ca * cb * cb;
        let floor = 1e-12 * (ca * ca * cb * cb) * (a.values().norm_squared() * b.values().norm_squared()).max(1.0) / (a.n() * a.n()) as f64;
        prop_assert!((scaled - want).abs() <= 1e-10 * want.abs() + floor, "{scaled} vs {want}");
        Ok(())
    })
}

pub fn kgv_kcca_permutation_invariant(seed: u64) -> Result<(), String> {
    run(seed, (views(), any::<u64>(), 1e-3f64..0.1), |((a, b), s, eps)| {
        let perm = Rng::new(s, 0).permutation(a.n());
        let (pa, pb) = (a.permute_rows(&perm).unwrap(), b.permute_rows(&perm).unwrap());
        let k = |m: &DataMatrix<f64>| center_kernel(&rbf_median(m));
        let (ka, kb, qa, qb) = (k(&a), k(&b), k(&pa), k(&pb));
        let (g0, g1) = (kgv(&ka, &kb, eps).unwrap(), kgv(&qa, &qb, eps).unwrap());
        let (r0, r1) = (kcca_stat(&ka, &kb, eps).unwrap(), kcca_stat(&qa, &qb, eps).unwrap());
        prop_assert!(rel(g0, g1) <= 1e-10, "{g0} vs {g1}");
        prop_assert!((r0 - r1).abs() <= 1e-10, "{r0} vs {r1}");
        Ok(())
    })
}
