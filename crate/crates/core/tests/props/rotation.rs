use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rockpca::rotation::{varimax, varimax_criterion, VarimaxOptions};

use super::{matrix, run, Property};

pub const SUITE: &[(&str, Property)] = &[
    ("criterion_does_not_decrease", criterion_does_not_decrease),
    ("norm_preserved", norm_preserved),
    ("fixed_point", fixed_point),
    ("real_stays_real", real_stays_real),
];

fn loadings() -> impl Strategy<Value = DMatrix<Complex64>> {
    (matrix(3..15, 2..5), any::<u64>()).prop_map(|(re, s)| {
        let im = super::normal_matrix(re.nrows(), re.ncols(), s);
        DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
    })
}

pub fn criterion_does_not_decrease(seed: u64) -> Result<(), String> {
    run(seed, (loadings(), matrix(3..15, 2..5)), |(z, x)| {
        let r = varimax(&z, VarimaxOptions::default()).unwrap();
        prop_assert!(varimax_criterion(&r.rotated) >= varimax_criterion(&z) - 1e-12);
        let r = varimax(&x, VarimaxOptions::default()).unwrap();
        prop_assert!(varimax_criterion(&r.rotated) >= varimax_criterion(&x) - 1e-12);
        prop_assert!(r.criterion_trace.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        Ok(())
    })
}

pub fn norm_preserved(seed: u64) -> Result<(), String> {
    run(seed, loadings(), |z| {
        let r = varimax(&z, VarimaxOptions::default()).unwrap();
        let (a, b) = (z.norm_squared(), r.rotated.norm_squared());
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0), "{a} vs {b}");
        let p = z.ncols();
        let u = (r.rotation.adjoint() * &r.rotation - DMatrix::<Complex64>::identity(p, p)).norm();
        prop_assert!(u < 1e-10, "{u}");
        Ok(())
    })
}

pub fn fixed_point(seed: u64) -> Result<(), String> {
    run(seed, loadings(), |z| {
        let opts = VarimaxOptions::default();
        let once = varimax(&z, opts).unwrap();
        let twice = varimax(&once.rotated, opts).unwrap();
        let gain = varimax_criterion(&twice.rotated) - varimax_criterion(&once.rotated);
        prop_assert!(gain < opts.tol.max(1e-12) * varimax_criterion(&once.rotated).abs().max(1.0) * 10.0, "{gain}");
        Ok(())
    })
}

pub fn real_stays_real(seed: u64) -> Result<(), String> {
    run(seed, matrix(3..15, 2..5), |x| {
        let z = x.map(|v| Complex64::new(v, 0.0));
        let r = varimax(&z, VarimaxOptions::default()).unwrap();
        let im = r.rotation.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        prop_assert!(im < 1e-12, "{im}");
        Ok(())
    })
}
