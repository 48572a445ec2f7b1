use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rockpca::io::{center_columns, load_cube, save_cube, CubeValues, DataMatrix, Datacube};

use super::{matrix, run, Property};

pub const SUITE: &[(&str, Property)] = &[
    ("save_load_identity", save_load_identity),
    ("centering_idempotent_and_linear", centering_idempotent_and_linear),
];

fn cube() -> impl Strategy<Value = Datacube> {
    (matrix(1..12, 1..10), any::<u64>(), any::<bool>(), 1e-3f64..10.0).prop_map(|(m, s, complex, dt)| {
        let (n, d) = m.shape();
        let mut r = rockpca::rng::Rng::new(s, 3);
        let mask: Vec<bool> = (0..d).map(|_| r.uniform() > 0.3).collect();
        let grid: Vec<[f64; 2]> = (0..d).map(|j| [(j / 3) as f64 * 0.25 - 40.0, (j % 3) as f64 * 1.5 + r.normal()]).collect();
        let time: Vec<f64> = (0..n).map(|t| 1950.0 + t as f64 * dt).collect();
        let values = if complex {
            CubeValues::Complex(DMatrix::from_fn(n, d, |i, j| Complex64::new(m[(i, j)], r.normal() * 1e-300 + m[(i, j)] / 3.0)))
        } else {
            CubeValues::Real(m)
        };
        Datacube::new(time, grid, mask, values).unwrap()
    })
}

fn bits(c: &Datacube) -> Vec<u64> {
    let mut v: Vec<u64> = c.time().iter().map(|t| t.to_bits()).collect();
    v.extend(c.grid().iter().flatten().map(|g| g.to_bits()));
    v.extend(c.mask().iter().map(|&m| m as u64));
    match c.values() {
        CubeValues::Real(m) => v.extend(m.iter().map(|x| x.to_bits())),
        CubeValues::Complex(m) => v.extend(m.iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()])),
    }
    v
}

pub fn save_load_identity(seed: u64) -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("cube");
    run(seed, cube(), |c| {
        save_cube(&c, &path).unwrap();
        let back = load_cube(&path).unwrap();
        prop_assert_eq!(bits(&c), bits(&back));
        prop_assert_eq!(c.values().is_complex(), back.values().is_complex());
        Ok(())
    })
}

pub fn centering_idempotent_and_linear(seed: u64) -> Result<(), String> {
    run(seed, (matrix(2..30, 1..6), any::<u64>(), -4.0f64..4.0, -4.0f64..4.0), |(x, s, a, b)| {
        let y = super::normal_matrix(x.nrows(), x.ncols(), s).map(|v| v * 3.0 + 5.0);
        let (dx, dy) = (DataMatrix::new(x.clone()).unwrap(), DataMatrix::new(y.clone()).unwrap());
        let cx = center_columns(&dx);
        let once = cx.values().clone();
        let twice = center_columns(&cx).values().clone();
        let scale = x.abs().max().max(1.0);
        prop_assert!((&twice - &once).abs().max() <= 1e-12 * scale);
        let combo = center_columns(&DataMatrix::new(&x * a + &y * b).unwrap()).values().clone();
        let want = &once * a + center_columns(&dy).values() * b;
        let s = want.abs().max().max(1.0);
        prop_assert!((combo - want).abs().max() <= 1e-12 * s * 10.0);
        Ok(())
    })
}
