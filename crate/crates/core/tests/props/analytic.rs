use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rockpca::analytic::{hilbert_analytic, phase, unwrap};
use rockpca::io::DataMatrix;

use super::{matrix, run, Property};

pub const SUITE: &[(&str, Property)] = &[
    ("linearity", linearity),
    ("energy_odd_length", energy_odd_length),
    ("energy_with_nyquist", energy_with_nyquist),
    ("frequency_shift", frequency_shift),
];

pub fn linearity(seed: u64) -> Result<(), String> {
    run(seed, (matrix(4..80, 1..4), -3.0f64..3.0, -3.0f64..3.0, any::<u64>()), |(x, a, b, s)| {
        let y = super::normal_matrix(x.nrows(), x.ncols(), s);
        let hx = hilbert_analytic(&DataMatrix::new(x.clone()).unwrap()).unwrap();
        let hy = hilbert_analytic(&DataMatrix::new(y.clone()).unwrap()).unwrap();
        let hs = hilbert_analytic(&DataMatrix::new(&x * a + &y * b).unwrap()).unwrap();
        let want = hx.values().map(|z| z * a) + hy.values().map(|z| z * b);
        let err = (hs.values() - &want).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = want.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(err <= 1e-10 * scale, "{err}");
        Ok(())
    })
}

fn energies(col: &[f64]) -> (f64, f64, f64, f64) {
    let n = col.len();
    let m = DataMatrix::from_row_slice(n, 1, col).unwrap();
    let z = hilbert_analytic(&m).unwrap();
    let e_out: f64 = z.values().iter().map(|v| v.norm_sqr()).sum();
    let dc = col.iter().sum::<f64>() / n as f64;
    let e_ac: f64 = col.iter().map(|v| (v - dc).powi(2)).sum();
    let nyq: f64 = col.iter().enumerate().map(|(t, v)| if t % 2 == 0 { *v } else { -*v }).sum();
    (e_out, e_ac, dc, if n.is_multiple_of(2) { nyq * nyq / n as f64 } else { 0.0 })
}

/// `Σ|z|² = 2·Σ|x − DC|² + n·DC²` exactly holds when there is no Nyquist bin.
pub fn energy_odd_length(seed: u64) -> Result<(), String> {
    run(seed, (2usize..60, any::<u64>(), -2.0f64..2.0), |(h, s, dc)| {
        let n = 2 * h + 1;
        let col: Vec<f64> = super::normal_matrix(n, 1, s).iter().map(|v| v + dc).collect();
        let (e_out, e_ac, mean, _) = energies(&col);
        let want = 2.0 * e_ac + n as f64 * mean * mean;
        prop_assert!((e_out - want).abs() <= 1e-8 * want, "{e_out} vs {want}");
        Ok(())
    })
}

/// Any length: the Nyquist bin keeps weight one, so its energy `|X_{n/2}|²/n`
/// is counted once rather than twice.
pub fn energy_with_nyquist(seed: u64) -> Result<(), String> {
    run(seed, (4usize..120, any::<u64>(), -2.0f64..2.0), |(n, s, dc)| {
        let col: Vec<f64> = super::normal_matrix(n, 1, s).iter().map(|v| v + dc).collect();
        let (e_out, e_ac, mean, nyq) = energies(&col);
        let want = 2.0 * e_ac + n as f64 * mean * mean - nyq;
        prop_assert!((e_out - want).abs() <= 1e-8 * want, "{e_out} vs {want}");
        Ok(())
    })
}

pub fn frequency_shift(seed: u64) -> Result<(), String> {
    let case = (8usize..200).prop_flat_map(|n| (Just(n), 1..n.div_ceil(2), -PI..PI, 0.1f64..5.0));
    run(seed, case, |(n, k, p0, amp)| {
        let w = 2.0 * PI * k as f64 / n as f64;
        let col: Vec<f64> = (0..n).map(|t| amp * (w * t as f64 + p0).cos()).collect();
        let z = hilbert_analytic(&DataMatrix::from_row_slice(n, 1, &col).unwrap()).unwrap();
        let ph: Vec<f64> = z.values().iter().map(|v: &Complex64| phase(*v)).collect();
        let u = unwrap(&ph);
        for s in u.windows(2) {
            prop_assert!((s[1] - s[0] - w).abs() <= 1e-8, "step {} vs {w}", s[1] - s[0]);
        }
        Ok(())
    })
}
