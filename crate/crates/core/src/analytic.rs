//! Discrete analytic signal via the FFT.
//!
//! Spectrum weights: `1` at DC, `2` on bins `1..⌈n/2⌉`, `1` at the Nyquist
//! bin when `n` is even, `0` on negative bins. The inverse transform is
//! divided by `n`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::io::{AnyMatrix, DataMatrix};

/// `n × d` analytic signal: real part is the input, imaginary part its
/// Hilbert transform.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticMatrix {
    values: DMatrix<Complex64>,
    centered: bool,
}

impl AnalyticMatrix {
    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn d(&self) -> usize {
        self.values.ncols()
    }

    /// As a complex data matrix. The Hilbert part has no DC component, so a
    /// centered input gives a centered result.
    pub fn into_data(self) -> DataMatrix<Complex64> {
        DataMatrix::from_parts_unchecked(self.values, self.centered)
    }
}

pub(crate) fn analytic_weights(n: usize) -> Vec<f64> {
    let mut h = vec![0.0; n];
    h[0] = 1.0;
    let half = n / 2;
    if n.is_multiple_of(2) {
        h[1..half].fill(2.0);
        h[half] = 1.0;
    } else {
        h[1..=half].fill(2.0);
    }
    h
}

pub fn hilbert_analytic(m: &DataMatrix<f64>) -> Result<AnalyticMatrix> {
    let (n, d) = (m.n(), m.d());
    if n < 4 {
        return Err(Error::TooFewSamples { need: 4, got: n });
    }
    if !m.is_centered() {
        log::warn!("hilbert_analytic: input not centered; DC is kept as-is");
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let h = analytic_weights(n);
    let scale = 1.0 / n as f64;
    let mut values = DMatrix::zeros(n, d);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..d {
        for (b, &x) in buf.iter_mut().zip(m.values().column(c).iter()) {
            *b = Complex64::new(x, 0.0);
        }
        fwd.process(&mut buf);
        for (b, &w) in buf.iter_mut().zip(&h) {
            *b *= w * scale;
        }
        inv.process(&mut buf);
        values.column_mut(c).copy_from_slice(&buf);
    }
    Ok(AnalyticMatrix {
        values,
        centered: m.is_centered(),
    })
}

/// Complex input is rejected; the transform is defined for real data only.
pub fn hilbert_analytic_any(m: &AnyMatrix) -> Result<AnalyticMatrix> {
    hilbert_analytic(m.as_real()?)
}

/// `arg(z)` in `(−π, π]`, with `arg(0) = 0`.
pub fn phase(z: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        return 0.0;
    }
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// `(|z|, arg z)` elementwise.
pub fn phase_amplitude(z: &DMatrix<Complex64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (z.map(|v| v.norm()), z.map(phase))
}

/// Removes `2π` jumps between consecutive samples.
pub fn unwrap(phases: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = 0.0;
    for (i, &p) in phases.iter().enumerate() {
        if i > 0 {
            let step = p - phases[i - 1];
            let mut wrapped = (step + PI).rem_euclid(2.0 * PI) - PI;
            if wrapped == -PI && step > 0.0 {
                wrapped = PI;
            }
            offset += wrapped - step;
        }
        out.push(p + offset);
    }
    out
}

/// Phase gradient along grid columns of an `h × w` row-major map.
///
/// Each row is unwrapped along its columns; one slope is then fitted to all
/// rows jointly (separate intercepts) with weights `amplitude²`.
pub fn phase_gradient(map: &[Complex64], h: usize, w: usize) -> Result<f64> {
    if map.len() != h * w {
        return Err(Error::DimensionMismatch(format!("map has {} cells for {h}×{w}", map.len())));
    }
    if w < 2 {
        return Err(Error::InvalidShape("phase gradient needs at least two columns".into()));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for r in 0..h {
        let row = &map[r * w..(r + 1) * w];
        let ph = unwrap(&row.iter().map(|&z| phase(z)).collect::<Vec<_>>());
        let wt: Vec<f64> = row.iter().map(|z| z.norm_sqr()).collect();
        let sw: f64 = wt.iter().sum();
        if sw == 0.0 {
            continue;
        }
        let cbar = wt.iter().enumerate().map(|(c, &q)| q * c as f64).sum::<f64>() / sw;
        let pbar = wt.iter().zip(&ph).map(|(&q, &p)| q * p).sum::<f64>() / sw;
        for c in 0..w {
            let dc = c as f64 - cbar;
            num += wt[c] * dc * (ph[c] - pbar);
            den += wt[c] * dc * dc;
        }
    }
    if den == 0.0 {
        return Err(Error::ZeroVariance("phase map amplitude"));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(n: usize, f: impl Fn(f64) -> f64) -> DataMatrix<f64> {
        DataMatrix::from_row_slice(n, 1, &(0..n).map(|t| f(t as f64)).collect::<Vec<_>>()).unwrap()
    }

    /// Direct O(n²) DFT, mask, inverse DFT.
    fn dft_oracle(x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        let w = analytic_weights(n);
        let spec: Vec<Complex64> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|t| x[t] * Complex64::from_polar(1.0, -2.0 * PI * (k * t) as f64 / n as f64))
                    .sum::<Complex64>()
                    * w[k]
            })
            .collect();
        (0..n)
            .map(|t| {
                (0..n)
                    .map(|k| spec[k] * Complex64::from_polar(1.0, 2.0 * PI * (k * t) as f64 / n as f64))
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    #[test]
    fn cosine_at_bin_becomes_complex_exponential() {
        let (n, k) = (64, 5);
        let a = hilbert_analytic(&column(n, |t| (2.0 * PI * k as f64 * t / n as f64).cos())).unwrap();
        for t in 0..n {
            let want = Complex64::from_polar(1.0, 2.0 * PI * (k * t) as f64 / n as f64);
            assert!((a.values()[(t, 0)] - want).norm() < 1e-10);
        }
    }

    #[test]
    fn constant_has_no_quadrature() {
        let a = hilbert_analytic(&column(10, |_| 2.5)).unwrap();
        for z in a.values().iter() {
            assert!((z - Complex64::new(2.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn sine_matches_dft_oracle() {
        let (n, k) = (64, 3.0);
        let x: Vec<f64> = (0..n).map(|t| (2.0 * PI * k * t as f64 / n as f64).sin()).collect();
        let a = hilbert_analytic(&column(n, |t| x[t as usize])).unwrap();
        let oracle = dft_oracle(&x);
        for (t, o) in oracle.iter().enumerate() {
            let z = a.values()[(t, 0)];
            assert!((z - o).norm() < 1e-10);
            assert!((z.im + (2.0 * PI * k * t as f64 / n as f64).cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn odd_length_matches_oracle() {
        let x: Vec<f64> = (0..15).map(|t| ((t * t) % 7) as f64 - 3.0).collect();
        let a = hilbert_analytic(&column(15, |t| x[t as usize])).unwrap();
        for (z, o) in a.values().iter().zip(dft_oracle(&x)) {
            assert!((z - o).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_short_and_complex_input() {
        assert!(matches!(hilbert_analytic(&column(3, |t| t)), Err(Error::TooFewSamples { .. })));
        let z = AnyMatrix::Complex(column(8, |t| t).to_complex());
        assert!(matches!(hilbert_analytic_any(&z), Err(Error::ComplexInput)));
    }

    #[test]
    fn phase_conventions() {
        assert_eq!(phase(Complex64::new(1.0, 0.0)), 0.0);
        assert_eq!(phase(Complex64::new(0.0, 0.0)), 0.0);
        assert_eq!(phase(Complex64::new(-0.0, -0.0)), 0.0);
        assert_eq!(phase(Complex64::new(-1.0, -0.0)), PI);
        let z = DMatrix::from_element(1, 1, Complex64::new(0.0, -2.0));
        let (a, p) = phase_amplitude(&z);
        assert_eq!(a[(0, 0)], 2.0);
        assert!((p[(0, 0)] + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn unwrap_restores_linear_ramp() {
        let ramp: Vec<f64> = (0..40).map(|i| 0.9 * i as f64 - 2.0).collect();
        let wrapped: Vec<f64> = ramp.iter().map(|&p| phase(Complex64::from_polar(1.0, p))).collect();
        for (u, r) in unwrap(&wrapped).iter().zip(&ramp) {
            assert!((u - r).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_of_planar_wave() {
        let (h, w, g) = (3, 8, -2.5);
        let map: Vec<Complex64> = (0..h * w)
            .map(|i| Complex64::from_polar(1.0 + (i / w) as f64, 0.3 * (i / w) as f64 + g * (i % w) as f64))
            .collect();
        assert!((phase_gradient(&map, h, w).unwrap() - g).abs() < 1e-12);
    }
}
