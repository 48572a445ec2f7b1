//! Seeded synthetic data: the three dependence regimes and planted-mode
//! datacubes.
//!
//! Regimes use random stream 0 for `x` (or the ring angle) and stream 1 for
//! the noise (or `y`). Cubes use stream `m + 1` for mode `m` and stream 0
//! for additive noise.
//!
//! A planted mode is `A(c)·[s(t) cos(g·col) + H[s](t) sin(g·col)]`: a
//! spatial pattern `A`, a temporal series `s`, its Hilbert transform `H[s]`
//! and a phase gradient `g` along grid columns. Temporal series are centered
//! and Gram–Schmidt orthogonalized against earlier modes, spatial vectors
//! likewise, so mode energies add up exactly; each mode is then scaled to its
//! variance fraction of a unit-energy cube.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::analytic_weights;
use crate::error::{Error, Result};
use crate::io::{CubeValues, DataMatrix, Datacube};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Linear,
    Ring,
    Independent,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Linear, Regime::Ring, Regime::Independent];

    pub fn name(self) -> &'static str {
        match self {
            Regime::Linear => "linear",
            Regime::Ring => "ring",
            Regime::Independent => "independent",
        }
    }

    /// Noise level used by the dependence battery.
    pub fn default_noise(self) -> f64 {
        match self {
            Regime::Linear => 0.35,
            Regime::Ring => 0.05,
            Regime::Independent => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub regime: Regime,
    pub n: usize,
    pub noise: f64,
    pub seed: u64,
}

impl RegimeSpec {
    pub fn new(regime: Regime, n: usize, seed: u64) -> Self {
        Self {
            regime,
            n,
            noise: regime.default_noise(),
            seed,
        }
    }
}

/// `linear`: `y = x + noise·ε`; `ring`: `(x, y) = r(cos θ, sin θ)` with
/// `θ ~ U[0, 2π)`, `r = 1 + noise·ε`; `independent`: two standard normals.
pub fn gen_regime(spec: &RegimeSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    if spec.n < 10 {
        return Err(Error::param("n", format!("regimes need n ≥ 10, got {}", spec.n)));
    }
    if !(spec.noise >= 0.0 && spec.noise.is_finite()) {
        return Err(Error::param("noise", format!("must be non-negative, got {}", spec.noise)));
    }
    let mut s0 = Rng::new(spec.seed, 0);
    let mut s1 = Rng::new(spec.seed, 1);
    let n = spec.n;
    Ok(match spec.regime {
        Regime::Linear => {
            let x = s0.normals(n);
            let y = x.iter().map(|&v| v + spec.noise * s1.normal()).collect();
            (x, y)
        }
        Regime::Ring => {
            let mut x = Vec::with_capacity(n);
            let mut y = Vec::with_capacity(n);
            for _ in 0..n {
                let theta = 2.0 * PI * s0.uniform();
                let r = 1.0 + spec.noise * s1.normal();
                x.push(r * theta.cos());
                y.push(r * theta.sin());
            }
            (x, y)
        }
        Regime::Independent => (s0.normals(n), s1.normals(n)),
    })
}

/// Two views sharing a `k`-dimensional latent signal, for solver
/// cross-checks: `a = Z W_a + ½E_a`, `b = Z W_b + ½E_b`.
pub fn gen_coupled(n: usize, da: usize, db: usize, seed: u64) -> Result<(DataMatrix<f64>, DataMatrix<f64>)> {
    let k = da.min(db).clamp(1, 2);
    let mut rz = Rng::new(seed, 0);
    let mut rw = Rng::new(seed, 1);
    let mut re = Rng::new(seed, 2);
    let z = DMatrix::from_fn(n, k, |_, _| rz.normal());
    let wa = DMatrix::from_fn(k, da, |_, _| rw.normal());
    let wb = DMatrix::from_fn(k, db, |_, _| rw.normal());
    let ea = DMatrix::from_fn(n, da, |_, _| re.normal());
    let eb = DMatrix::from_fn(n, db, |_, _| re.normal());
    let a = &z * wa + ea * 0.5;
    let b = &z * wb + eb * 0.5;
    Ok((DataMatrix::new(a)?, DataMatrix::new(b)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpatialPattern {
    /// `exp(−d²/(2 radius²))` around `(row, col)`.
    GaussianBlob { row: f64, col: f64, radius: f64 },
    /// Positive blob at `a` minus negative blob at `b`.
    Dipole { row_a: f64, col_a: f64, row_b: f64, col_b: f64, radius: f64 },
    /// `1 + slope·(row − mid)/mid` with `mid = (h − 1)/2`.
    UniformTrend { slope: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TemporalPattern {
    /// `cos(2π·freq·t + phase)`, `freq` in cycles per step.
    Sinusoid { freq: f64, phase: f64 },
    LinearTrend,
    /// Stationary AR(1) with unit innovations.
    Ar1 { phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedMode {
    pub spatial: SpatialPattern,
    pub temporal: TemporalPattern,
    pub variance_fraction: f64,
    /// Phase gradient in radians per grid column.
    #[serde(default)]
    pub propagation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedCubeSpec {
    pub height: usize,
    pub width: usize,
    pub n: usize,
    pub modes: Vec<PlantedMode>,
    pub noise_fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruth {
    /// Planted temporal series `s_m` after centering and orthogonalization.
    pub temporal: Vec<Vec<f64>>,
    /// Spatial patterns `A_m` before orthogonalization.
    pub spatial: Vec<Vec<f64>>,
    /// `‖M_m‖²/‖X‖²` of the generated cube.
    pub fractions: Vec<f64>,
    pub noise_fraction: f64,
}

impl GroundTruth {
    /// Analytic signal `s + iH[s]` of mode `m`.
    pub fn analytic(&self, m: usize) -> Vec<Complex64> {
        let s = &self.temporal[m];
        let h = hilbert_imag(s);
        s.iter().zip(h).map(|(&re, im)| Complex64::new(re, im)).collect()
    }
}

fn hilbert_imag(s: &[f64]) -> Vec<f64> {
    let n = s.len();
    let mut planner = rustfft::FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = s.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (b, w) in buf.iter_mut().zip(analytic_weights(n)) {
        *b *= w / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|z| z.im).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Removes the projections on `basis`; returns `None` for a (numerically)
/// vanishing remainder.
fn orthogonalize(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let scale = dot(&v, &v);
    for b in basis {
        let f = dot(&v, b) / dot(b, b);
        v.iter_mut().zip(b).for_each(|(x, y)| *x -= f * y);
    }
    (scale > 0.0 && dot(&v, &v) > 1e-20 * scale).then_some(v)
}

fn center(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

fn spatial_values(p: &SpatialPattern, h: usize, w: usize) -> Vec<f64> {
    let blob = |r: f64, c: f64, r0: f64, c0: f64, rad: f64| (-((r - r0).powi(2) + (c - c0).powi(2)) / (2.0 * rad * rad)).exp();
    let mid = (h as f64 - 1.0) / 2.0;
    (0..h * w)
        .map(|i| {
            let (r, c) = ((i / w) as f64, (i % w) as f64);
            match *p {
                SpatialPattern::GaussianBlob { row, col, radius } => blob(r, c, row, col, radius),
                SpatialPattern::Dipole { row_a, col_a, row_b, col_b, radius } => {
                    blob(r, c, row_a, col_a, radius) - blob(r, c, row_b, col_b, radius)
                }
                SpatialPattern::UniformTrend { slope } => {
                    if mid > 0.0 {
                        1.0 + slope * (r - mid) / mid
                    } else {
                        1.0
                    }
                }
            }
        })
        .collect()
}

fn temporal_values(p: &TemporalPattern, n: usize, rng: &mut Rng) -> Result<Vec<f64>> {
    Ok(match *p {
        TemporalPattern::Sinusoid { freq, phase } => (0..n).map(|t| (2.0 * PI * freq * t as f64 + phase).cos()).collect(),
        TemporalPattern::LinearTrend => (0..n).map(|t| t as f64).collect(),
        TemporalPattern::Ar1 { phi } => {
            if phi.is_nan() || phi.abs() >= 1.0 {
                return Err(Error::Infeasible(format!("AR(1) coefficient {phi} is not stationary")));
            }
            let mut x = Vec::with_capacity(n);
            let mut prev = rng.normal() / (1.0 - phi * phi).sqrt();
            x.push(prev);
            for _ in 1..n {
                prev = phi * prev + rng.normal();
                x.push(prev);
            }
            x
        }
    })
}

pub fn gen_cube(spec: &PlantedCubeSpec) -> Result<(Datacube, GroundTruth)> {
    let (h, w, n) = (spec.height, spec.width, spec.n);
    if h == 0 || w == 0 {
        return Err(Error::param("grid", "height and width must be positive"));
    }
    if n < 4 {
        return Err(Error::TooFewSamples { need: 4, got: n });
    }
    let fracs: Vec<f64> = spec.modes.iter().map(|m| m.variance_fraction).collect();
    if fracs.iter().chain([&spec.noise_fraction]).any(|f| !(*f >= 0.0 && f.is_finite())) {
        return Err(Error::Infeasible("variance fractions must be non-negative".into()));
    }
    let budget: f64 = fracs.iter().sum::<f64>() + spec.noise_fraction;
    if (budget - 1.0).abs() > 1e-9 {
        return Err(Error::Infeasible(format!("variance fractions sum to {budget}, not 1")));
    }
    let d = h * w;
    let cols: Vec<f64> = (0..d).map(|i| (i % w) as f64).collect();
    let mut x = DMatrix::<f64>::zeros(n, d);
    let mut t_basis: Vec<Vec<f64>> = Vec::new();
    let mut s_basis: Vec<Vec<f64>> = Vec::new();
    let mut truth = GroundTruth {
        temporal: Vec::new(),
        spatial: Vec::new(),
        fractions: Vec::new(),
        noise_fraction: 0.0,
    };
    let mut blocks = Vec::new();
    for (m, mode) in spec.modes.iter().enumerate() {
        let mut rng = Rng::new(spec.seed, m as u64 + 1);
        let mut s = temporal_values(&mode.temporal, n, &mut rng)?;
        center(&mut s);
        let s = orthogonalize(s, &t_basis)
            .ok_or_else(|| Error::Infeasible(format!("mode {m}: temporal series vanishes after orthogonalization")))?;
        let hs = hilbert_imag(&s);
        let a = spatial_values(&mode.spatial, h, w);
        let g = mode.propagation;
        let v1: Vec<f64> = a.iter().zip(&cols).map(|(&a, &c)| a * (g * c).cos()).collect();
        let v2: Vec<f64> = a.iter().zip(&cols).map(|(&a, &c)| a * (g * c).sin()).collect();
        let mut terms = Vec::new();
        let mut new_spatial = Vec::new();
        for (tv, sv) in [(&s, v1), (&hs, v2)] {
            if let Some(sv) = orthogonalize(sv, &s_basis) {
                terms.push((tv.clone(), sv.clone()));
                new_spatial.push(sv);
            }
        }
        if terms.is_empty() {
            return Err(Error::Infeasible(format!("mode {m}: spatial pattern vanishes")));
        }
        let mut block = DMatrix::<f64>::zeros(n, d);
        for (tv, sv) in &terms {
            for c in 0..d {
                for t in 0..n {
                    block[(t, c)] += tv[t] * sv[c];
                }
            }
        }
        let energy = block.norm_squared();
        block *= (mode.variance_fraction / energy).sqrt();
        t_basis.push(s.clone());
        t_basis.push(hs);
        s_basis.extend(new_spatial);
        truth.temporal.push(s);
        truth.spatial.push(a);
        blocks.push(block);
    }
    for b in &blocks {
        x += b;
    }
    let mut noise = DMatrix::<f64>::zeros(n, d);
    if spec.noise_fraction > 0.0 {
        let mut rng = Rng::new(spec.seed, 0);
        for t in 0..n {
            for c in 0..d {
                noise[(t, c)] = rng.normal();
            }
        }
        for mut col in noise.column_iter_mut() {
            let m = col.mean();
            col.add_scalar_mut(-m);
        }
        noise *= (spec.noise_fraction / noise.norm_squared()).sqrt();
        x += &noise;
    }
    let total = x.norm_squared();
    truth.fractions = blocks.iter().map(|b| b.norm_squared() / total).collect();
    truth.noise_fraction = noise.norm_squared() / total;
    let cube = Datacube::new(
        (0..n).map(|t| t as f64).collect(),
        (0..d).map(|i| [(i / w) as f64, (i % w) as f64]).collect(),
        vec![true; d],
        CubeValues::Real(x),
    )?;
    Ok((cube, truth))
}

/// Annual-cycle dominated 12×12 cube: 0.88 annual sinusoid, 0.08 linear
/// trend, 0.04 AR(1) dipole, no noise.
pub fn preset_sst_synth(seed: u64) -> PlantedCubeSpec {
    PlantedCubeSpec {
        height: 12,
        width: 12,
        n: 240,
        modes: vec![
            PlantedMode {
                spatial: SpatialPattern::GaussianBlob { row: 5.5, col: 5.5, radius: 3.0 },
                temporal: TemporalPattern::Sinusoid { freq: 1.0 / 12.0, phase: 0.0 },
                variance_fraction: 0.88,
                propagation: 0.0,
            },
            PlantedMode {
                spatial: SpatialPattern::UniformTrend { slope: 0.5 },
                temporal: TemporalPattern::LinearTrend,
                variance_fraction: 0.08,
                propagation: 0.0,
            },
            PlantedMode {
                spatial: SpatialPattern::Dipole { row_a: 3.0, col_a: 3.0, row_b: 8.0, col_b: 8.0, radius: 2.0 },
                temporal: TemporalPattern::Ar1 { phi: 0.9 },
                variance_fraction: 0.04,
                propagation: 0.0,
            },
        ],
        noise_fraction: 0.0,
        seed,
    }
}

/// One broad annual wave travelling along the columns at `π/8` per cell.
pub fn preset_wave(seed: u64) -> PlantedCubeSpec {
    PlantedCubeSpec {
        height: 12,
        width: 12,
        n: 240,
        modes: vec![PlantedMode {
            spatial: SpatialPattern::GaussianBlob { row: 5.5, col: 5.5, radius: 6.0 },
            temporal: TemporalPattern::Sinusoid { freq: 1.0 / 12.0, phase: 0.0 },
            variance_fraction: 0.98,
            propagation: PI / 8.0,
        }],
        noise_fraction: 0.02,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pearson(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
        sxy / (sxx * syy).sqrt()
    }

    #[test]
    fn regime_examples() {
        let (x, y) = gen_regime(&RegimeSpec { regime: Regime::Linear, n: 50, noise: 0.0, seed: 3 }).unwrap();
        assert_eq!(pearson(&x, &y), 1.0);
        let (x, y) = gen_regime(&RegimeSpec { regime: Regime::Ring, n: 400, noise: 0.05, seed: 1 }).unwrap();
        assert!(pearson(&x, &y).abs() < 0.1);
        assert!(gen_regime(&RegimeSpec { regime: Regime::Ring, n: 5, noise: 0.05, seed: 1 }).is_err());
    }

    #[test]
    fn generators_are_reproducible() {
        let spec = RegimeSpec::new(Regime::Independent, 30, 9);
        assert_eq!(gen_regime(&spec).unwrap(), gen_regime(&spec).unwrap());
        let a = gen_cube(&preset_sst_synth(4)).unwrap();
        let b = gen_cube(&preset_sst_synth(4)).unwrap();
        assert_eq!(a.0, b.0);
    }

    #[test]
    fn cube_budget_matches_fractions() {
        for spec in [preset_sst_synth(0), preset_wave(0)] {
            let (cube, truth) = gen_cube(&spec).unwrap();
            assert_eq!((cube.n(), cube.d_total()), (240, 144));
            for (got, m) in truth.fractions.iter().zip(&spec.modes) {
                assert!((got - m.variance_fraction).abs() <= 0.01, "{got}");
            }
        }
    }

    #[test]
    fn infeasible_specs_are_rejected() {
        let mut spec = preset_sst_synth(0);
        spec.noise_fraction = 0.1;
        assert!(matches!(gen_cube(&spec), Err(Error::Infeasible(_))));
        let mut spec = preset_sst_synth(0);
        spec.modes[0].spatial = SpatialPattern::UniformTrend { slope: 0.0 };
        spec.modes[1].spatial = SpatialPattern::UniformTrend { slope: 0.0 };
        assert!(matches!(gen_cube(&spec), Err(Error::Infeasible(_))));
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = preset_wave(2);
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"kind\":\"gaussian-blob\""));
        let back: PlantedCubeSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
