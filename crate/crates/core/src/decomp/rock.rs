//! Rotated complex kernel PCA.
//!
//! Order: center → analytic signal → kernel → center kernel → kPCA →
//! rotation of the retained components → spatial maps `Zᴴ t`.
//!
//! After rotation each component's share is its kernel Rayleigh quotient
//! `tᴴ K t / tᴴ t` over `trace(K)`; components are reordered by it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{align_phase, kpca, scale_column, Method, ModeSet};
use crate::analytic::{hilbert_analytic, phase};
use crate::error::Result;
use crate::io::Datacube;
use crate::kernel::{build_kernel, center_kernel, KernelChoice, KernelKind};
use crate::linalg::trace_re;
use crate::rotation::{promax, varimax, RotationResult, VarimaxOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RotateMethod {
    None,
    Varimax,
    Promax(f64),
}

/// Which matrix the rotation criterion is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationTarget {
    /// Spatial maps `Zᴴ T` (`d × p`).
    Spatial,
    /// Temporal components `T` (`n × p`).
    Temporal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RockOptions {
    pub kernel: KernelChoice,
    pub p: usize,
    pub rotate: RotateMethod,
    pub target: RotationTarget,
    pub varimax: VarimaxOptions,
}

impl RockOptions {
    pub fn new(kernel: KernelChoice, p: usize) -> Self {
        Self {
            kernel,
            p,
            rotate: RotateMethod::Varimax,
            target: RotationTarget::Spatial,
            varimax: VarimaxOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RockResult {
    /// Unrotated kPCA of the analytic data.
    pub kpca: ModeSet<Complex64>,
    /// Final modes: `loadings_a` are the spatial maps over active cells,
    /// `temporal_a` the (rotated) temporal components.
    pub modes: ModeSet<Complex64>,
    pub rotation: Option<RotationResult<Complex64>>,
    pub kernel: KernelKind,
    /// `p × d_total` maps on the full grid, masked cells zero; amplitude is
    /// normalized to a maximum of one per mode.
    pub amplitude: DMatrix<f64>,
    pub phase: DMatrix<f64>,
}

pub fn rock_pca(cube: &Datacube, opts: &RockOptions) -> Result<RockResult> {
    let x = cube.flatten()?;
    let x = x.as_real()?.center_columns();
    let z = hilbert_analytic(&x)?.into_data();
    let k = center_kernel(&build_kernel(&z, opts.kernel)?);
    let base = kpca(&k, opts.p)?;
    let t0 = base.temporal_a().clone();
    let zh = z.values().adjoint();

    let (temporal, rotation) = match opts.rotate {
        RotateMethod::None => (t0, None),
        method => {
            let subject = match opts.target {
                RotationTarget::Spatial => &zh * &t0,
                RotationTarget::Temporal => t0.clone(),
            };
            let rot = match method {
                RotateMethod::Promax(power) => promax(&subject, power, opts.varimax)?,
                _ => varimax(&subject, opts.varimax)?,
            };
            (&t0 * &rot.rotation, Some(rot))
        }
    };
    let maps = &zh * &temporal;

    let trace = trace_re(k.values());
    let p = opts.p;
    let vals: Vec<f64> = (0..p)
        .map(|j| {
            let t = temporal.column(j);
            let num = (t.adjoint() * k.values() * t)[(0, 0)].re;
            let den = t.norm_squared();
            if den > 0.0 { num / den } else { 0.0 }
        })
        .collect();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));

    let pick = |m: &DMatrix<Complex64>| DMatrix::from_fn(m.nrows(), p, |r, c| m[(r, order[c])]);
    let mut maps = pick(&maps);
    let mut temporal = pick(&temporal);
    let mut rotation = rotation.map(|r| RotationResult {
        rotation: pick(&r.rotation),
        rotated: pick(&r.rotated),
        ..r
    });
    for j in 0..p {
        let u = align_phase(&mut maps, j);
        scale_column(&mut temporal, j, u);
        if let Some(r) = rotation.as_mut() {
            scale_column(&mut r.rotation, j, u);
            scale_column(&mut r.rotated, j, u);
        }
    }
    let values: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let explained = values.iter().map(|v| if trace > 0.0 { v / trace } else { 0.0 }).collect();

    let full = cube.scatter(&maps.transpose())?;
    let mut amplitude = full.map(|v| v.norm());
    for mut row in amplitude.row_iter_mut() {
        let top = row.max();
        if top > 0.0 {
            row /= top;
        }
    }
    let phase = full.map(phase);

    Ok(RockResult {
        kpca: base,
        modes: ModeSet {
            method: Method::RockPca,
            loadings_a: maps,
            loadings_b: None,
            temporal_a: temporal,
            temporal_b: None,
            values,
            explained_fraction: explained,
        },
        rotation,
        kernel: k.kind(),
        amplitude,
        phase,
    })
}
