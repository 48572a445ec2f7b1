//! Dependence statistics between two datasets, permutation nulls and the
//! kernel length-scale sweep.
//!
//! * HSIC: biased estimator `(1/n²) tr(K H L H)`.
//! * COCO: `(1/n) σ_max(K̃_a^{1/2} K̃_b^{1/2})`, i.e. `(1/n) √λ_max(K̃_a K̃_b)`.
//! * kGV: `−½ Σ log(1 − ρ_i²)` over all regularized kCCA correlations, each
//!   clipped to at most `1 − 1e−12`. Used as the mutual-information proxy.
//! * kCCA statistic: the leading regularized kCCA correlation.
//!
//! Permutation nulls shuffle the sample order of the second dataset; shuffle
//! `i` draws from random stream `i` of the given seed, so every statistic
//! sees the same permutations.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::decomp::{cca_primal, mca_svd, DEFAULT_EPS_LINEAR, DEFAULT_EPS_RBF};
use crate::decomp::Spectrum;
use crate::error::{Error, Result};
use crate::io::DataMatrix;
use crate::kernel::{center_kernel, gram, median_distance, rbf, gamma_from_sigma, Bandwidth, KernelMatrix};
use crate::linalg::singular_values_desc;
use crate::rng::Rng;
use crate::scalar::Scalar;

const RHO_CLIP: f64 = 1.0 - 1e-12;

pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} samples", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::TooFewSamples { need: 3, got: x.len() });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("x"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("y"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn check_pair<T: Scalar>(ka: &KernelMatrix<T>, kb: &KernelMatrix<T>, need: usize) -> Result<usize> {
    if ka.n() != kb.n() {
        return Err(Error::DimensionMismatch(format!("kernels are {}×{0} and {}×{1}", ka.n(), kb.n())));
    }
    if ka.n() < need {
        return Err(Error::TooFewSamples { need, got: ka.n() });
    }
    Ok(ka.n())
}

/// `Σ_ij Re(A_ij · B_π(j)π(i))`: `tr(A B)` for Hermitian `B` under a
/// relabelling of its samples. Summation order depends only on `(i, j)`, so
/// swapping the arguments gives a bit-identical result.
fn trace_product<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>, perm: Option<&[usize]>) -> f64 {
    let n = a.nrows();
    let idx = |i: usize| perm.map_or(i, |p| p[i]);
    let mut s = 0.0;
    for j in 0..n {
        let pj = idx(j);
        for i in 0..n {
            s += (a[(i, j)] * b[(pj, idx(i))]).re();
        }
    }
    s
}

/// Biased HSIC; kernels are centered internally.
pub fn hsic<T: Scalar>(ka: &KernelMatrix<T>, kb: &KernelMatrix<T>) -> Result<f64> {
    let n = check_pair(ka, kb, 4)?;
    let (a, b) = (center_kernel(ka), center_kernel(kb));
    Ok(trace_product(a.values(), b.values(), None) / (n * n) as f64)
}

fn require_centered<T: Scalar>(ka: &KernelMatrix<T>, kb: &KernelMatrix<T>) -> Result<usize> {
    let n = check_pair(ka, kb, 2)?;
    if !ka.is_centered() || !kb.is_centered() {
        return Err(Error::NotCentered);
    }
    Ok(n)
}

fn sqrt_basis<T: Scalar>(s: &Spectrum<T>) -> DMatrix<T> {
    let mut m = s.vectors.clone();
    for (j, &l) in s.lambda.iter().enumerate() {
        m.column_mut(j).apply(|v| *v *= T::from_real(l.sqrt()));
    }
    m
}

fn permute_rows<'a, T: Scalar>(m: &'a DMatrix<T>, perm: Option<&[usize]>) -> std::borrow::Cow<'a, DMatrix<T>> {
    match perm {
        None => std::borrow::Cow::Borrowed(m),
        Some(p) => std::borrow::Cow::Owned(DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(p[r], c)])),
    }
}

fn top_singular<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    if a.ncols() == 0 || b.ncols() == 0 {
        return 0.0;
    }
    singular_values_desc(&(a.adjoint() * b)).first().copied().unwrap_or(0.0)
}

fn kgv_from_rho(rho: &[f64]) -> f64 {
    rho.iter()
        .map(|&r| {
            let r = r.clamp(0.0, RHO_CLIP);
            -0.5 * (1.0 - r * r).ln()
        })
        .sum()
}

fn regularized_rho<T: Scalar>(sa: &DMatrix<T>, sb: &DMatrix<T>) -> Vec<f64> {
    if sa.ncols() == 0 || sb.ncols() == 0 {
        return Vec::new();
    }
    singular_values_desc(&(sa.adjoint() * sb))
}

pub fn coco<T: Scalar>(ka: &KernelMatrix<T>, kb: &KernelMatrix<T>) -> Result<f64> {
    let n = require_centered(ka, kb)?;
    let a = sqrt_basis(&Spectrum::new(ka.values(), 0.0));
    let b = sqrt_basis(&Spectrum::new(kb.values(), 0.0));
    Ok(top_singular(&a, &b) / n as f64)
}

pub fn kgv<T: Scalar>(ka: &KernelMatrix<T>, kb: &KernelMatrix<T>, eps: f64) -> Result<f64> {
    require_centered(ka, kb)?;
    check_eps(eps)?;
    let a = Spectrum::new(ka.values(), eps).shrunk();
    let b = Spectrum::new(kb.values(), eps).shrunk();
    Ok(kgv_from_rho(&regularized_rho(&a, &b)))
}

pub fn kcca_stat<T: Scalar>(ka: &KernelMatrix<T>, kb: &KernelMatrix<T>, eps: f64) -> Result<f64> {
    require_centered(ka, kb)?;
    check_eps(eps)?;
    let a = Spectrum::new(ka.values(), eps).shrunk();
    let b = Spectrum::new(kb.values(), eps).shrunk();
    Ok(regularized_rho(&a, &b).first().copied().unwrap_or(0.0).min(1.0))
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", format!("must be non-negative and finite, got {eps}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    Pearson,
    Mca,
    Cca,
    HsicLinear,
    HsicRbf,
    Coco,
    Kgv,
    Kcca,
}

impl Statistic {
    pub const ALL: [Statistic; 8] = [
        Statistic::Pearson,
        Statistic::Mca,
        Statistic::Cca,
        Statistic::HsicLinear,
        Statistic::HsicRbf,
        Statistic::Coco,
        Statistic::Kgv,
        Statistic::Kcca,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Pearson => "pearson",
            Statistic::Mca => "mca",
            Statistic::Cca => "cca",
            Statistic::HsicLinear => "hsic-linear",
            Statistic::HsicRbf => "hsic-rbf",
            Statistic::Coco => "coco",
            Statistic::Kgv => "kgv",
            Statistic::Kcca => "kcca",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn is_kernel(self) -> bool {
        matches!(self, Statistic::HsicRbf | Statistic::Coco | Statistic::Kgv | Statistic::Kcca)
    }

    /// Linear second-order statistics.
    pub fn is_linear(self) -> bool {
        !self.is_kernel()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryConfig {
    pub bandwidth: Bandwidth,
    /// Ridge for kGV and the kCCA statistic.
    pub eps: f64,
    /// Ridge for the linear CCA statistic.
    pub eps_linear: f64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            bandwidth: Bandwidth::Median,
            eps: DEFAULT_EPS_RBF,
            eps_linear: DEFAULT_EPS_LINEAR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NullQuantiles {
    pub q50: f64,
    pub q95: f64,
    pub q99: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DependenceReport {
    pub statistic: Statistic,
    pub value: f64,
    /// Length scales `[σ_a, σ_b]` for kernel statistics.
    pub sigma: Option<[f64; 2]>,
    pub eps: Option<f64>,
    pub null_quantiles: Option<NullQuantiles>,
    pub n_permutations: usize,
}

impl DependenceReport {
    /// True when a null was computed and the value exceeds its q95.
    pub fn exceeds_q95(&self) -> Option<bool> {
        self.null_quantiles.map(|q| self.value > q.q95)
    }
}

/// Type-7 (linear interpolation) quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Two datasets with every kernel quantity the battery needs, so that each
/// permutation only relabels the rows of precomputed factors.
pub struct PreparedPair {
    a: DataMatrix<f64>,
    b: DataMatrix<f64>,
    cfg: BatteryConfig,
    sigma: [f64; 2],
    lin_a: KernelMatrix<f64>,
    lin_b: KernelMatrix<f64>,
    rbf_a: KernelMatrix<f64>,
    rbf_b: KernelMatrix<f64>,
    sqrt_a: DMatrix<f64>,
    sqrt_b: DMatrix<f64>,
    shrunk_a: DMatrix<f64>,
    shrunk_b: DMatrix<f64>,
}

impl PreparedPair {
    pub fn new(a: &DataMatrix<f64>, b: &DataMatrix<f64>, cfg: BatteryConfig) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch(format!("{} vs {} samples", a.n(), b.n())));
        }
        if a.n() < 4 {
            return Err(Error::TooFewSamples { need: 4, got: a.n() });
        }
        check_eps(cfg.eps)?;
        check_eps(cfg.eps_linear)?;
        let (a, b) = (a.center_columns(), b.center_columns());
        let sigma_of = |m: &DataMatrix<f64>| -> Result<f64> {
            Ok(match cfg.bandwidth {
                Bandwidth::Median => median_distance(m)?,
                Bandwidth::Sigma(s) => s,
                Bandwidth::Gamma(g) => crate::kernel::sigma_from_gamma(g),
            })
        };
        let sigma = [sigma_of(&a)?, sigma_of(&b)?];
        let rbf_a = center_kernel(&rbf(&a, gamma_from_sigma(sigma[0])?)?);
        let rbf_b = center_kernel(&rbf(&b, gamma_from_sigma(sigma[1])?)?);
        let spec_a = Spectrum::new(rbf_a.values(), cfg.eps);
        let spec_b = Spectrum::new(rbf_b.values(), cfg.eps);
        Ok(Self {
            lin_a: gram(&a),
            lin_b: gram(&b),
            sqrt_a: sqrt_basis(&spec_a),
            sqrt_b: sqrt_basis(&spec_b),
            shrunk_a: spec_a.shrunk(),
            shrunk_b: spec_b.shrunk(),
            rbf_a,
            rbf_b,
            a,
            b,
            cfg,
            sigma,
        })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn sigma(&self) -> [f64; 2] {
        self.sigma
    }

    /// Statistic with the samples of `b` relabelled by `perm` (row `i` of
    /// the permuted `b` is row `perm[i]`).
    pub fn value(&self, stat: Statistic, perm: Option<&[usize]>) -> Result<f64> {
        let n = self.n() as f64;
        let b = match perm {
            Some(p) => std::borrow::Cow::Owned(self.b.permute_rows(p)?),
            None => std::borrow::Cow::Borrowed(&self.b),
        };
        Ok(match stat {
            Statistic::Pearson => {
                if self.a.d() != 1 || b.d() != 1 {
                    return Err(Error::InvalidShape("Pearson's R needs one column per dataset".into()));
                }
                pearson_r(self.a.values().as_slice(), b.values().as_slice())?
            }
            Statistic::Mca => mca_svd(&self.a, &b, 1)?.values()[0],
            Statistic::Cca => cca_primal(&self.a, &b, 1, self.cfg.eps_linear)?.values()[0],
            Statistic::HsicLinear => trace_product(self.lin_a.values(), self.lin_b.values(), perm) / (n * n),
            Statistic::HsicRbf => trace_product(self.rbf_a.values(), self.rbf_b.values(), perm) / (n * n),
            Statistic::Coco => top_singular(&self.sqrt_a, &permute_rows(&self.sqrt_b, perm)) / n,
            Statistic::Kgv => kgv_from_rho(&regularized_rho(&self.shrunk_a, &permute_rows(&self.shrunk_b, perm))),
            Statistic::Kcca => regularized_rho(&self.shrunk_a, &permute_rows(&self.shrunk_b, perm))
                .first()
                .copied()
                .unwrap_or(0.0)
                .min(1.0),
        })
    }

    /// Null distribution used for calibration: Pearson's R enters as `|r|`.
    fn null_value(&self, stat: Statistic, perm: Option<&[usize]>) -> Result<f64> {
        let v = self.value(stat, perm)?;
        Ok(if stat == Statistic::Pearson { v.abs() } else { v })
    }

    /// Null quantiles for each requested statistic from `n_perm` shuffles.
    pub fn permutation_null(&self, stats: &[Statistic], n_perm: usize, seed: u64) -> Result<Vec<NullQuantiles>> {
        if n_perm == 0 {
            return Err(Error::param("n_perm", "need at least one permutation"));
        }
        let mut samples = vec![Vec::with_capacity(n_perm); stats.len()];
        for i in 0..n_perm {
            let perm = Rng::new(seed, i as u64).permutation(self.n());
            for (s, out) in stats.iter().zip(samples.iter_mut()) {
                out.push(self.null_value(*s, Some(&perm))?);
            }
        }
        Ok(samples
            .into_iter()
            .map(|mut v| {
                v.sort_by(f64::total_cmp);
                NullQuantiles {
                    q50: quantile(&v, 0.50),
                    q95: quantile(&v, 0.95),
                    q99: quantile(&v, 0.99),
                }
            })
            .collect())
    }

    /// Reports for `stats`; with `n_perm > 0` each carries null quantiles and
    /// the Pearson value is reported as `|r|` so it is comparable to them.
    pub fn reports(&self, stats: &[Statistic], n_perm: usize, seed: u64) -> Result<Vec<DependenceReport>> {
        let nulls = if n_perm > 0 {
            Some(self.permutation_null(stats, n_perm, seed)?)
        } else {
            None
        };
        stats
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                Ok(DependenceReport {
                    statistic: s,
                    value: if nulls.is_some() { self.null_value(s, None)? } else { self.value(s, None)? },
                    sigma: s.is_kernel().then_some(self.sigma),
                    eps: match s {
                        Statistic::Kgv | Statistic::Kcca => Some(self.cfg.eps),
                        Statistic::Cca => Some(self.cfg.eps_linear),
                        _ => None,
                    },
                    null_quantiles: nulls.as_ref().map(|q| q[i]),
                    n_permutations: n_perm,
                })
            })
            .collect()
    }
}

/// Null quantiles of one statistic for `(x, y)`.
pub fn permutation_null(
    stat: Statistic,
    x: &DataMatrix<f64>,
    y: &DataMatrix<f64>,
    n_perm: usize,
    seed: u64,
    cfg: BatteryConfig,
) -> Result<NullQuantiles> {
    if n_perm == 0 {
        return Err(Error::param("n_perm", "need at least one permutation"));
    }
    Ok(PreparedPair::new(x, y, cfg)?.permutation_null(&[stat], n_perm, seed)?[0])
}

/// All statistics that apply to the data shape (Pearson's R needs one column
/// per view).
pub fn battery(
    x: &DataMatrix<f64>,
    y: &DataMatrix<f64>,
    cfg: BatteryConfig,
    n_perm: usize,
    seed: u64,
) -> Result<Vec<DependenceReport>> {
    let pair = PreparedPair::new(x, y, cfg)?;
    let stats: Vec<Statistic> = Statistic::ALL
        .into_iter()
        .filter(|&s| s != Statistic::Pearson || (x.d() == 1 && y.d() == 1))
        .collect();
    pair.reports(&stats, n_perm, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    /// Sweep coordinate: a multiple of the median distance when the sweep is
    /// relative, otherwise an absolute length scale.
    pub sigma: f64,
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub kgv: f64,
    pub kcca: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCurve {
    pub relative: bool,
    pub eps: f64,
    pub median_a: f64,
    pub median_b: f64,
    pub points: Vec<SweepPoint>,
    /// kGV and leading correlation of the same regularized problem with
    /// linear kernels.
    pub linear_kgv: f64,
    pub linear_kcca: f64,
}

impl SweepCurve {
    /// Index of the largest kGV value.
    pub fn argmax_kgv(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.points.iter().enumerate() {
            if p.kgv > self.points[best].kgv {
                best = i;
            }
        }
        best
    }
}

/// kGV and kCCA over RBF length scales. With `relative`, each `sigmas[i]`
/// multiplies each view's median pairwise distance.
pub fn sigma_sweep(x: &DataMatrix<f64>, y: &DataMatrix<f64>, sigmas: &[f64], eps: f64, relative: bool) -> Result<SweepCurve> {
    if sigmas.is_empty() {
        return Err(Error::param("sigmas", "need at least one length scale"));
    }
    if sigmas.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::param("sigmas", "must be positive and finite"));
    }
    if sigmas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("sigmas", "must be strictly ascending"));
    }
    check_eps(eps)?;
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch(format!("{} vs {} samples", x.n(), y.n())));
    }
    let (a, b) = (x.center_columns(), y.center_columns());
    let (ma, mb) = (median_distance(&a)?, median_distance(&b)?);
    let lin_a = Spectrum::new(gram(&a).values(), eps).shrunk();
    let lin_b = Spectrum::new(gram(&b).values(), eps).shrunk();
    let lin_rho = regularized_rho(&lin_a, &lin_b);
    let mut points = Vec::with_capacity(sigmas.len());
    for &s in sigmas {
        let (sa, sb) = if relative { (s * ma, s * mb) } else { (s, s) };
        let ka = center_kernel(&rbf(&a, gamma_from_sigma(sa)?)?);
        let kb = center_kernel(&rbf(&b, gamma_from_sigma(sb)?)?);
        let ua = Spectrum::new(ka.values(), eps).shrunk();
        let ub = Spectrum::new(kb.values(), eps).shrunk();
        let rho = regularized_rho(&ua, &ub);
        points.push(SweepPoint {
            sigma: s,
            sigma_a: sa,
            sigma_b: sb,
            kgv: kgv_from_rho(&rho),
            kcca: rho.first().copied().unwrap_or(0.0).min(1.0),
        });
    }
    Ok(SweepCurve {
        relative,
        eps,
        median_a: ma,
        median_b: mb,
        points,
        linear_kgv: kgv_from_rho(&lin_rho),
        linear_kcca: lin_rho.first().copied().unwrap_or(0.0).min(1.0),
    })
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Ridge used by the length-scale sweep.
pub const DEFAULT_SWEEP_EPS: f64 = 0.05;

/// Outcome of the qualitative three-regime check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternCheck {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Checks the dependence pattern over the linear, ring and independent
/// regimes (in that order), each with permutation nulls:
///
/// * `|r|` above 0.9 in the linear regime and below 0.1 in the others, CCA
///   below 0.15 in the ring regime;
/// * every kernel statistic above its null q95 in the linear and ring
///   regimes, and the kCCA statistic above 0.8 on the ring;
/// * kGV strictly decreasing across the three regimes;
/// * every statistic below its null q95 in the independent regime.
pub fn table1_pattern(reports: &[Vec<DependenceReport>; 3]) -> PatternCheck {
    let mut failures = Vec::new();
    let names = ["linear", "ring", "independent"];
    let get = |r: usize, s: Statistic| reports[r].iter().find(|x| x.statistic == s);
    let mut need = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    let value = |r: usize, s: Statistic| get(r, s).map(|x| x.value);

    match (value(0, Statistic::Pearson), value(1, Statistic::Pearson), value(2, Statistic::Pearson)) {
        (Some(a), Some(b), Some(c)) => {
            need(a.abs() > 0.9, format!("|pearson| in linear regime is {a:.4}, want > 0.9"));
            need(b.abs() < 0.1, format!("|pearson| in ring regime is {b:.4}, want < 0.1"));
            need(c.abs() < 0.1, format!("|pearson| in independent regime is {c:.4}, want < 0.1"));
        }
        _ => need(false, "pearson missing".into()),
    }
    match value(1, Statistic::Cca) {
        Some(v) => need(v < 0.15, format!("cca in ring regime is {v:.4}, want < 0.15")),
        None => need(false, "cca missing".into()),
    }
    match value(1, Statistic::Kcca) {
        Some(v) => need(v > 0.8, format!("kcca in ring regime is {v:.4}, want > 0.8")),
        None => need(false, "kcca missing".into()),
    }
    for r in 0..3 {
        for rep in &reports[r] {
            let Some(q) = rep.null_quantiles else {
                need(false, format!("{} in {} regime has no null", rep.statistic.name(), names[r]));
                continue;
            };
            let above = rep.value > q.q95;
            if r == 2 {
                need(!above, format!("{} in independent regime {:.4e} exceeds q95 {:.4e}", rep.statistic.name(), rep.value, q.q95));
            } else if rep.statistic.is_kernel() {
                need(above, format!("{} in {} regime {:.4e} is not above q95 {:.4e}", rep.statistic.name(), names[r], rep.value, q.q95));
            }
        }
    }
    match (value(0, Statistic::Kgv), value(1, Statistic::Kgv), value(2, Statistic::Kgv)) {
        (Some(a), Some(b), Some(c)) => need(a > b && b > c, format!("kgv ordering {a:.4} > {b:.4} > {c:.4} violated")),
        _ => need(false, "kgv missing".into()),
    }
    PatternCheck { pass: failures.is_empty(), failures }
}
