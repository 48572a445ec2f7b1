//! Command-line front end.
//!
//! Every command is deterministic given its flags; stochastic commands
//! require `--seed`. Artifacts go to `--out`, else `$ROCKPCA_OUT_DIR`, else
//! the working directory. Failures print one JSON object on stderr and exit
//! with a code derived from the error class.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::Serialize;

use crate::analytic::hilbert_analytic;
use crate::decomp::{
    cca_dual, cca_primal, kcca, kpca, mca_svd, rock_pca, Method, ModeSet, RockOptions, RotateMethod, RotationTarget,
    DEFAULT_EPS_LINEAR, DEFAULT_EPS_RBF,
};
use crate::dependence::{
    log_space, sigma_sweep, table1_pattern, BatteryConfig, DependenceReport, PatternCheck, PreparedPair, Statistic,
    SweepCurve, DEFAULT_SWEEP_EPS,
};
use crate::error::{Error, ErrorClass, Result};
use crate::io::numfmt::{fmt_f64, to_json_string};
use crate::io::{load_csv_matrix, load_cube, save_cube, write_csv, AnyMatrix, DataMatrix, Datacube};
use crate::kernel::{build_kernel, center_kernel, Bandwidth, KernelChoice, KernelKind};
use crate::rotation::{VarimaxOptions, DEFAULT_PROMAX_POWER};
use crate::scalar::Scalar;
use crate::synth::{gen_coupled, gen_cube, gen_regime, preset_sst_synth, preset_wave, PlantedCubeSpec, Regime, RegimeSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;
/// A check command ran to completion and reported FAIL.
pub const EXIT_CHECK_FAILED: i32 = 5;

pub const OUT_DIR_ENV: &str = "ROCKPCA_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "rockpca", version, about = "Kernel multivariate analysis and dependence estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate synthetic data.
    Synth {
        #[command(subcommand)]
        what: SynthCommand,
    },
    /// Run one decomposition and write its modes.
    Decompose(DecomposeArgs),
    /// Dependence statistics between two datasets.
    Depend(DependArgs),
    /// kGV and kCCA over RBF length scales.
    SweepSigma(SweepArgs),
    /// Cross-check primal CCA, dual CCA and linear kernel CCA.
    EquivCheck(EquivArgs),
    /// The dependence table over the three synthetic regimes.
    Table1(Table1Args),
}

#[derive(Debug, Subcommand)]
pub enum SynthCommand {
    /// Two-column CSV (`x`, `y`) from one dependence regime.
    Regime {
        #[arg(long, value_parser = parse_regime)]
        kind: Regime,
        #[arg(long, default_value_t = 400)]
        n: usize,
        /// Defaults to the regime's standard level.
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Planted-mode datacube plus `<out>.truth.json`.
    Cube {
        #[arg(long, conflicts_with = "preset")]
        spec: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<CubePreset>,
        /// Required with `--preset`; overrides the spec's seed otherwise.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CubePreset {
    SstSynth,
    Wave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mca,
    Cca,
    CcaDual,
    Kcca,
    Kpca,
    RockPca,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Linear,
    Rbf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Spatial,
    Temporal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepPreset {
    Fig1,
}

#[derive(Debug, Args)]
pub struct KernelFlags {
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// `median` or a length scale.
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long, conflicts_with = "sigma")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// One input (kpca, rock-pca) or two (mca, cca, cca-dual, kcca): CSV
    /// files or datacube paths.
    #[arg(long = "input", num_args = 1..=2)]
    pub inputs: Vec<PathBuf>,
    /// Replace each real input by its analytic signal.
    #[arg(long)]
    pub complex: bool,
    #[command(flatten)]
    pub kernel: KernelFlags,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub p: Option<usize>,
    /// `none`, `varimax`, `promax` or `promax:<power>`.
    #[arg(long)]
    pub rotate: Option<String>,
    #[arg(long, value_enum)]
    pub rotate_target: Option<TargetArg>,
    #[arg(long, value_enum, conflicts_with = "inputs")]
    pub preset: Option<CubePreset>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DependArgs {
    /// `all` or a comma-separated list of statistic names.
    #[arg(long, default_value = "all")]
    pub stat: String,
    #[arg(long = "input", num_args = 2, required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub perm: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `median` or a length scale.
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long, conflicts_with = "sigma")]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long = "input", num_args = 2, conflicts_with = "preset")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<SweepPreset>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub max: f64,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Treat the sweep values as absolute length scales rather than
    /// multiples of each view's median distance.
    #[arg(long)]
    pub absolute: bool,
    #[arg(long, default_value_t = DEFAULT_SWEEP_EPS)]
    pub eps: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    #[arg(long, default_value_t = 6)]
    pub da: usize,
    #[arg(long, default_value_t = 4)]
    pub db: usize,
    #[arg(long, default_value_t = DEFAULT_EPS_LINEAR)]
    pub eps: f64,
    #[arg(long)]
    pub eps_primal: Option<f64>,
    #[arg(long)]
    pub eps_dual: Option<f64>,
    #[arg(long)]
    pub eps_kcca: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub perm: usize,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_regime(s: &str) -> std::result::Result<Regime, String> {
    Regime::ALL
        .into_iter()
        .find(|r| r.name() == s)
        .ok_or_else(|| format!("unknown regime `{s}` (linear, ring, independent)"))
}

enum Failure {
    Lib(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<(), Failure>;

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    class: &'a str,
    message: String,
    flag: Option<String>,
    exit_code: i32,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::InvalidConfig => EXIT_INVALID_CONFIG,
        ErrorClass::Format => EXIT_FORMAT,
        ErrorClass::Numerical => EXIT_NUMERICAL,
        ErrorClass::Io => EXIT_IO,
    }
}

fn class_name(class: ErrorClass) -> &'static str {
    match class {
        ErrorClass::InvalidConfig => "invalid_config",
        ErrorClass::Format => "format",
        ErrorClass::Numerical => "numerical",
        ErrorClass::Io => "io",
    }
}

fn error_flag(e: &Error) -> Option<String> {
    match e {
        Error::InvalidParameter { name, .. } => Some(format!("--{}", name.replace('_', "-"))),
        Error::TooManyComponents { .. } => Some("--p".into()),
        _ => None,
    }
}

fn emit_error(body: ErrorBody<'_>) {
    let json = to_json_string(&ErrorReport { error: body }).unwrap_or_default();
    let _ = std::io::stderr().write_all(json.as_bytes());
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            emit_error(ErrorBody {
                kind: "usage",
                class: class_name(ErrorClass::InvalidConfig),
                message: e.render().to_string().trim().to_string(),
                flag: None,
                exit_code: EXIT_INVALID_CONFIG,
            });
            return EXIT_INVALID_CONFIG;
        }
    };
    let outcome = match cli.command {
        Command::Synth { what } => cmd_synth(what),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Depend(a) => cmd_depend(a),
        Command::SweepSigma(a) => cmd_sweep(a),
        Command::EquivCheck(a) => cmd_equiv_check(a),
        Command::Table1(a) => cmd_table1(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let code = exit_code(e.class());
            emit_error(ErrorBody {
                kind: e.kind(),
                class: class_name(e.class()),
                message: e.to_string(),
                flag: error_flag(&e),
                exit_code: code,
            });
            code
        }
        Err(Failure::Check(msg)) => {
            emit_error(ErrorBody {
                kind: "check_failed",
                class: "check",
                message: msg,
                flag: None,
                exit_code: EXIT_CHECK_FAILED,
            });
            EXIT_CHECK_FAILED
        }
    }
}

fn out_dir(flag: Option<PathBuf>) -> Result<PathBuf> {
    let dir = flag
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

fn print(text: &str) -> Result<()> {
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn require_seed(seed: Option<u64>, why: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::param("seed", format!("required {why}")))
}

fn parse_bandwidth(sigma: Option<&str>, gamma: Option<f64>) -> Result<Bandwidth> {
    if let Some(g) = gamma {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::param("gamma", format!("must be positive, got {g}")));
        }
        return Ok(Bandwidth::Gamma(g));
    }
    match sigma {
        None | Some("median") => Ok(Bandwidth::Median),
        Some(s) => match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(Bandwidth::Sigma(v)),
            _ => Err(Error::param("sigma", format!("expected `median` or a positive number, got `{s}`"))),
        },
    }
}

fn kernel_choice(flags: &KernelFlags) -> Result<KernelChoice> {
    let kind = flags.kernel.unwrap_or(KernelArg::Linear);
    if kind == KernelArg::Linear {
        if flags.sigma.is_some() {
            return Err(Error::param("sigma", "only applies to --kernel rbf"));
        }
        if flags.gamma.is_some() {
            return Err(Error::param("gamma", "only applies to --kernel rbf"));
        }
        return Ok(KernelChoice::Linear);
    }
    Ok(KernelChoice::Rbf(parse_bandwidth(flags.sigma.as_deref(), flags.gamma)?))
}

fn parse_rotate(s: Option<&str>) -> Result<RotateMethod> {
    let Some(s) = s else { return Ok(RotateMethod::Varimax) };
    match s {
        "none" => Ok(RotateMethod::None),
        "varimax" => Ok(RotateMethod::Varimax),
        "promax" => Ok(RotateMethod::Promax(DEFAULT_PROMAX_POWER)),
        other => match other.strip_prefix("promax:").map(str::parse::<f64>) {
            Some(Ok(k)) => Ok(RotateMethod::Promax(k)),
            _ => Err(Error::param("rotate", format!("expected none, varimax, promax or promax:<power>, got `{other}`"))),
        },
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load_matrix(path: &Path) -> Result<AnyMatrix> {
    if is_csv(path) {
        Ok(AnyMatrix::Real(load_csv_matrix(path)?.1))
    } else {
        load_cube(path)?.flatten()
    }
}

fn load_real_csv(path: &Path) -> Result<DataMatrix<f64>> {
    Ok(load_csv_matrix(path)?.1)
}

fn preset_spec(p: CubePreset, seed: u64) -> PlantedCubeSpec {
    match p {
        CubePreset::SstSynth => preset_sst_synth(seed),
        CubePreset::Wave => preset_wave(seed),
    }
}

fn cmd_synth(what: SynthCommand) -> CmdResult {
    match what {
        SynthCommand::Regime { kind, n, noise, seed, out } => {
            let mut spec = RegimeSpec::new(kind, n, seed);
            if let Some(v) = noise {
                spec.noise = v;
            }
            let (x, y) = gen_regime(&spec)?;
            write_csv(&out, &["x", "y"], &[&x, &y])?;
        }
        SynthCommand::Cube { spec, preset, seed, out } => {
            let spec = match (spec, preset) {
                (Some(path), None) => {
                    let text = fs::read_to_string(path).map_err(Error::from)?;
                    let mut s: PlantedCubeSpec = serde_json::from_str(&text).map_err(Error::from)?;
                    if let Some(seed) = seed {
                        s.seed = seed;
                    }
                    s
                }
                (None, Some(p)) => preset_spec(p, require_seed(seed, "with --preset")?),
                _ => return Err(Error::param("spec", "give exactly one of --spec or --preset").into()),
            };
            let (cube, truth) = gen_cube(&spec)?;
            save_cube(&cube, &out)?;
            let mut truth_path = out.clone().into_os_string();
            truth_path.push(".truth.json");
            write_text(Path::new(&truth_path), &to_json_string(&truth)?)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Artifact {
    name: String,
    file: String,
    rows: usize,
    cols: usize,
    complex: bool,
}

/// Row-major little-endian `f64`; complex entries as `(re, im)` pairs.
pub fn write_matrix_bin<T: Scalar>(path: &Path, m: &DMatrix<T>) -> Result<()> {
    let per = if T::IS_COMPLEX { 16 } else { 8 };
    let mut bytes = Vec::with_capacity(m.len() * per);
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            bytes.extend_from_slice(&v.re().to_le_bytes());
            if T::IS_COMPLEX {
                bytes.extend_from_slice(&v.im().to_le_bytes());
            }
        }
    }
    fs::write(path, bytes)?;
    Ok(())
}

struct ArtifactWriter<'a> {
    dir: &'a Path,
    list: Vec<Artifact>,
}

impl ArtifactWriter<'_> {
    fn put<T: Scalar>(&mut self, name: &str, m: &DMatrix<T>) -> Result<()> {
        let file = format!("{name}.bin");
        write_matrix_bin(&self.dir.join(&file), m)?;
        self.list.push(Artifact {
            name: name.to_string(),
            file,
            rows: m.nrows(),
            cols: m.ncols(),
            complex: T::IS_COMPLEX,
        });
        Ok(())
    }

    fn put_modes<T: Scalar>(&mut self, m: &ModeSet<T>) -> Result<()> {
        self.put("loadings_a", m.loadings_a())?;
        if let Some(l) = m.loadings_b() {
            self.put("loadings_b", l)?;
        }
        self.put("temporal_a", m.temporal_a())?;
        if let Some(t) = m.temporal_b() {
            self.put("temporal_b", t)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct RotationReport {
    method: &'static str,
    power: Option<f64>,
    target: &'static str,
    converged: bool,
    criterion_trace: Vec<f64>,
}

#[derive(Serialize)]
struct ModesReport {
    method: Method,
    complex: bool,
    n: usize,
    p: usize,
    eps: Option<f64>,
    kernels: Vec<KernelKind>,
    values: Vec<f64>,
    explained_fraction: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unrotated_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unrotated_explained_fraction: Option<Vec<f64>>,
    rotation: Option<RotationReport>,
    artifacts: Vec<Artifact>,
}

impl ModesReport {
    fn from_modes<T: Scalar>(m: &ModeSet<T>, n: usize, eps: Option<f64>, kernels: Vec<KernelKind>) -> Self {
        Self {
            method: m.method(),
            complex: T::IS_COMPLEX,
            n,
            p: m.p(),
            eps,
            kernels,
            values: m.values().to_vec(),
            explained_fraction: m.explained_fraction().to_vec(),
            unrotated_values: None,
            unrotated_explained_fraction: None,
            rotation: None,
            artifacts: Vec::new(),
        }
    }
}

struct Solve {
    method: MethodArg,
    p: usize,
    eps: Option<f64>,
    kernel: KernelChoice,
}

fn prepare<T: Scalar>(m: DataMatrix<T>) -> DataMatrix<T> {
    m.center_columns()
}

fn solve_typed<T: Scalar>(
    s: &Solve,
    a: DataMatrix<T>,
    b: Option<DataMatrix<T>>,
    w: &mut ArtifactWriter<'_>,
) -> Result<ModesReport> {
    let a = prepare(a);
    let b = b.map(prepare);
    let n = a.n();
    let pair = || b.as_ref().ok_or_else(|| Error::param("input", "this method needs two inputs"));
    let (modes, kernels) = match s.method {
        MethodArg::Mca => (mca_svd(&a, pair()?, s.p)?, vec![]),
        MethodArg::Cca => (cca_primal(&a, pair()?, s.p, s.eps.unwrap_or(DEFAULT_EPS_LINEAR))?, vec![]),
        MethodArg::CcaDual => (cca_dual(&a, pair()?, s.p, s.eps.unwrap_or(DEFAULT_EPS_LINEAR))?, vec![]),
        MethodArg::Kcca => {
            let ka = center_kernel(&build_kernel(&a, s.kernel)?);
            let kb = center_kernel(&build_kernel(pair()?, s.kernel)?);
            let m = kcca(&ka, &kb, s.p, s.eps.unwrap_or(default_kernel_eps(s.kernel)))?;
            (m, vec![ka.kind(), kb.kind()])
        }
        MethodArg::Kpca => {
            let k = center_kernel(&build_kernel(&a, s.kernel)?);
            (kpca(&k, s.p)?, vec![k.kind()])
        }
        MethodArg::RockPca => unreachable!("handled by the cube path"),
    };
    let eps = match s.method {
        MethodArg::Cca | MethodArg::CcaDual => Some(s.eps.unwrap_or(DEFAULT_EPS_LINEAR)),
        MethodArg::Kcca => Some(s.eps.unwrap_or(default_kernel_eps(s.kernel))),
        _ => None,
    };
    w.put_modes(&modes)?;
    Ok(ModesReport::from_modes(&modes, n, eps, kernels))
}

fn default_kernel_eps(k: KernelChoice) -> f64 {
    match k {
        KernelChoice::Linear => DEFAULT_EPS_LINEAR,
        KernelChoice::Rbf(_) => DEFAULT_EPS_RBF,
    }
}

fn analytic(m: AnyMatrix) -> Result<AnyMatrix> {
    match m {
        AnyMatrix::Real(r) => Ok(AnyMatrix::Complex(hilbert_analytic(&r.center_columns())?.into_data())),
        AnyMatrix::Complex(_) => Err(Error::param("complex", "input is already complex")),
    }
}

fn cmd_decompose(args: DecomposeArgs) -> CmdResult {
    let kernel = kernel_choice(&args.kernel)?;
    let uses_kernel = matches!(args.method, MethodArg::Kcca | MethodArg::Kpca | MethodArg::RockPca);
    if !uses_kernel && args.kernel.kernel.is_some() {
        return Err(Error::param("kernel", "only applies to kcca, kpca and rock-pca").into());
    }
    let uses_eps = matches!(args.method, MethodArg::Cca | MethodArg::CcaDual | MethodArg::Kcca);
    if let Some(e) = args.eps {
        if !uses_eps {
            return Err(Error::param("eps", "only applies to cca, cca-dual and kcca").into());
        }
        if !(e >= 0.0 && e.is_finite()) {
            return Err(Error::param("eps", format!("must be non-negative, got {e}")).into());
        }
    }
    let is_rock = args.method == MethodArg::RockPca;
    if !is_rock && (args.rotate.is_some() || args.rotate_target.is_some()) {
        return Err(Error::param("rotate", "rotation only applies to rock-pca").into());
    }
    if args.preset.is_some() && !matches!(args.method, MethodArg::Kpca | MethodArg::RockPca) {
        return Err(Error::param("preset", "cube presets apply to kpca and rock-pca").into());
    }
    let p = args.p.unwrap_or(if is_rock { 3 } else { 1 });
    if p == 0 {
        return Err(Error::param("p", "need at least one component").into());
    }
    let dir = out_dir(args.out.clone())?;
    let mut w = ArtifactWriter { dir: &dir, list: Vec::new() };

    let mut report = if is_rock {
        if args.complex {
            return Err(Error::param("complex", "rock-pca always works on the analytic signal").into());
        }
        let cube = rock_input(&args)?;
        let mut opts = RockOptions::new(kernel, p);
        opts.rotate = parse_rotate(args.rotate.as_deref())?;
        opts.target = match args.rotate_target.unwrap_or(TargetArg::Spatial) {
            TargetArg::Spatial => RotationTarget::Spatial,
            TargetArg::Temporal => RotationTarget::Temporal,
        };
        opts.varimax = VarimaxOptions::default();
        run_rock(&cube, &opts, &mut w)?
    } else {
        let needs_two = matches!(args.method, MethodArg::Mca | MethodArg::Cca | MethodArg::CcaDual | MethodArg::Kcca);
        let mut mats = match args.preset {
            Some(pr) => vec![gen_cube(&preset_spec(pr, require_seed(args.seed, "with --preset")?))?.0.flatten()?],
            None => args.inputs.iter().map(|p| load_matrix(p)).collect::<Result<Vec<_>>>()?,
        };
        let want = if needs_two { 2 } else { 1 };
        if mats.len() != want {
            return Err(Error::param("input", format!("{:?} needs {want} input(s), got {}", args.method, mats.len())).into());
        }
        if args.complex {
            mats = mats.into_iter().map(analytic).collect::<Result<_>>()?;
        }
        let s = Solve { method: args.method, p, eps: args.eps, kernel };
        let any_complex = mats.iter().any(AnyMatrix::is_complex);
        let mut it = mats.into_iter();
        let (a, b) = (it.next().expect("one input"), it.next());
        if any_complex {
            solve_typed(&s, a.to_complex(), b.map(|m| m.to_complex()), &mut w)?
        } else {
            let real = |m: AnyMatrix| match m {
                AnyMatrix::Real(r) => r,
                AnyMatrix::Complex(_) => unreachable!(),
            };
            solve_typed(&s, real(a), b.map(real), &mut w)?
        }
    };
    report.artifacts = w.list;
    let json = to_json_string(&report)?;
    write_text(&dir.join("modes.json"), &json)?;
    print(&json)?;
    Ok(())
}

fn rock_input(args: &DecomposeArgs) -> Result<Datacube> {
    match (args.preset, args.inputs.as_slice()) {
        (Some(p), []) => Ok(gen_cube(&preset_spec(p, require_seed(args.seed, "with --preset")?))?.0),
        (None, [path]) if is_csv(path) => {
            let (time, m) = load_csv_matrix(path)?;
            let cube = Datacube::from_matrix(&AnyMatrix::Real(m));
            match time {
                Some(t) => Datacube::new(t, cube.grid().to_vec(), cube.mask().to_vec(), cube.values().clone()),
                None => Ok(cube),
            }
        }
        (None, [path]) => load_cube(path),
        _ => Err(Error::param("input", "rock-pca needs one cube input or --preset")),
    }
}

fn run_rock(cube: &Datacube, opts: &RockOptions, w: &mut ArtifactWriter<'_>) -> Result<ModesReport> {
    let r = rock_pca(cube, opts)?;
    w.put_modes(&r.modes)?;
    w.put("amplitude", &r.amplitude)?;
    w.put("phase", &r.phase)?;
    w.put("kpca_temporal", r.kpca.temporal_a())?;
    if let Some(rot) = &r.rotation {
        w.put("rotation", &rot.rotation)?;
    }
    let mut report = ModesReport::from_modes(&r.modes, cube.n(), None, vec![r.kernel]);
    report.unrotated_values = Some(r.kpca.values().to_vec());
    report.unrotated_explained_fraction = Some(r.kpca.explained_fraction().to_vec());
    report.rotation = r.rotation.as_ref().map(|rot| RotationReport {
        method: if rot.power.is_some() { "promax" } else { "varimax" },
        power: rot.power,
        target: match opts.target {
            RotationTarget::Spatial => "spatial",
            RotationTarget::Temporal => "temporal",
        },
        converged: rot.converged,
        criterion_trace: rot.criterion_trace.clone(),
    });
    Ok(report)
}

fn parse_stats(s: &str) -> Result<Vec<Statistic>> {
    if s == "all" {
        return Ok(Statistic::ALL.to_vec());
    }
    s.split(',')
        .map(|t| Statistic::parse(t.trim()).ok_or_else(|| Error::param("stat", format!("unknown statistic `{t}`"))))
        .collect()
}

#[derive(Serialize)]
struct DependOutput {
    n: usize,
    seed: Option<u64>,
    reports: Vec<DependenceReport>,
}

fn battery_config(sigma: Option<&str>, gamma: Option<f64>, eps: Option<f64>) -> Result<BatteryConfig> {
    let mut cfg = BatteryConfig {
        bandwidth: parse_bandwidth(sigma, gamma)?,
        ..BatteryConfig::default()
    };
    if let Some(e) = eps {
        cfg.eps = e;
    }
    Ok(cfg)
}

fn cmd_depend(args: DependArgs) -> CmdResult {
    let stats = parse_stats(&args.stat)?;
    let seed = if args.perm > 0 { Some(require_seed(args.seed, "when --perm > 0")?) } else { args.seed };
    let cfg = battery_config(args.sigma.as_deref(), args.gamma, args.eps)?;
    let a = load_real_csv(&args.inputs[0])?;
    let b = load_real_csv(&args.inputs[1])?;
    let pair = PreparedPair::new(&a, &b, cfg)?;
    let reports = pair.reports(&stats, args.perm, seed.unwrap_or(0))?;
    let json = to_json_string(&DependOutput { n: pair.n(), seed, reports })?;
    let dir = out_dir(args.out)?;
    write_text(&dir.join("depend.json"), &json)?;
    print(&json)?;
    Ok(())
}

#[derive(Serialize)]
struct SweepSummary {
    label: String,
    file: String,
    curve: SweepCurve,
    argmax: usize,
    interior_maximum: bool,
    peak_excess: f64,
    large_sigma_kgv_gap: f64,
    large_sigma_kcca_gap: f64,
}

fn summarize(label: &str, curve: SweepCurve) -> SweepSummary {
    let last = curve.points.last().expect("non-empty sweep");
    let i = curve.argmax_kgv();
    SweepSummary {
        label: label.to_string(),
        file: format!("sweep_{label}.csv"),
        argmax: i,
        interior_maximum: i > 0 && i + 1 < curve.points.len(),
        peak_excess: curve.points[i].kgv - last.kgv,
        large_sigma_kgv_gap: (last.kgv - curve.linear_kgv).abs(),
        large_sigma_kcca_gap: (last.kcca - curve.linear_kcca).abs(),
        curve,
    }
}

fn write_sweep_csv(path: &Path, c: &SweepCurve) -> Result<()> {
    let col = |f: fn(&crate::dependence::SweepPoint) -> f64| c.points.iter().map(f).collect::<Vec<_>>();
    let (s, sa, sb, k, r) = (col(|p| p.sigma), col(|p| p.sigma_a), col(|p| p.sigma_b), col(|p| p.kgv), col(|p| p.kcca));
    let lk = vec![c.linear_kgv; s.len()];
    let lr = vec![c.linear_kcca; s.len()];
    write_csv(
        path,
        &["sigma", "sigma_a", "sigma_b", "kgv", "kcca", "linear_kgv", "linear_kcca"],
        &[&s, &sa, &sb, &k, &r, &lk, &lr],
    )
}

fn cmd_sweep(args: SweepArgs) -> CmdResult {
    if args.count == 0 || !(args.min > 0.0 && args.max > args.min) {
        return Err(Error::param("count", "need count ≥ 1 and 0 < min < max").into());
    }
    let sigmas = log_space(args.min, args.max, args.count);
    let mut inputs: Vec<(String, DataMatrix<f64>, DataMatrix<f64>)> = Vec::new();
    match (args.preset, args.inputs.as_slice()) {
        (Some(SweepPreset::Fig1), []) => {
            let seed = require_seed(args.seed, "with --preset")?;
            for r in Regime::ALL {
                let (x, y) = gen_regime(&RegimeSpec::new(r, args.n, seed))?;
                inputs.push((r.name().to_string(), column(&x)?, column(&y)?));
            }
        }
        (None, [a, b]) => inputs.push(("input".into(), load_real_csv(a)?, load_real_csv(b)?)),
        _ => return Err(Error::param("input", "give two inputs or --preset fig1").into()),
    }
    let dir = out_dir(args.out)?;
    let mut out = Vec::new();
    for (label, a, b) in inputs {
        let s = summarize(&label, sigma_sweep(&a, &b, &sigmas, args.eps, !args.absolute)?);
        write_sweep_csv(&dir.join(&s.file), &s.curve)?;
        out.push(s);
    }
    let json = to_json_string(&out)?;
    write_text(&dir.join("sweep.json"), &json)?;
    print(&json)?;
    Ok(())
}

fn column(v: &[f64]) -> Result<DataMatrix<f64>> {
    DataMatrix::from_row_slice(v.len(), 1, v)
}

/// Canonical correlations from the three CCA solvers on one dataset.
#[derive(Debug, Clone, Serialize)]
pub struct EquivReport {
    pub n: usize,
    pub da: usize,
    pub db: usize,
    pub eps_primal: f64,
    pub eps_dual: f64,
    pub eps_kcca: f64,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
    pub kcca: Vec<f64>,
    pub max_deviation: f64,
    pub threshold: f64,
    /// `|r|` for one-column views.
    pub pearson: Option<f64>,
    /// Largest deviation from `|r| / (1 + eps)`, the regularized value for
    /// one-column views.
    pub pearson_deviation: Option<f64>,
    pub pass: bool,
    pub explanation: String,
}

pub const EQUIV_THRESHOLD: f64 = 1e-6;

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Runs primal CCA, dual CCA and linear kernel CCA on the seeded coupled
/// dataset and compares their correlations.
pub fn equiv_check(seed: u64, n: usize, da: usize, db: usize, eps: [f64; 3]) -> Result<EquivReport> {
    let (a, b) = gen_coupled(n, da, db, seed)?;
    let (a, b) = (a.center_columns(), b.center_columns());
    let p = da.min(db).min(n - 1);
    let primal = cca_primal(&a, &b, p, eps[0])?.values().to_vec();
    let dual = cca_dual(&a, &b, p, eps[1])?.values().to_vec();
    let ka = center_kernel(&build_kernel(&a, KernelChoice::Linear)?);
    let kb = center_kernel(&build_kernel(&b, KernelChoice::Linear)?);
    let kc = kcca(&ka, &kb, p, eps[2])?.values().to_vec();
    let max_deviation = max_dev(&primal, &dual).max(max_dev(&primal, &kc)).max(max_dev(&dual, &kc));
    let (pearson, pearson_deviation) = if da == 1 && db == 1 {
        let r = crate::dependence::pearson_r(a.values().as_slice(), b.values().as_slice())?.abs();
        let dev = [(&primal, eps[0]), (&dual, eps[1]), (&kc, eps[2])]
            .iter()
            .map(|(v, e)| (v[0] - r / (1.0 + e)).abs())
            .fold(0.0, f64::max);
        (Some(r), Some(dev))
    } else {
        (None, None)
    };
    let pass = max_deviation < EQUIV_THRESHOLD;
    let explanation = if pass {
        format!("all solvers agree within {}", fmt_f64(EQUIV_THRESHOLD))
    } else if eps[0] != eps[1] || eps[1] != eps[2] {
        format!(
            "deviation {} exceeds {}; the solvers were given different ridges ({}, {}, {}), so they solve different problems",
            fmt_f64(max_deviation),
            fmt_f64(EQUIV_THRESHOLD),
            eps[0],
            eps[1],
            eps[2]
        )
    } else {
        format!("deviation {} exceeds {}", fmt_f64(max_deviation), fmt_f64(EQUIV_THRESHOLD))
    };
    Ok(EquivReport {
        n,
        da,
        db,
        eps_primal: eps[0],
        eps_dual: eps[1],
        eps_kcca: eps[2],
        primal,
        dual,
        kcca: kc,
        max_deviation,
        threshold: EQUIV_THRESHOLD,
        pearson,
        pearson_deviation,
        pass,
        explanation,
    })
}

fn cmd_equiv_check(args: EquivArgs) -> CmdResult {
    let eps = [
        args.eps_primal.unwrap_or(args.eps),
        args.eps_dual.unwrap_or(args.eps),
        args.eps_kcca.unwrap_or(args.eps),
    ];
    let report = equiv_check(args.seed, args.n, args.da, args.db, eps)?;
    let json = to_json_string(&report)?;
    let dir = out_dir(args.out)?;
    write_text(&dir.join("equiv.json"), &json)?;
    print(&json)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Check(report.explanation))
    }
}

/// Battery over the linear, ring and independent regimes.
#[derive(Debug, Clone, Serialize)]
pub struct Table1 {
    pub seed: u64,
    pub n: usize,
    pub n_permutations: usize,
    pub regimes: Vec<&'static str>,
    pub reports: [Vec<DependenceReport>; 3],
    pub sigma: [[f64; 2]; 3],
    pub pattern: PatternCheck,
    pub under_sampled: bool,
}

/// Smallest `n` at which the pattern is expected to be stable.
pub const TABLE1_MIN_N: usize = 100;

pub fn table1(seed: u64, n: usize, n_perm: usize, cfg: BatteryConfig) -> Result<Table1> {
    let mut reports: [Vec<DependenceReport>; 3] = Default::default();
    let mut sigma = [[0.0; 2]; 3];
    for (i, r) in Regime::ALL.into_iter().enumerate() {
        let (x, y) = gen_regime(&RegimeSpec::new(r, n, seed))?;
        let pair = PreparedPair::new(&column(&x)?, &column(&y)?, cfg)?;
        sigma[i] = pair.sigma();
        reports[i] = pair.reports(&Statistic::ALL, n_perm, seed)?;
    }
    let under_sampled = n < TABLE1_MIN_N;
    if under_sampled {
        log::warn!("table1 with n = {n} is under-sampled (recommended n ≥ {TABLE1_MIN_N}); the pattern may not hold");
    }
    Ok(Table1 {
        seed,
        n,
        n_permutations: n_perm,
        regimes: Regime::ALL.iter().map(|r| r.name()).collect(),
        pattern: table1_pattern(&reports),
        reports,
        sigma,
        under_sampled,
    })
}

fn row_label(s: Statistic) -> &'static str {
    match s {
        Statistic::Pearson => "Pearson's R",
        Statistic::Mca => "MCA",
        Statistic::Cca => "CCA",
        Statistic::HsicLinear => "HSIC (linear kernels)",
        Statistic::HsicRbf => "HSIC (RBF kernels)",
        Statistic::Coco => "COCO",
        Statistic::Kgv => "kGV",
        Statistic::Kcca => "kCCA",
    }
}

/// Plain-text table: one row per statistic, value and null q95 per regime.
pub fn format_table1(t: &Table1) -> String {
    let mut s = format!("{:<22}", "statistic");
    for r in &t.regimes {
        s += &format!(" {:>12} {:>12}", r, "q95");
    }
    s.push('\n');
    for (k, stat) in Statistic::ALL.into_iter().enumerate() {
        s += &format!("{:<22}", row_label(stat));
        for rep in &t.reports {
            let r = &rep[k];
            let q = r.null_quantiles.map_or("-".to_string(), |q| format!("{:.4e}", q.q95));
            s += &format!(" {:>12.4e} {:>12}", r.value, q);
        }
        s.push('\n');
    }
    s += &format!("pattern: {}\n", if t.pattern.pass { "PASS" } else { "FAIL" });
    for f in &t.pattern.failures {
        s += &format!("  {f}\n");
    }
    s
}

fn cmd_table1(args: Table1Args) -> CmdResult {
    let cfg = battery_config(None, None, args.eps)?;
    if args.perm == 0 {
        return Err(Error::param("perm", "the pattern check needs permutation nulls").into());
    }
    let t = table1(args.seed, args.n, args.perm, cfg)?;
    let dir = out_dir(args.out)?;
    write_text(&dir.join("table1.json"), &to_json_string(&t)?)?;
    print(&format_table1(&t))?;
    if t.pattern.pass {
        Ok(())
    } else {
        Err(Failure::Check(format!("table pattern failed: {}", t.pattern.failures.join("; "))))
    }
}
