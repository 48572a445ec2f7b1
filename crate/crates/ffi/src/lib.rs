//! C interface to `rockpca`.
//!
//! Objects cross the boundary as opaque handles created by `rp_*_new`,
//! `rp_*_load` or a solver and released with the matching `rp_*_free`.
//! Every fallible function returns an [`RpStatus`]; on failure
//! [`rp_last_error_message`] describes the error for the calling thread.
//! Matrices are exchanged row-major; complex values as interleaved
//! `(re, im)` pairs. Copy-out functions take a buffer and its length in
//! `f64` elements and fail if it is too short.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rockpca::analytic::hilbert_analytic;
use rockpca::decomp::{self, ModeSet, RockOptions, RockResult, RotateMethod};
use rockpca::dependence;
use rockpca::io::{self, AnyMatrix, DataMatrix, Datacube};
use rockpca::kernel::{self, Bandwidth, KernelChoice, KernelMatrix};
use rockpca::scalar::Scalar;
use rockpca::{Error, ErrorClass};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpStatus {
    Ok = 0,
    Io = 1,
    InvalidConfig = 2,
    Format = 3,
    Numerical = 4,
    NullPointer = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpKernelKind {
    Linear = 0,
    Rbf = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpRotate {
    None = 0,
    Varimax = 1,
    Promax = 2,
}

/// Matrices held by a mode set.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpModePart {
    LoadingsA = 0,
    LoadingsB = 1,
    TemporalA = 2,
    TemporalB = 3,
}

/// Full-grid maps of a ROCK-PCA result.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpMap {
    Amplitude = 0,
    Phase = 1,
}

pub struct RpMatrix(AnyMatrix);

pub struct RpCube(Datacube);

pub enum RpKernel {
    Real(KernelMatrix<f64>),
    Complex(KernelMatrix<Complex64>),
}

pub enum RpModeSet {
    Real(ModeSet<f64>),
    Complex(ModeSet<Complex64>),
}

pub struct RpRock(RockResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn status_of(class: ErrorClass) -> RpStatus {
    match class {
        ErrorClass::InvalidConfig => RpStatus::InvalidConfig,
        ErrorClass::Format => RpStatus::Format,
        ErrorClass::Numerical => RpStatus::Numerical,
        ErrorClass::Io => RpStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RpStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(e.class())
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            RpStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic");
            RpStatus::Panic
        }
    }
}

unsafe fn href<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_value<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    *out = v;
    Ok(())
}

unsafe fn path_arg(p: *const c_char) -> Result<String, Fail> {
    if p.is_null() {
        return Err(Fail::Null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| Fail::Lib(Error::InvalidParameter { name: "path", reason: "not valid UTF-8".into() }))
}

unsafe fn slice_arg<'a>(p: *const f64, len: usize) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null("data"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Fail {
    Fail::Lib(Error::InvalidParameter { name, reason: reason.into() })
}

unsafe fn copy_out<T: Scalar>(m: &DMatrix<T>, buf: *mut f64, len: usize) -> Result<(), Fail> {
    let per = if T::IS_COMPLEX { 2 } else { 1 };
    let need = m.len() * per;
    if len < need {
        return Err(invalid("len", format!("buffer holds {len} values, need {need}")));
    }
    if need == 0 {
        return Ok(());
    }
    if buf.is_null() {
        return Err(Fail::Null("buf"));
    }
    let out = std::slice::from_raw_parts_mut(buf, need);
    let mut k = 0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out[k] = m[(r, c)].re();
            if T::IS_COMPLEX {
                out[k + 1] = m[(r, c)].im();
            }
            k += per;
        }
    }
    Ok(())
}

unsafe fn copy_slice(v: &[f64], buf: *mut f64, len: usize) -> Result<(), Fail> {
    if len < v.len() {
        return Err(invalid("len", format!("buffer holds {len} values, need {}", v.len())));
    }
    if !v.is_empty() {
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        std::slice::from_raw_parts_mut(buf, v.len()).copy_from_slice(v);
    }
    Ok(())
}

/// Message for the most recent failed call on this thread; empty after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// NUL-terminated library version.
#[no_mangle]
pub extern "C" fn rp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `data` must hold `n * d` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_matrix_new_real(data: *const f64, n: usize, d: usize, out: *mut *mut RpMatrix) -> RpStatus {
    guard(|| {
        let v = slice_arg(data, n * d)?;
        put(out, RpMatrix(AnyMatrix::Real(DataMatrix::from_row_slice(n, d, v)?)))
    })
}

/// # Safety
/// `data` must hold `2 * n * d` interleaved values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_matrix_new_complex(data: *const f64, n: usize, d: usize, out: *mut *mut RpMatrix) -> RpStatus {
    guard(|| {
        let v = slice_arg(data, 2 * n * d)?;
        let z: Vec<Complex64> = v.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        put(out, RpMatrix(AnyMatrix::Complex(DataMatrix::from_row_slice(n, d, &z)?)))
    })
}

/// Loads a numeric CSV with a header row; a leading `time` column is dropped.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_matrix_load_csv(path: *const c_char, out: *mut *mut RpMatrix) -> RpStatus {
    guard(|| {
        let (_, m) = io::load_csv_matrix(path_arg(path)?)?;
        put(out, RpMatrix(AnyMatrix::Real(m)))
    })
}

/// # Safety
/// `m` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rp_matrix_free(m: *mut RpMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a valid handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn rp_matrix_shape(m: *const RpMatrix, n: *mut usize, d: *mut usize, is_complex: *mut bool) -> RpStatus {
    guard(|| {
        let m = &href(m, "matrix")?.0;
        if !n.is_null() {
            *n = m.n();
        }
        if !d.is_null() {
            *d = m.d();
        }
        if !is_complex.is_null() {
            *is_complex = m.is_complex();
        }
        Ok(())
    })
}

/// # Safety
/// `m` must be a valid handle; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn rp_matrix_copy(m: *const RpMatrix, buf: *mut f64, len: usize) -> RpStatus {
    guard(|| match &href(m, "matrix")?.0 {
        AnyMatrix::Real(r) => copy_out(r.values(), buf, len),
        AnyMatrix::Complex(z) => copy_out(z.values(), buf, len),
    })
}

/// Analytic signal of a real matrix, column by column.
///
/// # Safety
/// `m` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_hilbert(m: *const RpMatrix, out: *mut *mut RpMatrix) -> RpStatus {
    guard(|| {
        let z = hilbert_analytic(href(m, "matrix")?.0.as_real()?)?;
        put(out, RpMatrix(AnyMatrix::Complex(z.into_data())))
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_cube_load(path: *const c_char, out: *mut *mut RpCube) -> RpStatus {
    guard(|| put(out, RpCube(io::load_cube(path_arg(path)?)?)))
}

/// # Safety
/// `cube` must be a valid handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rp_cube_save(cube: *const RpCube, path: *const c_char) -> RpStatus {
    guard(|| Ok(io::save_cube(&href(cube, "cube")?.0, path_arg(path)?)?))
}

/// # Safety
/// `cube` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rp_cube_free(cube: *mut RpCube) {
    if !cube.is_null() {
        drop(Box::from_raw(cube));
    }
}

/// # Safety
/// `cube` must be a valid handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn rp_cube_shape(cube: *const RpCube, n: *mut usize, d_total: *mut usize, d_active: *mut usize) -> RpStatus {
    guard(|| {
        let c = &href(cube, "cube")?.0;
        if !n.is_null() {
            *n = c.n();
        }
        if !d_total.is_null() {
            *d_total = c.d_total();
        }
        if !d_active.is_null() {
            *d_active = c.d_active();
        }
        Ok(())
    })
}

/// Flattened `n × d_active` matrix of the active cells.
///
/// # Safety
/// `cube` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_cube_flatten(cube: *const RpCube, out: *mut *mut RpMatrix) -> RpStatus {
    guard(|| put(out, RpMatrix(href(cube, "cube")?.0.flatten()?)))
}

fn choice(kind: RpKernelKind, sigma: f64) -> KernelChoice {
    match kind {
        RpKernelKind::Linear => KernelChoice::Linear,
        RpKernelKind::Rbf if sigma > 0.0 => KernelChoice::Rbf(Bandwidth::Sigma(sigma)),
        RpKernelKind::Rbf => KernelChoice::Rbf(Bandwidth::Median),
    }
}

/// Kernel of a data matrix. For RBF, `sigma <= 0` selects the median
/// pairwise distance. With `center`, the input columns and then the kernel
/// are centered.
///
/// # Safety
/// `m` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_kernel_build(
    m: *const RpMatrix,
    kind: RpKernelKind,
    sigma: f64,
    center: bool,
    out: *mut *mut RpKernel,
) -> RpStatus {
    guard(|| {
        let c = choice(kind, sigma);
        let k = match &href(m, "matrix")?.0 {
            AnyMatrix::Real(r) if center => RpKernel::Real(kernel::center_kernel(&kernel::build_kernel(&r.center_columns(), c)?)),
            AnyMatrix::Real(r) => RpKernel::Real(kernel::build_kernel(r, c)?),
            AnyMatrix::Complex(z) if center => {
                RpKernel::Complex(kernel::center_kernel(&kernel::build_kernel(&z.center_columns(), c)?))
            }
            AnyMatrix::Complex(z) => RpKernel::Complex(kernel::build_kernel(z, c)?),
        };
        put(out, k)
    })
}

/// # Safety
/// `k` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rp_kernel_free(k: *mut RpKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// # Safety
/// `k` must be a valid handle; `n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_kernel_n(k: *const RpKernel, n: *mut usize) -> RpStatus {
    guard(|| {
        let size = match href(k, "kernel")? {
            RpKernel::Real(k) => k.n(),
            RpKernel::Complex(k) => k.n(),
        };
        put_value(n, size)
    })
}

/// # Safety
/// `k` must be a valid handle; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn rp_kernel_copy(k: *const RpKernel, buf: *mut f64, len: usize) -> RpStatus {
    guard(|| match href(k, "kernel")? {
        RpKernel::Real(k) => copy_out(k.values(), buf, len),
        RpKernel::Complex(k) => copy_out(k.values(), buf, len),
    })
}

unsafe fn two_view(
    a: *const RpMatrix,
    b: *const RpMatrix,
    out: *mut *mut RpModeSet,
    real: impl FnOnce(&DataMatrix<f64>, &DataMatrix<f64>) -> Result<ModeSet<f64>, Error>,
    complex: impl FnOnce(&DataMatrix<Complex64>, &DataMatrix<Complex64>) -> Result<ModeSet<Complex64>, Error>,
) -> RpStatus {
    guard(|| {
        let (a, b) = (&href(a, "a")?.0, &href(b, "b")?.0);
        let ms = match (a, b) {
            (AnyMatrix::Real(x), AnyMatrix::Real(y)) => RpModeSet::Real(real(&x.center_columns(), &y.center_columns())?),
            _ => {
                let (x, y) = (a.to_complex(), b.to_complex());
                RpModeSet::Complex(complex(&x.center_columns(), &y.center_columns())?)
            }
        };
        put(out, ms)
    })
}

/// Maximum covariance analysis. Inputs are centered internally.
///
/// # Safety
/// `a` and `b` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_mca(a: *const RpMatrix, b: *const RpMatrix, p: usize, out: *mut *mut RpModeSet) -> RpStatus {
    two_view(a, b, out, |x, y| decomp::mca_svd(x, y, p), |x, y| decomp::mca_svd(x, y, p))
}

/// Primal CCA with ridge `eps`. Inputs are centered internally.
///
/// # Safety
/// `a` and `b` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_cca(a: *const RpMatrix, b: *const RpMatrix, p: usize, eps: f64, out: *mut *mut RpModeSet) -> RpStatus {
    two_view(a, b, out, |x, y| decomp::cca_primal(x, y, p, eps), |x, y| decomp::cca_primal(x, y, p, eps))
}

/// Dual (sample-space) CCA with ridge `eps`. Inputs are centered internally.
///
/// # Safety
/// `a` and `b` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_cca_dual(a: *const RpMatrix, b: *const RpMatrix, p: usize, eps: f64, out: *mut *mut RpModeSet) -> RpStatus {
    two_view(a, b, out, |x, y| decomp::cca_dual(x, y, p, eps), |x, y| decomp::cca_dual(x, y, p, eps))
}

/// Kernel CCA on two centered kernels of the same element type.
///
/// # Safety
/// `ka` and `kb` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_kcca(ka: *const RpKernel, kb: *const RpKernel, p: usize, eps: f64, out: *mut *mut RpModeSet) -> RpStatus {
    guard(|| {
        let ms = match (href(ka, "ka")?, href(kb, "kb")?) {
            (RpKernel::Real(a), RpKernel::Real(b)) => RpModeSet::Real(decomp::kcca(a, b, p, eps)?),
            (RpKernel::Complex(a), RpKernel::Complex(b)) => RpModeSet::Complex(decomp::kcca(a, b, p, eps)?),
            _ => return Err(invalid("kb", "kernels must both be real or both complex")),
        };
        put(out, ms)
    })
}

/// Kernel PCA of a centered kernel.
///
/// # Safety
/// `k` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_kpca(k: *const RpKernel, p: usize, out: *mut *mut RpModeSet) -> RpStatus {
    guard(|| {
        let ms = match href(k, "kernel")? {
            RpKernel::Real(k) => RpModeSet::Real(decomp::kpca(k, p)?),
            RpKernel::Complex(k) => RpModeSet::Complex(decomp::kpca(k, p)?),
        };
        put(out, ms)
    })
}

/// # Safety
/// `m` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rp_modes_free(m: *mut RpModeSet) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

fn modes_info(m: &RpModeSet) -> (usize, &[f64], &[f64], bool) {
    match m {
        RpModeSet::Real(m) => (m.p(), m.values(), m.explained_fraction(), false),
        RpModeSet::Complex(m) => (m.p(), m.values(), m.explained_fraction(), true),
    }
}

/// # Safety
/// `m` must be a valid handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn rp_modes_count(m: *const RpModeSet, p: *mut usize, is_complex: *mut bool) -> RpStatus {
    guard(|| {
        let (count, _, _, cx) = modes_info(href(m, "modes")?);
        if !p.is_null() {
            *p = count;
        }
        if !is_complex.is_null() {
            *is_complex = cx;
        }
        Ok(())
    })
}

/// Eigen-, singular values or correlations, descending.
///
/// # Safety
/// `m` must be a valid handle; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn rp_modes_values(m: *const RpModeSet, buf: *mut f64, len: usize) -> RpStatus {
    guard(|| copy_slice(modes_info(href(m, "modes")?).1, buf, len))
}

/// # Safety
/// `m` must be a valid handle; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn rp_modes_explained(m: *const RpModeSet, buf: *mut f64, len: usize) -> RpStatus {
    guard(|| copy_slice(modes_info(href(m, "modes")?).2, buf, len))
}

fn part<T: Scalar>(m: &ModeSet<T>, which: RpModePart) -> Result<&DMatrix<T>, Fail> {
    let missing = || invalid("which", "this method has a single view");
    match which {
        RpModePart::LoadingsA => Ok(m.loadings_a()),
        RpModePart::LoadingsB => m.loadings_b().ok_or_else(missing),
        RpModePart::TemporalA => Ok(m.temporal_a()),
        RpModePart::TemporalB => m.temporal_b().ok_or_else(missing),
    }
}

/// Shape of one matrix of a mode set.
///
/// # Safety
/// `m` must be a valid handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn rp_modes_part_shape(m: *const RpModeSet, which: RpModePart, rows: *mut usize, cols: *mut usize) -> RpStatus {
    guard(|| {
        let (r, c) = match href(m, "modes")? {
            RpModeSet::Real(m) => part(m, which)?.shape(),
            RpModeSet::Complex(m) => part(m, which)?.shape(),
        };
        if !rows.is_null() {
            *rows = r;
        }
        if !cols.is_null() {
            *cols = c;
        }
        Ok(())
    })
}

/// # Safety
/// `m` must be a valid handle; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn rp_modes_part_copy(m: *const RpModeSet, which: RpModePart, buf: *mut f64, len: usize) -> RpStatus {
    guard(|| match href(m, "modes")? {
        RpModeSet::Real(m) => copy_out(part(m, which)?, buf, len),
        RpModeSet::Complex(m) => copy_out(part(m, which)?, buf, len),
    })
}

/// Rotated complex kernel PCA of a real cube. `power` is used by Promax and
/// ignored otherwise; RBF with `sigma <= 0` uses the median distance.
///
/// # Safety
/// `cube` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_rock_pca(
    cube: *const RpCube,
    kind: RpKernelKind,
    sigma: f64,
    p: usize,
    rotate: RpRotate,
    power: f64,
    out: *mut *mut RpRock,
) -> RpStatus {
    guard(|| {
        let mut opts = RockOptions::new(choice(kind, sigma), p);
        opts.rotate = match rotate {
            RpRotate::None => RotateMethod::None,
            RpRotate::Varimax => RotateMethod::Varimax,
            RpRotate::Promax => RotateMethod::Promax(power),
        };
        put(out, RpRock(decomp::rock_pca(&href(cube, "cube")?.0, &opts)?))
    })
}

/// # Safety
/// `r` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn rp_rock_free(r: *mut RpRock) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Copies the final (rotated) modes into a new mode-set handle.
///
/// # Safety
/// `r` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_rock_modes(r: *const RpRock, out: *mut *mut RpModeSet) -> RpStatus {
    guard(|| put(out, RpModeSet::Complex(href(r, "rock")?.0.modes.clone())))
}

/// `p × d_total` amplitude or phase maps.
///
/// # Safety
/// `r` must be a valid handle; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn rp_rock_map(r: *const RpRock, which: RpMap, buf: *mut f64, len: usize) -> RpStatus {
    guard(|| {
        let r = &href(r, "rock")?.0;
        copy_out(
            match which {
                RpMap::Amplitude => &r.amplitude,
                RpMap::Phase => &r.phase,
            },
            buf,
            len,
        )
    })
}

/// # Safety
/// `x` and `y` must hold `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_pearson(x: *const f64, y: *const f64, n: usize, out: *mut f64) -> RpStatus {
    guard(|| put_value(out, dependence::pearson_r(slice_arg(x, n)?, slice_arg(y, n)?)?))
}

unsafe fn kernel_stat(
    ka: *const RpKernel,
    kb: *const RpKernel,
    out: *mut f64,
    real: impl FnOnce(&KernelMatrix<f64>, &KernelMatrix<f64>) -> Result<f64, Error>,
    complex: impl FnOnce(&KernelMatrix<Complex64>, &KernelMatrix<Complex64>) -> Result<f64, Error>,
) -> RpStatus {
    guard(|| {
        let v = match (href(ka, "ka")?, href(kb, "kb")?) {
            (RpKernel::Real(a), RpKernel::Real(b)) => real(a, b)?,
            (RpKernel::Complex(a), RpKernel::Complex(b)) => complex(a, b)?,
            _ => return Err(invalid("kb", "kernels must both be real or both complex")),
        };
        put_value(out, v)
    })
}

/// Biased HSIC; kernels are centered internally.
///
/// # Safety
/// `ka` and `kb` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_hsic(ka: *const RpKernel, kb: *const RpKernel, out: *mut f64) -> RpStatus {
    kernel_stat(ka, kb, out, dependence::hsic, dependence::hsic)
}

/// # Safety
/// `ka` and `kb` must be valid centered handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_coco(ka: *const RpKernel, kb: *const RpKernel, out: *mut f64) -> RpStatus {
    kernel_stat(ka, kb, out, dependence::coco, dependence::coco)
}

/// # Safety
/// `ka` and `kb` must be valid centered handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_kgv(ka: *const RpKernel, kb: *const RpKernel, eps: f64, out: *mut f64) -> RpStatus {
    kernel_stat(ka, kb, out, |a, b| dependence::kgv(a, b, eps), |a, b| dependence::kgv(a, b, eps))
}

/// # Safety
/// `ka` and `kb` must be valid centered handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_kcca_stat(ka: *const RpKernel, kb: *const RpKernel, eps: f64, out: *mut f64) -> RpStatus {
    kernel_stat(ka, kb, out, |a, b| dependence::kcca_stat(a, b, eps), |a, b| dependence::kcca_stat(a, b, eps))
}
