//! Spatio-temporal datacubes on disk.
//!
//! A cube named `base` is two files:
//!
//! * `base.json`: `{"n", "d", "complex", "mask", "grid", "time"}` where `d`
//!   counts every grid cell (masked or not), `mask` is `0`/`1` per cell,
//!   `grid` holds `[lat, lon]` (or any two abstract coordinates) per cell and
//!   `time` is the strictly increasing sample axis.
//! * `base.bin`: `n·d` little-endian IEEE-754 `f64` values, row-major (time
//!   outer, cell inner). Complex cubes store interleaved `(re, im)` pairs.
//!
//! Flattening keeps the active (`mask = 1`) cells in cell order.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{AnyMatrix, DataMatrix};
use super::numfmt;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum CubeValues {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl CubeValues {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            CubeValues::Real(m) => m.shape(),
            CubeValues::Complex(m) => m.shape(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, CubeValues::Complex(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Datacube {
    time: Vec<f64>,
    grid: Vec<[f64; 2]>,
    mask: Vec<bool>,
    values: CubeValues,
}

#[derive(Serialize, Deserialize)]
struct Header {
    n: usize,
    d: usize,
    complex: bool,
    mask: Vec<u8>,
    grid: Vec<[f64; 2]>,
    time: Vec<f64>,
}

impl Datacube {
    pub fn new(time: Vec<f64>, grid: Vec<[f64; 2]>, mask: Vec<bool>, values: CubeValues) -> Result<Self> {
        let (n, d) = values.shape();
        if n == 0 || d == 0 {
            return Err(Error::InvalidShape(format!("empty cube ({n}×{d})")));
        }
        if time.len() != n {
            return Err(Error::DimensionMismatch(format!("time axis has {} entries for n={n}", time.len())));
        }
        if grid.len() != d || mask.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "grid has {} cells and mask {} for d={d}",
                grid.len(),
                mask.len()
            )));
        }
        if time.iter().any(|t| !t.is_finite()) || grid.iter().flatten().any(|g| !g.is_finite()) {
            return Err(Error::MalformedHeader("non-finite time or grid coordinate".into()));
        }
        if time.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::MalformedHeader("time axis must be strictly increasing".into()));
        }
        check_finite(&values)?;
        Ok(Self {
            time,
            grid,
            mask,
            values,
        })
    }

    /// Wraps a matrix with time `0..n`, abstract grid `[j, 0]` and no mask.
    pub fn from_matrix(m: &AnyMatrix) -> Self {
        let (n, d) = (m.n(), m.d());
        let values = match m {
            AnyMatrix::Real(m) => CubeValues::Real(m.values().clone()),
            AnyMatrix::Complex(m) => CubeValues::Complex(m.values().clone()),
        };
        Self {
            time: (0..n).map(|t| t as f64).collect(),
            grid: (0..d).map(|j| [j as f64, 0.0]).collect(),
            mask: vec![true; d],
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.time.len()
    }

    /// Total cell count, masked cells included.
    pub fn d_total(&self) -> usize {
        self.grid.len()
    }

    pub fn d_active(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn time(&self) -> &[f64] {
        &self.time
    }

    pub fn grid(&self) -> &[[f64; 2]] {
        &self.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn values(&self) -> &CubeValues {
        &self.values
    }

    pub fn is_complex(&self) -> bool {
        self.values.is_complex()
    }

    pub fn active_cells(&self) -> Vec<usize> {
        (0..self.d_total()).filter(|&j| self.mask[j]).collect()
    }

    /// Active cells as an `n × d_active` matrix.
    pub fn flatten(&self) -> Result<AnyMatrix> {
        let cols = self.active_cells();
        if cols.is_empty() {
            return Err(Error::InvalidShape("every cell is masked".into()));
        }
        let n = self.n();
        Ok(match &self.values {
            CubeValues::Real(v) => {
                AnyMatrix::Real(DataMatrix::new(DMatrix::from_fn(n, cols.len(), |r, c| v[(r, cols[c])]))?)
            }
            CubeValues::Complex(v) => {
                AnyMatrix::Complex(DataMatrix::new(DMatrix::from_fn(n, cols.len(), |r, c| v[(r, cols[c])]))?)
            }
        })
    }

    /// Places `p × d_active` rows back on the full grid; masked cells get 0.
    pub fn scatter<T: crate::scalar::Scalar>(&self, active: &DMatrix<T>) -> Result<DMatrix<T>> {
        let cols = self.active_cells();
        if active.ncols() != cols.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns given for {} active cells",
                active.ncols(),
                cols.len()
            )));
        }
        let mut full = DMatrix::zeros(active.nrows(), self.d_total());
        for (c, &j) in cols.iter().enumerate() {
            full.set_column(j, &active.column(c));
        }
        Ok(full)
    }
}

fn check_finite(values: &CubeValues) -> Result<()> {
    let (n, d) = values.shape();
    for r in 0..n {
        for c in 0..d {
            let ok = match values {
                CubeValues::Real(v) => v[(r, c)].is_finite(),
                CubeValues::Complex(v) => v[(r, c)].re.is_finite() && v[(r, c)].im.is_finite(),
            };
            if !ok {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
    }
    Ok(())
}

/// `(header, payload)` paths for a cube given as `base`, `base.json` or
/// `base.bin`.
pub fn cube_paths(path: &Path) -> (PathBuf, PathBuf) {
    let s = path.as_os_str().to_string_lossy();
    let base = s
        .strip_suffix(".json")
        .or_else(|| s.strip_suffix(".bin"))
        .unwrap_or(&s)
        .to_string();
    (PathBuf::from(format!("{base}.json")), PathBuf::from(format!("{base}.bin")))
}

pub fn load_cube(path: impl AsRef<Path>) -> Result<Datacube> {
    let (hpath, bpath) = cube_paths(path.as_ref());
    let text = fs::read_to_string(&hpath)?;
    let header: Header =
        serde_json::from_str(&text).map_err(|e| Error::MalformedHeader(format!("{}: {e}", hpath.display())))?;
    if header.mask.iter().any(|&m| m > 1) {
        return Err(Error::MalformedHeader("mask entries must be 0 or 1".into()));
    }
    if header.time.len() != header.n {
        return Err(Error::MalformedHeader(format!(
            "header says n={} but time axis has {} entries",
            header.n,
            header.time.len()
        )));
    }
    if header.grid.len() != header.d || header.mask.len() != header.d {
        return Err(Error::MalformedHeader(format!(
            "header says d={} but grid has {} cells and mask {}",
            header.d,
            header.grid.len(),
            header.mask.len()
        )));
    }

    let bytes = fs::read(&bpath)?;
    let width = if header.complex { 2 } else { 1 };
    let row_bytes = header.d * width * 8;
    if row_bytes == 0 || bytes.len() % row_bytes != 0 || bytes.len() / row_bytes != header.n {
        return Err(Error::DimensionMismatch(format!(
            "header says n={} rows of {} bytes but payload has {} bytes ({:.2} rows)",
            header.n,
            row_bytes,
            bytes.len(),
            if row_bytes == 0 { 0.0 } else { bytes.len() as f64 / row_bytes as f64 }
        )));
    }
    let floats: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    let (n, d) = (header.n, header.d);
    let values = if header.complex {
        CubeValues::Complex(DMatrix::from_fn(n, d, |r, c| {
            let k = 2 * (r * d + c);
            Complex64::new(floats[k], floats[k + 1])
        }))
    } else {
        CubeValues::Real(DMatrix::from_fn(n, d, |r, c| floats[r * d + c]))
    };
    let mask = header.mask.iter().map(|&m| m == 1).collect();
    Datacube::new(header.time, header.grid, mask, values)
}

pub fn save_cube(cube: &Datacube, path: impl AsRef<Path>) -> Result<()> {
    let (hpath, bpath) = cube_paths(path.as_ref());
    let (n, d) = cube.values.shape();
    let header = Header {
        n,
        d,
        complex: cube.is_complex(),
        mask: cube.mask.iter().map(|&m| m as u8).collect(),
        grid: cube.grid.clone(),
        time: cube.time.clone(),
    };
    let mut payload = Vec::with_capacity(n * d * 16);
    for r in 0..n {
        for c in 0..d {
            match &cube.values {
                CubeValues::Real(v) => payload.extend_from_slice(&v[(r, c)].to_le_bytes()),
                CubeValues::Complex(v) => {
                    payload.extend_from_slice(&v[(r, c)].re.to_le_bytes());
                    payload.extend_from_slice(&v[(r, c)].im.to_le_bytes());
                }
            }
        }
    }
    if let Some(dir) = hpath.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&hpath, numfmt::to_json_string(&header)?)?;
    fs::write(&bpath, payload)?;
    Ok(())
}

/// Time-by-space CSV with a header row. A first column named `time` (any
/// case) becomes the time axis and is not part of the matrix.
pub fn load_csv_matrix(path: impl AsRef<Path>) -> Result<(Option<Vec<f64>>, DataMatrix<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path.as_ref())?;
    let headers = reader.headers()?.clone();
    let has_time = headers.get(0).is_some_and(|h| h.eq_ignore_ascii_case("time"));
    let skip = has_time as usize;
    let d = headers.len().saturating_sub(skip);
    let mut time = Vec::new();
    let mut data = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec?;
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("row {r}, column {c}: `{field}` is not a number")))?;
            if c < skip {
                time.push(v);
            } else {
                data.push(v);
            }
        }
    }
    let n = data.len() / d.max(1);
    let m = DataMatrix::from_row_slice(n, d, &data)?;
    if has_time && time.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::MalformedHeader("time column must be strictly increasing".into()));
    }
    Ok((has_time.then_some(time), m))
}

/// Writes named columns as CSV with 17 significant digits.
pub fn write_csv(path: impl AsRef<Path>, names: &[&str], columns: &[&[f64]]) -> Result<()> {
    let mut w = csv::Writer::from_path(path.as_ref())?;
    w.write_record(names)?;
    let rows = columns.first().map_or(0, |c| c.len());
    for r in 0..rows {
        w.write_record(columns.iter().map(|c| numfmt::fmt_f64(c[r])))?;
    }
    w.flush()?;
    Ok(())
}
