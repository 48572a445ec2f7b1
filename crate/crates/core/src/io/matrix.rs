use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `n × d` samples-by-features matrix (time steps by spatial points).
///
/// Construction rejects `n < 2`, `d < 1` and non-finite entries. The
/// `centered` flag is only ever set by [`center_columns`].
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix<T: Scalar = f64> {
    values: DMatrix<T>,
    centered: bool,
}

impl<T: Scalar> DataMatrix<T> {
    pub fn new(values: DMatrix<T>) -> Result<Self> {
        let (n, d) = values.shape();
        if n < 2 {
            return Err(Error::TooFewSamples { need: 2, got: n });
        }
        if d < 1 {
            return Err(Error::InvalidShape("data matrix needs at least one column".into()));
        }
        for c in 0..d {
            for r in 0..n {
                let v = values[(r, c)];
                if !(v.re().is_finite() && v.im().is_finite()) {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self {
            values,
            centered: false,
        })
    }

    /// Builds from row-major storage.
    pub fn from_row_slice(n: usize, d: usize, data: &[T]) -> Result<Self> {
        if data.len() != n * d {
            return Err(Error::DimensionMismatch(format!(
                "expected {} values for {n}×{d}, got {}",
                n * d,
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, d, data))
    }

    pub(crate) fn from_parts_unchecked(values: DMatrix<T>, centered: bool) -> Self {
        Self { values, centered }
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn d(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<T> {
        &self.values
    }

    pub fn into_values(self) -> DMatrix<T> {
        self.values
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn column_means(&self) -> Vec<T> {
        let n = T::from_real(self.n() as f64);
        self.values.column_iter().map(|c| c.sum() / n).collect()
    }

    pub fn center_columns(&self) -> Self {
        center_columns(self)
    }

    /// Centered copy; passes through data already flagged as centered.
    pub(crate) fn centered_view(&self, context: &str) -> std::borrow::Cow<'_, Self> {
        if self.centered {
            std::borrow::Cow::Borrowed(self)
        } else {
            log::warn!("{context}: input not centered; removing column means");
            std::borrow::Cow::Owned(center_columns(self))
        }
    }

    pub fn to_complex(&self) -> DataMatrix<Complex64> {
        DataMatrix {
            values: self.values.map(|v| v.to_complex()),
            centered: self.centered,
        }
    }

    /// Same matrix with rows reordered: row `i` of the result is row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        let v = DMatrix::from_fn(self.n(), self.d(), |r, c| self.values[(perm[r], c)]);
        Ok(Self {
            values: v,
            centered: self.centered,
        })
    }
}

/// Removes each column's mean and marks the result as centered.
pub fn center_columns<T: Scalar>(m: &DataMatrix<T>) -> DataMatrix<T> {
    let means = m.column_means();
    let mut values = m.values.clone();
    for (mut col, mean) in values.column_iter_mut().zip(means) {
        col.apply(|v| *v -= mean);
    }
    DataMatrix {
        values,
        centered: true,
    }
}

/// Largest `|column mean| / (column RMS + 1)`; the centered invariant asks
/// for this to be at most `1e-10`.
pub fn centering_residual<T: Scalar>(m: &DataMatrix<T>) -> f64 {
    let n = m.n() as f64;
    m.values
        .column_iter()
        .map(|c| {
            let mean = c.sum().modulus() / n;
            let rms = (c.iter().map(|v| v.modulus_squared()).sum::<f64>() / n).sqrt();
            mean / (rms + 1.0)
        })
        .fold(0.0, f64::max)
}

/// A matrix whose element type is only known at run time (file input).
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Real(DataMatrix<f64>),
    Complex(DataMatrix<Complex64>),
}

impl AnyMatrix {
    pub fn n(&self) -> usize {
        match self {
            AnyMatrix::Real(m) => m.n(),
            AnyMatrix::Complex(m) => m.n(),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            AnyMatrix::Real(m) => m.d(),
            AnyMatrix::Complex(m) => m.d(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, AnyMatrix::Complex(_))
    }

    pub fn center_columns(&self) -> AnyMatrix {
        match self {
            AnyMatrix::Real(m) => AnyMatrix::Real(center_columns(m)),
            AnyMatrix::Complex(m) => AnyMatrix::Complex(center_columns(m)),
        }
    }

    pub fn to_complex(&self) -> DataMatrix<Complex64> {
        match self {
            AnyMatrix::Real(m) => m.to_complex(),
            AnyMatrix::Complex(m) => m.clone(),
        }
    }

    pub fn as_real(&self) -> Result<&DataMatrix<f64>> {
        match self {
            AnyMatrix::Real(m) => Ok(m),
            AnyMatrix::Complex(_) => Err(Error::ComplexInput),
        }
    }
}

impl From<DataMatrix<f64>> for AnyMatrix {
    fn from(m: DataMatrix<f64>) -> Self {
        AnyMatrix::Real(m)
    }
}

impl From<DataMatrix<Complex64>> for AnyMatrix {
    fn from(m: DataMatrix<Complex64>) -> Self {
        AnyMatrix::Complex(m)
    }
}
