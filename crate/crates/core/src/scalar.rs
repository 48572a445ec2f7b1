//! Element types shared by every solver: `f64` for ordinary data and
//! `Complex64` for analytic (Hilbert-transformed) data.

use nalgebra::ComplexField;
use num_complex::Complex64;

pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + 'static {
    const IS_COMPLEX: bool;

    /// Builds a value from real and imaginary parts. Real types drop `im`.
    fn from_parts(re: f64, im: f64) -> Self;

    /// `exp(i * phi)`; real types return `1` unless `phi` is `±π`.
    fn unit_phase(phi: f64) -> Self;

    fn to_complex(self) -> Complex64;

    fn re(self) -> f64;
    fn im(self) -> f64;
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }

    fn unit_phase(phi: f64) -> Self {
        if phi.cos() < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }

    fn re(self) -> f64 {
        self
    }

    fn im(self) -> f64 {
        0.0
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn unit_phase(phi: f64) -> Self {
        Complex64::from_polar(1.0, phi)
    }

    fn to_complex(self) -> Complex64 {
        self
    }

    fn re(self) -> f64 {
        self.re
    }

    fn im(self) -> f64 {
        self.im
    }
}
