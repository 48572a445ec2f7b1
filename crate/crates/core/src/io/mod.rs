//! Data matrices, datacubes and their on-disk formats.

pub mod cube;
pub mod matrix;
pub mod numfmt;

pub use cube::{load_csv_matrix, load_cube, save_cube, write_csv, CubeValues, Datacube};
pub use matrix::{center_columns, centering_residual, AnyMatrix, DataMatrix};
