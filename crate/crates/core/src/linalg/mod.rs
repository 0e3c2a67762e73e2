//! Dense real matrix kernels: storage, LU, Householder QR and norm estimates.

mod lu;
mod matrix;
mod norms;
mod qr;

pub use lu::{inverse, solve_linear, Lu};
pub use matrix::DenseMatrix;
pub use norms::{
    frobenius_norm, spectral_norm_estimate, spectral_radius_estimate, GELFAND_MAX_DOUBLINGS,
};
pub use qr::{qr_complex_pair, qr_real, ComplexMatrixPair};
