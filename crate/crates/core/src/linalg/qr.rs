//! Householder QR, for real matrices and for complex matrices stored as
//! (real part, imaginary part) pairs.

use num_complex::Complex64;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Complex matrix stored as two real matrices of identical shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrixPair {
    re: DenseMatrix,
    im: DenseMatrix,
}

impl ComplexMatrixPair {
    pub fn new(re: DenseMatrix, im: DenseMatrix) -> Result<Self> {
        if re.shape() != im.shape() {
            return Err(Error::Shape {
                op: "complex_pair",
                expected: re.shape(),
                got: im.shape(),
            });
        }
        Ok(Self { re, im })
    }

    pub fn re(&self) -> &DenseMatrix {
        &self.re
    }

    pub fn im(&self) -> &DenseMatrix {
        &self.im
    }

    pub fn into_parts(self) -> (DenseMatrix, DenseMatrix) {
        (self.re, self.im)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.re.shape()
    }

    /// Residual of `QᴴQ = I`, measured as `‖XᵀX + YᵀY − I‖_F + ‖XᵀY − YᵀX‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let (x, y) = (&self.re, &self.im);
        let n = x.cols();
        let real = &x.tr_matmul(x).unwrap() + &y.tr_matmul(y).unwrap();
        let imag = &x.tr_matmul(y).unwrap() - &y.tr_matmul(x).unwrap();
        real.distance(&DenseMatrix::identity(n)) + imag.frobenius_norm()
    }

    fn to_complex(&self) -> Vec<Complex64> {
        self.re
            .as_slice()
            .iter()
            .zip(self.im.as_slice())
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect()
    }

    fn from_complex(rows: usize, cols: usize, data: &[Complex64]) -> Self {
        let re = data.iter().map(|z| z.re).collect();
        let im = data.iter().map(|z| z.im).collect();
        Self {
            re: DenseMatrix::from_vec_unchecked(rows, cols, re),
            im: DenseMatrix::from_vec_unchecked(rows, cols, im),
        }
    }
}

/// Thin Householder QR of a tall matrix: `Q` is `rows × cols` with
/// orthonormal columns, `R` is `cols × cols` upper triangular with a
/// nonnegative diagonal.
pub fn qr_real(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::InvalidDimensions(format!(
            "qr_real needs rows >= cols, got {m}x{n}"
        )));
    }
    let mut r = a.clone();
    let mut reflectors: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n);

    for k in 0..n {
        let x: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            reflectors.push((vec![0.0; m - k], 0.0));
            continue;
        }
        let alpha = if x[0] >= 0.0 { -norm } else { norm };
        let mut v = x;
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|t| t * t).sum();
        let beta = 2.0 / vtv;
        apply_reflector(&mut r, k, k, &v, beta);
        r[(k, k)] = alpha;
        for i in k + 1..m {
            r[(i, k)] = 0.0;
        }
        reflectors.push((v, beta));
    }

    let mut q = DenseMatrix::from_fn(m, n, |i, j| if i == j { 1.0 } else { 0.0 });
    for (k, (v, beta)) in reflectors.iter().enumerate().rev() {
        if *beta != 0.0 {
            apply_reflector(&mut q, k, 0, v, *beta);
        }
    }

    let mut r_thin = DenseMatrix::from_fn(n, n, |i, j| if j >= i { r[(i, j)] } else { 0.0 });
    for k in 0..n {
        if r_thin[(k, k)] < 0.0 {
            for j in k..n {
                r_thin[(k, j)] = -r_thin[(k, j)];
            }
            for i in 0..m {
                q[(i, k)] = -q[(i, k)];
            }
        }
    }
    Ok((q, r_thin))
}

/// `A[k.., col0..] ← (I − β v vᵀ) A[k.., col0..]`, row-oriented.
fn apply_reflector(a: &mut DenseMatrix, k: usize, col0: usize, v: &[f64], beta: f64) {
    let cols = a.cols();
    let mut w = vec![0.0; cols - col0];
    for (vi, i) in v.iter().zip(k..) {
        for (wj, aij) in w.iter_mut().zip(&a.row(i)[col0..]) {
            *wj += vi * aij;
        }
    }
    for (vi, i) in v.iter().zip(k..) {
        let s = beta * vi;
        for (aij, wj) in a.row_mut(i)[col0..].iter_mut().zip(&w) {
            *aij -= s * wj;
        }
    }
}

/// Unitary factor of the QR decomposition of a square complex matrix, computed
/// with complex Householder reflectors. The phases are fixed so that `R` has a
/// positive real diagonal.
pub fn qr_complex_pair(m: &ComplexMatrixPair) -> Result<ComplexMatrixPair> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare {
            op: "qr_complex_pair",
            rows,
            cols,
        });
    }
    let n = rows;
    let mut r = m.to_complex();
    let mut reflectors: Vec<(Vec<Complex64>, f64)> = Vec::with_capacity(n);
    let mut diag_phase = vec![Complex64::new(1.0, 0.0); n];

    for k in 0..n {
        let x: Vec<Complex64> = (k..n).map(|i| r[i * n + k]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            reflectors.push((Vec::new(), 0.0));
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vhv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vhv;
        apply_complex_reflector(&mut r, n, k, k, &v, beta);
        // R_kk = alpha; record its phase for the normalization below.
        diag_phase[k] = -phase;
        reflectors.push((v, beta));
    }

    let mut q = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        q[i * n + i] = Complex64::new(1.0, 0.0);
    }
    for (k, (v, beta)) in reflectors.iter().enumerate().rev() {
        if *beta != 0.0 {
            apply_complex_reflector(&mut q, n, k, 0, v, *beta);
        }
    }
    // Q ← Q · diag(phase) makes R's diagonal |alpha| > 0.
    for i in 0..n {
        for (k, ph) in diag_phase.iter().enumerate() {
            q[i * n + k] *= ph;
        }
    }
    Ok(ComplexMatrixPair::from_complex(n, n, &q))
}

fn apply_complex_reflector(
    a: &mut [Complex64],
    cols: usize,
    k: usize,
    col0: usize,
    v: &[Complex64],
    beta: f64,
) {
    let mut w = vec![Complex64::new(0.0, 0.0); cols - col0];
    for (vi, i) in v.iter().zip(k..) {
        let vc = vi.conj();
        for (wj, aij) in w.iter_mut().zip(&a[i * cols + col0..(i + 1) * cols]) {
            *wj += vc * aij;
        }
    }
    for (vi, i) in v.iter().zip(k..) {
        let s = *vi * beta;
        for (aij, wj) in a[i * cols + col0..(i + 1) * cols].iter_mut().zip(&w) {
            *aij -= s * wj;
        }
    }
}
