use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Doubling cap for the Gelfand iterate: at most `2^12` powers.
pub const GELFAND_MAX_DOUBLINGS: u32 = 12;

const POWER_MAX_ITER: usize = 2000;

pub fn frobenius_norm(a: &DenseMatrix) -> f64 {
    a.frobenius_norm()
}

/// Largest singular value by power iteration on `AᵀA`.
///
/// The Rayleigh quotient never exceeds `σ_max²`, so the estimate is a lower
/// bound on `‖A‖₂` (and hence never above `‖A‖_F`). Iteration stops once two
/// successive estimates agree to relative accuracy `tol`.
pub fn spectral_norm_estimate(a: &DenseMatrix, tol: f64) -> f64 {
    let n = a.cols();
    if n == 0 || a.max_abs() == 0.0 {
        return 0.0;
    }
    let scale = a.max_abs();
    let a = a.scale(1.0 / scale);

    // Fixed, non-symmetric start vector so results are reproducible.
    let mut v = DenseMatrix::from_fn(n, 1, |i, _| 1.0 + 0.5 * ((i + 1) as f64).sin());
    normalize(&mut v);
    let mut sigma = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let w = &a * &v;
        let next = w.frobenius_norm();
        let mut u = a.tr_matmul(&w).expect("conformal");
        if u.max_abs() == 0.0 {
            // v landed in the null space; the estimate so far stands.
            sigma = next;
            break;
        }
        normalize(&mut u);
        v = u;
        let converged = (next - sigma).abs() <= tol * next;
        sigma = next;
        if converged {
            break;
        }
    }
    sigma * scale
}

fn normalize(v: &mut DenseMatrix) {
    let nrm = v.frobenius_norm();
    *v = v.scale(1.0 / nrm);
}

/// Spectral radius from the Gelfand formula `ρ(A) = lim ‖A^{2^k}‖_F^{1/2^k}`.
///
/// The powers are formed by repeated squaring with renormalization, tracking
/// `ln ‖A^{2^k}‖_F` separately so large or tiny radii do not overflow. Stops
/// when successive estimates differ by less than `tol` or after
/// [`GELFAND_MAX_DOUBLINGS`] squarings. Since `‖A^m‖_F ≥ ρ(A)^m` every
/// iterate is an upper bound on the true radius.
pub fn spectral_radius_estimate(a: &DenseMatrix, tol: f64) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "spectral_radius_estimate",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let norm = a.frobenius_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    // power = A^{2^k} / ‖A^{2^k}‖_F, log_norm = ln ‖A^{2^k}‖_F.
    let mut power = a.scale(1.0 / norm);
    let mut log_norm = norm.ln();
    let mut estimate = norm;
    for k in 1..=GELFAND_MAX_DOUBLINGS {
        let squared = &power * &power;
        let sq_norm = squared.frobenius_norm();
        if sq_norm == 0.0 {
            return Ok(0.0);
        }
        log_norm = 2.0 * log_norm + sq_norm.ln();
        power = squared.scale(1.0 / sq_norm);
        let next = (log_norm / f64::from(1u32 << k)).exp();
        let converged = (next - estimate).abs() < tol;
        estimate = next;
        if converged {
            break;
        }
    }
    Ok(estimate)
}
