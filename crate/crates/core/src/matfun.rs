//! Matrix functions on the small `2p × 2p` factors: Cayley transform and its
//! inverse, principal square root, exponential, logarithm near the identity,
//! and the projections onto Hamiltonian / skew-Hamiltonian matrices.

use crate::error::{Error, Result};
use crate::linalg::{solve_linear, DenseMatrix, Lu};
use crate::sympstiefel::StructureJ;

/// Default relative tolerance of the square-root iteration.
pub const SQRTM_TOL: f64 = 1e-13;
/// Default iteration cap of the square-root iteration.
pub const SQRTM_MAX_ITER: usize = 60;

/// Relative step below which determinant scaling is switched off.
const SCALING_CUTOFF: f64 = 1e-2;
/// `‖X‖₁` bound for the unscaled Padé approximant.
const EXPM_THETA: f64 = 0.5;
const EXPM_PADE_ORDER: usize = 6;
/// `‖Y − I‖_F` below which the logarithm series is used.
const LOGM_SERIES_RADIUS: f64 = 0.25;
const LOGM_MAX_SQRTS: usize = 40;

fn require_square(op: &'static str, a: &DenseMatrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op,
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(a.rows())
}

/// `Cay(X) = (I − X/2)⁻¹ (I + X/2)`. Maps Hamiltonian to symplectic matrices.
pub fn cayley(x: &DenseMatrix) -> Result<DenseMatrix> {
    require_square("cayley", x)?;
    let minus = x.scale(-0.5).add_scaled_identity(1.0);
    let plus = x.scale(0.5).add_scaled_identity(1.0);
    solve_linear(&minus, &plus).map_err(|_| Error::Singular { op: "cayley" })
}

/// `Cay⁻¹(Y) = 2 (Y + I)⁻¹ (Y − I)`.
pub fn cayley_inverse(y: &DenseMatrix) -> Result<DenseMatrix> {
    require_square("cayley_inverse", y)?;
    let plus = y.add_scaled_identity(1.0);
    let minus = y.scale(2.0).add_scaled_identity(-2.0);
    solve_linear(&plus, &minus).map_err(|_| Error::Singular {
        op: "cayley_inverse",
    })
}

/// Options for [`sqrtm_denman_beavers`].
#[derive(Debug, Clone, Copy)]
pub struct SqrtmOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SqrtmOptions {
    fn default() -> Self {
        Self {
            tol: SQRTM_TOL,
            max_iter: SQRTM_MAX_ITER,
        }
    }
}

/// Output of the coupled square-root iteration.
#[derive(Debug, Clone)]
pub struct SquareRoot {
    /// The principal square root `S`.
    pub root: DenseMatrix,
    /// The coupled iterate, converging to `S⁻¹`.
    pub inverse_root: DenseMatrix,
    pub iterations: usize,
    /// `‖S·S − A‖_F / ‖A‖_F`.
    pub residual: f64,
}

/// Principal square root by the scaled Denman–Beavers iteration
///
/// ```text
/// Y₀ = A, Z₀ = I
/// Y_{k+1} = (μ_k Y_k + μ_k⁻¹ Z_k⁻¹) / 2
/// Z_{k+1} = (μ_k Z_k + μ_k⁻¹ Y_k⁻¹) / 2,   μ_k = |det Y_k det Z_k|^{−1/(2m)}
/// ```
///
/// with `Y_k → A^{1/2}` and `Z_k → A^{−1/2}`. Scaling is dropped once the
/// relative step falls below `1e-2`, where the iteration is already in its
/// quadratic regime. The iteration stops when the relative step is below
/// `tol` or stops decreasing, and the result is accepted only if
/// `‖S² − A‖_F ≤ tol · ‖A‖_F`.
///
/// A singular iterate or a failed residual check both surface as
/// [`Error::NotConverged`]: either means `A` has eigenvalues on (or too close
/// to) the closed negative real axis.
pub fn sqrtm_denman_beavers(a: &DenseMatrix, opts: SqrtmOptions) -> Result<SquareRoot> {
    let m = require_square("sqrtm", a)?;
    let a_norm = a.frobenius_norm();
    if m == 0 || a_norm == 0.0 {
        return Err(Error::NotConverged {
            op: "sqrtm",
            iterations: 0,
            residual: f64::INFINITY,
        });
    }
    let fail = |iterations: usize, residual: f64| Error::NotConverged {
        op: "sqrtm",
        iterations,
        residual,
    };

    let mut y = a.clone();
    let mut z = DenseMatrix::identity(m);
    let mut scaling = true;
    let mut prev_step = f64::INFINITY;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        let lu_y = Lu::factor(&y).map_err(|_| fail(iterations, f64::INFINITY))?;
        let lu_z = Lu::factor(&z).map_err(|_| fail(iterations, f64::INFINITY))?;
        let mu = if scaling {
            let log_det = lu_y.log_abs_det() + lu_z.log_abs_det();
            (-log_det / (2.0 * m as f64)).exp()
        } else {
            1.0
        };
        if !mu.is_finite() || mu == 0.0 {
            return Err(fail(iterations, f64::INFINITY));
        }
        let y_inv = lu_y.inverse();
        let z_inv = lu_z.inverse();
        let mut y_next = y.scale(0.5 * mu);
        y_next += &z_inv.scale(0.5 / mu);
        let mut z_next = z.scale(0.5 * mu);
        z_next += &y_inv.scale(0.5 / mu);
        if !y_next.is_finite() || !z_next.is_finite() {
            return Err(fail(iterations, f64::INFINITY));
        }

        let step = y_next.distance(&y) / y_next.frobenius_norm();
        y = y_next;
        z = z_next;
        if step < SCALING_CUTOFF {
            scaling = false;
        }
        if step <= opts.tol {
            break;
        }
        // Round-off floor: the step has stopped shrinking.
        if !scaling && prev_step < 1e-6 && step >= prev_step {
            break;
        }
        prev_step = step;
    }

    let residual = (&y * &y).distance(a) / a_norm;
    if residual > opts.tol || !residual.is_finite() {
        return Err(fail(iterations, residual));
    }
    Ok(SquareRoot {
        root: y,
        inverse_root: z,
        iterations,
        residual,
    })
}

/// Principal square root `S` with `S² = A` within `tol · ‖A‖_F`.
pub fn sqrtm_principal(a: &DenseMatrix, tol: f64, max_iter: usize) -> Result<DenseMatrix> {
    sqrtm_denman_beavers(a, SqrtmOptions { tol, max_iter }).map(|r| r.root)
}

/// Diagonal Padé coefficients `c_k = (2m−k)! m! / ((2m)! k! (m−k)!)`.
fn pade_coefficients(order: usize) -> Vec<f64> {
    let m = order as f64;
    let mut c = vec![1.0; order + 1];
    for k in 1..=order {
        let kf = k as f64;
        c[k] = c[k - 1] * (m - kf + 1.0) / (kf * (2.0 * m - kf + 1.0));
    }
    c
}

/// Matrix exponential by scaling and squaring with the `[6/6]` Padé
/// approximant, scaled so that `‖X / 2^s‖₁ ≤ 0.5`.
pub fn expm(x: &DenseMatrix) -> Result<DenseMatrix> {
    let n = require_square("expm", x)?;
    let norm = x.norm_one();
    let squarings = if norm > EXPM_THETA {
        (norm / EXPM_THETA).log2().ceil() as i32
    } else {
        0
    };
    let scaled = x.scale(0.5f64.powi(squarings));

    let c = pade_coefficients(EXPM_PADE_ORDER);
    let mut numer = DenseMatrix::identity(n);
    let mut denom = DenseMatrix::identity(n);
    let mut power = DenseMatrix::identity(n);
    for (k, &ck) in c.iter().enumerate().skip(1) {
        power = &power * &scaled;
        let term = power.scale(ck);
        numer += &term;
        if k % 2 == 0 {
            denom += &term;
        } else {
            denom -= &term;
        }
    }
    let mut result = solve_linear(&denom, &numer).map_err(|_| Error::Singular { op: "expm" })?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Principal logarithm of a matrix near the identity by inverse scaling and
/// squaring: take square roots until `‖Y^{1/2^k} − I‖_F < 0.25`, sum the
/// series `log Z = 2 Σ T^{2j+1} / (2j+1)` with `T = (Z + I)⁻¹ (Z − I)`, and
/// multiply by `2^k`.
pub fn logm_near_identity(y: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    let n = require_square("logm", y)?;
    let eye = DenseMatrix::identity(n);
    let mut z = y.clone();
    let mut roots = 0;
    while z.distance(&eye) >= LOGM_SERIES_RADIUS {
        if roots == LOGM_MAX_SQRTS {
            return Err(Error::NotConverged {
                op: "logm",
                iterations: roots,
                residual: z.distance(&eye),
            });
        }
        z = sqrtm_principal(&z, tol, SQRTM_MAX_ITER)?;
        roots += 1;
    }

    let t = solve_linear(&z.add_scaled_identity(1.0), &z.add_scaled_identity(-1.0))
        .map_err(|_| Error::Singular { op: "logm" })?;
    let t2 = &t * &t;
    let mut sum = t.clone();
    let mut power = t;
    for j in 1..200 {
        power = &power * &t2;
        let term = power.scale(1.0 / (2 * j + 1) as f64);
        sum += &term;
        if term.frobenius_norm() <= f64::EPSILON * sum.frobenius_norm() {
            break;
        }
    }
    Ok(sum.scale(2.0 * f64::from(1u32 << roots)))
}

fn structure_for(op: &'static str, a: &DenseMatrix) -> Result<StructureJ> {
    require_square(op, a)?;
    StructureJ::for_dim(a.rows()).map_err(|_| Error::OddDimension { op, dim: a.rows() })
}

/// Nearest skew-Hamiltonian matrix: `½ J((JG)ᵀ − JG)`, the matrix whose `J`
/// product is the skew-symmetric part of `JG`.
pub fn project_skew_hamiltonian(g: &DenseMatrix) -> Result<DenseMatrix> {
    let j = structure_for("project_skew_hamiltonian", g)?;
    let jg = j.left(g);
    Ok(j.left(&(&jg.transpose() - &jg)).scale(0.5))
}

/// Nearest Hamiltonian matrix: `−½ J((JA)ᵀ + JA)`, the matrix whose `J`
/// product is the symmetric part of `JA`.
pub fn project_hamiltonian(a: &DenseMatrix) -> Result<DenseMatrix> {
    let j = structure_for("project_hamiltonian", a)?;
    let ja = j.left(a);
    Ok(j.left(&(&ja.transpose() + &ja)).scale(-0.5))
}

/// `‖(JM)ᵀ + JM‖_F`: zero exactly for skew-Hamiltonian `M`.
pub fn skew_hamiltonian_defect(m: &DenseMatrix) -> Result<f64> {
    let j = structure_for("skew_hamiltonian_defect", m)?;
    let jm = j.left(m);
    Ok((&jm.transpose() + &jm).frobenius_norm())
}

/// `‖(JA)ᵀ − JA‖_F`: zero exactly for Hamiltonian `A`.
pub fn hamiltonian_defect(a: &DenseMatrix) -> Result<f64> {
    let j = structure_for("hamiltonian_defect", a)?;
    let ja = j.left(a);
    Ok((&ja.transpose() - &ja).frobenius_norm())
}

/// `‖SᵀJS − J‖_F`: zero exactly for symplectic `S`.
pub fn symplecticity_defect(s: &DenseMatrix) -> Result<f64> {
    let j = structure_for("symplecticity_defect", s)?;
    let sjs = s.tr_matmul(&j.left(s))?;
    Ok(sjs.distance(&j.to_dense()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamiltonian_4x4() -> DenseMatrix {
        // [[A, B], [C, −Aᵀ]] with B, C symmetric.
        DenseMatrix::from_rows(&[
            &[0.3, -0.1, 0.2, 0.05],
            &[0.4, 0.1, 0.05, -0.3],
            &[0.1, 0.25, -0.3, -0.4],
            &[0.25, -0.2, 0.1, -0.1],
        ])
    }

    #[test]
    fn cayley_examples() {
        assert_eq!(
            cayley(&DenseMatrix::zeros(2, 2)).unwrap(),
            DenseMatrix::identity(2)
        );
        let x = DenseMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let expected = DenseMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(cayley(&x).unwrap().distance(&expected) < 1e-15);
        assert_eq!(
            cayley(&DenseMatrix::from_diag(&[2.0, -2.0])),
            Err(Error::Singular { op: "cayley" })
        );
    }

    #[test]
    fn cayley_inverse_examples() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(cayley_inverse(&i2).unwrap(), DenseMatrix::zeros(2, 2));
        let y = DenseMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let expected = DenseMatrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(cayley_inverse(&y).unwrap().distance(&expected) < 1e-15);
        assert!(matches!(cayley_inverse(&-&i2), Err(Error::Singular { .. })));
    }

    #[test]
    fn hamiltonian_fixture_is_hamiltonian() {
        assert!(hamiltonian_defect(&hamiltonian_4x4()).unwrap() < 1e-16);
    }

    #[test]
    fn cayley_of_hamiltonian_is_symplectic() {
        let s = cayley(&hamiltonian_4x4()).unwrap();
        assert!(symplecticity_defect(&s).unwrap() < 1e-12 * 4.0);
    }

    #[test]
    fn sqrtm_examples() {
        let tol = SQRTM_TOL;
        let i2 = DenseMatrix::identity(2);
        assert!(sqrtm_principal(&i2, tol, 60).unwrap().distance(&i2) < 1e-15);

        let s = sqrtm_principal(&DenseMatrix::from_diag(&[4.0, 9.0]), tol, 60).unwrap();
        assert!(s.distance(&DenseMatrix::from_diag(&[2.0, 3.0])) < 1e-13);

        // Oracle: [[1, 1/2], [0, 1]]² = [[1, 1], [0, 1]].
        let jordan = DenseMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let candidate = DenseMatrix::from_rows(&[&[1.0, 0.5], &[0.0, 1.0]]);
        assert_eq!(&candidate * &candidate, jordan);
        let s = sqrtm_principal(&jordan, tol, 60).unwrap();
        assert!(s.distance(&candidate) < 1e-13);

        assert!(matches!(
            sqrtm_principal(&DenseMatrix::from_diag(&[-1.0, 1.0]), tol, 60),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn sqrtm_iteration_cap_is_reported() {
        let a = DenseMatrix::from_diag(&[1e6, 1e-6]);
        assert!(matches!(
            sqrtm_principal(&a, 1e-13, 1),
            Err(Error::NotConverged { iterations: 1, .. })
        ));
    }

    #[test]
    fn sqrtm_commutes_with_argument() {
        let a = DenseMatrix::from_rows(&[&[2.0, 0.3, 0.1], &[-0.2, 1.5, 0.4], &[0.1, 0.0, 1.2]]);
        let s = sqrtm_principal(&a, SQRTM_TOL, 60).unwrap();
        assert!((&s * &a).distance(&(&a * &s)) < 1e-13 * a.frobenius_norm());
    }

    #[test]
    fn expm_examples() {
        assert_eq!(
            expm(&DenseMatrix::zeros(2, 2)).unwrap(),
            DenseMatrix::identity(2)
        );
        let e = std::f64::consts::E;
        let r = expm(&DenseMatrix::from_diag(&[1.0, -1.0])).unwrap();
        assert!(r.distance(&DenseMatrix::from_diag(&[e, 1.0 / e])) < 1e-13);
        let r = expm(&hamiltonian_4x4().scale(3.0)).unwrap();
        assert!(symplecticity_defect(&r).unwrap() < 1e-11);
    }

    #[test]
    fn logm_examples() {
        let i4 = DenseMatrix::identity(4);
        assert_eq!(
            logm_near_identity(&i4, 1e-13).unwrap(),
            DenseMatrix::zeros(4, 4)
        );
        let y = DenseMatrix::from_diag(&[std::f64::consts::E, 1.0]);
        let l = logm_near_identity(&y, 1e-13).unwrap();
        assert!(l.distance(&DenseMatrix::from_diag(&[1.0, 0.0])) < 1e-14);

        let y = cayley(&hamiltonian_4x4()).unwrap();
        let back = expm(&logm_near_identity(&y, 1e-13).unwrap()).unwrap();
        assert!(back.distance(&y) < 1e-11);
    }

    #[test]
    fn projections_fix_and_annihilate() {
        let i4 = DenseMatrix::identity(4);
        assert_eq!(project_skew_hamiltonian(&i4).unwrap(), i4);
        assert_eq!(project_hamiltonian(&i4).unwrap(), DenseMatrix::zeros(4, 4));
        let h = hamiltonian_4x4();
        assert!(project_hamiltonian(&h).unwrap().distance(&h) < 1e-16);
        assert!(matches!(
            project_hamiltonian(&DenseMatrix::identity(3)),
            Err(Error::OddDimension { .. })
        ));
    }

    #[test]
    fn pade_coefficients_order_six() {
        let c = pade_coefficients(6);
        assert_eq!(c[0], 1.0);
        assert!((c[1] - 0.5).abs() < 1e-16);
        assert!((c[2] - 5.0 / 44.0).abs() < 1e-16);
        assert!((c[6] - 1.0 / 665_280.0).abs() < 1e-20);
    }
}
