//! The symplectic Stiefel manifold `SpSt(2n, 2p)`: structure matrices,
//! symplectic inverse, membership residuals and random data.
//!
//! Points and tangents are certified on construction. A [`SpStPoint`] holds
//! `U` together with `‖U⁺U − I_{2p}‖_F`; a [`SpStTangent`] holds `D` together
//! with the Hamiltonian defect of `U⁺D`. The tolerances come from
//! [`Tolerances`] and scale with `√(np)` on large instances.

mod generators;
mod structure;

pub use generators::{
    orthosymplectic_tangent, random_gaussian, random_hamiltonian, random_orthosymplectic_point,
    random_point_cayley, random_tangent_at, tangent_from_parts, HamiltonianBlocks,
};
pub use structure::{j_mul, Side, StructureJ};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Default membership tolerance for points and tangents.
pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// `n · p` up to which tolerances are not scaled (n = 100, p = 20).
const TOL_REFERENCE_SIZE: f64 = 2000.0;

/// Membership tolerances for point and tangent certification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub point: f64,
    pub tangent: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            point: MEMBERSHIP_TOL,
            tangent: MEMBERSHIP_TOL,
        }
    }
}

impl Tolerances {
    /// Defaults, scaled by `√(np / 2000)` once `np` exceeds the reference size.
    pub fn for_dims(n: usize, p: usize) -> Self {
        let s = ((n * p) as f64 / TOL_REFERENCE_SIZE).sqrt().max(1.0);
        Self {
            point: MEMBERSHIP_TOL * s,
            tangent: MEMBERSHIP_TOL * s,
        }
    }
}

/// Half dimensions `(n, p)` of a `2n × 2p` matrix.
pub fn half_dims(a: &DenseMatrix) -> Result<(usize, usize)> {
    let (rows, cols) = a.shape();
    if rows % 2 != 0 || cols % 2 != 0 || rows == 0 || cols == 0 {
        return Err(Error::InvalidDimensions(format!(
            "expected a nonempty 2n x 2p matrix, got {rows}x{cols}"
        )));
    }
    if cols > rows {
        return Err(Error::InvalidDimensions(format!(
            "p > n: {rows}x{cols} cannot lie on SpSt(2n, 2p)"
        )));
    }
    Ok((rows / 2, cols / 2))
}

fn check_shape(op: &'static str, a: &DenseMatrix, n: usize, p: usize) -> Result<()> {
    if a.shape() != (2 * n, 2 * p) {
        return Err(Error::Shape {
            op,
            expected: (2 * n, 2 * p),
            got: a.shape(),
        });
    }
    Ok(())
}

/// `A⁺ = J_pᵀ Aᵀ J_n` for a `2n × 2p` matrix `A`.
pub fn symplectic_inverse(a: &DenseMatrix, n: usize, p: usize) -> Result<DenseMatrix> {
    check_shape("symplectic_inverse", a, n, p)?;
    let at = a.transpose();
    let jn = StructureJ::new(n);
    let jp = StructureJ::new(p);
    jn.apply(&jp.apply(&at, Side::Left, true)?, Side::Right, false)
}

/// `U⁺B = J_pᵀ Uᵀ (J_n B)` without forming `U⁺`.
pub fn symplectic_inverse_times(u: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let (n, p) = half_dims(u)?;
    if b.rows() != 2 * n {
        return Err(Error::Shape {
            op: "symplectic_inverse_times",
            expected: (2 * n, b.cols()),
            got: b.shape(),
        });
    }
    let jn_b = StructureJ::new(n).left(b);
    StructureJ::new(p).apply(&u.tr_matmul(&jn_b)?, Side::Left, true)
}

/// `ω₀(x, y) = xᵀ J_n y`.
pub fn symplectic_form(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || !x.len().is_multiple_of(2) {
        return Err(Error::InvalidDimensions(format!(
            "symplectic_form needs equal even lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() / 2;
    // J y = (y₂, −y₁)
    let (x1, x2) = x.split_at(n);
    let (y1, y2) = y.split_at(n);
    let a: f64 = x1.iter().zip(y2).map(|(a, b)| a * b).sum();
    let b: f64 = x2.iter().zip(y1).map(|(a, b)| a * b).sum();
    Ok(a - b)
}

/// `E_{n,p} = [[I_{n,p}, 0], [0, I_{n,p}]]`.
pub fn standard_base_matrix(n: usize, p: usize) -> DenseMatrix {
    DenseMatrix::from_fn(2 * n, 2 * p, |i, j| {
        let hit = (j < p && i == j) || (j >= p && i == n + (j - p));
        if hit {
            1.0
        } else {
            0.0
        }
    })
}

/// Column indices of `E_{n,p}` inside a `2n`-column matrix.
pub(crate) fn base_columns(n: usize, p: usize) -> Vec<usize> {
    (0..p).chain(n..n + p).collect()
}

/// `‖U⁺U − I_{2p}‖_F`.
pub fn point_residual(u: &DenseMatrix) -> Result<f64> {
    let (_, p) = half_dims(u)?;
    Ok(symplectic_inverse_times(u, u)?.distance(&DenseMatrix::identity(2 * p)))
}

/// `‖(J_pU⁺D)ᵀ − J_pU⁺D‖_F`, the Hamiltonian defect of `U⁺D`.
///
/// Uses `J_pU⁺D = UᵀJ_nD`; the `J` actions are exact sign swaps so this is
/// the same floating-point quantity.
pub fn tangent_residual(u: &DenseMatrix, d: &DenseMatrix) -> Result<f64> {
    let (n, p) = half_dims(u)?;
    check_shape("tangent_residual", d, n, p)?;
    let x = u.tr_matmul(&StructureJ::new(n).left(d))?;
    Ok((&x.transpose() - &x).frobenius_norm())
}

/// A `2n × 2p` matrix certified to satisfy `‖U⁺U − I‖_F ≤ tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpStPoint {
    u: DenseMatrix,
    n: usize,
    p: usize,
    residual: f64,
}

impl SpStPoint {
    /// Certifies `u` with [`Tolerances::for_dims`].
    pub fn new(u: DenseMatrix) -> Result<Self> {
        let (n, p) = half_dims(&u)?;
        Self::with_tol(u, Tolerances::for_dims(n, p).point)
    }

    pub fn with_tol(u: DenseMatrix, tol: f64) -> Result<Self> {
        let (n, p) = half_dims(&u)?;
        let residual = point_residual(&u)?;
        if residual.is_nan() || residual > tol {
            return Err(Error::Membership {
                what: "point",
                residual,
                tol,
            });
        }
        Ok(Self { u, n, p, residual })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.u
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.u
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `‖U⁺U − I‖_F` measured at construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `U⁺B`.
    pub fn plus_times(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        symplectic_inverse_times(&self.u, b)
    }

    /// `U⁺`, materialized.
    pub fn symplectic_inverse(&self) -> DenseMatrix {
        symplectic_inverse(&self.u, self.n, self.p).expect("shape fixed at construction")
    }
}

/// `E_{n,p}` as a point.
pub fn standard_base(n: usize, p: usize) -> Result<SpStPoint> {
    if p > n || p == 0 {
        return Err(Error::InvalidDimensions(format!(
            "standard_base needs 0 < p <= n, got n = {n}, p = {p}"
        )));
    }
    SpStPoint::with_tol(standard_base_matrix(n, p), 0.0)
}

/// A `2n × 2p` matrix `D` certified tangent at a base point: `U⁺D` is
/// Hamiltonian to within the tangent tolerance.
///
/// The base point is not stored; callers pass it alongside the tangent.
#[derive(Debug, Clone, PartialEq)]
pub struct SpStTangent {
    d: DenseMatrix,
    n: usize,
    p: usize,
    residual: f64,
}

impl SpStTangent {
    pub fn new(base: &SpStPoint, d: DenseMatrix) -> Result<Self> {
        Self::with_tol(base, d, Tolerances::for_dims(base.n, base.p).tangent)
    }

    pub fn with_tol(base: &SpStPoint, d: DenseMatrix, tol: f64) -> Result<Self> {
        let residual = tangent_residual(&base.u, &d)?;
        if residual.is_nan() || residual > tol {
            return Err(Error::Membership {
                what: "tangent",
                residual,
                tol,
            });
        }
        Ok(Self {
            d,
            n: base.n,
            p: base.p,
            residual,
        })
    }

    pub fn zero(base: &SpStPoint) -> Self {
        Self {
            d: DenseMatrix::zeros(2 * base.n, 2 * base.p),
            n: base.n,
            p: base.p,
            residual: 0.0,
        }
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.d
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Hamiltonian defect of `U⁺D` measured at construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `t · D`, still tangent at the same base.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            d: self.d.scale(t),
            n: self.n,
            p: self.p,
            residual: self.residual * t.abs(),
        }
    }
}
