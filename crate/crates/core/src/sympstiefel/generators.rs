//! Seeded random data on `SpSt(2n, 2p)` and its tangent spaces.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{base_columns, symplectic_inverse_times, SpStPoint, SpStTangent, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{qr_complex_pair, solve_linear, ComplexMatrixPair, DenseMatrix};

/// Standard-normal `rows × cols` matrix, filled row by row.
pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// A Hamiltonian matrix in block form `[[A, B], [C, −Aᵀ]]` with `B`, `C`
/// symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianBlocks {
    a: DenseMatrix,
    b: DenseMatrix,
    c: DenseMatrix,
}

impl HamiltonianBlocks {
    /// Symmetrizes `b` and `c`.
    pub fn new(a: DenseMatrix, b: DenseMatrix, c: DenseMatrix) -> Result<Self> {
        let n = a.rows();
        for (name, m) in [("a", &a), ("b", &b), ("c", &c)] {
            if m.shape() != (n, n) {
                return Err(Error::InvalidDimensions(format!(
                    "Hamiltonian block {name} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            b: b.symmetric_part(),
            c: c.symmetric_part(),
            a,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            a: DenseMatrix::zeros(n, n),
            b: DenseMatrix::zeros(n, n),
            c: DenseMatrix::zeros(n, n),
        }
    }

    pub fn half_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }

    pub fn c(&self) -> &DenseMatrix {
        &self.c
    }

    pub fn assemble(&self) -> DenseMatrix {
        let n = self.half_dim();
        DenseMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => self.a[(i, j)],
            (true, false) => self.b[(i, j - n)],
            (false, true) => self.c[(i - n, j)],
            (false, false) => -self.a[(j - n, i - n)],
        })
    }

    /// Frobenius norm of the assembled matrix.
    pub fn frobenius_norm(&self) -> f64 {
        let a = self.a.frobenius_norm();
        let b = self.b.frobenius_norm();
        let c = self.c.frobenius_norm();
        (2.0 * a * a + b * b + c * c).sqrt()
    }

    /// Rescaled to unit Frobenius norm; the zero matrix is returned unchanged.
    pub fn normalized(&self) -> Self {
        let nrm = self.frobenius_norm();
        if nrm == 0.0 {
            return self.clone();
        }
        let s = 1.0 / nrm;
        Self {
            a: self.a.scale(s),
            b: self.b.scale(s),
            c: self.c.scale(s),
        }
    }
}

/// Hamiltonian matrix with standard-normal blocks (B and C symmetrized).
pub fn random_hamiltonian<R: Rng + ?Sized>(half_dim: usize, rng: &mut R) -> HamiltonianBlocks {
    let a = random_gaussian(half_dim, half_dim, rng);
    let b = random_gaussian(half_dim, half_dim, rng);
    let c = random_gaussian(half_dim, half_dim, rng);
    HamiltonianBlocks::new(a, b, c).expect("square blocks")
}

fn check_np(n: usize, p: usize) -> Result<()> {
    if p == 0 || p > n {
        return Err(Error::InvalidDimensions(format!(
            "need 0 < p <= n, got n = {n}, p = {p}"
        )));
    }
    Ok(())
}

/// Ortho-symplectic point `U = M E_{n,p}` from the unitary factor
/// `Q = X + iY` of a random complex matrix, with `M = [[X, Y], [−Y, X]]`.
///
/// Returns `U` and the full `2n × 2n` matrix `M`; `U` satisfies both
/// `U⁺U = I` and `UᵀU = I`.
pub fn random_orthosymplectic_point<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    rng: &mut R,
) -> Result<(SpStPoint, DenseMatrix)> {
    check_np(n, p)?;
    let re = random_gaussian(n, n, rng);
    let im = random_gaussian(n, n, rng);
    let q = qr_complex_pair(&ComplexMatrixPair::new(re, im)?)?;
    let (x, y) = (q.re(), q.im());
    let m = DenseMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => x[(i, j)],
        (true, false) => y[(i, j - n)],
        (false, true) => -y[(i - n, j)],
        (false, false) => x[(i - n, j - n)],
    });
    let u = m.select_columns(&base_columns(n, p));
    Ok((SpStPoint::new(u)?, m))
}

/// Tangent `D = M Ω E_{n,p}` at `U = M E_{n,p}` for a Hamiltonian `Ω`,
/// optionally rescaled to `‖D‖_F = 1`.
pub fn orthosymplectic_tangent(
    base: &SpStPoint,
    m: &DenseMatrix,
    omega: &HamiltonianBlocks,
    normalize: bool,
) -> Result<SpStTangent> {
    let (n, p) = (base.n(), base.p());
    if m.shape() != (2 * n, 2 * n) || omega.half_dim() != n {
        return Err(Error::InvalidDimensions(format!(
            "orthosymplectic_tangent: M is {}x{}, Omega half-dim {}, base n = {n}",
            m.rows(),
            m.cols(),
            omega.half_dim()
        )));
    }
    let omega_e = omega.assemble().select_columns(&base_columns(n, p));
    let mut d = m.matmul(&omega_e)?;
    if normalize {
        d = normalized(d);
    }
    SpStTangent::new(base, d)
}

/// `U = Cay(Ω) E_{n,p}` for a random Hamiltonian `Ω` with `‖Ω‖_F = 1`,
/// computed as the solve `(I − Ω/2) U = (I + Ω/2) E`.
pub fn random_point_cayley<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<SpStPoint> {
    check_np(n, p)?;
    let omega = random_hamiltonian(n, rng).normalized();
    point_from_hamiltonian(&omega, p)
}

pub(crate) fn point_from_hamiltonian(omega: &HamiltonianBlocks, p: usize) -> Result<SpStPoint> {
    let n = omega.half_dim();
    let cols = base_columns(n, p);
    let om = omega.assemble();
    let minus = om.scale(-0.5).add_scaled_identity(1.0);
    let plus_e = om.scale(0.5).add_scaled_identity(1.0).select_columns(&cols);
    let u = solve_linear(&minus, &plus_e).map_err(|_| Error::Singular { op: "cayley" })?;
    SpStPoint::new(u)
}

/// `D = U H + (I − UU⁺) W`. Since `U⁺(I − UU⁺) = 0`, `U⁺D = H` and `D` is
/// tangent whenever `H` is Hamiltonian.
pub fn tangent_from_parts(
    base: &SpStPoint,
    h: &DenseMatrix,
    w: &DenseMatrix,
) -> Result<DenseMatrix> {
    let u = base.matrix();
    let (n, p) = (base.n(), base.p());
    if h.shape() != (2 * p, 2 * p) || w.shape() != (2 * n, 2 * p) {
        return Err(Error::InvalidDimensions(format!(
            "tangent_from_parts: H is {}x{}, W is {}x{}",
            h.rows(),
            h.cols(),
            w.rows(),
            w.cols()
        )));
    }
    let uw = symplectic_inverse_times(u, w)?;
    // U(H − U⁺W) + W
    Ok(&u.matmul(&(h - &uw))? + w)
}

/// Random tangent at an arbitrary point: `H` a random Hamiltonian `2p × 2p`,
/// `W` Gaussian `2n × 2p`, combined by [`tangent_from_parts`]. With
/// `normalize` the result has unit Frobenius norm.
pub fn random_tangent_at<R: Rng + ?Sized>(
    base: &SpStPoint,
    rng: &mut R,
    normalize: bool,
) -> Result<SpStTangent> {
    let h = random_hamiltonian(base.p(), rng).assemble();
    let w = random_gaussian(2 * base.n(), 2 * base.p(), rng);
    let mut d = tangent_from_parts(base, &h, &w)?;
    if normalize {
        d = normalized(d);
    }
    let tol = Tolerances::for_dims(base.n(), base.p()).tangent;
    SpStTangent::with_tol(base, d, tol)
}

fn normalized(d: DenseMatrix) -> DenseMatrix {
    let nrm = d.frobenius_norm();
    if nrm == 0.0 {
        d
    } else {
        d.scale(1.0 / nrm)
    }
}
