use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// The Poisson matrix `J_n = [[0, I_n], [−I_n, 0]]`, applied implicitly.
///
/// Never stored densely: acting on stacked halves it is the signed swap
/// `(x, y) ↦ (y, −x)`, so `Jᵀ = −J = J⁻¹` holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureJ {
    half_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `J · A`
    Left,
    /// `A · J`
    Right,
}

impl StructureJ {
    pub fn new(half_dim: usize) -> Self {
        Self { half_dim }
    }

    /// The structure matrix matching an even dimension `2n`.
    pub fn for_dim(dim: usize) -> Result<Self> {
        if !dim.is_multiple_of(2) {
            return Err(Error::OddDimension {
                op: "structure_j",
                dim,
            });
        }
        Ok(Self::new(dim / 2))
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.half_dim
    }

    /// Dense copy, for oracles and small diagnostics only.
    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.half_dim;
        DenseMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n && j == i + n {
                1.0
            } else if i >= n && j + n == i {
                -1.0
            } else {
                0.0
            }
        })
    }

    /// `J·A`, `Jᵀ·A`, `A·J` or `A·Jᵀ` as a signed block swap.
    pub fn apply(&self, a: &DenseMatrix, side: Side, transpose: bool) -> Result<DenseMatrix> {
        let n = self.half_dim;
        let (rows, cols) = a.shape();
        // Jᵀ = −J, so the transposed action only flips the sign.
        let sign = if transpose { -1.0 } else { 1.0 };
        match side {
            Side::Left => {
                if rows != 2 * n {
                    return Err(Error::Shape {
                        op: "j_mul(left)",
                        expected: (2 * n, cols),
                        got: a.shape(),
                    });
                }
                let mut out = DenseMatrix::zeros(rows, cols);
                // J [x; y] = [y; −x]
                for i in 0..n {
                    for (o, v) in out.row_mut(i).iter_mut().zip(a.row(i + n)) {
                        *o = sign * v;
                    }
                    for (o, v) in out.row_mut(i + n).iter_mut().zip(a.row(i)) {
                        *o = -sign * v;
                    }
                }
                Ok(out)
            }
            Side::Right => {
                if cols != 2 * n {
                    return Err(Error::Shape {
                        op: "j_mul(right)",
                        expected: (rows, 2 * n),
                        got: a.shape(),
                    });
                }
                let mut out = DenseMatrix::zeros(rows, cols);
                // [L R] J = [−R L]
                for i in 0..rows {
                    let src = a.row(i);
                    let dst = out.row_mut(i);
                    for j in 0..n {
                        dst[j] = -sign * src[j + n];
                        dst[j + n] = sign * src[j];
                    }
                }
                Ok(out)
            }
        }
    }

    /// `J · A`; panics on a shape mismatch.
    pub(crate) fn left(&self, a: &DenseMatrix) -> DenseMatrix {
        self.apply(a, Side::Left, false)
            .unwrap_or_else(|e| panic!("{e}"))
    }

    /// `A · J`; panics on a shape mismatch.
    pub(crate) fn right(&self, a: &DenseMatrix) -> DenseMatrix {
        self.apply(a, Side::Right, false)
            .unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Applies `J` (or `Jᵀ`) from the given side.
pub fn j_mul(j: StructureJ, a: &DenseMatrix, side: Side, transpose: bool) -> Result<DenseMatrix> {
    j.apply(a, side, transpose)
}
