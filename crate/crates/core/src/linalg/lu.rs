use super::matrix::{axpy, DenseMatrix};
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, `P A = L U`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    /// Factors a square matrix. A pivot at or below `n · ε · max|A|` is
    /// treated as an exact zero.
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                op: "lu",
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let threshold = n as f64 * f64::EPSILON * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;

        for k in 0..n {
            let (piv, piv_abs) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if piv_abs <= threshold || piv_abs == 0.0 {
                return Err(Error::Singular { op: "lu" });
            }
            if piv != k {
                swap_rows(&mut lu, piv, k);
                perm.swap(piv, k);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            let pivot_row: Vec<f64> = lu.row(k)[k + 1..].to_vec();
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l != 0.0 {
                    axpy(-l, &pivot_row, &mut lu.row_mut(i)[k + 1..]);
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim();
        if b.rows() != n {
            return Err(Error::Shape {
                op: "lu_solve",
                expected: (n, b.cols()),
                got: b.shape(),
            });
        }
        let m = b.cols();
        let mut x = DenseMatrix::zeros(n, m);
        for (i, &p) in self.perm.iter().enumerate() {
            x.row_mut(i).copy_from_slice(b.row(p));
        }
        // Forward substitution with unit lower triangle.
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)];
                if l != 0.0 {
                    let (head, tail) = x_rows_split(&mut x, k, i);
                    axpy(-l, head, tail);
                }
            }
        }
        // Back substitution.
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[(i, k)];
                if u != 0.0 {
                    let (src, dst) = x_rows_split(&mut x, k, i);
                    axpy(-u, src, dst);
                }
            }
            let inv = 1.0 / self.lu[(i, i)];
            for v in x.row_mut(i) {
                *v *= inv;
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> DenseMatrix {
        self.solve(&DenseMatrix::identity(self.dim()))
            .expect("identity is conformal")
    }

    /// `ln |det A|`.
    pub fn log_abs_det(&self) -> f64 {
        self.lu.diagonal().iter().map(|d| d.abs().ln()).sum()
    }

    pub fn det_sign(&self) -> f64 {
        self.lu
            .diagonal()
            .iter()
            .fold(self.sign, |s, d| s * d.signum())
    }
}

fn swap_rows(m: &mut DenseMatrix, a: usize, b: usize) {
    let cols = m.cols();
    for j in 0..cols {
        let tmp = m[(a, j)];
        m[(a, j)] = m[(b, j)];
        m[(b, j)] = tmp;
    }
}

/// Borrows row `src` immutably and row `dst` mutably (`src != dst`).
fn x_rows_split(x: &mut DenseMatrix, src: usize, dst: usize) -> (&[f64], &mut [f64]) {
    debug_assert_ne!(src, dst);
    let cols = x.cols();
    let data = x.data_mut();
    if src < dst {
        let (lo, hi) = data.split_at_mut(dst * cols);
        (&lo[src * cols..(src + 1) * cols], &mut hi[..cols])
    } else {
        let (lo, hi) = data.split_at_mut(src * cols);
        (&hi[..cols], &mut lo[dst * cols..(dst + 1) * cols])
    }
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn solve_linear(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    Lu::factor(a)?.solve(b)
}

pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    Ok(Lu::factor(a)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_solve_returns_rhs() {
        let b = DenseMatrix::from_rows(&[&[1.0, -2.0, 3.5], &[0.25, 4.0, -1.0]]);
        assert_eq!(solve_linear(&DenseMatrix::identity(2), &b).unwrap(), b);
    }

    #[test]
    fn diagonal_inverse() {
        let a = DenseMatrix::from_diag(&[2.0, 4.0]);
        let x = solve_linear(&a, &DenseMatrix::identity(2)).unwrap();
        assert_eq!(x, DenseMatrix::from_diag(&[0.5, 0.25]));
    }

    #[test]
    fn zero_matrix_is_singular() {
        let a = DenseMatrix::zeros(2, 2);
        assert_eq!(
            solve_linear(&a, &DenseMatrix::identity(2)),
            Err(Error::Singular { op: "lu" })
        );
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let lu = Lu::factor(&a).unwrap();
        assert_eq!(lu.inverse(), a);
        assert_eq!(lu.det_sign(), -1.0);
        assert!(lu.log_abs_det().abs() < 1e-15);
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(
            Lu::factor(&DenseMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }
}
