use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sympolar::linalg::{
    inverse, qr_complex_pair, qr_real, solve_linear, spectral_norm_estimate,
    spectral_radius_estimate, ComplexMatrixPair,
};
use sympolar::sympstiefel::random_gaussian;
use sympolar::DenseMatrix;

fn gaussian(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    random_gaussian(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Largest singular value by one-sided Jacobi rotations.
#[allow(clippy::needless_range_loop)]
fn jacobi_sigma_max(a: &DenseMatrix) -> f64 {
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: f64 = cols[i].iter().map(|x| x * x).sum();
                let beta: f64 = cols[j].iter().map(|x| x * x).sum();
                let gamma: f64 = (0..m).map(|k| cols[i][k] * cols[j][k]).sum();
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..m {
                    let (x, y) = (cols[i][k], cols[j][k]);
                    cols[i][k] = c * x - s * y;
                    cols[j][k] = s * x + c * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    cols.iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

#[test]
fn jacobi_oracle_on_known_matrix() {
    // Singular values of [[3, 0], [4, 5]] are √45 and √5.
    let a = DenseMatrix::from_rows(&[&[3.0, 0.0], &[4.0, 5.0]]);
    assert!((jacobi_sigma_max(&a) - 45f64.sqrt()).abs() < 1e-14);
}

#[test]
fn spectral_norm_matches_jacobi() {
    for seed in 0..10 {
        let a = gaussian(12, 7, seed);
        let est = spectral_norm_estimate(&a, 1e-13);
        let exact = jacobi_sigma_max(&a);
        assert!(est <= exact * (1.0 + 1e-12), "seed {seed}");
        assert!(est >= exact * (1.0 - 1e-6), "seed {seed}: {est} vs {exact}");
    }
}

#[test]
fn spectral_radius_of_similar_triangular() {
    // A = P T P⁻¹ with T upper triangular has the diagonal of T as spectrum.
    let cases: [&[f64]; 4] = [
        &[0.3],
        &[-2.0, 0.5],
        &[1.5, -1.5, 0.2],
        &[0.9, -0.1, 0.4, -0.7],
    ];
    for (seed, diag) in cases.iter().enumerate() {
        let m = diag.len();
        let p = gaussian(m, m, seed as u64).add_scaled_identity(3.0);
        let noise = gaussian(m, m, 50 + seed as u64);
        let t = DenseMatrix::from_fn(m, m, |i, j| {
            if i == j {
                diag[i]
            } else if j > i {
                noise[(i, j)]
            } else {
                0.0
            }
        });
        let a = &(&p * &t) * &inverse(&p).unwrap();
        let exact = diag.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let est = spectral_radius_estimate(&a, 1e-10).unwrap();
        // Equal-modulus eigenvalues make the squaring limit converge slowly.
        assert!((est - exact).abs() < 5e-3 * exact, "{diag:?}: {est}");
    }
}

#[test]
fn spectral_radius_rotation_pair() {
    // Complex pair 0.6 ± 0.8i scaled by 1.2.
    let a = DenseMatrix::from_rows(&[&[0.72, -0.96], &[0.96, 0.72]]);
    let est = spectral_radius_estimate(&a, 1e-12).unwrap();
    // For a normal matrix ‖A^m‖_F = √2·ρ^m, so the capped iterate exceeds ρ
    // by about ρ·ln√2/2¹².
    let bias = 1.2 * 2f64.sqrt().ln() / 4096.0;
    assert!(est >= 1.2 - 1e-12);
    assert!((est - 1.2 - bias).abs() < 1e-6, "{est}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn real_qr_factors(rows in 1usize..12, extra in 0usize..6, seed in any::<u64>()) {
        let cols = rows.saturating_sub(extra).max(1);
        let a = gaussian(rows, cols, seed);
        let (q, r) = qr_real(&a).unwrap();
        let qtq = q.tr_matmul(&q).unwrap();
        prop_assert!(qtq.distance(&DenseMatrix::identity(cols)) < 1e-12);
        prop_assert!((&q * &r).distance(&a) < 1e-12 * a.frobenius_norm().max(1.0));
        for i in 0..cols {
            prop_assert!(r[(i, i)] >= 0.0);
            for j in 0..i {
                prop_assert_eq!(r[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn complex_qr_is_unitary(n in 1usize..10, seed in any::<u64>()) {
        let m = ComplexMatrixPair::new(gaussian(n, n, seed), gaussian(n, n, seed ^ 0xabc)).unwrap();
        let q = qr_complex_pair(&m).unwrap();
        prop_assert!(q.unitarity_residual() < 1e-12);
    }

    #[test]
    fn solve_residual_small(n in 1usize..15, k in 1usize..4, seed in any::<u64>()) {
        let a = gaussian(n, n, seed).add_scaled_identity(2.0 * (n as f64).sqrt());
        let b = gaussian(n, k, seed.wrapping_add(1));
        let x = solve_linear(&a, &b).unwrap();
        let res = (&a * &x).distance(&b);
        prop_assert!(res < 1e-12 * a.frobenius_norm() * x.frobenius_norm().max(1.0));
    }

    #[test]
    fn spectral_norm_below_frobenius(rows in 1usize..10, cols in 1usize..10, seed in any::<u64>()) {
        let a = gaussian(rows, cols, seed);
        let est = spectral_norm_estimate(&a, 1e-10);
        prop_assert!(est <= a.frobenius_norm() * (1.0 + 1e-14));
        prop_assert!(est >= a.frobenius_norm() / (rows.min(cols) as f64).sqrt() * (1.0 - 1e-6));
    }

    #[test]
    fn spectral_radius_at_most_norm(n in 1usize..8, seed in any::<u64>()) {
        let a = gaussian(n, n, seed);
        let rho = spectral_radius_estimate(&a, 1e-8).unwrap();
        prop_assert!(rho <= a.frobenius_norm() * (1.0 + 1e-10));
        prop_assert!(rho >= 0.0);
    }

    #[test]
    fn transposed_products(r in 1usize..6, k in 1usize..6, c in 1usize..6, seed in any::<u64>()) {
        let a = gaussian(k, r, seed);
        let b = gaussian(k, c, seed ^ 1);
        prop_assert!(a.tr_matmul(&b).unwrap().distance(&(&a.transpose() * &b)) < 1e-13);
        let bt = b.transpose();
        let at = a.transpose();
        prop_assert!(at.matmul_tr(&bt).unwrap().distance(&(&at * &b)) < 1e-13);
    }
}
