use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sympolar::sympstiefel::{
    j_mul, orthosymplectic_tangent, point_residual, random_gaussian, random_hamiltonian,
    random_orthosymplectic_point, random_point_cayley, random_tangent_at, symplectic_form,
    symplectic_inverse, tangent_residual, Side, SpStPoint, StructureJ,
};
use sympolar::DenseMatrix;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn orthosymplectic_generator_sweep() {
    for seed in 0..100 {
        let mut r = rng(seed);
        let (u, m) = random_orthosymplectic_point(50, 10, &mut r).unwrap();
        assert!(u.residual() < 1e-12, "seed {seed}: {}", u.residual());
        let utu = u.matrix().tr_matmul(u.matrix()).unwrap();
        assert!(utu.distance(&DenseMatrix::identity(20)) < 1e-12);
        let omega = random_hamiltonian(50, &mut r);
        let d = orthosymplectic_tangent(&u, &m, &omega, true).unwrap();
        assert!(d.residual() < 1e-12, "seed {seed}: {}", d.residual());
    }
}

#[test]
fn cayley_generator_sweep() {
    for seed in 0..100 {
        let mut r = rng(1000 + seed);
        let u = random_point_cayley(50, 10, &mut r).unwrap();
        assert!(u.residual() < 1e-12, "seed {seed}: {}", u.residual());
        let d = random_tangent_at(&u, &mut r, true).unwrap();
        assert!(d.residual() < 1e-12, "seed {seed}: {}", d.residual());
        assert!((d.matrix().frobenius_norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn generators_are_seed_deterministic() {
    let a = random_point_cayley(8, 3, &mut rng(5)).unwrap();
    let b = random_point_cayley(8, 3, &mut rng(5)).unwrap();
    assert_eq!(a.matrix(), b.matrix());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn j_mul_matches_dense(k in 1usize..11, cols in 1usize..8, seed in any::<u64>()) {
        let j = StructureJ::new(k);
        let jd = j.to_dense();
        let a = random_gaussian(2 * k, cols, &mut rng(seed));
        prop_assert_eq!(j_mul(j, &a, Side::Left, false).unwrap(), &jd * &a);
        prop_assert_eq!(j_mul(j, &a, Side::Left, true).unwrap(), &jd.transpose() * &a);
        let at = a.transpose();
        prop_assert_eq!(j_mul(j, &at, Side::Right, false).unwrap(), &at * &jd);
        prop_assert_eq!(j_mul(j, &at, Side::Right, true).unwrap(), &at * &jd.transpose());
    }

    #[test]
    fn symplectic_inverse_on_group(n in 1usize..8, seed in any::<u64>()) {
        let s = random_point_cayley(n, n, &mut rng(seed)).unwrap().into_matrix();
        let splus = symplectic_inverse(&s, n, n).unwrap();
        let eye = DenseMatrix::identity(2 * n);
        prop_assert!((&splus * &s).distance(&eye) < 1e-12);
        prop_assert!((&s * &splus).distance(&eye) < 1e-12);
    }

    #[test]
    fn projector_is_idempotent(n in 2usize..12, pfrac in 0.0f64..1.0, seed in any::<u64>()) {
        let p = 1 + ((n - 1) as f64 * pfrac) as usize;
        let u = random_point_cayley(n, p, &mut rng(seed)).unwrap();
        let pr = &u.matrix().clone() * &u.symplectic_inverse();
        prop_assert!((&pr * &pr).distance(&pr) < 1e-12 * pr.frobenius_norm().max(1.0));
    }

    #[test]
    fn points_preserve_the_form(n in 2usize..10, seed in any::<u64>()) {
        let u = random_point_cayley(n, 1, &mut rng(seed)).unwrap();
        let (c0, c1) = (u.matrix().column(0), u.matrix().column(1));
        // Columns i and p+i pair to one under the form.
        prop_assert!((symplectic_form(&c0, &c1).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!(point_residual(u.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn tangents_are_tangent(n in 2usize..12, p in 1usize..4, seed in any::<u64>()) {
        let p = p.min(n);
        let mut r = rng(seed);
        let u = random_point_cayley(n, p, &mut r).unwrap();
        let d = random_tangent_at(&u, &mut r, false).unwrap();
        prop_assert!(tangent_residual(u.matrix(), d.matrix()).unwrap() < 1e-11);
        prop_assert!(tangent_residual(u.matrix(), &d.matrix().scale(3.0)).unwrap() < 3e-11);
    }

    #[test]
    fn scaled_points_rejected(n in 2usize..8, seed in any::<u64>()) {
        let u = random_point_cayley(n, 1, &mut rng(seed)).unwrap();
        prop_assert!(SpStPoint::new(u.matrix().scale(1.01)).is_err());
    }
}
