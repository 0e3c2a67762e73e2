use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sympolar::linalg::{qr_complex_pair, solve_linear, spectral_norm_estimate, ComplexMatrixPair};
use sympolar::matfun::{
    cayley, cayley_inverse, expm, logm_near_identity, skew_hamiltonian_defect,
    sqrtm_denman_beavers, SqrtmOptions,
};
use sympolar::retraction::{
    compute_k, domain_check, hamiltonifier, retract_forward, retract_inverse,
    roundtrip_diagnostics, symplectifier_from_k, symplectifier_from_k_transposed, Variant,
    DOMAIN_TOL,
};
use sympolar::sympstiefel::{
    j_mul, orthosymplectic_tangent, point_residual, random_gaussian, random_hamiltonian,
    random_orthosymplectic_point, random_point_cayley, random_tangent_at, symplectic_inverse, Side,
    SpStPoint, SpStTangent, StructureJ,
};
use sympolar::DenseMatrix;

use crate::error::{BenchError, BenchResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    Below(f64),
    Within(f64, f64),
    /// The value is `1.0` when the property holds.
    Holds,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub name: String,
    /// `NaN` when the computation itself failed.
    pub value: f64,
    pub criterion: Criterion,
    pub error: Option<String>,
}

impl CheckEntry {
    pub fn passed(&self) -> bool {
        match self.criterion {
            Criterion::Below(b) => self.value < b,
            Criterion::Within(lo, hi) => (lo..=hi).contains(&self.value),
            Criterion::Holds => self.value == 1.0,
        }
    }
}

impl fmt::Display for CheckEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        match self.criterion {
            Criterion::Below(b) => {
                write!(f, "{status} {:<44} {:.3e} < {b:.1e}", self.name, self.value)?
            }
            Criterion::Within(lo, hi) => write!(
                f,
                "{status} {:<44} {:.4} in [{lo}, {hi}]",
                self.name, self.value
            )?,
            Criterion::Holds => write!(f, "{status} {:<44} {}", self.name, self.value == 1.0)?,
        }
        if let Some(e) = &self.error {
            write!(f, " ({e})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(CheckEntry::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed())
    }

    fn push(
        &mut self,
        name: impl Into<String>,
        criterion: Criterion,
        value: sympolar::Result<f64>,
    ) {
        let (value, error) = match value {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        self.entries.push(CheckEntry {
            name: name.into(),
            value,
            criterion,
            error,
        });
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {failed} failed", self.entries.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub n: usize,
    pub p: usize,
    pub seed: u64,
    /// Add one to an entry of the sampled point before its membership check.
    pub sabotage: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            n: 50,
            p: 10,
            seed: 42,
            sabotage: false,
        }
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn eye(m: usize) -> DenseMatrix {
    DenseMatrix::identity(m)
}

/// `e(t) = ‖R_U(tD) − U − tD‖_F`.
fn first_order_error(u: &SpStPoint, d: &SpStTangent, t: f64) -> sympolar::Result<f64> {
    let r = retract_forward(u, &d.scaled(t), Variant::Cayley)?.point;
    Ok((&r.into_matrix() - u.matrix()).distance(&d.matrix().scale(t)))
}

fn generator_checks(report: &mut CheckReport, opts: &CheckOptions) -> sympolar::Result<()> {
    let (n, p) = (opts.n, opts.p);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (u, m) = random_orthosymplectic_point(n, p, &mut rng)?;
    report.push(
        "generator/qr point residual",
        Criterion::Below(1e-12),
        Ok(u.residual()),
    );
    let utu = u.matrix().tr_matmul(u.matrix())?;
    report.push(
        "generator/qr orthonormality",
        Criterion::Below(1e-12),
        Ok(utu.distance(&eye(2 * p))),
    );
    let omega = random_hamiltonian(n, &mut rng);
    let d = orthosymplectic_tangent(&u, &m, &omega, true)?;
    report.push(
        "generator/qr tangent residual",
        Criterion::Below(1e-12),
        Ok(d.residual()),
    );

    let u = random_point_cayley(n, p, &mut rng)?;
    let mut um = u.matrix().clone();
    if opts.sabotage {
        um[(0, 0)] += 1.0;
    }
    report.push(
        "generator/cayley point residual",
        Criterion::Below(1e-12),
        point_residual(&um),
    );
    let d = random_tangent_at(&u, &mut rng, true)?;
    report.push(
        "generator/cayley tangent residual",
        Criterion::Below(1e-12),
        Ok(d.residual()),
    );
    Ok(())
}

fn kernel_checks(report: &mut CheckReport, opts: &CheckOptions) {
    let (n, p) = (opts.n, opts.p);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);

    let pair = ComplexMatrixPair::new(
        random_gaussian(n, n, &mut rng),
        random_gaussian(n, n, &mut rng),
    );
    report.push(
        "linalg/complex qr unitarity",
        Criterion::Below(1e-12),
        pair.and_then(|m| qr_complex_pair(&m))
            .map(|q| q.unitarity_residual()),
    );

    let a =
        random_gaussian(2 * p, 2 * p, &mut rng).add_scaled_identity(2.0 * (2.0 * p as f64).sqrt());
    let b = random_gaussian(2 * p, 3, &mut rng);
    report.push(
        "linalg/solve relative residual",
        Criterion::Below(1e-12),
        solve_linear(&a, &b)
            .map(|x| (&a * &x).distance(&b) / (a.frobenius_norm() * x.frobenius_norm())),
    );

    let g = random_gaussian(2 * n, 2 * p, &mut rng);
    report.push(
        "linalg/spectral norm over frobenius",
        Criterion::Below(1.0 + 1e-14),
        Ok(spectral_norm_estimate(&g, 1e-10) / g.frobenius_norm()),
    );

    let j = StructureJ::new(n);
    report.push(
        "structure/j_mul against dense J",
        Criterion::Below(1e-14),
        j_mul(j, &g, Side::Left, false).map(|x| x.distance(&(&j.to_dense() * &g))),
    );

    report.push(
        "structure/symplectic inverse on group",
        Criterion::Below(1e-12),
        random_point_cayley(p, p, &mut rng).and_then(|s| {
            symplectic_inverse(s.matrix(), p, p).map(|sp| (&sp * s.matrix()).distance(&eye(2 * p)))
        }),
    );

    let h = random_hamiltonian(p, &mut rng).normalized().assemble();
    report.push(
        "matfun/cayley round trip",
        Criterion::Below(1e-12),
        cayley(&h)
            .and_then(|s| cayley_inverse(&s))
            .map(|b| b.distance(&h)),
    );
    report.push(
        "matfun/exp-log round trip",
        Criterion::Below(1e-11),
        expm(&h.scale(0.5))
            .and_then(|s| logm_near_identity(&s, 1e-15))
            .map(|b| b.distance(&h.scale(0.5))),
    );
}

fn retraction_checks(report: &mut CheckReport, opts: &CheckOptions) -> sympolar::Result<()> {
    let (n, p) = (opts.n, opts.p);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
    let u = random_point_cayley(n, p, &mut rng)?;
    let d = random_tangent_at(&u, &mut rng, true)?;

    let k = compute_k(&u, &d.scaled(0.3))?;
    let target = -&(&k * &StructureJ::new(p).to_dense());
    report.push(
        "matfun/sqrtm relative residual",
        Criterion::Below(1e-12),
        sqrtm_denman_beavers(&target, SqrtmOptions::default()).map(|s| s.residual),
    );

    for variant in [Variant::Cayley, Variant::Exponential] {
        let v = variant.as_str();
        report.push(
            format!("retraction/{v} forward feasibility"),
            Criterion::Below(1e-10),
            retract_forward(&u, &d, variant).map(|o| o.point.residual()),
        );
        match roundtrip_diagnostics(&u, &d, variant) {
            Ok(diag) => {
                report.push(
                    format!("retraction/{v} inverse tangency"),
                    Criterion::Below(1e-10),
                    Ok(diag.tangent),
                );
                report.push(
                    format!("retraction/{v} round trip tangent"),
                    Criterion::Below(1e-9),
                    Ok(diag.roundtrip_tangent),
                );
                report.push(
                    format!("retraction/{v} round trip point"),
                    Criterion::Below(1e-9),
                    Ok(diag.roundtrip_point),
                );
            }
            Err(e) => report.push(
                format!("retraction/{v} round trip"),
                Criterion::Below(1e-9),
                Err(e),
            ),
        }
    }

    report.push(
        "retraction/zero tangent returns base",
        Criterion::Below(1e-13),
        retract_forward(&u, &SpStTangent::zero(&u), Variant::Cayley)
            .map(|o| o.point.matrix().distance(u.matrix())),
    );
    for t in [1e-2, 1e-3] {
        let ratio = first_order_error(&u, &d, t / 2.0)
            .and_then(|half| first_order_error(&u, &d, t).map(|full| half / full));
        report.push(
            format!("retraction/first-order ratio t={t:e}"),
            Criterion::Within(0.15, 0.35),
            ratio,
        );
    }

    let fwd = retract_forward(&u, &d, Variant::Cayley)?;
    let gf = &fwd.symplectifier;
    report.push(
        "retraction/symplectifier GᵀKG = J",
        Criterion::Below(1e-10),
        Ok(gf.defining_residual()),
    );
    report.push(
        "retraction/G_f skew-Hamiltonian defect",
        Criterion::Below(1e-11 * p as f64),
        skew_hamiltonian_defect(&gf.g_f),
    );
    let ham = u
        .plus_times(fwd.point.matrix())
        .and_then(|w| hamiltonifier(&w));
    report.push(
        "retraction/G_r skew-Hamiltonian defect",
        Criterion::Below(1e-11 * p as f64),
        ham.clone().and_then(|h| skew_hamiltonian_defect(&h.g_r)),
    );
    report.push(
        "retraction/G_r G_f = I",
        Criterion::Below(1e-9),
        ham.map(|h| (&h.g_r * &gf.g_f).distance(&eye(2 * p))),
    );
    let k = compute_k(&u, &d)?;
    report.push(
        "retraction/transposed G_f form",
        Criterion::Below(1e-11),
        symplectifier_from_k(&k)
            .and_then(|a| symplectifier_from_k_transposed(&k).map(|b| a.g_f.distance(&b.g_f))),
    );
    report.push(
        "retraction/inverse at base is zero",
        Criterion::Below(1e-12),
        retract_inverse(&u, &u, Variant::Cayley).map(|(t, _)| t.matrix().frobenius_norm()),
    );

    let gap = |t: f64| -> sympolar::Result<f64> {
        let c = retract_forward(&u, &d.scaled(t), Variant::Cayley)?.point;
        let e = retract_forward(&u, &d.scaled(t), Variant::Exponential)?.point;
        Ok(c.matrix().distance(e.matrix()))
    };
    report.push(
        "retraction/variant agreement ratio",
        Criterion::Within(0.125 - 0.05, 0.125 + 0.05),
        gap(0.05).and_then(|h| gap(0.1).map(|f| h / f)),
    );

    let base = domain_check(&u, &d, DOMAIN_TOL)?;
    for s in [2.0, 4.0] {
        report.push(
            format!("retraction/domain radius scaling s={s}"),
            Criterion::Below(DOMAIN_TOL),
            domain_check(&u, &d.scaled(s), DOMAIN_TOL).map(|c| {
                (c.e_matrix_radius - s * s * base.e_matrix_radius).abs()
                    / (s * s * base.e_matrix_radius).max(1.0)
            }),
        );
    }
    let big = match retract_forward(&u, &d.scaled(1e3), Variant::Cayley) {
        Ok(out) => out.point.residual() < 1e-8,
        Err(e) => matches!(
            e,
            sympolar::Error::OutOfDomain { .. } | sympolar::Error::Singular { .. }
        ),
    };
    report.push(
        "retraction/large tangent never invalid",
        Criterion::Holds,
        Ok(flag(big)),
    );
    Ok(())
}

/// Evaluates the invariant suite at one `(n, p, seed)`.
pub fn run_check_with(opts: &CheckOptions) -> BenchResult<CheckReport> {
    if opts.p == 0 || opts.p > opts.n {
        return Err(BenchError::Config(format!(
            "p = {} must satisfy 1 <= p <= n = {}",
            opts.p, opts.n
        )));
    }
    let mut report = CheckReport::default();
    if let Err(e) = generator_checks(&mut report, opts) {
        report.push("generator/sampling", Criterion::Holds, Err(e));
    }
    kernel_checks(&mut report, opts);
    if let Err(e) = retraction_checks(&mut report, opts) {
        report.push("retraction/evaluation", Criterion::Holds, Err(e));
    }
    Ok(report)
}

pub fn run_check(n: usize, p: usize, seed: u64) -> BenchResult<CheckReport> {
    run_check_with(&CheckOptions {
        n,
        p,
        seed,
        sabotage: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_size_passes() {
        let report = run_check_with(&CheckOptions::default()).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.entries.len() > 25);
    }

    #[test]
    fn sabotage_fails_membership() {
        let report = run_check_with(&CheckOptions {
            sabotage: true,
            ..CheckOptions::default()
        })
        .unwrap();
        let failed: Vec<&str> = report.failures().map(|e| e.name.as_str()).collect();
        assert_eq!(failed, vec!["generator/cayley point residual"]);
    }

    #[test]
    fn entry_display() {
        let e = CheckEntry {
            name: "x".into(),
            value: f64::NAN,
            criterion: Criterion::Below(1.0),
            error: Some("boom".into()),
        };
        assert!(!e.passed());
        assert!(e.to_string().starts_with("FAIL x"));
        assert!(e.to_string().ends_with("(boom)"));
    }
}
