//! The symplectic polar-factor retraction and its closed-form inverse.
//!
//! Forward map at a base point `U` with tangent `D`:
//!
//! ```text
//! R_U(D) = (U·f(U⁺D) + (I − UU⁺)D) · G_f
//! ```
//!
//! with `f` the Cayley transform (default) or the matrix exponential. The
//! symplectifier `G_f = (√(−KJ_p))^{−T}` is built from the skew-symmetric
//! `K = ΔᵀJ_nΔ = J_p + DᵀJ_nD − (U⁺D)ᵀJ_p(U⁺D)`, so only `2p × 2p` matrix
//! functions are required.
//!
//! Inverse map, for a second point `Ũ`:
//!
//! ```text
//! R⁻¹_U(Ũ) = U·g(U⁺ŨG_r) + (I − UU⁺)ŨG_r
//! ```
//!
//! with `g = f⁻¹` and the Hamiltonifier `G_r = N^{−T}`, `N = √H`,
//! `H = (U⁺Ũ)ᵀ((U⁺Ũ)ᵀ)⁺`. Neither direction forms a `2n × 2n` matrix: the
//! projected terms are grouped as `U(S − A) + D` and `U(A − S_r) + ŨG_r`.

mod registry;

pub use registry::{registry, ForwardFn, InverseFn, Registry, RetractionPair};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm_estimate, spectral_radius_estimate, DenseMatrix, Lu};
use crate::matfun::{
    cayley, cayley_inverse, expm, logm_near_identity, project_hamiltonian,
    project_skew_hamiltonian, skew_hamiltonian_defect, sqrtm_denman_beavers, SqrtmOptions,
};
use crate::sympstiefel::{SpStPoint, SpStTangent, StructureJ, Tolerances};

/// Default relative tolerance of the norm and radius estimates in
/// [`domain_check`].
pub const DOMAIN_TOL: f64 = 1e-6;

/// Which transform maps the Hamiltonian `U⁺D` to a symplectic factor.
/// Forward and inverse must use the same kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Variant {
    /// `Cay` forward, `Cay⁻¹` inverse.
    #[default]
    Cayley,
    /// `exp` forward, `log` inverse.
    Exponential,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Cayley => "cayley",
            Variant::Exponential => "exp",
        }
    }

    fn forward_map(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        match self {
            Variant::Cayley => cayley(a),
            Variant::Exponential => expm(a),
        }
    }

    fn inverse_map(&self, s: &DenseMatrix, sqrtm: SqrtmOptions) -> Result<DenseMatrix> {
        match self {
            Variant::Cayley => cayley_inverse(s),
            Variant::Exponential => logm_near_identity(s, sqrtm.tol).map_err(out_of_domain),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cayley" => Ok(Variant::Cayley),
            "exp" | "exponential" => Ok(Variant::Exponential),
            other => Err(Error::InvalidDimensions(format!(
                "unknown variant '{other}' (expected cayley or exp)"
            ))),
        }
    }
}

/// Knobs of the forward and inverse evaluation.
#[derive(Debug, Clone, Copy)]
pub struct RetractOptions {
    pub variant: Variant,
    /// Run [`domain_check`] before the forward map and refuse inadmissible
    /// input. Off by default since it roughly doubles the small-matrix cost.
    pub precheck_domain: bool,
    pub sqrtm: SqrtmOptions,
    /// Membership tolerances of the returned point / tangent; `None` uses
    /// [`Tolerances::for_dims`].
    pub tolerances: Option<Tolerances>,
    /// Finish the inverse map with one projection `D ← D − U·(X − Π(X))`,
    /// `X = U⁺D`, `Π` the Hamiltonian projection. The sum
    /// `U(A − S_r) + ŨG_r` cancels two terms of size `‖U‖` and leaves a
    /// non-Hamiltonian part of `U⁺D` at that scale; the step removes it.
    pub refine_tangent: bool,
}

impl Default for RetractOptions {
    fn default() -> Self {
        Self::new(Variant::Cayley)
    }
}

impl RetractOptions {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            precheck_domain: false,
            sqrtm: SqrtmOptions::default(),
            tolerances: None,
            refine_tangent: true,
        }
    }

    fn tolerances(&self, n: usize, p: usize) -> Tolerances {
        self.tolerances
            .unwrap_or_else(|| Tolerances::for_dims(n, p))
    }
}

fn out_of_domain(e: Error) -> Error {
    match e {
        Error::NotConverged {
            op,
            iterations,
            residual,
        } => Error::OutOfDomain {
            reason: format!("{op} failed after {iterations} iterations (residual {residual:e})"),
        },
        Error::Membership {
            what,
            residual,
            tol,
        } => Error::OutOfDomain {
            reason: format!("result {what} residual {residual:e} exceeds {tol:e}"),
        },
        other => other,
    }
}

/// The forward factor `G_f` with its intermediates.
#[derive(Debug, Clone)]
pub struct Symplectifier {
    /// `G_f = M^{−T}`, projected onto the skew-Hamiltonian matrices.
    pub g_f: DenseMatrix,
    /// `K = ΔᵀJ_nΔ`, skew-symmetric.
    pub k: DenseMatrix,
    /// `M = √(−KJ_p)`.
    pub m: DenseMatrix,
    /// `‖(J_pG_f)ᵀ + J_pG_f‖_F` after projection.
    pub structure_defect: f64,
    /// Frobenius size of the projection step.
    pub projection_correction: f64,
    /// `‖M² + KJ_p‖_F / ‖KJ_p‖_F` from the square-root iteration.
    pub sqrtm_residual: f64,
}

impl Symplectifier {
    /// `‖G_fᵀ K G_f − J_p‖_F`.
    pub fn defining_residual(&self) -> f64 {
        let jp = StructureJ::for_dim(self.k.rows()).expect("even by construction");
        let gkg = &self.g_f.tr_matmul(&self.k).expect("square") * &self.g_f;
        gkg.distance(&jp.to_dense())
    }
}

/// The inverse factor `G_r` with its intermediates.
#[derive(Debug, Clone)]
pub struct Hamiltonifier {
    /// `G_r = N^{−T}`, projected onto the skew-Hamiltonian matrices.
    pub g_r: DenseMatrix,
    /// `H = Wᵀ(Wᵀ)⁺` for `W = U⁺Ũ`.
    pub h: DenseMatrix,
    /// `N = √H`.
    pub n_factor: DenseMatrix,
    pub structure_defect: f64,
    pub projection_correction: f64,
    pub sqrtm_residual: f64,
}

/// Result of [`retract_forward`].
#[derive(Debug, Clone)]
pub struct RetractOutcome {
    pub point: SpStPoint,
    pub symplectifier: Symplectifier,
    /// `Δ = U·f(U⁺D) + (I − UU⁺)D`, so that `point = Δ · G_f`.
    pub pre_factor: DenseMatrix,
}

/// `K = J_p + DᵀJ_nD − (U⁺D)ᵀJ_p(U⁺D)`, returned skew-symmetrized.
pub fn compute_k(u: &SpStPoint, d: &SpStTangent) -> Result<DenseMatrix> {
    check_pair(u, d)?;
    let a = u.plus_times(d.matrix())?;
    k_from_parts(u.n(), d.matrix(), &a)
}

fn k_from_parts(n: usize, d: &DenseMatrix, a: &DenseMatrix) -> Result<DenseMatrix> {
    let jn = StructureJ::new(n);
    let jp = StructureJ::for_dim(a.rows())?;
    let dt_jn_d = d.tr_matmul(&jn.left(d))?;
    let at_jp_a = a.tr_matmul(&jp.left(a))?;
    let mut k = &dt_jn_d - &at_jp_a;
    k += &jp.to_dense();
    Ok(k.skew_part())
}

fn check_pair(u: &SpStPoint, d: &SpStTangent) -> Result<()> {
    if (u.n(), u.p()) != (d.n(), d.p()) {
        return Err(Error::Shape {
            op: "retraction",
            expected: (2 * u.n(), 2 * u.p()),
            got: (2 * d.n(), 2 * d.p()),
        });
    }
    Ok(())
}

fn inverse_transpose(m: &DenseMatrix) -> Result<DenseMatrix> {
    let inv = Lu::factor(m)
        .map_err(|_| Error::OutOfDomain {
            reason: "square-root factor is singular".into(),
        })?
        .inverse();
    Ok(inv.transpose())
}

fn skew_hamiltonian_factor(raw: DenseMatrix) -> Result<(DenseMatrix, f64, f64)> {
    let projected = project_skew_hamiltonian(&raw)?;
    let correction = projected.distance(&raw);
    let defect = skew_hamiltonian_defect(&projected)?;
    Ok((projected, defect, correction))
}

/// `G_f = (√(−KJ_p))^{−T}`, then projected onto the skew-Hamiltonian matrices.
pub fn symplectifier_from_k(k: &DenseMatrix) -> Result<Symplectifier> {
    symplectifier_from_k_with(k, SqrtmOptions::default())
}

pub fn symplectifier_from_k_with(k: &DenseMatrix, sqrtm: SqrtmOptions) -> Result<Symplectifier> {
    let jp = StructureJ::for_dim(k.rows())?;
    let target = -&jp.right(k);
    let root = sqrtm_denman_beavers(&target, sqrtm).map_err(out_of_domain)?;
    let (g_f, structure_defect, projection_correction) =
        skew_hamiltonian_factor(inverse_transpose(&root.root)?)?;
    Ok(Symplectifier {
        g_f,
        k: k.clone(),
        m: root.root,
        structure_defect,
        projection_correction,
        sqrtm_residual: root.residual,
    })
}

/// The transposed form `G_f = (√((−KJ_p)ᵀ))⁻¹`, as a cross-check of
/// [`symplectifier_from_k`]. Principal square roots commute with
/// transposition, so both forms agree up to round-off.
pub fn symplectifier_from_k_transposed(k: &DenseMatrix) -> Result<Symplectifier> {
    let jp = StructureJ::for_dim(k.rows())?;
    // (−KJ_p)ᵀ = −J_pK for skew K.
    let target = -&jp.left(k);
    let root = sqrtm_denman_beavers(&target, SqrtmOptions::default()).map_err(out_of_domain)?;
    let inv = Lu::factor(&root.root)
        .map_err(|_| Error::OutOfDomain {
            reason: "square-root factor is singular".into(),
        })?
        .inverse();
    let (g_f, structure_defect, projection_correction) = skew_hamiltonian_factor(inv)?;
    Ok(Symplectifier {
        g_f,
        k: k.clone(),
        m: root.root.transpose(),
        structure_defect,
        projection_correction,
        sqrtm_residual: root.residual,
    })
}

/// Forward retraction with default options for the given variant.
pub fn retract_forward(u: &SpStPoint, d: &SpStTangent, variant: Variant) -> Result<RetractOutcome> {
    retract_forward_with(u, d, &RetractOptions::new(variant))
}

/// Forward retraction `R_U(D)`.
///
/// Evaluation order: `A = U⁺D`, `S = f(A)`, `Δ = U(S − A) + D`, `K`, `G_f`,
/// `R = Δ·G_f`. The result is certified as a point; a failed square root or a
/// failed membership check surfaces as [`Error::OutOfDomain`], so an invalid
/// point is never returned.
pub fn retract_forward_with(
    u: &SpStPoint,
    d: &SpStTangent,
    opts: &RetractOptions,
) -> Result<RetractOutcome> {
    check_pair(u, d)?;
    if opts.precheck_domain {
        let check = domain_check(u, d, DOMAIN_TOL)?;
        if !check.admissible {
            return Err(Error::OutOfDomain {
                reason: format!(
                    "spectral radius estimate {:.6e} of the domain matrix is not below 1",
                    check.e_matrix_radius
                ),
            });
        }
    }
    let (um, dm) = (u.matrix(), d.matrix());
    let a = u.plus_times(dm)?;
    let s = opts.variant.forward_map(&a)?;
    let mut pre_factor = um.matmul(&(&s - &a))?;
    pre_factor += dm;

    let k = k_from_parts(u.n(), dm, &a)?;
    let symplectifier = symplectifier_from_k_with(&k, opts.sqrtm)?;
    let result = pre_factor.matmul(&symplectifier.g_f)?;
    let tol = opts.tolerances(u.n(), u.p()).point;
    let point = SpStPoint::with_tol(result, tol).map_err(out_of_domain)?;
    Ok(RetractOutcome {
        point,
        symplectifier,
        pre_factor,
    })
}

/// Hamiltonifier of `W = U⁺Ũ`: `H = Wᵀ(Wᵀ)⁺ = −WᵀJ_pWJ_p`, `N = √H`,
/// `G_r = N^{−T}` projected skew-Hamiltonian. `W·G_r` is then symplectic.
pub fn hamiltonifier(w: &DenseMatrix) -> Result<Hamiltonifier> {
    hamiltonifier_with(w, SqrtmOptions::default())
}

pub fn hamiltonifier_with(w: &DenseMatrix, sqrtm: SqrtmOptions) -> Result<Hamiltonifier> {
    if !w.is_square() {
        return Err(Error::NotSquare {
            op: "hamiltonifier",
            rows: w.rows(),
            cols: w.cols(),
        });
    }
    let jp = StructureJ::for_dim(w.rows())?;
    if Lu::factor(w).is_err() {
        return Err(Error::Singular {
            op: "hamiltonifier",
        });
    }
    let h = -&w.tr_matmul(&jp.right(&jp.left(w)))?;
    let root = sqrtm_denman_beavers(&h, sqrtm).map_err(out_of_domain)?;
    let (g_r, structure_defect, projection_correction) =
        skew_hamiltonian_factor(inverse_transpose(&root.root)?)?;
    Ok(Hamiltonifier {
        g_r,
        h,
        n_factor: root.root,
        structure_defect,
        projection_correction,
        sqrtm_residual: root.residual,
    })
}

/// Inverse retraction with default options for the given variant.
pub fn retract_inverse(
    u: &SpStPoint,
    utilde: &SpStPoint,
    variant: Variant,
) -> Result<(SpStTangent, Hamiltonifier)> {
    retract_inverse_with(u, utilde, &RetractOptions::new(variant))
}

/// Inverse retraction `R⁻¹_U(Ũ)`.
///
/// Evaluation order: `W = U⁺Ũ`, `G_r`, `S_r = W·G_r`, `A = g(S_r)` projected
/// Hamiltonian, `D = U(A − S_r) + Ũ·G_r`, then the optional tangent
/// refinement of [`RetractOptions::refine_tangent`]. The result is certified
/// tangent at `U`.
pub fn retract_inverse_with(
    u: &SpStPoint,
    utilde: &SpStPoint,
    opts: &RetractOptions,
) -> Result<(SpStTangent, Hamiltonifier)> {
    if (u.n(), u.p()) != (utilde.n(), utilde.p()) {
        return Err(Error::Shape {
            op: "retract_inverse",
            expected: u.matrix().shape(),
            got: utilde.matrix().shape(),
        });
    }
    let w = u.plus_times(utilde.matrix())?;
    let ham = hamiltonifier_with(&w, opts.sqrtm)?;
    let s_r = w.matmul(&ham.g_r)?;
    let a = project_hamiltonian(&opts.variant.inverse_map(&s_r, opts.sqrtm)?)?;
    let mut d = u.matrix().matmul(&(&a - &s_r))?;
    d += &utilde.matrix().matmul(&ham.g_r)?;
    if opts.refine_tangent {
        let x = u.plus_times(&d)?;
        let defect = &x - &project_hamiltonian(&x)?;
        d -= &u.matrix().matmul(&defect)?;
    }
    let tol = opts.tolerances(u.n(), u.p()).tangent;
    let tangent = SpStTangent::with_tol(u, d, tol).map_err(out_of_domain)?;
    Ok((tangent, ham))
}

/// Admissibility of `(U, D)` for the forward map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainCheck {
    /// Spectral radius estimate of `ℰ = DᵀJ_n(I − UU⁺)DJ_p`.
    pub e_matrix_radius: f64,
    /// `‖D‖₂ · ‖U‖₂`.
    pub sufficient_bound: f64,
    /// `e_matrix_radius < 1`.
    pub admissible: bool,
}

/// Estimates the spectral radius of `ℰ = DᵀJ_n(I − UU⁺)DJ_p`; the forward
/// square root is well defined when it is below one.
///
/// `ℰ` is assembled at `2p × 2p` as `(DᵀJ_nD − AᵀJ_pA)J_p` with `A = U⁺D`,
/// using `DᵀJ_nU = AᵀJ_p`. The reported radius is the Gelfand estimate capped
/// by `(‖D‖₂‖U‖₂)²`; both bound the true radius from above, and the cap makes
/// `sufficient_bound < 1 ⇒ admissible` hold for the estimates too.
pub fn domain_check(u: &SpStPoint, d: &SpStTangent, tol: f64) -> Result<DomainCheck> {
    check_pair(u, d)?;
    let dm = d.matrix();
    let a = u.plus_times(dm)?;
    let jn = StructureJ::new(u.n());
    let jp = StructureJ::new(u.p());
    let inner = &dm.tr_matmul(&jn.left(dm))? - &a.tr_matmul(&jp.left(&a))?;
    let e = jp.right(&inner);

    let gelfand = spectral_radius_estimate(&e, tol)?;
    let sufficient_bound =
        spectral_norm_estimate(dm, tol) * spectral_norm_estimate(u.matrix(), tol);
    let e_matrix_radius = gelfand.min(sufficient_bound * sufficient_bound);
    Ok(DomainCheck {
        e_matrix_radius,
        sufficient_bound,
        admissible: e_matrix_radius < 1.0,
    })
}

/// The four accuracy checks of a forward/inverse round trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundtripDiagnostics {
    /// `‖R_U(D)⁺R_U(D) − I‖_F`
    pub point: f64,
    /// Hamiltonian defect of `U⁺R⁻¹_U(Ũ)` with `Ũ = R_U(D)`.
    pub tangent: f64,
    /// `‖D − R⁻¹_U(R_U(D))‖_F`
    pub roundtrip_tangent: f64,
    /// `‖Ũ − R_U(R⁻¹_U(Ũ))‖_F`
    pub roundtrip_point: f64,
}

impl RoundtripDiagnostics {
    pub fn max(&self) -> f64 {
        self.point
            .max(self.tangent)
            .max(self.roundtrip_tangent)
            .max(self.roundtrip_point)
    }
}

/// Runs `Ũ = R_U(D)`, `D' = R⁻¹_U(Ũ)`, `R_U(D')` and reports the four
/// residuals.
pub fn roundtrip_diagnostics(
    u: &SpStPoint,
    d: &SpStTangent,
    variant: Variant,
) -> Result<RoundtripDiagnostics> {
    let opts = RetractOptions::new(variant);
    let utilde = retract_forward_with(u, d, &opts)?.point;
    let (recovered, _) = retract_inverse_with(u, &utilde, &opts)?;
    diagnostics_from(u, d, &utilde, &recovered, &opts)
}

/// Diagnostics from an already computed forward image `utilde` and inverse
/// image `recovered`; evaluates one more forward map.
pub fn diagnostics_from(
    u: &SpStPoint,
    d: &SpStTangent,
    utilde: &SpStPoint,
    recovered: &SpStTangent,
    opts: &RetractOptions,
) -> Result<RoundtripDiagnostics> {
    let again = retract_forward_with(u, recovered, opts)?.point;
    Ok(RoundtripDiagnostics {
        point: utilde.residual(),
        tangent: recovered.residual(),
        roundtrip_tangent: d.matrix().distance(recovered.matrix()),
        roundtrip_point: utilde.matrix().distance(again.matrix()),
    })
}
