//! Symplectic polar-factor retraction on the symplectic Stiefel manifold
//! `SpSt(2n, 2p) = { U ∈ R^{2n×2p} : UᵀJ_nU = J_p }` and its closed-form
//! inverse.
//!
//! The crate is layered bottom-up:
//!
//! - [`linalg`]: dense row-major matrices, LU, Householder QR (real and complex
//!   pairs), spectral norm and spectral radius estimates.
//! - [`matfun`]: Cayley transform, principal square root, exponential,
//!   logarithm and the Hamiltonian / skew-Hamiltonian projections.
//! - [`sympstiefel`]: the implicit structure matrix `J`, symplectic inverse,
//!   membership residuals and random data generators.
//! - [`retraction`]: the forward retraction, its inverse, domain checks and
//!   round-trip diagnostics, plus a registry of named retractions.
//!
//! ```
//! use rand::SeedableRng;
//! use sympolar::retraction::{retract_forward, retract_inverse, Variant};
//! use sympolar::sympstiefel::{random_point_cayley, random_tangent_at};
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let u = random_point_cayley(10, 3, &mut rng).unwrap();
//! let d = random_tangent_at(&u, &mut rng, true).unwrap();
//!
//! let out = retract_forward(&u, &d, Variant::Cayley).unwrap();
//! let (back, _) = retract_inverse(&u, &out.point, Variant::Cayley).unwrap();
//! assert!(back.matrix().distance(d.matrix()) < 1e-10);
//! ```

pub mod error;
pub mod linalg;
pub mod matfun;
pub mod retraction;
pub mod sympstiefel;

pub use error::{Error, Result};
pub use linalg::DenseMatrix;
