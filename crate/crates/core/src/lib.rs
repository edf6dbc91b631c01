//! Geometric invariants of complex ball quotients `Γ\𝔹ⁿ` computed from matrix
//! generators of `Γ ⊂ PU(n,1)`, and the chain of effective positivity bounds
//! driven by a certified systole lower bound.
//!
//! The crate is organised bottom-up:
//!
//! | module | contents |
//! |--------|----------|
//! | [`hermitian`] | complex matrices, the form `J₀` of signature `(n,1)`, membership, projective normal form, eigenvalues |
//! | [`siegel`] | Siegel-domain coordinates, Bergman distance, horoballs, numerical displacement oracle |
//! | [`isometry`] | elliptic / parabolic / hyperbolic classification, translation length, Heisenberg group, trace identities |
//! | [`lattice`] | generator sets, word-ball enumeration, census statistics |
//! | [`bounds`] | closed-form volume, degree, depth, Seshadri and sparsity bounds |
//! | [`cli`] | certificate-emitting front end used by the `cusp-certify` binary |
//!
//! Everything is `f64`. Every infimum over `Γ` estimated from a finite word ball
//! is one-sided and is labelled as such wherever it is reported.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod hermitian;
pub mod isometry;
pub mod lattice;
pub mod optimize;
pub mod siegel;
pub mod verify;

pub use error::{Error, Result};
pub use hermitian::{ComplexScalar, GroupElement, HermitianForm, ProjectivePoint, SquareMatrix};
pub use isometry::{IsometryClass, IsometryKind};
pub use siegel::{Cusp, Horoball, SiegelPoint};
