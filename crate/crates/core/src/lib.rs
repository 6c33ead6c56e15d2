//! Coset complexes of finite and finitely presented groups.
//!
//! The crate builds the coset simplicial complex, the coset nerve and the
//! order complex of the coset poset for families of subgroups, computes their
//! reduced integer homology exactly, evaluates the probabilistic zeta
//! function, predicts the homotopy type of the normal coset poset as a wedge
//! of spheres, and runs coset enumeration on finitely presented groups.
//!
//! Numeric code is generic over [`scalar::Ring`]; the aliases below fix the
//! default unbounded instantiation.

pub mod caps;
pub mod complex;
pub mod error;
pub mod families;
pub mod fp;
pub mod group;
pub mod homology;
pub mod linalg;
pub mod scalar;
pub mod spec;
pub mod wedge;
pub mod zeta;

pub use caps::Caps;
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupHom, Subgroup};
pub use spec::{build_group, group, GroupSpec};

/// Unbounded integers.
pub type Integer = num_bigint::BigInt;
/// Exact rationals over [`Integer`].
pub type Rational = num_rational::Ratio<Integer>;
/// Homology over [`Integer`].
pub type HomologyProfile = homology::HomologyProfile<Integer>;
/// Dirichlet series with [`Integer`] coefficients.
pub type DirichletSeries = zeta::DirichletSeries<Integer>;
/// Möbius values in [`Integer`].
pub type MoebiusTable = zeta::MoebiusTable<Integer>;
