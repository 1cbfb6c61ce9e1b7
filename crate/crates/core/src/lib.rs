//! Nef cone volumes and Néron–Severi discriminants of abelian surfaces.
//!
//! The Néron–Severi group of an abelian surface is a lattice of signature
//! (1, ρ−1) with 1 ≤ ρ ≤ 4, determined up to isometry by the endomorphism
//! structure of the surface.  This crate builds that lattice for every case
//! of the classification (simple surfaces with integer, real, complex or
//! quaternionic multiplication; products of elliptic curves, isogenous or
//! not, with or without CM), computes the lattice discriminant both from the
//! structure constants and in closed form, and measures the volume of the
//! nef cone truncated by a fixed ample class — exactly, via the closed
//! formulas, and by Monte Carlo integration as an independent check.
//!
//! The crates are organised bottom-up:
//!
//! * [`exact_linalg`] — integer/rational matrices: exact determinants,
//!   inertia, Hermite normal forms, kernels, and the Lorentz frame used to
//!   parametrise the positive cone.
//! * [`quadfield`] — arithmetic in quadratic fields Q(√d) on the ω-basis.
//! * [`quaternion`] — rational quaternion algebras (α,β), reduced traces and
//!   norms, the pairing matrices behind the Picard-rank-3 lattices, and the
//!   2×2 matrix representation over Q(√α).
//! * [`homlattice`] — Hom lattices between elliptic curves with CM by
//!   (possibly different) orders in the same imaginary quadratic field,
//!   degrees of isogenies and the rank-4 product lattices.
//! * [`surfaces`] — the surface taxonomy: Gram matrix, canonical ample
//!   class, discriminant and closed-form volume per case.
//! * [`conevol`] — cone volumes: the exact positive-cone formula, Monte
//!   Carlo estimates, and the nef/positive/big sandwich.
//! * [`report`] — run configurations, JSON/text reports and the consistency
//!   checks the CLI evaluates.

pub mod conevol;
pub mod error;
pub mod exact_linalg;
pub mod homlattice;
pub mod quadfield;
pub mod quaternion;
pub mod report;
pub mod surfaces;

pub use conevol::{
    mc_volume, positive_cone_volume, v_rho, McEstimate, TruncatedCone, VolumeBounds,
};
pub use error::Error;
pub use exact_linalg::{Inertia, IntSymMatrix, LorentzFrame};
pub use homlattice::{CmLattice, HomLattice, NoCmPair};
pub use quadfield::{FieldDesc, OmegaKind, QuadElem};
pub use quaternion::{QuatAlg, QuatElem};
pub use report::{RunConfig, SurfaceInput, SweepConfig, SweepReport, VolumeReport};
pub use surfaces::{AmpleClass, SurfaceModel, SurfaceSpec};

pub type Result<T> = std::result::Result<T, Error>;
