//! The taxonomy of Néron–Severi lattices of abelian surfaces.
//!
//! Simple surfaces: endomorphisms by Z (ρ=1), a real quadratic order
//! (ρ=2), an order in a quartic CM field (ρ=2, governed by its real
//! quadratic subfield), or an order in an indefinite quaternion algebra
//! (ρ=3).  Products of elliptic curves: non-isogenous (ρ=2), isogenous
//! without CM (ρ=3), isogenous with CM (ρ=4).
//!
//! Each case yields a Gram matrix, a canonical ample class, and closed
//! forms for the discriminant and the truncated-cone volume.  The closed
//! volume formulas here are the literal per-case expressions; the generic
//! route via the Lorentz frame lives in [`crate::conevol`] so the two can
//! be compared as independent computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use std::f64::consts::PI;

use crate::error::Error;
use crate::exact_linalg::IntSymMatrix;
use crate::homlattice::{ns_gram_product_cm, CmLattice};
use crate::quadfield::{FieldDesc, OmegaKind};
use crate::quaternion::{intersection_matrix_q, s_delta_det, QuatElem};
use crate::Result;

/// Endomorphism data determining NS(X) up to isometry.
// specs are built a handful of times per run; boxing the quaternion
// variant would complicate every construction site for no measurable win
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceSpec {
    /// Simple, End = Z.
    IntegerMult,
    /// Simple, real multiplication by the order of conductor f in Q(√d), d > 0.
    RealMult { d: i64, f: u32 },
    /// Simple, CM by a quartic field whose real quadratic subfield is Q(√d),
    /// order of conductor f.  Same lattice as the real multiplication case.
    ComplexMult { d: i64, f: u32 },
    /// Simple, quaternionic multiplication; NS is spanned by 1, a, b in the
    /// trace/norm module of the algebra.
    QuaternionMult { a: QuatElem, b: QuatElem },
    /// E₁ × E₂ with Hom(E₁, E₂) = 0.
    ProductNonIsogenous,
    /// E₁ × E₂ isogenous without CM; k is the minimal isogeny degree.
    ProductIsogenousNoCm { min_degree: u64 },
    /// E₁ × E₂ with CM by orders of conductors f₁, f₂ in Q(√d), d < 0.
    ProductIsogenousCm { d: i64, f1: u32, f2: u32 },
}

impl SurfaceSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            SurfaceSpec::IntegerMult => "simple_integer_mult",
            SurfaceSpec::RealMult { .. } => "simple_real_mult",
            SurfaceSpec::ComplexMult { .. } => "simple_complex_mult",
            SurfaceSpec::QuaternionMult { .. } => "simple_quaternion_mult",
            SurfaceSpec::ProductNonIsogenous => "product_non_isogenous",
            SurfaceSpec::ProductIsogenousNoCm { .. } => "product_isogenous_no_cm",
            SurfaceSpec::ProductIsogenousCm { .. } => "product_isogenous_cm",
        }
    }
}

/// NS(X) made concrete: Gram matrix, canonical ample class, discriminant.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    spec: SurfaceSpec,
    gram: IntSymMatrix,
    canonical_ample: Vec<i64>,
    discriminant: BigInt,
}

impl SurfaceModel {
    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn rho(&self) -> usize {
        self.gram.dim()
    }

    pub fn gram(&self) -> &IntSymMatrix {
        &self.gram
    }

    pub fn canonical_ample(&self) -> &[i64] {
        &self.canonical_ample
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }
}

/// An ample class with its (exact) self-intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleClass {
    coords: Vec<i64>,
    h_squared: BigInt,
}

impl AmpleClass {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn h_squared(&self) -> &BigInt {
        &self.h_squared
    }
}

fn real_quadratic_gram(d: i64, f: u32) -> Result<(IntSymMatrix, BigInt)> {
    let field = FieldDesc::new(d)?;
    if d <= 0 {
        return Err(Error::Spec(format!(
            "the multiplication field must be real quadratic; got d = {d}"
        )));
    }
    if f == 0 {
        return Err(Error::Spec("conductor must be at least 1".into()));
    }
    let f = f as i64;
    let (gram, disc) = match field.kind() {
        OmegaKind::Sqrt => (
            IntSymMatrix::from_rows(&[vec![2, 0], vec![0, -2 * f * f * d]])?,
            BigInt::from(-4 * f * f * d),
        ),
        OmegaKind::Half => (
            IntSymMatrix::from_rows(&[vec![2, f], vec![f, f * f * (1 - d) / 2]])?,
            BigInt::from(-f * f * d),
        ),
    };
    Ok((gram, disc))
}

/// Builds the lattice model for a surface spec, validating every numeric
/// constraint (squarefree d, conductors ≥ 1, quaternion signature, …).
pub fn build_model(spec: &SurfaceSpec) -> Result<SurfaceModel> {
    let (gram, ample) = match spec {
        SurfaceSpec::IntegerMult => (IntSymMatrix::from_rows(&[vec![2]])?, vec![1]),
        SurfaceSpec::RealMult { d, f } | SurfaceSpec::ComplexMult { d, f } => {
            let (gram, _) = real_quadratic_gram(*d, *f)?;
            (gram, vec![1, 0])
        }
        SurfaceSpec::QuaternionMult { a, b } => {
            let alg = a.alg();
            if b.alg() != alg {
                return Err(Error::AlgebraMismatch);
            }
            if alg.alpha() <= 0 {
                return Err(Error::Spec(format!(
                    "quaternion algebra must be indefinite with alpha > 0; got alpha = {}",
                    alg.alpha()
                )));
            }
            if alg.alpha() < alg.beta() {
                return Err(Error::Spec(format!(
                    "quaternion algebra is normalised to alpha >= beta; got ({}, {})",
                    alg.alpha(),
                    alg.beta()
                )));
            }
            let gram = intersection_matrix_q(a, b)?;
            (gram, vec![1, 0, 0])
        }
        SurfaceSpec::ProductNonIsogenous => {
            (IntSymMatrix::from_rows(&[vec![0, 1], vec![1, 0]])?, vec![1, 1])
        }
        SurfaceSpec::ProductIsogenousNoCm { min_degree } => {
            if *min_degree == 0 {
                return Err(Error::Spec("minimal isogeny degree must be at least 1".into()));
            }
            let k = *min_degree as i64;
            (
                IntSymMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2 * k]])?,
                vec![1, 1, 0],
            )
        }
        SurfaceSpec::ProductIsogenousCm { d, f1, f2 } => {
            let l1 = CmLattice::new(*d, *f1)?;
            let l2 = CmLattice::new(*d, *f2)?;
            (ns_gram_product_cm(&l1, &l2)?, vec![1, 1, 0, 0])
        }
    };
    let inertia = gram.signature();
    if !inertia.is_hyperbolic(gram.dim()) {
        return Err(Error::Signature { pos: inertia.pos, neg: inertia.neg, zero: inertia.zero });
    }
    let discriminant = gram.det_exact();
    let model = SurfaceModel { spec: spec.clone(), gram, canonical_ample: ample, discriminant };
    debug_assert!(validate_ample(&model, &model.canonical_ample.clone()).is_ok());
    Ok(model)
}

/// The discriminant of NS(X) straight from the classification formulas,
/// without building the Gram matrix.
pub fn closed_form_discriminant(spec: &SurfaceSpec) -> Result<BigInt> {
    match spec {
        SurfaceSpec::IntegerMult => Ok(BigInt::from(2)),
        SurfaceSpec::RealMult { d, f } | SurfaceSpec::ComplexMult { d, f } => {
            Ok(real_quadratic_gram(*d, *f)?.1)
        }
        SurfaceSpec::QuaternionMult { a, b } => {
            let half = s_delta_det(a, b)? / BigRational::from_integer(BigInt::from(2));
            if !half.is_integer() {
                return Err(Error::NonIntegral(format!("det(S_delta)/2 = {half}")));
            }
            Ok(half.to_integer())
        }
        SurfaceSpec::ProductNonIsogenous => Ok(BigInt::from(-1)),
        SurfaceSpec::ProductIsogenousNoCm { min_degree } => Ok(BigInt::from(2 * min_degree)),
        SurfaceSpec::ProductIsogenousCm { d, f1, f2 } => {
            // −4·lcm(f₁,f₂)²·Im(ω)², where Im(ω)² = |d| or |d|/4.
            let field = FieldDesc::new(*d)?;
            let lcm = BigInt::from((*f1 as i64).lcm(&(*f2 as i64)));
            let disc =
                BigRational::from_integer(BigInt::from(-4) * &lcm * &lcm) * field.im_omega_sq();
            debug_assert!(disc.is_integer());
            Ok(disc.to_integer())
        }
    }
}

/// Checks that `coords` is an ample class of the model: positive
/// self-intersection and in the same component of the positive cone as the
/// canonical ample class.  Returns the class with its exact H².
pub fn validate_ample(model: &SurfaceModel, coords: &[i64]) -> Result<AmpleClass> {
    validate_ample_on(&model.gram, &model.canonical_ample, coords)
}

/// Same check against a raw Gram matrix and reference class, for lattices
/// that do not come from the classification.
pub fn validate_ample_on(
    gram: &IntSymMatrix,
    reference: &[i64],
    coords: &[i64],
) -> Result<AmpleClass> {
    let h2 = gram.quad_i64(coords)?;
    if !h2.is_positive() {
        return Err(Error::Ample(format!("H^2 = {h2} is not positive")));
    }
    let with_reference = gram.pair_i64(coords, reference)?;
    if !with_reference.is_positive() {
        return Err(Error::Ample(
            "class lies in the opposite component of the positive cone".into(),
        ));
    }
    Ok(AmpleClass { coords: coords.to_vec(), h_squared: h2 })
}

fn h2_f64(h: &AmpleClass) -> f64 {
    h.h_squared().to_f64().expect("BigInt -> f64")
}

/// Truncated nef-cone volume from the per-case closed formulas.
pub fn closed_form_volume(spec: &SurfaceSpec, h: &AmpleClass) -> Result<f64> {
    let h2 = h2_f64(h);
    match spec {
        SurfaceSpec::IntegerMult => Ok(1.0 / (2.0 * h2).sqrt()),
        SurfaceSpec::RealMult { d, f } | SurfaceSpec::ComplexMult { d, f } => {
            let field = FieldDesc::new(*d)?;
            let f = *f as f64;
            let root = (*d as f64).sqrt();
            Ok(match field.kind() {
                OmegaKind::Sqrt => 1.0 / (2.0 * f * root * h2),
                OmegaKind::Half => 1.0 / (f * root * h2),
            })
        }
        SurfaceSpec::QuaternionMult { a, b } => {
            let det = s_delta_det(a, b)?;
            if !det.is_positive() {
                return Err(Error::Domain("det(S_delta) must be positive".into()));
            }
            let det = det.to_f64().expect("rational -> f64");
            Ok(PI * 2.0_f64.sqrt() / (3.0 * det.sqrt() * h2.powf(1.5)))
        }
        SurfaceSpec::ProductNonIsogenous => Ok(1.0 / h2),
        SurfaceSpec::ProductIsogenousNoCm { min_degree } => {
            Ok(PI / (3.0 * (2.0 * *min_degree as f64).sqrt() * h2.powf(1.5)))
        }
        SurfaceSpec::ProductIsogenousCm { d, f1, f2 } => {
            let field = FieldDesc::new(*d)?;
            let lcm = (*f1 as i64).lcm(&(*f2 as i64)) as f64;
            let root = (-*d as f64).sqrt();
            Ok(match field.kind() {
                OmegaKind::Sqrt => PI / (6.0 * lcm * root * h2 * h2),
                OmegaKind::Half => PI / (3.0 * lcm * root * h2 * h2),
            })
        }
    }
}
