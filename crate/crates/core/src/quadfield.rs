//! Arithmetic in quadratic fields Q(√d), d squarefree.
//!
//! Elements are stored on the ω-basis {1, ω}, where ω = √d for
//! d ≡ 2, 3 (mod 4) and ω = (1+√d)/2 for d ≡ 1 (mod 4) — so an order of
//! conductor f is exactly Z + Z·fω and membership is a coordinate check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::Result;

/// True iff d is squarefree (and nonzero).
pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Which generator the ω-basis uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OmegaKind {
    /// ω = √d, for d ≡ 2, 3 (mod 4); ω² = d.
    Sqrt,
    /// ω = (1+√d)/2, for d ≡ 1 (mod 4); ω² = ω + (d−1)/4.
    Half,
}

/// The field Q(√d) together with its ω-basis convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    d: i64,
    kind: OmegaKind,
}

impl FieldDesc {
    pub fn new(d: i64) -> Result<Self> {
        if d == 1 || !is_squarefree(d) {
            return Err(Error::Spec(format!(
                "d = {d} must be a squarefree integer different from 0 and 1"
            )));
        }
        let kind = if d.rem_euclid(4) == 1 { OmegaKind::Half } else { OmegaKind::Sqrt };
        Ok(FieldDesc { d, kind })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn kind(&self) -> OmegaKind {
        self.kind
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }

    /// Re(ω): 0 on the Sqrt branch, 1/2 on the Half branch.
    pub fn re_omega(&self) -> BigRational {
        match self.kind {
            OmegaKind::Sqrt => BigRational::zero(),
            OmegaKind::Half => BigRational::new(BigInt::one(), BigInt::from(2)),
        }
    }

    /// Im(ω)² for d < 0: |d| on the Sqrt branch, |d|/4 on the Half branch.
    /// Zero for real fields (both embeddings are real).
    pub fn im_omega_sq(&self) -> BigRational {
        if self.d > 0 {
            return BigRational::zero();
        }
        let abs_d = BigRational::from_integer(BigInt::from(-self.d));
        match self.kind {
            OmegaKind::Sqrt => abs_d,
            OmegaKind::Half => abs_d / BigRational::from_integer(BigInt::from(4)),
        }
    }
}

/// u + v·ω with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElem {
    field: FieldDesc,
    u: BigRational,
    v: BigRational,
}

impl QuadElem {
    pub fn new(field: FieldDesc, u: BigRational, v: BigRational) -> Self {
        QuadElem { field, u, v }
    }

    pub fn from_integers(field: FieldDesc, u: i64, v: i64) -> Self {
        QuadElem::new(
            field,
            BigRational::from_integer(BigInt::from(u)),
            BigRational::from_integer(BigInt::from(v)),
        )
    }

    pub fn zero(field: FieldDesc) -> Self {
        QuadElem::from_integers(field, 0, 0)
    }

    pub fn one(field: FieldDesc) -> Self {
        QuadElem::from_integers(field, 1, 0)
    }

    pub fn omega(field: FieldDesc) -> Self {
        QuadElem::from_integers(field, 0, 1)
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn u(&self) -> &BigRational {
        &self.u
    }

    pub fn v(&self) -> &BigRational {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn same_field(&self, rhs: &QuadElem) -> Result<()> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, rhs: &QuadElem) -> Result<QuadElem> {
        self.same_field(rhs)?;
        Ok(QuadElem::new(self.field, &self.u + &rhs.u, &self.v + &rhs.v))
    }

    pub fn sub(&self, rhs: &QuadElem) -> Result<QuadElem> {
        self.same_field(rhs)?;
        Ok(QuadElem::new(self.field, &self.u - &rhs.u, &self.v - &rhs.v))
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem::new(self.field, -self.u.clone(), -self.v.clone())
    }

    pub fn scale(&self, c: &BigRational) -> QuadElem {
        QuadElem::new(self.field, &self.u * c, &self.v * c)
    }

    pub fn mul(&self, rhs: &QuadElem) -> Result<QuadElem> {
        self.same_field(rhs)?;
        let cross = &self.u * &rhs.v + &self.v * &rhs.u;
        let vv = &self.v * &rhs.v;
        let (u, v) = match self.field.kind {
            OmegaKind::Sqrt => {
                let d = BigRational::from_integer(BigInt::from(self.field.d));
                (&self.u * &rhs.u + d * &vv, cross)
            }
            OmegaKind::Half => {
                // ω² = ω + (d−1)/4
                let c = BigRational::from_integer(BigInt::from((self.field.d - 1) / 4));
                (&self.u * &rhs.u + c * &vv, cross + vv)
            }
        };
        Ok(QuadElem::new(self.field, u, v))
    }

    /// Galois conjugate: √d ↦ −√d, so ω ↦ −ω (Sqrt) or 1 − ω (Half).
    pub fn conj(&self) -> QuadElem {
        match self.field.kind {
            OmegaKind::Sqrt => QuadElem::new(self.field, self.u.clone(), -self.v.clone()),
            OmegaKind::Half => QuadElem::new(self.field, &self.u + &self.v, -self.v.clone()),
        }
    }

    /// x·x̄ as a rational number.
    pub fn field_norm(&self) -> BigRational {
        let p = self.mul(&self.conj()).expect("same field");
        debug_assert!(p.v.is_zero());
        p.u
    }

    /// x + x̄ as a rational number.
    pub fn field_trace(&self) -> BigRational {
        let s = self.add(&self.conj()).expect("same field");
        debug_assert!(s.v.is_zero());
        s.u
    }

    /// Im(x)² = v²·Im(ω)², for the fixed embedding into C.
    pub fn im_sq(&self) -> BigRational {
        &self.v * &self.v * self.field.im_omega_sq()
    }

    /// Membership in the order Z + Z·fω of conductor f ≥ 1.
    pub fn in_order(&self, f: u32) -> bool {
        if !self.u.is_integer() || !self.v.is_integer() {
            return false;
        }
        (self.v.to_integer() % BigInt::from(f)).is_zero()
    }
}
