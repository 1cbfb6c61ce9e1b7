//! Hom lattices between elliptic curves and the rank-3/rank-4 product
//! lattices they generate.
//!
//! For CM curves C/Λ₁ → C/Λ₂ with Λᵢ = Z + Z·fᵢω the Hom lattice is
//! computed mechanically: membership is the integrality of a rational 2×2
//! multiplication matrix, solved as a congruence system through an integer
//! kernel and put into Hermite normal form.  No closed form is assumed —
//! the closed forms are what the tests check this module against.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exact_linalg::{hnf_basis, right_kernel, IntSymMatrix};
use crate::quadfield::{FieldDesc, QuadElem};
use crate::Result;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The lattice Z + Z·fω of conductor f in an imaginary quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CmLattice {
    field: FieldDesc,
    f: u32,
}

impl CmLattice {
    pub fn new(d: i64, f: u32) -> Result<Self> {
        let field = FieldDesc::new(d)?;
        if !field.is_imaginary() {
            return Err(Error::RealField(d));
        }
        if f == 0 {
            return Err(Error::Spec("conductor must be at least 1".into()));
        }
        Ok(CmLattice { field, f })
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn conductor(&self) -> u32 {
        self.f
    }

    pub fn contains(&self, x: &QuadElem) -> bool {
        x.field() == self.field && x.in_order(self.f)
    }
}

/// Hom(C/Λ₁, C/Λ₂) for CM lattices in the same field: a rank-2 lattice of
/// field elements, with the area ratio f₁/f₂ that converts field norms
/// into isogeny degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomLattice {
    field: FieldDesc,
    target: CmLattice,
    basis: [QuadElem; 2],
    area_ratio: BigRational,
}

impl HomLattice {
    pub fn field(&self) -> FieldDesc {
        self.field
    }

    /// Canonical (HNF) basis (σ₁, σ₂).
    pub fn basis(&self) -> (&QuadElem, &QuadElem) {
        (&self.basis[0], &self.basis[1])
    }

    /// Covolume(Λ₁)/Covolume(Λ₂) = f₁/f₂.
    pub fn area_ratio(&self) -> &BigRational {
        &self.area_ratio
    }

    /// Integer-combination membership test against the basis.
    pub fn contains(&self, lam: &QuadElem) -> bool {
        if lam.field() != self.field {
            return false;
        }
        let (s1, s2) = (&self.basis[0], &self.basis[1]);
        let det = s1.u() * s2.v() - s2.u() * s1.v();
        debug_assert!(!det.is_zero());
        let c1 = (lam.u() * s2.v() - s2.u() * lam.v()) / &det;
        let c2 = (s1.u() * lam.v() - lam.u() * s1.v()) / &det;
        c1.is_integer() && c2.is_integer()
    }
}

/// Computes Hom(C/Λ₁, C/Λ₂) = { λ ∈ Λ₂ : λ·f₁ω ∈ Λ₂ }.  Writing λ on the
/// Λ₂-basis (1, f₂ω), the second condition says M·v ∈ Z² for the rational
/// matrix M of multiplication by f₁ω; with M = N/D this is the congruence
/// N·v ≡ 0 (mod D), solved via the integer kernel of [N | −D·I].
pub fn hom_lattice_cm(l1: &CmLattice, l2: &CmLattice) -> Result<HomLattice> {
    if l1.field != l2.field {
        return Err(Error::FieldMismatch);
    }
    let field = l1.field;
    let f1 = l1.f as i64;
    let f2 = l2.f as i64;
    let f1w = QuadElem::omega(field).scale(&rat(f1));
    let target_basis = [QuadElem::one(field), QuadElem::omega(field).scale(&rat(f2))];
    let mut m = vec![vec![BigRational::zero(); 2]; 2];
    for (col, e) in target_basis.iter().enumerate() {
        let img = f1w.mul(e)?;
        m[0][col] = img.u().clone();
        m[1][col] = img.v() / rat(f2);
    }
    let mut den = BigInt::one();
    for row in &m {
        for x in row {
            den = den.lcm(x.denom());
        }
    }
    let d_rat = BigRational::from_integer(den.clone());
    let mut system = vec![vec![BigInt::zero(); 4]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let scaled = &m[i][j] * &d_rat;
            debug_assert!(scaled.is_integer());
            system[i][j] = scaled.to_integer();
        }
        system[i][i + 2] = -den.clone();
    }
    let kernel = right_kernel(&system)?;
    let solutions: Vec<Vec<BigInt>> = kernel.iter().map(|v| v[..2].to_vec()).collect();
    let rows = hnf_basis(&solutions)?;
    if rows.len() != 2 {
        return Err(Error::Domain(format!("Hom lattice has rank {} instead of 2", rows.len())));
    }
    let to_elem = |row: &[BigInt]| {
        QuadElem::new(
            field,
            BigRational::from_integer(row[0].clone()),
            BigRational::from_integer(&row[1] * BigInt::from(f2)),
        )
    };
    let basis = [to_elem(&rows[0]), to_elem(&rows[1])];
    let hom = HomLattice {
        field,
        target: *l2,
        basis,
        area_ratio: BigRational::new(BigInt::from(f1), BigInt::from(f2)),
    };
    debug_assert!(hom.basis.iter().all(|s| hom.target.contains(s)));
    Ok(hom)
}

/// Dual isogeny: λ̂ = (f₁/f₂)·λ̄, so that λ̂·λ = deg λ.
pub fn dual_hom(hom: &HomLattice, lam: &QuadElem) -> QuadElem {
    lam.conj().scale(hom.area_ratio())
}

/// deg λ = (f₁/f₂)·N(λ); always a nonnegative integer on the Hom lattice.
pub fn deg_hom(hom: &HomLattice, lam: &QuadElem) -> Result<BigInt> {
    let deg = hom.area_ratio() * lam.field_norm();
    if !deg.is_integer() {
        return Err(Error::NonIntegral(format!("deg = {deg}")));
    }
    let deg = deg.to_integer();
    debug_assert!(!deg.is_negative());
    Ok(deg)
}

/// Gram matrix of NS(E₁ × E₂) on the basis (F₁, F₂, D_{σ₁}, D_{σ₂}):
/// the fiber classes form a hyperbolic plane, and the Hom part carries
/// D_λ·D_μ = −(λμ̂ + μλ̂), i.e. −2·deg on the diagonal.
pub fn ns_gram_from_hom_basis(
    hom: &HomLattice,
    s1: &QuadElem,
    s2: &QuadElem,
) -> Result<IntSymMatrix> {
    let a = deg_hom(hom, s1)?;
    let c = deg_hom(hom, s2)?;
    let cross = hom.area_ratio() * s1.mul(&s2.conj())?.field_trace();
    if !cross.is_integer() {
        return Err(Error::NonIntegral(format!("sigma1*dual(sigma2) trace = {cross}")));
    }
    let b = cross.to_integer();
    let z = BigInt::zero();
    IntSymMatrix::from_bigint_rows(vec![
        vec![z.clone(), BigInt::one(), z.clone(), z.clone()],
        vec![BigInt::one(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), -BigInt::from(2) * &a, -b.clone()],
        vec![z.clone(), z.clone(), -b, -BigInt::from(2) * &c],
    ])
}

/// Gram matrix of NS(E₁ × E₂) on the canonical Hom basis.
pub fn ns_gram_product_cm(l1: &CmLattice, l2: &CmLattice) -> Result<IntSymMatrix> {
    let hom = hom_lattice_cm(l1, l2)?;
    let (s1, s2) = hom.basis();
    let (s1, s2) = (s1.clone(), s2.clone());
    ns_gram_from_hom_basis(&hom, &s1, &s2)
}

/// Discriminant of NS(E₁ × E₂) = −4·Im(σ₁·σ̂₂)².  Independent of the
/// choice of basis of the Hom lattice (up to the sign of the imaginary
/// part, which squares away).
pub fn disc_product_cm(l1: &CmLattice, l2: &CmLattice) -> Result<BigInt> {
    let hom = hom_lattice_cm(l1, l2)?;
    let (s1, s2) = hom.basis();
    let mixed = s1.mul(&dual_hom(&hom, s2))?;
    let disc = -rat(4) * mixed.im_sq();
    if !disc.is_integer() {
        return Err(Error::NonIntegral(format!("disc = {disc}")));
    }
    Ok(disc.to_integer())
}

/// Isogenous non-CM pair: both curves are cyclic "thickenings" of one
/// lattice, E_k = C/(Z + Z·t_k·τ) with τ transcendental.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoCmPair {
    t1: u64,
    t2: u64,
}

impl NoCmPair {
    pub fn new(t1: u64, t2: u64) -> Result<Self> {
        if t1 == 0 || t2 == 0 {
            return Err(Error::Spec("lattice indices must be at least 1".into()));
        }
        Ok(NoCmPair { t1, t2 })
    }

    pub fn t1(&self) -> u64 {
        self.t1
    }

    pub fn t2(&self) -> u64 {
        self.t2
    }
}

/// Hom lattice of a non-CM isogenous pair: rank 1, generated by the
/// integer t₂/gcd(t₁,t₂).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoCmHom {
    pub generator: BigInt,
    pub min_degree: BigInt,
}

/// Hom(E₁, E₂) = (t₂/g)·Z with g = gcd(t₁, t₂); the generator has the
/// minimal degree t₁t₂/g².
pub fn hom_no_cm(pair: &NoCmPair) -> NoCmHom {
    let g = pair.t1.gcd(&pair.t2);
    NoCmHom {
        generator: BigInt::from(pair.t2 / g),
        min_degree: BigInt::from((pair.t1 / g) * (pair.t2 / g)),
    }
}

/// Minimal isogeny degree between CM curves: the minimum of the positive
/// definite binary form deg(p·σ₁ + q·σ₂) over (p, q) ≠ (0, 0), found by
/// Lagrange–Gauss reduction (the reduced form attains its minimum at its
/// leading coefficient).
pub fn min_isogeny_degree_cm(l1: &CmLattice, l2: &CmLattice) -> Result<BigInt> {
    let hom = hom_lattice_cm(l1, l2)?;
    let (s1, s2) = hom.basis();
    let mut a = deg_hom(&hom, s1)?;
    let mut c = deg_hom(&hom, s2)?;
    let cross = hom.area_ratio() * s1.mul(&s2.conj())?.field_trace();
    debug_assert!(cross.is_integer());
    let mut b = cross.to_integer();
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    if !a.is_positive() || !disc.is_negative() {
        return Err(Error::Domain("degree form is not positive definite".into()));
    }
    loop {
        if c < a {
            std::mem::swap(&mut a, &mut c);
            b = -b;
        }
        // shift to |b| ≤ a: b -= 2ka with k = round(b / 2a)
        let two_a = BigInt::from(2) * &a;
        let k = round_div(&b, &two_a);
        if !k.is_zero() {
            c = &c - &k * &b + &k * &k * &a;
            b = &b - &k * &two_a;
            continue;
        }
        if c < a {
            continue;
        }
        break;
    }
    debug_assert!(b.magnitude() <= a.magnitude() && a <= c);
    Ok(a)
}

/// Nearest integer to n/d (d > 0), ties toward even quotients are fine —
/// any |r| ≤ d/2 representative works for the reduction.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if BigInt::from(2) * &r > *d {
        q + 1
    } else {
        q
    }
}
