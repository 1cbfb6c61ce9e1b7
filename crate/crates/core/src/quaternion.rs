//! Rational quaternion algebras (α, β): i² = α, j² = β, ij = −ji.
//!
//! Supplies the reduced trace/norm pairings that build the Picard-rank-3
//! intersection matrices, the 2×2 discriminant form S_δ, and the splitting
//! representation into 2×2 matrices over Q(√α).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Error;
use crate::exact_linalg::IntSymMatrix;
use crate::quadfield::{FieldDesc, OmegaKind, QuadElem};
use crate::Result;

/// The algebra (α, β) over Q.  α, β nonzero integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuatAlg {
    alpha: i64,
    beta: i64,
}

impl QuatAlg {
    pub fn new(alpha: i64, beta: i64) -> Result<Self> {
        if alpha == 0 || beta == 0 {
            return Err(Error::Spec("quaternion algebra needs alpha, beta nonzero".into()));
        }
        Ok(QuatAlg { alpha, beta })
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }
}

/// x + y·i + z·j + w·ij with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatElem {
    alg: QuatAlg,
    x: BigRational,
    y: BigRational,
    z: BigRational,
    w: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuatElem {
    pub fn new(
        alg: QuatAlg,
        x: BigRational,
        y: BigRational,
        z: BigRational,
        w: BigRational,
    ) -> Self {
        QuatElem { alg, x, y, z, w }
    }

    pub fn from_integers(alg: QuatAlg, coords: [i64; 4]) -> Self {
        let [x, y, z, w] = coords;
        QuatElem::new(alg, rat(x), rat(y), rat(z), rat(w))
    }

    pub fn one(alg: QuatAlg) -> Self {
        QuatElem::from_integers(alg, [1, 0, 0, 0])
    }

    pub fn gen_i(alg: QuatAlg) -> Self {
        QuatElem::from_integers(alg, [0, 1, 0, 0])
    }

    pub fn gen_j(alg: QuatAlg) -> Self {
        QuatElem::from_integers(alg, [0, 0, 1, 0])
    }

    pub fn gen_ij(alg: QuatAlg) -> Self {
        QuatElem::from_integers(alg, [0, 0, 0, 1])
    }

    pub fn alg(&self) -> QuatAlg {
        self.alg
    }

    pub fn coords(&self) -> [&BigRational; 4] {
        [&self.x, &self.y, &self.z, &self.w]
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero() && self.w.is_zero()
    }

    fn same_alg(&self, rhs: &QuatElem) -> Result<()> {
        if self.alg == rhs.alg {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, rhs: &QuatElem) -> Result<QuatElem> {
        self.same_alg(rhs)?;
        Ok(QuatElem::new(
            self.alg,
            &self.x + &rhs.x,
            &self.y + &rhs.y,
            &self.z + &rhs.z,
            &self.w + &rhs.w,
        ))
    }

    pub fn sub(&self, rhs: &QuatElem) -> Result<QuatElem> {
        self.same_alg(rhs)?;
        Ok(QuatElem::new(
            self.alg,
            &self.x - &rhs.x,
            &self.y - &rhs.y,
            &self.z - &rhs.z,
            &self.w - &rhs.w,
        ))
    }

    pub fn neg(&self) -> QuatElem {
        QuatElem::new(self.alg, -self.x.clone(), -self.y.clone(), -self.z.clone(), -self.w.clone())
    }

    pub fn scale(&self, c: &BigRational) -> QuatElem {
        QuatElem::new(self.alg, &self.x * c, &self.y * c, &self.z * c, &self.w * c)
    }

    pub fn mul(&self, rhs: &QuatElem) -> Result<QuatElem> {
        self.same_alg(rhs)?;
        let a = rat(self.alg.alpha);
        let b = rat(self.alg.beta);
        let (x1, y1, z1, w1) = (&self.x, &self.y, &self.z, &self.w);
        let (x2, y2, z2, w2) = (&rhs.x, &rhs.y, &rhs.z, &rhs.w);
        let x = x1 * x2 + &a * (y1 * y2) + &b * (z1 * z2) - &a * &b * (w1 * w2);
        let y = x1 * y2 + y1 * x2 - &b * (z1 * w2) + &b * (w1 * z2);
        let z = x1 * z2 + z1 * x2 + &a * (y1 * w2) - &a * (w1 * y2);
        let w = x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2;
        Ok(QuatElem::new(self.alg, x, y, z, w))
    }

    /// Standard involution: 1 ↦ 1, i ↦ −i, j ↦ −j, ij ↦ −ij.
    pub fn conj(&self) -> QuatElem {
        QuatElem::new(self.alg, self.x.clone(), -self.y.clone(), -self.z.clone(), -self.w.clone())
    }

    /// t(q) = q + q̄ = 2x.
    pub fn reduced_trace(&self) -> BigRational {
        &self.x + &self.x
    }

    /// n(q) = q·q̄ = x² − αy² − βz² + αβw².
    pub fn reduced_norm(&self) -> BigRational {
        let a = rat(self.alg.alpha);
        let b = rat(self.alg.beta);
        &self.x * &self.x - &a * (&self.y * &self.y) - &b * (&self.z * &self.z)
            + &a * &b * (&self.w * &self.w)
    }
}

/// Polarisation of the reduced norm: n(a, b) = n(a+b) − n(a) − n(b).
/// Bilinear, symmetric, with n(a, a) = 2·n(a).
pub fn norm_pairing(a: &QuatElem, b: &QuatElem) -> Result<BigRational> {
    let s = a.add(b)?;
    Ok(s.reduced_norm() - a.reduced_norm() - b.reduced_norm())
}

/// δ(a, b) = t(a)·t(b) − 2·n(a, b); the form whose Gram matrix on (a, b)
/// is S_δ.  On the diagonal δ(a, a) = t(a)² − 4·n(a).
pub fn delta_pairing(a: &QuatElem, b: &QuatElem) -> Result<BigRational> {
    let pairing = norm_pairing(a, b)?;
    Ok(a.reduced_trace() * b.reduced_trace() - rat(2) * pairing)
}

/// S_δ(a, b) = [[δ(a,a), δ(a,b)], [δ(a,b), δ(b,b)]].
pub fn s_delta(a: &QuatElem, b: &QuatElem) -> Result<[[BigRational; 2]; 2]> {
    let daa = delta_pairing(a, a)?;
    let dab = delta_pairing(a, b)?;
    let dbb = delta_pairing(b, b)?;
    Ok([[daa, dab.clone()], [dab, dbb]])
}

pub fn s_delta_det(a: &QuatElem, b: &QuatElem) -> Result<BigRational> {
    let m = s_delta(a, b)?;
    Ok(&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0])
}

fn require_integer(x: &BigRational, what: &str) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::NonIntegral(format!("{what} = {x}")))
    }
}

/// Intersection matrix of the sublattice Z·1 + Z·a + Z·b inside the
/// trace/norm quadratic module:
///
/// ```text
/// [ 2     t(a)    t(b)  ]
/// [ t(a)  2n(a)   n(a,b)]
/// [ t(b)  n(a,b)  2n(b) ]
/// ```
///
/// Fails with `NonIntegral` when any entry is not an integer.  Satisfies
/// det = ½·det(S_δ(a, b)) identically.
pub fn intersection_matrix_q(a: &QuatElem, b: &QuatElem) -> Result<IntSymMatrix> {
    a.same_alg(b)?;
    let ta = require_integer(&a.reduced_trace(), "t(a)")?;
    let tb = require_integer(&b.reduced_trace(), "t(b)")?;
    let na = require_integer(&(rat(2) * a.reduced_norm()), "2n(a)")?;
    let nb = require_integer(&(rat(2) * b.reduced_norm()), "2n(b)")?;
    let nab = require_integer(&norm_pairing(a, b)?, "n(a,b)")?;
    IntSymMatrix::from_bigint_rows(vec![
        vec![BigInt::from(2), ta.clone(), tb.clone()],
        vec![ta, na, nab.clone()],
        vec![tb, nab, nb],
    ])
}

/// (d, s) with x = s²·d and d squarefree (sign carried by d).
fn squarefree_part(x: i64) -> (i64, i64) {
    let mut rem = x.abs();
    let mut s: i64 = 1;
    let mut d: i64 = 1;
    let mut p: i64 = 2;
    while p * p <= rem {
        let mut e = 0u32;
        while rem % p == 0 {
            rem /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += 1;
    }
    d *= rem;
    if x < 0 {
        d = -d;
    }
    (d, s)
}

/// 2×2 matrix over Q(√d′), d′ the squarefree part of α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2Quad {
    e: [[QuadElem; 2]; 2],
}

impl Mat2Quad {
    pub fn entry(&self, i: usize, j: usize) -> &QuadElem {
        &self.e[i][j]
    }

    pub fn mul(&self, rhs: &Mat2Quad) -> Result<Mat2Quad> {
        let mut out = Vec::with_capacity(2);
        for i in 0..2 {
            let mut row = Vec::with_capacity(2);
            for j in 0..2 {
                let t0 = self.e[i][0].mul(&rhs.e[0][j])?;
                let t1 = self.e[i][1].mul(&rhs.e[1][j])?;
                row.push(t0.add(&t1)?);
            }
            out.push(row);
        }
        let [r0, r1]: [Vec<QuadElem>; 2] = out.try_into().expect("two rows");
        let [a, b]: [QuadElem; 2] = r0.try_into().expect("two entries");
        let [c, d]: [QuadElem; 2] = r1.try_into().expect("two entries");
        Ok(Mat2Quad { e: [[a, b], [c, d]] })
    }

    pub fn trace(&self) -> Result<QuadElem> {
        self.e[0][0].add(&self.e[1][1])
    }

    pub fn det(&self) -> Result<QuadElem> {
        let ad = self.e[0][0].mul(&self.e[1][1])?;
        let bc = self.e[0][1].mul(&self.e[1][0])?;
        ad.sub(&bc)
    }
}

/// Splitting representation q ↦ [[x+y√α, z+w√α], [β(z−w√α), x−y√α]] over
/// Q(√α) = Q(√d′).  Needs √α irrational, i.e. α not a perfect square.
pub fn mat2_rep(q: &QuatElem) -> Result<Mat2Quad> {
    let alg = q.alg();
    let (d, s) = squarefree_part(alg.alpha());
    if d == 1 {
        return Err(Error::UnsupportedAlpha(alg.alpha()));
    }
    let field = FieldDesc::new(d)?;
    // √d′ on the ω-basis: ω itself, or 2ω − 1 when ω = (1+√d′)/2.
    let sqrt_d = match field.kind() {
        OmegaKind::Sqrt => QuadElem::omega(field),
        OmegaKind::Half => QuadElem::from_integers(field, -1, 2),
    };
    let sqrt_alpha = sqrt_d.scale(&rat(s));
    let scalar = |r: &BigRational| QuadElem::new(field, r.clone(), BigRational::zero());
    let [x, y, z, w] = q.coords();
    let beta = rat(alg.beta());
    let e00 = scalar(x).add(&sqrt_alpha.scale(y))?;
    let e01 = scalar(z).add(&sqrt_alpha.scale(w))?;
    let e10 = scalar(z).sub(&sqrt_alpha.scale(w))?.scale(&beta);
    let e11 = scalar(x).sub(&sqrt_alpha.scale(y))?;
    Ok(Mat2Quad { e: [[e00, e01], [e10, e11]] })
}
