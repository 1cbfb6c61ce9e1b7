//! Volumes of truncated positive cones.
//!
//! For a lattice of signature (1, ρ−1) with Gram matrix S and an ample
//! class H, the body measured here is
//!
//! ```text
//! { x : x·x ≥ 0, 0 ≤ H·x ≤ 1 } ∩ (component of H)
//! ```
//!
//! in the lattice normalisation of Lebesgue measure (a fundamental cell
//! has volume 1).  Its volume is V_ρ / √(|det S|·(H²)^ρ) with
//! V_ρ = κ_{ρ−1}/ρ, κ_n the unit n-ball volume.  The Monte Carlo sampler
//! estimates the same volume geometrically, independent of that formula:
//! it samples a bounding box in Lorentz-frame coordinates but tests
//! membership against the original S and H.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::Error;
use crate::exact_linalg::{lorentz_frame, IntSymMatrix};
use crate::Result;

/// Highest Picard-type rank the κ-recurrence is evaluated for.  Abelian
/// surfaces stop at ρ = 4; the headroom is for the generic lattice mode.
pub const MAX_RHO: usize = 17;

/// V_ρ = κ_{ρ−1}/ρ: the volume of the truncated standard cone
/// { y₀² ≥ y₁²+…+y_{ρ−1}², 0 ≤ y₀ ≤ 1 }.  V₁ = V₂ = 1, V₃ = V₄ = π/3,
/// V₅ = π²/10.
pub fn v_rho(rho: usize) -> Result<f64> {
    if rho == 0 || rho > MAX_RHO {
        return Err(Error::Domain(format!("rho = {rho} outside 1..={MAX_RHO}")));
    }
    // κ₀ = 1, κ₁ = 2, κ_n = κ_{n−2}·2π/n.
    let n = rho - 1;
    let mut kappa = [1.0, 2.0];
    for m in 2..=n {
        let next = kappa[m % 2] * (2.0 * PI / m as f64);
        kappa[m % 2] = next;
    }
    Ok(kappa[n % 2] / rho as f64)
}

/// The positive cone of (S, H) truncated at H·x ≤ 1.
#[derive(Clone, Debug)]
pub struct TruncatedCone {
    gram: IntSymMatrix,
    h: Vec<i64>,
    h_squared: BigInt,
    gram_f: Vec<Vec<f64>>,
    h_f: Vec<f64>,
}

impl TruncatedCone {
    pub fn new(gram: IntSymMatrix, h: Vec<i64>) -> Result<Self> {
        let n = gram.dim();
        if h.len() != n {
            return Err(Error::Dimension(format!("H must have length {n}")));
        }
        let inertia = gram.signature();
        if !inertia.is_hyperbolic(n) {
            return Err(Error::Signature {
                pos: inertia.pos,
                neg: inertia.neg,
                zero: inertia.zero,
            });
        }
        let h_squared = gram.quad_i64(&h)?;
        if !h_squared.is_positive() {
            return Err(Error::NotPositive);
        }
        let gram_f = gram.to_f64();
        let h_f = h.iter().map(|&x| x as f64).collect();
        Ok(TruncatedCone { gram, h, h_squared, gram_f, h_f })
    }

    pub fn rho(&self) -> usize {
        self.gram.dim()
    }

    pub fn gram(&self) -> &IntSymMatrix {
        &self.gram
    }

    pub fn h(&self) -> &[i64] {
        &self.h
    }

    pub fn h_squared(&self) -> &BigInt {
        &self.h_squared
    }

    /// x·x ≥ 0 and 0 ≤ H·x ≤ 1, evaluated in f64 against the original
    /// Gram data (not the sampling frame).
    pub fn contains(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.rho());
        let mut xx = 0.0;
        let mut hx = 0.0;
        for (i, row) in self.gram_f.iter().enumerate() {
            let mut sx = 0.0;
            for (j, &sij) in row.iter().enumerate() {
                sx += sij * x[j];
            }
            xx += x[i] * sx;
            hx += self.h_f[i] * sx;
        }
        xx >= 0.0 && (0.0..=1.0).contains(&hx)
    }

    /// Exact-rational variant of [`Self::contains`].
    pub fn contains_exact(&self, x: &[BigRational]) -> Result<bool> {
        let n = self.rho();
        if x.len() != n {
            return Err(Error::Dimension(format!("point must have length {n}")));
        }
        let mut xx = BigRational::zero();
        let mut hx = BigRational::zero();
        for i in 0..n {
            let mut sx = BigRational::zero();
            for (j, xj) in x.iter().enumerate() {
                sx += BigRational::from_integer(self.gram.get(i, j).clone()) * xj;
            }
            xx += &x[i] * &sx;
            hx += BigRational::from_integer(BigInt::from(self.h[i])) * sx;
        }
        let one = BigRational::from_integer(BigInt::from(1));
        Ok(!xx.is_negative() && !hx.is_negative() && hx <= one)
    }
}

/// Exact closed form: V_ρ / √(|det S|·(H²)^ρ).  The radicand is assembled
/// as one exact integer before the square root, so lattice-sized inputs
/// give correctly rounded results (e.g. exactly 0.5 for the ρ = 1 lattice
/// [[2]] with H = (1)).
pub fn positive_cone_volume(gram: &IntSymMatrix, h: &[i64]) -> Result<f64> {
    let n = gram.dim();
    let inertia = gram.signature();
    if !inertia.is_hyperbolic(n) {
        return Err(Error::Signature { pos: inertia.pos, neg: inertia.neg, zero: inertia.zero });
    }
    let h2 = gram.quad_i64(h)?;
    if !h2.is_positive() {
        return Err(Error::NotPositive);
    }
    let radicand = BigInt::from(gram.det_exact().magnitude().clone()) * h2.pow(n as u32);
    let denom = radicand.to_f64().expect("BigInt -> f64").sqrt();
    Ok(v_rho(n)? / denom)
}

/// A Monte Carlo volume estimate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub hits: u64,
}

/// Samples are drawn in fixed 65536-sample chunks, one ChaCha12 stream per
/// chunk, so the hit count (and hence the estimate, bit for bit) depends
/// only on (samples, seed) — not on thread count or scheduling.
const CHUNK: u64 = 1 << 16;

/// Monte Carlo estimate of the truncated-cone volume.
///
/// In Lorentz-frame coordinates the cone fits in the box
/// [0, R] × [−R, R]^{ρ−1} with R = 1/√(H²); points are drawn there,
/// mapped by T, and tested against the original (S, H).
pub fn mc_volume(cone: &TruncatedCone, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::Config("samples must be at least 1".into()));
    }
    let rho = cone.rho();
    let frame = lorentz_frame(cone.gram(), cone.h())?;
    let h2 = cone.h_squared().to_f64().expect("BigInt -> f64");
    let r = 1.0 / h2.sqrt();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(chunk + 1);
            let count = CHUNK.min(samples - chunk * CHUNK);
            let mut y = vec![0.0; rho];
            let mut x = vec![0.0; rho];
            let mut local = 0u64;
            for _ in 0..count {
                y[0] = rng.random_range(0.0..r);
                for yi in y.iter_mut().skip(1) {
                    *yi = rng.random_range(-r..r);
                }
                frame.apply_into(&y, &mut x);
                if cone.contains(&x) {
                    local += 1;
                }
            }
            local
        })
        .sum();
    let n = samples as f64;
    let p = hits as f64 / n;
    let box_vol = r * (2.0 * r).powi(rho as i32 - 1);
    let scale = box_vol * frame.det_abs();
    Ok(McEstimate {
        estimate: p * scale,
        stderr: scale * (p * (1.0 - p) / n).sqrt(),
        samples,
        seed,
        hits,
    })
}

/// Nef, positive-cone and big-cone volumes of (S, H).
///
/// On an abelian surface the nef cone is the closure of the positive
/// component, so all three coincide (`equal = true`).  In generic-lattice
/// mode the positive-cone volume is only an upper bound for nef and a
/// lower bound for big, and `equal` is false.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeBounds {
    pub nef: f64,
    pub positive: f64,
    pub big: f64,
    pub equal: bool,
}

pub fn volume_bounds(gram: &IntSymMatrix, h: &[i64], abelian: bool) -> Result<VolumeBounds> {
    let v = positive_cone_volume(gram, h)?;
    Ok(VolumeBounds { nef: v, positive: v, big: v, equal: abelian })
}
