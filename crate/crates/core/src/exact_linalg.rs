//! Exact linear algebra over Z and Q, plus the one float construction
//! (Lorentz frames) the Monte Carlo sampler needs.
//!
//! Everything that feeds a discriminant or a signature is computed in exact
//! arithmetic: determinants by fraction-free (Bareiss) elimination, inertia
//! by congruent diagonalisation over Q, lattice bases by row-style Hermite
//! normal form.  Floats only appear in [`LorentzFrame`], and that
//! constructor re-checks its own output against exact data before returning.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Dense symmetric matrix with integer entries, the Gram matrix of an
/// intersection form on a Néron–Severi lattice (or any other integral
/// symmetric bilinear form).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSymMatrix {
    n: usize,
    a: Vec<BigInt>,
}

/// Counts of positive, negative and zero eigenvalues of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Inertia {
    /// Signature (1, n−1) with no radical — the shape every Néron–Severi
    /// lattice of an abelian surface must have.
    pub fn is_hyperbolic(&self, n: usize) -> bool {
        self.pos == 1 && self.zero == 0 && self.pos + self.neg == n
    }
}

impl IntSymMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let big: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_bigint_rows(big)
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("expected {n} x {n} matrix")));
        }
        let mut a = Vec::with_capacity(n * n);
        for r in &rows {
            a.extend(r.iter().cloned());
        }
        let m = IntSymMatrix { n, a };
        for i in 0..n {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_f64().expect("BigInt -> f64")).collect())
            .collect()
    }

    /// x^T S y for integer vectors.
    pub fn pair_i64(&self, x: &[i64], y: &[i64]) -> Result<BigInt> {
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::Dimension(format!("vectors must have length {}", self.n)));
        }
        let mut acc = BigInt::zero();
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                acc += BigInt::from(xi) * self.get(i, j) * BigInt::from(yj);
            }
        }
        Ok(acc)
    }

    /// x^T S x for an integer vector.
    pub fn quad_i64(&self, x: &[i64]) -> Result<BigInt> {
        self.pair_i64(x, x)
    }

    /// U^T S U for an integer matrix U (given as rows).  The Gram matrix of
    /// the same form expressed in the basis whose vectors are U's columns.
    pub fn congruent(&self, u: &[Vec<BigInt>]) -> Result<IntSymMatrix> {
        let n = self.n;
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("transform must be {n} x {n}")));
        }
        let mut su = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for (k, row) in u.iter().enumerate() {
                    acc += self.get(i, k) * &row[j];
                }
                su[i * n + j] = acc;
            }
        }
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for k in 0..n {
                    acc += &u[k][i] * &su[k * n + j];
                }
                out[i * n + j] = acc;
            }
        }
        IntSymMatrix::from_bigint_rows((0..n).map(|i| out[i * n..(i + 1) * n].to_vec()).collect())
    }

    /// Exact determinant by fraction-free Bareiss elimination with row
    /// pivoting.  The empty matrix has determinant 1.
    pub fn det_exact(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = self.rows();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev; // exact division (Bareiss)
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Inertia (p, q, z) of the form, by congruent diagonalisation over Q.
    /// Zero diagonal pivots are repaired by the symmetric row+column
    /// addition trick, so no square roots and no floats are involved.
    pub fn signature(&self) -> Inertia {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::from_integer(self.get(i, j).clone())).collect())
            .collect();
        let mut inertia = Inertia { pos: 0, neg: 0, zero: 0 };
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                    a.swap(k, i);
                    for row in a.iter_mut() {
                        row.swap(k, i);
                    }
                } else if let Some(i) = (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    // a[i][i] = 0 here, so after row_k += row_i and
                    // col_k += col_i the new diagonal entry is 2 a[i][k] != 0.
                    let ri = a[i].clone();
                    for (j, v) in ri.iter().enumerate() {
                        let s = &a[k][j] + v;
                        a[k][j] = s;
                    }
                    for row in a.iter_mut() {
                        let s = &row[k] + &row[i];
                        row[k] = s;
                    }
                } else {
                    // Row and column k vanish on the remaining block.
                    inertia.zero += 1;
                    continue;
                }
            }
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                inertia.pos += 1;
            } else {
                inertia.neg += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                let rk = a[k].clone();
                for (j, v) in rk.iter().enumerate() {
                    let s = &a[i][j] - &f * v;
                    a[i][j] = s;
                }
                for row in a.iter_mut() {
                    let s = &row[i] - &f * &row[k];
                    row[i] = s;
                }
            }
        }
        inertia
    }
}

fn row_sub(rows: &mut [Vec<BigInt>], i: usize, q: &BigInt, r: usize) {
    let src = rows[r].clone();
    for (j, v) in src.iter().enumerate() {
        let s = &rows[i][j] - q * v;
        rows[i][j] = s;
    }
}

fn negate_row(row: &mut [BigInt]) {
    for v in row.iter_mut() {
        let neg = -(v.clone());
        *v = neg;
    }
}

fn hnf_core(mut a: Vec<Vec<BigInt>>, want_u: bool) -> (Vec<Vec<BigInt>>, Option<Vec<Vec<BigInt>>>) {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut u: Option<Vec<Vec<BigInt>>> = want_u.then(|| {
        (0..m)
            .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    });
    let mut r = 0usize;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if a[i][c].is_zero() {
                    continue;
                }
                best = match best {
                    Some(b) if a[b][c].magnitude() <= a[i][c].magnitude() => Some(b),
                    _ => Some(i),
                };
            }
            let Some(b) = best else { break };
            if b != r {
                a.swap(r, b);
                if let Some(u) = &mut u {
                    u.swap(r, b);
                }
            }
            let pivot = a[r][c].clone();
            let mut clean = true;
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = num_integer::Integer::div_floor(&a[i][c], &pivot);
                if !q.is_zero() {
                    row_sub(&mut a, i, &q, r);
                    if let Some(u) = &mut u {
                        row_sub(u, i, &q, r);
                    }
                }
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].sign() == Sign::Minus {
            negate_row(&mut a[r]);
            if let Some(u) = &mut u {
                negate_row(&mut u[r]);
            }
        }
        let pivot = a[r][c].clone();
        for k in 0..r {
            let q = num_integer::Integer::div_floor(&a[k][c], &pivot);
            if !q.is_zero() {
                row_sub(&mut a, k, &q, r);
                if let Some(u) = &mut u {
                    row_sub(u, k, &q, r);
                }
            }
        }
        r += 1;
    }
    (a, u)
}

/// Canonical basis of the lattice spanned by `gens`: row-style Hermite
/// normal form with positive pivots and the entries above each pivot
/// reduced into [0, pivot).  Zero rows are dropped, so the result depends
/// only on the lattice, not on the generating set.
pub fn hnf_basis(gens: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let n = gens.first().map_or(0, |r| r.len());
    if gens.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("generators must share a length".into()));
    }
    let (h, _) = hnf_core(gens.to_vec(), false);
    Ok(h.into_iter().filter(|row| !row.iter().all(|x| x.is_zero())).collect())
}

/// Row matrix over the integers, the working representation for HNF results.
pub type IntRows = Vec<Vec<BigInt>>;

/// Hermite normal form with its unimodular transform: returns (H, U) with
/// U·A = H, det U = ±1.  H keeps its zero rows so U stays square.
pub fn hnf_with_transform(a: &[Vec<BigInt>]) -> Result<(IntRows, IntRows)> {
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("rows must share a length".into()));
    }
    let (h, u) = hnf_core(a.to_vec(), true);
    Ok((h, u.expect("transform requested")))
}

/// Canonical basis of { v : A v = 0 } over Z, via the HNF transform of A^T:
/// the transform rows matching zero HNF rows span the kernel.
pub fn right_kernel(a: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("rows must share a length".into()));
    }
    let at: Vec<Vec<BigInt>> = (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect();
    let (h, u) = hnf_with_transform(&at)?;
    let mut gens = Vec::new();
    for (row_h, row_u) in h.iter().zip(u.iter()) {
        if row_h.iter().all(|x| x.is_zero()) {
            gens.push(row_u.clone());
        }
    }
    hnf_basis(&gens)
}

/// Basis change T with T^T S T = diag(1, −1, …, −1), first column H/√(H²).
/// Exists exactly when S has signature (1, n−1); maps the unit "light cone"
/// coordinates onto the positive cone of S.
#[derive(Clone, Debug)]
pub struct LorentzFrame {
    n: usize,
    /// Column vectors of T.
    cols: Vec<Vec<f64>>,
    det_abs: f64,
}

impl LorentzFrame {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn det_abs(&self) -> f64 {
        self.det_abs
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.cols[j]
    }

    /// x = T y.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (col, &yj) in self.cols.iter().zip(y.iter()) {
            for (xi, &ci) in x.iter_mut().zip(col.iter()) {
                *xi += yj * ci;
            }
        }
        x
    }

    /// x = T y written into a caller-owned buffer (hot path of the sampler).
    pub fn apply_into(&self, y: &[f64], x: &mut [f64]) {
        x.fill(0.0);
        for (col, &yj) in self.cols.iter().zip(y.iter()) {
            for (xi, &ci) in x.iter_mut().zip(col.iter()) {
                *xi += yj * ci;
            }
        }
    }
}

fn bilinear(s: &[Vec<f64>], u: &[f64], v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        if ui == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for (j, &vj) in v.iter().enumerate() {
            row += s[i][j] * vj;
        }
        acc += ui * row;
    }
    acc
}

fn det_f64(t: &[Vec<f64>]) -> f64 {
    let n = t.len();
    let mut m: Vec<Vec<f64>> = t.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let (piv, _) =
            (k..n).map(|i| (i, m[i][k].abs())).max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        if m[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        det *= m[k][k];
        let (pivot_rows, rest) = m.split_at_mut(k + 1);
        let pk = &pivot_rows[k];
        for row in rest.iter_mut() {
            let f = row[k] / pk[k];
            for (j, &pv) in pk.iter().enumerate().skip(k) {
                row[j] -= f * pv;
            }
        }
    }
    det
}

const FRAME_TOL: f64 = 1e-12;

/// Builds the Lorentz frame for (S, H): requires exact signature (1, n−1)
/// and H² > 0.  The first column is H/√(H²); the rest come from
/// Gram–Schmidt against −S over the standard basis, with one
/// re-orthogonalisation pass.  The constructor verifies
/// ‖T^T S T − diag(1,−1,…,−1)‖_max ≤ 1e−12 and |det T|·√|det S| = 1 to
/// 1e−12 before returning.
pub fn lorentz_frame(s: &IntSymMatrix, h: &[i64]) -> Result<LorentzFrame> {
    let n = s.dim();
    if h.len() != n {
        return Err(Error::Dimension(format!("ample class must have length {n}")));
    }
    let inertia = s.signature();
    if !inertia.is_hyperbolic(n) {
        return Err(Error::Signature { pos: inertia.pos, neg: inertia.neg, zero: inertia.zero });
    }
    let h2 = s.quad_i64(h)?;
    if !h2.is_positive() {
        return Err(Error::NotPositive);
    }
    let sf = s.to_f64();
    let h2f = h2.to_f64().expect("BigInt -> f64");
    let scale = 1.0 / h2f.sqrt();
    let b0: Vec<f64> = h.iter().map(|&x| x as f64 * scale).collect();
    let mut cols = vec![b0];
    let max_entry = sf.iter().flat_map(|r| r.iter()).fold(0.0f64, |m, &x| m.max(x.abs()));
    let indep_tol = 1e-8 * (1.0 + max_entry);
    for idx in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = vec![0.0; n];
        v[idx] = 1.0;
        // Twice is enough: a second pass clears the rounding left by the first.
        for _ in 0..2 {
            let c0 = bilinear(&sf, &v, &cols[0]);
            for (vi, &bi) in v.iter_mut().zip(cols[0].iter()) {
                *vi -= c0 * bi;
            }
            for b in &cols[1..] {
                let c = bilinear(&sf, &v, b);
                for (vi, &bi) in v.iter_mut().zip(b.iter()) {
                    *vi += c * bi;
                }
            }
        }
        let nn = -bilinear(&sf, &v, &v);
        if nn > indep_tol {
            let inv = 1.0 / nn.sqrt();
            for vi in v.iter_mut() {
                *vi *= inv;
            }
            cols.push(v);
        }
    }
    if cols.len() < n {
        return Err(Error::Domain("failed to complete a Lorentz frame".into()));
    }
    let t: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
    let det_abs = det_f64(&t).abs();
    for p in 0..n {
        for q in 0..n {
            let want = match (p, q) {
                (0, 0) => 1.0,
                _ if p == q => -1.0,
                _ => 0.0,
            };
            let got = bilinear(&sf, &cols[p], &cols[q]);
            if (got - want).abs() > FRAME_TOL {
                return Err(Error::Domain(format!(
                    "Lorentz frame residual {:.3e} at ({p},{q}) exceeds {FRAME_TOL:.0e}",
                    (got - want).abs()
                )));
            }
        }
    }
    let det_s = s.det_exact().magnitude().to_f64().expect("BigInt -> f64");
    let rel = (det_abs * det_s.sqrt() - 1.0).abs();
    if rel > FRAME_TOL {
        return Err(Error::Domain(format!(
            "Lorentz frame volume defect {rel:.3e} exceeds {FRAME_TOL:.0e}"
        )));
    }
    Ok(LorentzFrame { n, cols, det_abs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| bi(x)).collect()).collect()
    }

    /// Textbook cofactor expansion, the independent determinant oracle.
    fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = (1..n)
                .map(|i| (0..n).filter(|&c| c != j).map(|c| m[i][c].clone()).collect())
                .collect();
            let term = &m[0][j] * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// Product of random elementary row operations: always det ±1.
    fn random_unimodular(rng: &mut StdRng, n: usize, steps: usize) -> Vec<Vec<BigInt>> {
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        for _ in 0..steps {
            match rng.random_range(0..3) {
                0 => {
                    let i = rng.random_range(0..n);
                    let j = rng.random_range(0..n);
                    if i != j {
                        let c = bi(rng.random_range(-3..=3));
                        let src = u[j].clone();
                        for (k, v) in src.iter().enumerate() {
                            let s = &u[i][k] + &c * v;
                            u[i][k] = s;
                        }
                    }
                }
                1 => {
                    let i = rng.random_range(0..n);
                    let j = rng.random_range(0..n);
                    u.swap(i, j);
                }
                _ => {
                    let i = rng.random_range(0..n);
                    negate_row(&mut u[i]);
                }
            }
        }
        u
    }

    fn in_lattice(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for row in basis {
            let c = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if (&v[c] % &row[c]).is_zero() {
                let q = &v[c] / &row[c];
                for (k, r) in row.iter().enumerate() {
                    let s = &v[k] - &q * r;
                    v[k] = s;
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    #[test]
    fn det_empty_matrix_is_one() {
        let m = IntSymMatrix::from_rows(&[]).unwrap();
        assert_eq!(m.det_exact(), bi(1));
        assert_eq!(m.signature(), Inertia { pos: 0, neg: 0, zero: 0 });
    }

    #[test]
    fn det_known_values() {
        let hyp = IntSymMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(hyp.det_exact(), bi(-1));
        let t1 = IntSymMatrix::from_rows(&[vec![2, 2], vec![2, -8]]).unwrap();
        assert_eq!(t1.det_exact(), bi(-20));
        let sing = IntSymMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(sing.det_exact(), bi(0));
    }

    #[test]
    fn rejects_non_symmetric_and_ragged() {
        assert!(matches!(
            IntSymMatrix::from_rows(&[vec![1, 2], vec![3, 4]]),
            Err(Error::NotSymmetric)
        ));
        assert!(matches!(IntSymMatrix::from_rows(&[vec![1, 2]]), Err(Error::Dimension(_))));
    }

    #[test]
    fn signature_known_values() {
        let diag =
            IntSymMatrix::from_rows(&[vec![2, 0, 0], vec![0, -6, 0], vec![0, 0, -6]]).unwrap();
        assert_eq!(diag.signature(), Inertia { pos: 1, neg: 2, zero: 0 });
        let hyp = IntSymMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(hyp.signature(), Inertia { pos: 1, neg: 1, zero: 0 });
        let degenerate =
            IntSymMatrix::from_rows(&[vec![2, 0, 0], vec![0, 0, 0], vec![0, 0, -2]]).unwrap();
        assert_eq!(degenerate.signature(), Inertia { pos: 1, neg: 1, zero: 1 });
        let rank1 = IntSymMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(rank1.signature(), Inertia { pos: 1, neg: 0, zero: 1 });
    }

    #[test]
    fn signature_invariant_under_unimodular_congruence() {
        let mut rng = StdRng::seed_from_u64(42);
        for case in 0..200 {
            let n = rng.random_range(1..=6);
            let mut rows = vec![vec![0i64; n]; n];
            #[allow(clippy::needless_range_loop)] // mirrored writes
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.random_range(-6..=6);
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let s = IntSymMatrix::from_rows(&rows).unwrap();
            let u = random_unimodular(&mut rng, n, 12);
            let su = s.congruent(&u).unwrap();
            assert_eq!(s.signature(), su.signature(), "case {case}");
            assert_eq!(s.det_exact().magnitude(), su.det_exact().magnitude(), "case {case}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn det_matches_cofactor_expansion(
            n in 1usize..=5,
            vals in proptest::collection::vec(-5i64..=5, 15),
        ) {
            let mut rows = vec![vec![0i64; n]; n];
            let mut k = 0;
            #[allow(clippy::needless_range_loop)] // mirrored writes
            for i in 0..n {
                for j in 0..=i {
                    rows[i][j] = vals[k];
                    rows[j][i] = vals[k];
                    k += 1;
                }
            }
            let m = IntSymMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(m.det_exact(), det_cofactor(&m.rows()));
        }
    }

    #[test]
    fn hnf_of_six_zero_four_two() {
        // Lattice spanned by (6,0) and (4,2): index 12 in Z², canonical
        // basis {(2,4), (0,6)}.  Confirmed by the membership scan below.
        let h = hnf_basis(&rows(&[&[6, 0], &[4, 2]])).unwrap();
        assert_eq!(h, rows(&[&[2, 4], &[0, 6]]));
        for x in -12i64..=12 {
            for y in -12i64..=12 {
                let v = [bi(x), bi(y)];
                let by_scan =
                    (-6i64..=6).any(|a| (-6i64..=6).any(|b| 6 * a + 4 * b == x && 2 * b == y));
                assert_eq!(in_lattice(&h, &v), by_scan, "({x},{y})");
            }
        }
    }

    #[test]
    fn hnf_is_canonical_for_the_lattice() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.random_range(1..=4);
            let m = rng.random_range(n..=n + 2);
            let gens: Vec<Vec<BigInt>> =
                (0..m).map(|_| (0..n).map(|_| bi(rng.random_range(-9..=9))).collect()).collect();
            let h1 = hnf_basis(&gens).unwrap();
            // Same lattice, different generators: shuffled + random integer
            // combinations appended.
            let mut gens2 = gens.clone();
            if m >= 2 {
                let mut extra = vec![BigInt::zero(); n];
                for g in &gens {
                    let c = bi(rng.random_range(-3..=3));
                    for (k, v) in g.iter().enumerate() {
                        let s = &extra[k] + &c * v;
                        extra[k] = s;
                    }
                }
                gens2.push(extra);
            }
            gens2.reverse();
            let h2 = hnf_basis(&gens2).unwrap();
            assert_eq!(h1, h2);
            let h3 = hnf_basis(&h1).unwrap();
            assert_eq!(h1, h3, "idempotent");
            for g in &gens {
                if h1.is_empty() {
                    assert!(g.iter().all(|x| x.is_zero()));
                } else {
                    assert!(in_lattice(&h1, g));
                }
            }
        }
    }

    #[test]
    fn hnf_transform_reconstructs_input() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(1..=4);
            let m = rng.random_range(1..=5);
            let a: Vec<Vec<BigInt>> =
                (0..m).map(|_| (0..n).map(|_| bi(rng.random_range(-9..=9))).collect()).collect();
            let (h, u) = hnf_with_transform(&a).unwrap();
            assert_eq!(h.len(), m);
            // U·A == H
            for i in 0..m {
                for j in 0..n {
                    let mut acc = BigInt::zero();
                    for k in 0..m {
                        acc += &u[i][k] * &a[k][j];
                    }
                    assert_eq!(acc, h[i][j]);
                }
            }
            assert_eq!(det_cofactor(&u).magnitude(), bi(1).magnitude());
        }
    }

    #[test]
    fn kernel_examples() {
        let k = right_kernel(&rows(&[&[2, 4]])).unwrap();
        assert_eq!(k, rows(&[&[2, -1]]));

        let k = right_kernel(&rows(&[&[1, 0], &[0, 1]])).unwrap();
        assert!(k.is_empty());

        let a = rows(&[&[1, 1, 1]]);
        let k = right_kernel(&a).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: BigInt = v.iter().sum();
            assert!(dot.is_zero());
        }
        // Completeness on a small box: every integer solution lies in the
        // lattice the kernel basis spans.
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                for z in -3i64..=3 {
                    if x + y + z == 0 {
                        assert!(in_lattice(&k, &[bi(x), bi(y), bi(z)]));
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_congruence_system() {
        // { v : N v ≡ 0 mod D } via the kernel of [N | -D·I], the pattern
        // the Hom-lattice solver uses.
        let n_mat = rows(&[&[2, 0], &[0, 2]]);
        let d = bi(4);
        let a: Vec<Vec<BigInt>> = (0..2)
            .map(|i| {
                let mut row = n_mat[i].clone();
                for j in 0..2 {
                    row.push(if i == j { -&d } else { BigInt::zero() });
                }
                row
            })
            .collect();
        let k = right_kernel(&a).unwrap();
        let projected: Vec<Vec<BigInt>> = k.iter().map(|v| v[..2].to_vec()).collect();
        let h = hnf_basis(&projected).unwrap();
        assert_eq!(h, rows(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn lorentz_frame_hyperbolic_cases() {
        for (rows_s, h) in [
            (vec![vec![2]], vec![1]),
            (vec![vec![0, 1], vec![1, 0]], vec![1, 1]),
            (vec![vec![2, 2], vec![2, -8]], vec![1, 0]),
            (vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -4]], vec![1, 1, 0]),
        ] {
            let s = IntSymMatrix::from_rows(&rows_s).unwrap();
            let f = lorentz_frame(&s, &h).unwrap();
            let det_s = s.det_exact().magnitude().to_f64().unwrap();
            let err = (f.det_abs() * det_s.sqrt() - 1.0).abs();
            assert!(err <= 1e-12, "volume defect {err:.3e}");
            // First column really is H/√(H²).
            let h2 = s.quad_i64(&h).unwrap().to_f64().unwrap();
            for (i, &hi) in h.iter().enumerate() {
                assert!((f.column(0)[i] - hi as f64 / h2.sqrt()).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn lorentz_frame_rejects_bad_input() {
        let pd = IntSymMatrix::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert!(matches!(lorentz_frame(&pd, &[1, 0]), Err(Error::Signature { .. })));
        let s = IntSymMatrix::from_rows(&[vec![2, 0], vec![0, -2]]).unwrap();
        assert!(matches!(lorentz_frame(&s, &[0, 1]), Err(Error::NotPositive)));
        assert!(matches!(lorentz_frame(&s, &[1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn apply_matches_columns() {
        let s = IntSymMatrix::from_rows(&[vec![2, 2], vec![2, -8]]).unwrap();
        let f = lorentz_frame(&s, &[1, 0]).unwrap();
        let y = [0.3, -1.7];
        let x = f.apply(&y);
        let mut buf = [0.0; 2];
        f.apply_into(&y, &mut buf);
        for i in 0..2 {
            let manual = y[0] * f.column(0)[i] + y[1] * f.column(1)[i];
            assert!((x[i] - manual).abs() <= 1e-15);
            assert_eq!(x[i], buf[i]);
        }
    }
}
