//! Fixture builders shared by the benchmarks.

use nefvol::conevol::TruncatedCone;
use nefvol::exact_linalg::IntSymMatrix;
use nefvol::quaternion::{QuatAlg, QuatElem};
use nefvol::surfaces::{build_model, SurfaceModel, SurfaceSpec};

/// One model per rank 1..=4.
pub fn rank_ladder() -> Vec<(SurfaceModel, Vec<i64>)> {
    let alg = QuatAlg::new(2, -3).expect("algebra");
    let specs: [(SurfaceSpec, Vec<i64>); 4] = [
        (SurfaceSpec::IntegerMult, vec![1]),
        (SurfaceSpec::RealMult { d: 5, f: 2 }, vec![2, 1]),
        (
            SurfaceSpec::QuaternionMult { a: QuatElem::gen_i(alg), b: QuatElem::gen_ij(alg) },
            vec![1, 0, 0],
        ),
        (SurfaceSpec::ProductIsogenousCm { d: -1, f1: 2, f2: 3 }, vec![1, 1, 0, 0]),
    ];
    specs.into_iter().map(|(spec, h)| (build_model(&spec).expect("model"), h)).collect()
}

pub fn rank4_cone() -> TruncatedCone {
    let (model, h) = rank_ladder().pop().expect("rank 4");
    TruncatedCone::new(model.gram().clone(), h).expect("cone")
}

/// A mildly ill-conditioned integer symmetric matrix for the exact kernels.
pub fn dense_gram(n: usize) -> IntSymMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    #[allow(clippy::needless_range_loop)] // mirrored writes
    for i in 0..n {
        for j in 0..=i {
            let v = ((i * j) as i64 % 7) - 3 + if i == j { 12 } else { 0 };
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    IntSymMatrix::from_rows(&rows).expect("symmetric")
}
