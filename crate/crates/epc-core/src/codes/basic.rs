//! The basic entangled polynomial code.
//!
//! A's blocks ride on exponents j + kp and B's on p-1-j + k'pm, so the
//! product polynomial has degree pmn + p - 2 and the output block C_{k,k'}
//! sits alone at exponent (p-1) + kp + k'pm. Recovery threshold pmn + p - 1.

use crate::codes::CodedShare;
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::matrix::{BlockMatrix, Matrix};
use crate::poly::interpolate_matrix;

pub fn threshold(p: usize, m: usize, n: usize) -> usize {
    p * m * n + p - 1
}

/// Encodes both inputs at each worker point. With p = 1 this reduces to the
/// plain polynomial code (threshold mn).
pub fn encode(
    gf: Gf,
    a: &BlockMatrix,
    b: &BlockMatrix,
    worker_points: &[u64],
) -> Result<Vec<CodedShare>> {
    let p = a.grid_rows();
    if b.grid_rows() != p {
        return Err(Error::DimensionMismatch(
            "A and B must share the block row count".into(),
        ));
    }
    let m = a.grid_cols();
    let n = b.grid_cols();
    for (i, &y) in worker_points.iter().enumerate() {
        if worker_points[..i].contains(&y) {
            return Err(Error::DuplicatePoint(y));
        }
    }
    let (abr, abc) = a.block_shape();
    let (bbr, bbc) = b.block_shape();
    let mut shares = Vec::with_capacity(worker_points.len());
    for (w, &y) in worker_points.iter().enumerate() {
        let mut at = Matrix::zeros(abr, abc);
        let mut bt = Matrix::zeros(bbr, bbc);
        for j in 0..p {
            for k in 0..m {
                at.add_scaled_assign(gf, gf.pow(y, (j + k * p) as u64), a.block(j, k));
            }
            for k2 in 0..n {
                bt.add_scaled_assign(gf, gf.pow(y, (p - 1 - j + k2 * p * m) as u64), b.block(j, k2));
            }
        }
        shares.push(CodedShare { worker: w, a: at, b: bt });
    }
    Ok(shares)
}

/// Decodes from at least pmn + p - 1 results (taken first-by-arrival) with
/// distinct points, returning the assembled product A^T B.
pub fn decode(gf: Gf, p: usize, m: usize, n: usize, results: &[(u64, Matrix)]) -> Result<Matrix> {
    let needed = threshold(p, m, n);
    if results.len() < needed {
        return Err(Error::NotEnoughResults { needed, got: results.len() });
    }
    let used = &results[..needed];
    for (i, (y, _)) in used.iter().enumerate() {
        if used[..i].iter().any(|(prev, _)| prev == y) {
            return Err(Error::DuplicatePoint(*y));
        }
    }
    let points: Vec<(u64, &Matrix)> = used.iter().map(|(y, v)| (*y, v)).collect();
    let coeffs = interpolate_matrix(gf, &points)?;
    let blocks = (0..m)
        .flat_map(|k| (0..n).map(move |k2| (p - 1) + k * p + k2 * p * m))
        .map(|exp| coeffs[exp].clone())
        .collect();
    Ok(BlockMatrix::from_blocks(m, n, blocks)?.assemble())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::MERSENNE61;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn parts(m: &Matrix, gr: usize, gc: usize) -> BlockMatrix {
        BlockMatrix::partition(m, gr, gc).unwrap()
    }

    #[test]
    fn degenerate_single_block() {
        // p = m = n = 1: every share is (A, B) itself.
        let gf = Gf::new(11).unwrap();
        let a = Matrix::from_rows(gf, &[vec![1, 2], vec![3, 4]]).unwrap();
        let b = Matrix::from_rows(gf, &[vec![5, 6], vec![7, 8]]).unwrap();
        let shares = encode(gf, &parts(&a, 1, 1), &parts(&b, 1, 1), &[0, 1, 2]).unwrap();
        for s in &shares {
            assert_eq!(s.a, a);
            assert_eq!(s.b, b);
        }
        assert_eq!(threshold(1, 1, 1), 1);
    }

    #[test]
    fn column_partition_reduces_to_polynomial_code() {
        // p = 1: threshold is mn.
        assert_eq!(threshold(1, 2, 3), 6);
        let gf = Gf::new(MERSENNE61).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let a = Matrix::random(gf, 3, 4, &mut rng);
        let b = Matrix::random(gf, 3, 3, &mut rng);
        let ab = parts(&a, 1, 2);
        let bb = parts(&b, 1, 3);
        let ys: Vec<u64> = (0..8).collect();
        let shares = encode(gf, &ab, &bb, &ys).unwrap();
        let results: Vec<(u64, Matrix)> = shares
            .iter()
            .map(|s| (ys[s.worker], s.a.t_mul(gf, &s.b).unwrap()))
            .collect();
        let c = decode(gf, 1, 2, 3, &results).unwrap();
        assert_eq!(c, a.t_mul(gf, &b).unwrap());
    }

    #[test]
    fn decode_errors() {
        let gf = Gf::new(MERSENNE61).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let a = Matrix::random(gf, 4, 4, &mut rng);
        let b = Matrix::random(gf, 4, 4, &mut rng);
        let ys: Vec<u64> = (0..10).collect();
        let shares = encode(gf, &parts(&a, 2, 2), &parts(&b, 2, 2), &ys).unwrap();
        let results: Vec<(u64, Matrix)> = shares
            .iter()
            .map(|s| (ys[s.worker], s.a.t_mul(gf, &s.b).unwrap()))
            .collect();
        assert_eq!(threshold(2, 2, 2), 9);
        assert!(matches!(
            decode(gf, 2, 2, 2, &results[..8]),
            Err(Error::NotEnoughResults { needed: 9, got: 8 })
        ));
        let mut dup = results[..9].to_vec();
        dup[3] = dup[2].clone();
        assert!(matches!(decode(gf, 2, 2, 2, &dup), Err(Error::DuplicatePoint(_))));
        // any superset decodes identically (extras ignored after the first 9)
        let c_all = decode(gf, 2, 2, 2, &results).unwrap();
        let c_nine = decode(gf, 2, 2, 2, &results[..9]).unwrap();
        assert_eq!(c_all, c_nine);
        assert_eq!(c_all, a.t_mul(gf, &b).unwrap());
    }
}
