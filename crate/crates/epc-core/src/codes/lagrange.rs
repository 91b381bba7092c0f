//! Lagrange-encoded schemes over pre-encoded product vectors.
//!
//! Both sides are interpolated through the data nodes x_1..x_K (K = L*R for a
//! batch of L), optionally extended with key nodes x_{K+1}..x_{K+T}. Worker i
//! receives the evaluations at y_i; the product polynomial has degree
//! L_A + L_B - 2, so any L_A + L_B - 1 results re-evaluate it at the data
//! nodes, where the elementwise products live.

use rand::Rng;

use crate::bilinear::{BilinearConstruction, Side};
use crate::codes::CodedShare;
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::matrix::{BlockMatrix, Matrix};
use crate::poly::lagrange_row;

/// Appends `t` uniformly random key matrices to a pre-encoded vector. The
/// keys are returned for test introspection only; they never travel in shares.
pub fn pad_with_keys<R: Rng + ?Sized>(
    gf: Gf,
    mut vec: Vec<Matrix>,
    t: usize,
    rng: &mut R,
) -> (Vec<Matrix>, Vec<Matrix>) {
    let (rows, cols) = match vec.first() {
        Some(m) => (m.rows(), m.cols()),
        None => return (vec, Vec::new()),
    };
    let keys: Vec<Matrix> = (0..t).map(|_| Matrix::random(gf, rows, cols, rng)).collect();
    vec.extend(keys.iter().cloned());
    (vec, keys)
}

/// Pre-encodes a batch of L block grids through the construction and
/// concatenates the results l-major: entry l*R + i is the i-th coded matrix
/// of pair l. Downstream coding treats the result as a vector of length L*R.
pub fn batch_pre_encode(
    gf: Gf,
    cons: &BilinearConstruction,
    side: Side,
    grids: &[BlockMatrix],
) -> Result<Vec<Matrix>> {
    let mut out = Vec::with_capacity(grids.len() * cons.rank());
    for grid in grids {
        if let Some(first) = grids.first() {
            if grid.block_shape() != first.block_shape() {
                return Err(Error::ShapeMismatch(
                    "batch entries must share one block shape".into(),
                ));
            }
        }
        out.extend(cons.pre_encode(gf, side, grid)?);
    }
    Ok(out)
}

/// Evaluates the Lagrange polynomial through (nodes[j], vec[j]) at `at`.
/// The basis is taken over exactly the first `vec.len()` nodes.
pub fn encode_side(gf: Gf, vec: &[Matrix], nodes: &[u64], at: u64) -> Matrix {
    let row = lagrange_row(gf, &nodes[..vec.len()], at);
    let (r, c) = (vec[0].rows(), vec[0].cols());
    let mut acc = Matrix::zeros(r, c);
    for (coeff, m) in row.iter().zip(vec) {
        acc.add_scaled_assign(gf, *coeff, m);
    }
    acc
}

/// Encodes all worker shares. `data_len` is K, the count of data nodes the
/// worker points must avoid; key nodes may coincide with worker points.
pub fn encode_shares(
    gf: Gf,
    a_vec: &[Matrix],
    b_vec: &[Matrix],
    nodes: &[u64],
    data_len: usize,
    worker_points: &[u64],
    systematic: bool,
) -> Result<Vec<CodedShare>> {
    if !systematic {
        for &y in worker_points {
            if nodes[..data_len].contains(&y) {
                return Err(Error::PointCollision(y));
            }
        }
    }
    Ok(worker_points
        .iter()
        .enumerate()
        .map(|(w, &y)| CodedShare {
            worker: w,
            a: encode_side(gf, a_vec, nodes, y),
            b: encode_side(gf, b_vec, nodes, y),
        })
        .collect())
}

/// Re-evaluates the unique polynomial through `used` at each target node.
/// Denominator products are shared across targets.
pub fn recover_products(gf: Gf, used: &[(u64, Matrix)], targets: &[u64]) -> Result<Vec<Matrix>> {
    let ys: Vec<u64> = used.iter().map(|(y, _)| *y).collect();
    for (i, &y) in ys.iter().enumerate() {
        if ys[..i].contains(&y) {
            return Err(Error::DuplicatePoint(y));
        }
    }
    let k = ys.len();
    let mut inv_den = Vec::with_capacity(k);
    for j in 0..k {
        let mut den = 1u64;
        for (i, &yi) in ys.iter().enumerate() {
            if i != j {
                den = gf.mul(den, gf.sub(ys[j], yi));
            }
        }
        inv_den.push(gf.inv(den)?);
    }
    let (r, c) = (used[0].1.rows(), used[0].1.cols());
    let mut out = Vec::with_capacity(targets.len());
    for &t in targets {
        let mut prefix = vec![1u64; k + 1];
        for i in 0..k {
            prefix[i + 1] = gf.mul(prefix[i], gf.sub(t, ys[i]));
        }
        let mut suffix = vec![1u64; k + 1];
        for i in (0..k).rev() {
            suffix[i] = gf.mul(suffix[i + 1], gf.sub(t, ys[i]));
        }
        let mut acc = Matrix::zeros(r, c);
        for (j, (_, value)) in used.iter().enumerate() {
            let coeff = gf.mul(gf.mul(prefix[j], suffix[j + 1]), inv_den[j]);
            acc.add_scaled_assign(gf, coeff, value);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Splits L*R recovered products into L chunks, combines each through
/// tensor c, and assembles the L output matrices.
pub fn combine_batch(
    gf: Gf,
    cons: &BilinearConstruction,
    batch: usize,
    products: &[Matrix],
) -> Result<Vec<Matrix>> {
    if products.len() != batch * cons.rank() {
        return Err(Error::DimensionMismatch(format!(
            "{} products for batch {} of rank {}",
            products.len(),
            batch,
            cons.rank()
        )));
    }
    products
        .chunks(cons.rank())
        .map(|chunk| Ok(cons.combine(gf, chunk)?.assemble()))
        .collect()
}

/// Looks for a result at every data node; when the systematic workers all
/// answered, their values are the products themselves and no interpolation
/// is needed.
fn systematic_products(results: &[(u64, Matrix)], data_nodes: &[u64]) -> Option<Vec<Matrix>> {
    data_nodes
        .iter()
        .map(|x| results.iter().find(|(y, _)| y == x).map(|(_, v)| v.clone()))
        .collect()
}

/// Decodes the product from results in arrival order. Threshold is
/// l_a + l_b - 1; extras beyond it are ignored. With `systematic` set, a
/// result set covering all data nodes decodes directly even below threshold.
#[allow(clippy::too_many_arguments)]
pub fn decode(
    gf: Gf,
    cons: &BilinearConstruction,
    batch: usize,
    l_a: usize,
    l_b: usize,
    nodes: &[u64],
    results: &[(u64, Matrix)],
    systematic: bool,
) -> Result<Vec<Matrix>> {
    let k = batch * cons.rank();
    if systematic {
        if let Some(products) = systematic_products(results, &nodes[..k]) {
            return combine_batch(gf, cons, batch, &products);
        }
    }
    let needed = l_a + l_b - 1;
    if results.len() < needed {
        return Err(Error::NotEnoughResults { needed, got: results.len() });
    }
    let products = recover_products(gf, &results[..needed], &nodes[..k])?;
    combine_batch(gf, cons, batch, &products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::MERSENNE61;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    struct Fixture {
        a: Matrix,
        b: Matrix,
        nodes: Vec<u64>,
        results: Vec<(u64, Matrix)>,
        l_a: usize,
        l_b: usize,
    }

    fn setup(gf: Gf, t_a: usize, t_b: usize, n_workers: usize, rng: &mut ChaCha12Rng) -> Fixture {
        let cons = BilinearConstruction::strassen_222(gf);
        let a = Matrix::random(gf, 4, 4, rng);
        let b = Matrix::random(gf, 4, 4, rng);
        let ag = BlockMatrix::partition(&a, 2, 2).unwrap();
        let bg = BlockMatrix::partition(&b, 2, 2).unwrap();
        let a_vec = cons.pre_encode(gf, Side::A, &ag).unwrap();
        let b_vec = cons.pre_encode(gf, Side::B, &bg).unwrap();
        let t = t_a.max(t_b);
        let (a_vec, _) = pad_with_keys(gf, a_vec, t_a, rng);
        let (b_vec, _) = pad_with_keys(gf, b_vec, t_b, rng);
        let nodes: Vec<u64> = (0..(7 + t) as u64).collect();
        let ys: Vec<u64> = (0..n_workers as u64).map(|i| (7 + t) as u64 + i).collect();
        let shares = encode_shares(gf, &a_vec, &b_vec, &nodes, 7, &ys, false).unwrap();
        let results: Vec<(u64, Matrix)> = shares
            .iter()
            .map(|s| (ys[s.worker], s.a.t_mul(gf, &s.b).unwrap()))
            .collect();
        Fixture { a, b, nodes, results, l_a: a_vec.len(), l_b: b_vec.len() }
    }

    #[test]
    fn improved_decodes_from_any_threshold_subset() {
        let gf = Gf::new(MERSENNE61).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        let cons = BilinearConstruction::strassen_222(gf);
        let fx = setup(gf, 0, 0, 14, &mut rng);
        assert_eq!((fx.l_a, fx.l_b), (7, 7));
        let want = fx.a.t_mul(gf, &fx.b).unwrap();
        // all 14 leave-one-out subsets of size 13
        for skip in 0..14 {
            let subset: Vec<(u64, Matrix)> = fx
                .results
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, r)| r.clone())
                .collect();
            let got = decode(gf, &cons, 1, fx.l_a, fx.l_b, &fx.nodes, &subset, false).unwrap();
            assert_eq!(got, vec![want.clone()]);
        }
        assert!(matches!(
            decode(gf, &cons, 1, fx.l_a, fx.l_b, &fx.nodes, &fx.results[..12], false),
            Err(Error::NotEnoughResults { needed: 13, got: 12 })
        ));
    }

    #[test]
    fn secure_paddings_shift_the_threshold() {
        let gf = Gf::new(MERSENNE61).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(22);
        let cons = BilinearConstruction::strassen_222(gf);

        // one-sided, T = 2: L_A = 9, L_B = 7, threshold 15
        let fx = setup(gf, 2, 0, 16, &mut rng);
        assert_eq!((fx.l_a, fx.l_b), (9, 7));
        let got = decode(gf, &cons, 1, fx.l_a, fx.l_b, &fx.nodes, &fx.results[..15], false).unwrap();
        assert_eq!(got, vec![fx.a.t_mul(gf, &fx.b).unwrap()]);

        // fully secure, T = 1: threshold 15
        let fx = setup(gf, 1, 1, 15, &mut rng);
        assert_eq!((fx.l_a, fx.l_b), (8, 8));
        let got = decode(gf, &cons, 1, fx.l_a, fx.l_b, &fx.nodes, &fx.results, false).unwrap();
        assert_eq!(got, vec![fx.a.t_mul(gf, &fx.b).unwrap()]);
    }

    #[test]
    fn shuffled_results_decode_identically() {
        let gf = Gf::new(MERSENNE61).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let cons = BilinearConstruction::strassen_222(gf);
        let fx = setup(gf, 0, 0, 13, &mut rng);
        let forward = decode(gf, &cons, 1, fx.l_a, fx.l_b, &fx.nodes, &fx.results, false).unwrap();
        let mut reversed = fx.results.clone();
        reversed.reverse();
        let backward = decode(gf, &cons, 1, fx.l_a, fx.l_b, &fx.nodes, &reversed, false).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn worker_points_must_avoid_data_nodes() {
        let gf = Gf::new(101).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(24);
        let cons = BilinearConstruction::naive(1, 1, 1);
        let grid = BlockMatrix::partition(&Matrix::random(gf, 1, 1, &mut rng), 1, 1).unwrap();
        let vec = cons.pre_encode(gf, Side::A, &grid).unwrap();
        let nodes = [0u64];
        let err = encode_shares(gf, &vec, &vec, &nodes, 1, &[0], false).unwrap_err();
        assert_eq!(err, Error::PointCollision(0));
        // systematic mode permits y = x deliberately
        assert!(encode_shares(gf, &vec, &vec, &nodes, 1, &[0], true).is_ok());
    }

    #[test]
    fn zero_keys_degenerate_to_plain_vector() {
        let gf = Gf::new(101).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(25);
        let vec = vec![Matrix::random(gf, 2, 2, &mut rng)];
        let (padded, keys) = pad_with_keys(gf, vec.clone(), 0, &mut rng);
        assert_eq!(padded, vec);
        assert!(keys.is_empty());
    }
}
