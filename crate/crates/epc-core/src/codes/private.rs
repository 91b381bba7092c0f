//! Query-driven encoders: the worker derives its coded input from a received
//! query alone, never learning which library entry was requested.
//!
//! Over nodes x_1..x_{K+1}, the Lagrange polynomial through a vector padded
//! with an unknown constant Y at x_{K+1}, divided by the scalar
//! c(x) = prod_{j<=K} (x - x_j)/(x_{K+1} - x_j), splits as Norm(x) + Y where
//! Norm is computable from the vector alone. Summing Norm^{(j)} over the query
//! entries therefore reproduces the requested polynomial's evaluation up to a
//! constant the master already fixed, and the master undoes c(y_i) (squared
//! when both sides are query-encoded) before interpolating.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bilinear::BilinearConstruction;
use crate::codes::lagrange::{combine_batch, recover_products};
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::matrix::Matrix;
use crate::poly::lagrange_row;

/// The normalization scalar c(at) = prod_{j in [K]} (at - x_j)/(x_{K+1} - x_j),
/// taken over `nodes` of length K + 1. Zero exactly on the data nodes.
pub fn normalization_c(gf: Gf, nodes: &[u64], at: u64) -> u64 {
    let k = nodes.len() - 1;
    let extra = nodes[k];
    let mut acc = 1u64;
    for &x in &nodes[..k] {
        let den = gf.inv(gf.sub(extra, x)).expect("distinct nodes");
        acc = gf.mul(acc, gf.mul(gf.sub(at, x), den));
    }
    acc
}

/// Evaluates Norm(at) = -sum_i vec_i * w_i * (at - x_{K+1}) / (at - x_i),
/// with w_i the Lagrange coefficients of the data nodes at x_{K+1}.
/// `at` must avoid the data nodes (the poles).
pub fn norm_basis_eval(gf: Gf, vec: &[Matrix], nodes: &[u64], at: u64) -> Result<Matrix> {
    let k = vec.len();
    assert!(nodes.len() > k);
    let extra = nodes[k];
    if nodes[..k].contains(&at) {
        return Err(Error::PoleAtNode(at));
    }
    let weights = lagrange_row(gf, &nodes[..k], extra);
    let lead = gf.sub(at, extra);
    let mut acc = Matrix::zeros(vec[0].rows(), vec[0].cols());
    for (i, m) in vec.iter().enumerate() {
        let denom = gf.inv(gf.sub(at, nodes[i]))?;
        let coeff = gf.neg(gf.mul(gf.mul(weights[i], lead), denom));
        acc.add_scaled_assign(gf, coeff, m);
    }
    Ok(acc)
}

/// Per-worker query: one domain element per library entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateQuery {
    pub entries: Vec<u64>,
}

/// What the master keeps after drawing queries: the worker points, and the
/// decoys z_j (None at the requested index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryDraw {
    pub worker_points: Vec<u64>,
    pub decoys: Vec<Option<u64>>,
}

/// Builds all worker queries from the drawn points and decoys: entry j of
/// query i is y_i at the requested index (the None slot) and z_j elsewhere.
pub fn build_queries(worker_points: &[u64], decoys: &[Option<u64>]) -> Vec<PrivateQuery> {
    worker_points
        .iter()
        .map(|&y| PrivateQuery {
            entries: decoys.iter().map(|z| z.unwrap_or(y)).collect(),
        })
        .collect()
}

/// Draws N distinct worker points uniformly from the domain and i.i.d.
/// uniform decoys for every non-requested index, then assembles the queries.
pub fn query_gen<R: Rng + ?Sized>(
    request: usize,
    library: usize,
    workers: usize,
    domain: &[u64],
    rng: &mut R,
) -> Result<(Vec<PrivateQuery>, QueryDraw)> {
    if domain.len() < workers {
        return Err(Error::YTooSmall { needed: workers, got: domain.len() });
    }
    assert!(request < library);
    let mut pool = domain.to_vec();
    pool.shuffle(rng);
    let worker_points = pool[..workers].to_vec();
    let decoys: Vec<Option<u64>> = (0..library)
        .map(|j| {
            if j == request {
                None
            } else {
                Some(domain[rng.gen_range(0..domain.len())])
            }
        })
        .collect();
    let queries = build_queries(&worker_points, &decoys);
    Ok((queries, QueryDraw { worker_points, decoys }))
}

/// Worker-side encoding of one input list: sum_j Norm^{(j)}(q_j) over the
/// pre-encoded library. Touches only the query and public library data.
pub fn worker_encode(
    gf: Gf,
    query: &[u64],
    library: &[Vec<Matrix>],
    nodes: &[u64],
) -> Result<Matrix> {
    assert_eq!(query.len(), library.len());
    let mut acc: Option<Matrix> = None;
    for (&at, vec) in query.iter().zip(library) {
        let term = norm_basis_eval(gf, vec, nodes, at)?;
        acc = Some(match acc {
            Some(prev) => prev.add(gf, &term),
            None => term,
        });
    }
    Ok(acc.expect("non-empty library"))
}

/// Master-side decoding: rescales each result by c(y_i) — squared when both
/// sides were query-encoded — then re-evaluates at the data nodes and
/// combines. `l_a` is the A-side vector length (K, or K+1 with a key or a
/// query-encoded A side), giving a threshold of l_a + K.
#[allow(clippy::too_many_arguments)]
pub fn decode(
    gf: Gf,
    cons: &BilinearConstruction,
    batch: usize,
    l_a: usize,
    nodes: &[u64],
    results: &[(u64, Matrix)],
    square_scale: bool,
) -> Result<Vec<Matrix>> {
    let k = batch * cons.rank();
    let needed = l_a + k;
    if results.len() < needed {
        return Err(Error::NotEnoughResults { needed, got: results.len() });
    }
    let norm_nodes = &nodes[..k + 1];
    let scaled: Vec<(u64, Matrix)> = results[..needed]
        .iter()
        .map(|(y, value)| {
            let mut s = normalization_c(gf, norm_nodes, *y);
            if square_scale {
                s = gf.mul(s, s);
            }
            (*y, value.scale(gf, s))
        })
        .collect();
    let products = recover_products(gf, &scaled, &nodes[..k])?;
    combine_batch(gf, cons, batch, &products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::lagrange_coefficient;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn normalization_examples() {
        let gf = Gf::new(11).unwrap();
        // R=2, x = (1,2,3): c(5) = (5-1)(5-2)/((3-1)(3-2)) = 12/2 = 6
        let nodes = [1u64, 2, 3];
        assert_eq!(normalization_c(gf, &nodes, 5), 6);
        assert_eq!(normalization_c(gf, &nodes, 3), 1); // at the extra node
        assert_eq!(normalization_c(gf, &nodes, 1), 0); // at a data node
    }

    #[test]
    fn norm_matches_single_term_expansion() {
        // R = 1: Norm(x) = -vec_1 * (x - x_2)/(x - x_1)
        let gf = Gf::new(11).unwrap();
        let nodes = [0u64, 1];
        let v = Matrix::from_rows(gf, &[vec![4]]).unwrap();
        for at in 2..11 {
            let got = norm_basis_eval(gf, std::slice::from_ref(&v), &nodes, at).unwrap();
            let want = gf.neg(gf.mul(4, gf.mul(gf.sub(at, 1), gf.inv(at).unwrap())));
            assert_eq!(got.at(0, 0), want);
        }
        assert_eq!(
            norm_basis_eval(gf, std::slice::from_ref(&v), &nodes, 0).unwrap_err(),
            Error::PoleAtNode(0)
        );
        // at the extra node the leading factor vanishes
        assert!(norm_basis_eval(gf, &[v], &nodes, 1).unwrap().at(0, 0) == 0);
    }

    #[test]
    fn norm_equals_lagrange_over_c() {
        // Norm(at) = Lagrange(vec padded with 0)(at) / c(at) off the nodes.
        let gf = Gf::new(101).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let k = 3;
        let nodes: Vec<u64> = (0..=k as u64).collect();
        let vec: Vec<Matrix> = (0..k).map(|_| Matrix::random(gf, 1, 1, &mut rng)).collect();
        let scalar: Vec<u64> = vec.iter().map(|m| m.at(0, 0)).collect();
        for at in (k as u64 + 1)..40 {
            let norm = norm_basis_eval(gf, &vec, &nodes, at).unwrap().at(0, 0);
            let mut padded = 0u64;
            for (j, &v) in scalar.iter().enumerate() {
                padded = gf.add(padded, gf.mul(v, lagrange_coefficient(gf, &nodes, j, at)));
            }
            let c = normalization_c(gf, &nodes, at);
            assert_eq!(norm, gf.mul(padded, gf.inv(c).unwrap()));
        }
    }

    #[test]
    fn worker_encoding_equals_polynomial_over_c() {
        // sum_j Norm^{(j)}(q_j) must equal B~(y)/c(y) with the hidden constant
        // determined by the decoys.
        let gf = Gf::new(101).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        let k = 2;
        let nodes: Vec<u64> = (0..=k as u64).collect();
        let library: Vec<Vec<Matrix>> = (0..3)
            .map(|_| (0..k).map(|_| Matrix::random(gf, 1, 1, &mut rng)).collect())
            .collect();
        let request = 1usize;
        let y = 50u64;
        let decoys = vec![Some(7u64), None, Some(9u64)];
        let queries = build_queries(&[y], &decoys);
        let got = worker_encode(gf, &queries[0].entries, &library, &nodes)
            .unwrap()
            .at(0, 0);

        // reference: hidden constant, padded polynomial, divide by c
        let hidden = [0, 2]
            .iter()
            .map(|&j| {
                norm_basis_eval(gf, &library[j], &nodes, decoys[j].unwrap())
                    .unwrap()
                    .at(0, 0)
            })
            .fold(0, |acc, v| gf.add(acc, v));
        let mut values: Vec<(u64, u64)> = library[request]
            .iter()
            .enumerate()
            .map(|(i, m)| (nodes[i], m.at(0, 0)))
            .collect();
        values.push((nodes[k], hidden));
        let poly = crate::poly::interpolate(gf, &values).unwrap();
        let want = gf.mul(
            poly.eval(gf, y),
            gf.inv(normalization_c(gf, &nodes, y)).unwrap(),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn query_gen_shapes_and_domain_errors() {
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        let domain: Vec<u64> = (5..15).collect();
        let (queries, draw) = query_gen(2, 3, 4, &domain, &mut rng).unwrap();
        assert_eq!(queries.len(), 4);
        assert_eq!(draw.worker_points.len(), 4);
        for (i, q) in queries.iter().enumerate() {
            assert_eq!(q.entries.len(), 3);
            assert_eq!(q.entries[2], draw.worker_points[i]);
            assert_eq!(Some(q.entries[0]), draw.decoys[0]);
            assert_eq!(Some(q.entries[1]), draw.decoys[1]);
        }
        // distinct worker points
        for (i, &y) in draw.worker_points.iter().enumerate() {
            assert!(!draw.worker_points[..i].contains(&y));
        }
        assert!(matches!(
            query_gen(0, 2, 11, &domain, &mut rng),
            Err(Error::YTooSmall { needed: 11, got: 10 })
        ));
    }

    #[test]
    fn single_entry_library_is_plain_rescaled_encoding() {
        // M = 1: the query is just (y_i) and the hidden constant is zero.
        let gf = Gf::new(101).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(34);
        let k = 2;
        let nodes: Vec<u64> = (0..=k as u64).collect();
        let vec: Vec<Matrix> = (0..k).map(|_| Matrix::random(gf, 1, 1, &mut rng)).collect();
        let y = 9u64;
        let encoded = worker_encode(gf, &[y], std::slice::from_ref(&vec), &nodes).unwrap();
        let mut values: Vec<(u64, u64)> = vec
            .iter()
            .enumerate()
            .map(|(i, m)| (nodes[i], m.at(0, 0)))
            .collect();
        values.push((nodes[k], 0));
        let poly = crate::poly::interpolate(gf, &values).unwrap();
        let want = gf.mul(
            poly.eval(gf, y),
            gf.inv(normalization_c(gf, &nodes, y)).unwrap(),
        );
        assert_eq!(encoded.at(0, 0), want);
    }
}
