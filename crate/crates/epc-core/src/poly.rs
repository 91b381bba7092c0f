//! Dense polynomials over GF(q) and quadratic-time Lagrange interpolation.
//!
//! Interpolation is deliberately O(K^2): thresholds at desk scale stay in the
//! hundreds, where the quadratic method beats the constant factors of anything
//! asymptotically faster.

use crate::error::{Error, Result};
use crate::field::Gf;
use crate::matrix::Matrix;

/// Coefficients lowest degree first; normalized so the zero polynomial has an
/// empty coefficient vector and no polynomial ends in a zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(gf: Gf, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| gf.el(c)).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient at `x^d` (0 beyond the stored degree).
    pub fn coeff(&self, d: usize) -> u64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    /// Horner evaluation.
    pub fn eval(&self, gf: Gf, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = gf.add(gf.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, gf: Gf, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| gf.add(self.coeff(i), other.coeff(i)))
            .collect();
        Self::new(gf, coeffs)
    }

    pub fn mul(&self, gf: Gf, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = gf.add(coeffs[i + j], gf.mul(a, b));
            }
        }
        Self::new(gf, coeffs)
    }

    pub fn scale(&self, gf: Gf, s: u64) -> Self {
        Self::new(gf, self.coeffs.iter().map(|&c| gf.mul(c, s)).collect())
    }
}

fn check_distinct(nodes: &[u64]) -> Result<()> {
    for (i, &x) in nodes.iter().enumerate() {
        if nodes[..i].contains(&x) {
            return Err(Error::DuplicateNode);
        }
    }
    Ok(())
}

/// The j-th Lagrange basis coefficient over `nodes`, evaluated at `at`:
/// prod_{k != j} (at - x_k) / (x_j - x_k).
pub fn lagrange_coefficient(gf: Gf, nodes: &[u64], j: usize, at: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for (k, &xk) in nodes.iter().enumerate() {
        if k == j {
            continue;
        }
        num = gf.mul(num, gf.sub(at, xk));
        den = gf.mul(den, gf.sub(nodes[j], xk));
    }
    gf.mul(num, gf.inv(den).expect("distinct nodes"))
}

/// All basis coefficients l_j(at) at once, via prefix/suffix products of
/// (at - x_k). Safe when `at` coincides with a node: the matching row comes
/// out as an indicator.
pub fn lagrange_row(gf: Gf, nodes: &[u64], at: u64) -> Vec<u64> {
    let k = nodes.len();
    let mut prefix = vec![1u64; k + 1];
    for i in 0..k {
        prefix[i + 1] = gf.mul(prefix[i], gf.sub(at, nodes[i]));
    }
    let mut suffix = vec![1u64; k + 1];
    for i in (0..k).rev() {
        suffix[i] = gf.mul(suffix[i + 1], gf.sub(at, nodes[i]));
    }
    (0..k)
        .map(|j| {
            let num = gf.mul(prefix[j], suffix[j + 1]);
            let mut den = 1u64;
            for (i, &xi) in nodes.iter().enumerate() {
                if i != j {
                    den = gf.mul(den, gf.sub(nodes[j], xi));
                }
            }
            gf.mul(num, gf.inv(den).expect("distinct nodes"))
        })
        .collect()
}

/// Full coefficient expansions of all Lagrange basis polynomials over `nodes`.
/// Built by synthetic division of the master product prod (x - x_k).
pub fn lagrange_basis_polys(gf: Gf, nodes: &[u64]) -> Result<Vec<Poly>> {
    check_distinct(nodes)?;
    let k = nodes.len();
    // master(x) = prod_j (x - x_j), degree k
    let mut master = vec![0u64; k + 1];
    master[0] = 1;
    for (deg, &xj) in nodes.iter().enumerate() {
        // multiply the degree-`deg` prefix by (x - xj)
        for d in (0..=deg).rev() {
            let c = master[d];
            master[d + 1] = gf.add(master[d + 1], c);
            master[d] = gf.mul(c, gf.neg(xj));
        }
    }
    let mut out = Vec::with_capacity(k);
    for (j, &xj) in nodes.iter().enumerate() {
        // quotient master / (x - xj), degree k-1, by synthetic division
        let mut quot = vec![0u64; k];
        let mut carry = 0u64;
        for d in (0..k).rev() {
            carry = gf.add(master[d + 1], gf.mul(carry, xj));
            quot[d] = carry;
        }
        let mut den = 1u64;
        for (i, &xi) in nodes.iter().enumerate() {
            if i != j {
                den = gf.mul(den, gf.sub(xj, xi));
            }
        }
        let inv = gf.inv(den)?;
        out.push(Poly::new(gf, quot).scale(gf, inv));
    }
    Ok(out)
}

/// Interpolates the unique polynomial of degree < K through K scalar points.
pub fn interpolate(gf: Gf, points: &[(u64, u64)]) -> Result<Poly> {
    let nodes: Vec<u64> = points.iter().map(|&(x, _)| x).collect();
    let basis = lagrange_basis_polys(gf, &nodes)?;
    let mut acc = Poly::zero();
    for (poly, &(_, y)) in basis.iter().zip(points) {
        acc = acc.add(gf, &poly.scale(gf, y));
    }
    Ok(acc)
}

/// Entrywise matrix interpolation. Returns the K coefficient matrices of the
/// unique matrix polynomial of degree < K through the points; node-dependent
/// scalars are computed once and shared across entries.
pub fn interpolate_matrix(gf: Gf, points: &[(u64, &Matrix)]) -> Result<Vec<Matrix>> {
    let nodes: Vec<u64> = points.iter().map(|&(x, _)| x).collect();
    let basis = lagrange_basis_polys(gf, &nodes)?;
    let (r, c) = points
        .first()
        .map(|(_, m)| (m.rows(), m.cols()))
        .unwrap_or((0, 0));
    let k = points.len();
    let mut coeffs = vec![Matrix::zeros(r, c); k];
    for (poly, &(_, value)) in basis.iter().zip(points) {
        for (d, coeff) in coeffs.iter_mut().enumerate() {
            coeff.add_scaled_assign(gf, poly.coeff(d), value);
        }
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn eval_examples() {
        let gf = Gf::new(7).unwrap();
        assert_eq!(Poly::new(gf, vec![0]).eval(gf, 3), 0);
        assert!(Poly::new(gf, vec![0]).is_zero());
        // 1 + 2x + 3x^2 at x=2: 1 + 4 + 12 = 17 = 3 mod 7
        assert_eq!(Poly::new(gf, vec![1, 2, 3]).eval(gf, 2), 3);
    }

    #[test]
    fn basis_indicator_property() {
        let gf = Gf::new(11).unwrap();
        let nodes = [2u64, 5, 7, 9];
        for j in 0..nodes.len() {
            for (k, &xk) in nodes.iter().enumerate() {
                let want = u64::from(k == j);
                assert_eq!(lagrange_coefficient(gf, &nodes, j, xk), want);
                let poly = &lagrange_basis_polys(gf, &nodes).unwrap()[j];
                assert_eq!(poly.eval(gf, xk), want);
            }
        }
        // lagrange_row agrees with the per-index formula off the node set too
        for at in 0..11 {
            let row = lagrange_row(gf, &nodes, at);
            for (j, &coeff) in row.iter().enumerate() {
                assert_eq!(coeff, lagrange_coefficient(gf, &nodes, j, at));
            }
        }
    }

    #[test]
    fn coefficient_hand_example() {
        // K=2, nodes {1,2}, j=0, at=3: (3-2)/(1-2) = -1 = 6 mod 7
        let gf = Gf::new(7).unwrap();
        assert_eq!(lagrange_coefficient(gf, &[1, 2], 0, 3), 6);
    }

    #[test]
    fn interpolate_constant_and_square() {
        let gf7 = Gf::new(7).unwrap();
        let p = interpolate(gf7, &[(1, 5), (2, 5), (3, 5)]).unwrap();
        assert_eq!(p.coeffs(), &[5]);

        let gf11 = Gf::new(11).unwrap();
        let p = interpolate(gf11, &[(0, 0), (1, 1), (2, 4)]).unwrap();
        assert_eq!(p.coeffs(), &[0, 0, 1]);
    }

    #[test]
    fn interpolate_rejects_duplicates() {
        let gf = Gf::new(7).unwrap();
        assert_eq!(
            interpolate(gf, &[(1, 5), (1, 6)]).unwrap_err(),
            Error::DuplicateNode
        );
    }

    #[test]
    fn interpolation_recovers_random_polynomial() {
        let gf = Gf::new(101).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for k in 1..=12 {
            let poly = Poly::new(gf, (0..k).map(|_| gf.sample(&mut rng)).collect());
            let points: Vec<(u64, u64)> = (0..k as u64).map(|x| (x, poly.eval(gf, x))).collect();
            assert_eq!(interpolate(gf, &points).unwrap(), poly);
        }
    }

    #[test]
    fn matrix_interpolation_matches_scalar() {
        let gf = Gf::new(101).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let coeffs: Vec<Matrix> = (0..4).map(|_| Matrix::random(gf, 2, 3, &mut rng)).collect();
        let eval_at = |x: u64| {
            let mut acc = Matrix::zeros(2, 3);
            let mut pw = 1u64;
            for c in &coeffs {
                acc.add_scaled_assign(gf, pw, c);
                pw = gf.mul(pw, x);
            }
            acc
        };
        let values: Vec<(u64, Matrix)> = (10..14).map(|x| (x, eval_at(x))).collect();
        let refs: Vec<(u64, &Matrix)> = values.iter().map(|(x, m)| (*x, m)).collect();
        let got = interpolate_matrix(gf, &refs).unwrap();
        assert_eq!(got, coeffs);
    }
}
