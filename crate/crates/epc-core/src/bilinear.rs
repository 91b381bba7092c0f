//! Rank-R bilinear constructions: tensor triples (a, b, c) certifying that R
//! elementwise products suffice to multiply p-by-m by p-by-n block grids.
//!
//! Everything here is oriented for computing A^T B with A partitioned into a
//! p x m grid and B into p x n: the target identity is
//! `sum_i a[i][j][k] b[i][j'][k'] c[i][l][l'] = [j=j'][k=l][k'=l']`,
//! equivalently C_{k,k'} = sum_j A_{j,k}^T B_{j,k'}.

use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Gf;
use crate::matrix::{BlockMatrix, Matrix};

/// Which input grid a tensor/pre-encoding refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// A violated Brent equation, identified by its six indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrentViolation {
    pub j: usize,
    pub j2: usize,
    pub k: usize,
    pub l: usize,
    pub k2: usize,
    pub l2: usize,
    pub got: u64,
    pub want: u64,
}

impl fmt::Display for BrentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Brent equation (j={}, j'={}, k={}, l={}, k'={}, l'={}) gives {} instead of {}",
            self.j, self.j2, self.k, self.l, self.k2, self.l2, self.got, self.want
        )
    }
}

/// Rank-R tensor triple for (p, m, n). Coefficients are stored reduced mod q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearConstruction {
    p: usize,
    m: usize,
    n: usize,
    rank: usize,
    a: Vec<u64>, // rank x p x m
    b: Vec<u64>, // rank x p x n
    c: Vec<u64>, // rank x m x n
}

#[derive(Serialize, Deserialize)]
struct ConstructionFile {
    p: usize,
    m: usize,
    n: usize,
    #[serde(rename = "R")]
    rank: usize,
    a: Vec<Vec<Vec<i64>>>,
    b: Vec<Vec<Vec<i64>>>,
    c: Vec<Vec<Vec<i64>>>,
}

impl BilinearConstruction {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.p, self.m, self.n)
    }

    pub fn a_at(&self, i: usize, j: usize, k: usize) -> u64 {
        self.a[(i * self.p + j) * self.m + k]
    }

    pub fn b_at(&self, i: usize, j: usize, k2: usize) -> u64 {
        self.b[(i * self.p + j) * self.n + k2]
    }

    pub fn c_at(&self, i: usize, l: usize, l2: usize) -> u64 {
        self.c[(i * self.m + l) * self.n + l2]
    }

    /// The uncoded construction: one rank-1 term per (j, k, k') triple,
    /// so R = pmn.
    pub fn naive(p: usize, m: usize, n: usize) -> Self {
        assert!(p >= 1 && m >= 1 && n >= 1);
        let rank = p * m * n;
        let mut a = vec![0u64; rank * p * m];
        let mut b = vec![0u64; rank * p * n];
        let mut c = vec![0u64; rank * m * n];
        let mut i = 0;
        for j in 0..p {
            for k in 0..m {
                for k2 in 0..n {
                    a[(i * p + j) * m + k] = 1;
                    b[(i * p + j) * n + k2] = 1;
                    c[(i * m + k) * n + k2] = 1;
                    i += 1;
                }
            }
        }
        Self { p, m, n, rank, a, b, c }
    }

    /// Strassen's seven-product construction for (2, 2, 2). The classic tables
    /// compute a row-by-column product, so the A-side table is transposed to
    /// fit the A^T B orientation used throughout this crate.
    pub fn strassen_222(gf: Gf) -> Self {
        const A: [[[i64; 2]; 2]; 7] = [
            [[1, 0], [0, 1]],
            [[0, 1], [0, 1]],
            [[1, 0], [0, 0]],
            [[0, 0], [0, 1]],
            [[1, 0], [1, 0]],
            [[-1, 1], [0, 0]],
            [[0, 0], [1, -1]],
        ];
        const B: [[[i64; 2]; 2]; 7] = [
            [[1, 0], [0, 1]],
            [[1, 0], [0, 0]],
            [[0, 1], [0, -1]],
            [[-1, 0], [1, 0]],
            [[0, 0], [0, 1]],
            [[1, 1], [0, 0]],
            [[0, 0], [1, 1]],
        ];
        const C: [[[i64; 2]; 2]; 7] = [
            [[1, 0], [0, 1]],
            [[0, 0], [1, -1]],
            [[0, 1], [0, 1]],
            [[1, 0], [1, 0]],
            [[-1, 1], [0, 0]],
            [[0, 0], [0, 1]],
            [[1, 0], [0, 0]],
        ];
        let flat = |t: &[[[i64; 2]; 2]; 7]| -> Vec<u64> {
            t.iter()
                .flat_map(|m| m.iter().flat_map(|row| row.iter().map(|&v| gf.from_i64(v))))
                .collect()
        };
        Self {
            p: 2,
            m: 2,
            n: 2,
            rank: 7,
            a: flat(&A),
            b: flat(&B),
            c: flat(&C),
        }
    }

    /// Tensor composition: a construction for the block-of-blocks partition
    /// (p_u p_v, m_u m_v, n_u n_v) with rank R_u * R_v. Index order is
    /// row-major outer x inner on every axis; decode correctness depends on
    /// this ordering, so it is fixed here once.
    pub fn compose(gf: Gf, u: &Self, v: &Self) -> Self {
        let (p, m, n) = (u.p * v.p, u.m * v.m, u.n * v.n);
        let rank = u.rank * v.rank;
        let mut a = vec![0u64; rank * p * m];
        let mut b = vec![0u64; rank * p * n];
        let mut c = vec![0u64; rank * m * n];
        for iu in 0..u.rank {
            for iv in 0..v.rank {
                let i = iu * v.rank + iv;
                for ju in 0..u.p {
                    for jv in 0..v.p {
                        let j = ju * v.p + jv;
                        for ku in 0..u.m {
                            for kv in 0..v.m {
                                let k = ku * v.m + kv;
                                a[(i * p + j) * m + k] =
                                    gf.mul(u.a_at(iu, ju, ku), v.a_at(iv, jv, kv));
                            }
                        }
                        for ku in 0..u.n {
                            for kv in 0..v.n {
                                let k2 = ku * v.n + kv;
                                b[(i * p + j) * n + k2] =
                                    gf.mul(u.b_at(iu, ju, ku), v.b_at(iv, jv, kv));
                            }
                        }
                    }
                }
                for lu in 0..u.m {
                    for lv in 0..v.m {
                        let l = lu * v.m + lv;
                        for lu2 in 0..u.n {
                            for lv2 in 0..v.n {
                                let l2 = lu2 * v.n + lv2;
                                c[(i * m + l) * n + l2] =
                                    gf.mul(u.c_at(iu, lu, lu2), v.c_at(iv, lv, lv2));
                            }
                        }
                    }
                }
            }
        }
        Self { p, m, n, rank, a, b, c }
    }

    /// k-fold Strassen composition: shape (2^k, 2^k, 2^k) with rank 7^k.
    pub fn strassen_power(gf: Gf, k: u32) -> Self {
        assert!(k >= 1);
        let s = Self::strassen_222(gf);
        let mut acc = s.clone();
        for _ in 1..k {
            acc = Self::compose(gf, &acc, &s);
        }
        acc
    }

    /// Checks every Brent equation exactly: (pmn)^2 equations of R terms each.
    pub fn validate_exact(&self, gf: Gf) -> std::result::Result<(), BrentViolation> {
        for j in 0..self.p {
            for j2 in 0..self.p {
                for k in 0..self.m {
                    for l in 0..self.m {
                        for k2 in 0..self.n {
                            for l2 in 0..self.n {
                                let mut sum = 0u64;
                                for i in 0..self.rank {
                                    let t = gf.mul(
                                        gf.mul(self.a_at(i, j, k), self.b_at(i, j2, k2)),
                                        self.c_at(i, l, l2),
                                    );
                                    sum = gf.add(sum, t);
                                }
                                let want = u64::from(j == j2 && k == l && k2 == l2);
                                if sum != want {
                                    return Err(BrentViolation {
                                        j,
                                        j2,
                                        k,
                                        l,
                                        k2,
                                        l2,
                                        got: sum,
                                        want,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies the construction to random 1x1-block inputs and compares with
    /// the direct product. One-sided error <= pmn/q per trial.
    pub fn validate_randomized<R: Rng + ?Sized>(&self, gf: Gf, rng: &mut R, trials: u32) -> bool {
        for _ in 0..trials {
            let a = Matrix::random(gf, self.p, self.m, rng);
            let b = Matrix::random(gf, self.p, self.n, rng);
            let ab = BlockMatrix::partition(&a, self.p, self.m).unwrap();
            let bb = BlockMatrix::partition(&b, self.p, self.n).unwrap();
            let got = self.apply(gf, &ab, &bb).unwrap().assemble();
            let want = a.t_mul(gf, &b).unwrap();
            if got != want {
                return false;
            }
        }
        true
    }

    /// From a violated Brent equation, builds 1x1-block indicator inputs on
    /// which `apply` provably disagrees with the direct product.
    pub fn counterexample_input(&self, v: &BrentViolation) -> (Matrix, Matrix) {
        let mut a = Matrix::zeros(self.p, self.m);
        a.set(v.j, v.k, 1);
        let mut b = Matrix::zeros(self.p, self.n);
        b.set(v.j2, v.k2, 1);
        (a, b)
    }

    /// Pre-encodes one block grid into a length-R list of block-sized coded
    /// matrices: the i-th entry is sum_{j,k} X_{j,k} * tensor[i][j][k].
    pub fn pre_encode(&self, gf: Gf, side: Side, grid: &BlockMatrix) -> Result<Vec<Matrix>> {
        let want_cols = match side {
            Side::A => self.m,
            Side::B => self.n,
        };
        if grid.grid_rows() != self.p || grid.grid_cols() != want_cols {
            return Err(Error::DimensionMismatch(format!(
                "grid {}x{} does not match construction side ({}x{})",
                grid.grid_rows(),
                grid.grid_cols(),
                self.p,
                want_cols
            )));
        }
        let (br, bc) = grid.block_shape();
        let mut out = Vec::with_capacity(self.rank);
        for i in 0..self.rank {
            let mut acc = Matrix::zeros(br, bc);
            for j in 0..self.p {
                for k in 0..want_cols {
                    let coeff = match side {
                        Side::A => self.a_at(i, j, k),
                        Side::B => self.b_at(i, j, k),
                    };
                    acc.add_scaled_assign(gf, coeff, grid.block(j, k));
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Combines the R elementwise products through tensor c into the m x n
    /// grid of output blocks.
    pub fn combine(&self, gf: Gf, products: &[Matrix]) -> Result<BlockMatrix> {
        if products.len() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "{} products for rank {}",
                products.len(),
                self.rank
            )));
        }
        let (br, bc) = (products[0].rows(), products[0].cols());
        let mut blocks = Vec::with_capacity(self.m * self.n);
        for l in 0..self.m {
            for l2 in 0..self.n {
                let mut acc = Matrix::zeros(br, bc);
                for (i, prod) in products.iter().enumerate() {
                    acc.add_scaled_assign(gf, self.c_at(i, l, l2), prod);
                }
                blocks.push(acc);
            }
        }
        BlockMatrix::from_blocks(self.m, self.n, blocks)
    }

    /// Full bilinear evaluation: pre-encode, multiply elementwise, combine.
    /// Equals the block-matrix product A^T B.
    pub fn apply(&self, gf: Gf, a: &BlockMatrix, b: &BlockMatrix) -> Result<BlockMatrix> {
        let av = self.pre_encode(gf, Side::A, a)?;
        let bv = self.pre_encode(gf, Side::B, b)?;
        let products: Vec<Matrix> = av
            .iter()
            .zip(&bv)
            .map(|(x, y)| x.t_mul(gf, y))
            .collect::<Result<_>>()?;
        self.combine(gf, &products)
    }

    /// Serializes to the JSON interchange form (signed integers, field-free).
    pub fn to_json(&self, gf: Gf) -> serde_json::Value {
        let signed = |v: u64| -> i64 {
            if v > gf.modulus() / 2 {
                -((gf.modulus() - v) as i64)
            } else {
                v as i64
            }
        };
        let nest = |flat: &[u64], d1: usize, d2: usize| -> Vec<Vec<Vec<i64>>> {
            (0..self.rank)
                .map(|i| {
                    (0..d1)
                        .map(|j| (0..d2).map(|k| signed(flat[(i * d1 + j) * d2 + k])).collect())
                        .collect()
                })
                .collect()
        };
        serde_json::json!({
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "R": self.rank,
            "a": nest(&self.a, self.p, self.m),
            "b": nest(&self.b, self.p, self.n),
            "c": nest(&self.c, self.m, self.n),
        })
    }

    /// Parses the JSON interchange form, reducing integers mod q and running
    /// exact validation. Invalid files are rejected.
    pub fn from_json(gf: Gf, value: &serde_json::Value) -> Result<Self> {
        let file: ConstructionFile = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidConstruction(e.to_string()))?;
        let flatten = |t: &[Vec<Vec<i64>>], d1: usize, d2: usize, name: &str| -> Result<Vec<u64>> {
            if t.len() != file.rank
                || t.iter().any(|m| m.len() != d1 || m.iter().any(|r| r.len() != d2))
            {
                return Err(Error::InvalidConstruction(format!(
                    "tensor {name} has inconsistent dimensions"
                )));
            }
            Ok(t.iter()
                .flat_map(|m| m.iter().flat_map(|r| r.iter().map(|&v| gf.from_i64(v))))
                .collect())
        };
        let cons = Self {
            p: file.p,
            m: file.m,
            n: file.n,
            rank: file.rank,
            a: flatten(&file.a, file.p, file.m, "a")?,
            b: flatten(&file.b, file.p, file.n, "b")?,
            c: flatten(&file.c, file.m, file.n, "c")?,
        };
        cons.validate_exact(gf)
            .map_err(|v| Error::InvalidConstruction(v.to_string()))?;
        Ok(cons)
    }

    pub fn save(&self, gf: Gf, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json(gf)).expect("json");
        std::fs::write(path, text)
    }

    pub fn load(gf: Gf, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConstruction(format!("{}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConstruction(e.to_string()))?;
        Self::from_json(gf, &value)
    }

    #[cfg(test)]
    pub(crate) fn corrupt_for_test(&mut self, gf: Gf) {
        self.a[0] = gf.add(self.a[0], 1);
    }
}
