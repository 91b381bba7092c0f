//! Dense matrices over GF(q) and their block partitions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Gf;

/// Row-major dense matrix of field elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from rows of raw integers, reducing each mod q.
    pub fn from_rows(gf: Gf, rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| gf.el(v)).collect();
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn random<R: Rng + ?Sized>(gf: Gf, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| gf.sample(rng)).collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn add(&self, gf: Gf, other: &Self) -> Self {
        assert!(self.same_shape(other));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| gf.add(a, b))
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, gf: Gf, other: &Self) -> Self {
        assert!(self.same_shape(other));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| gf.sub(a, b))
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, gf: Gf, s: u64) -> Self {
        let data = self.data.iter().map(|&a| gf.mul(a, s)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// self += s * other, entrywise.
    pub fn add_scaled_assign(&mut self, gf: Gf, s: u64, other: &Self) {
        assert!(self.same_shape(other));
        if s == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = gf.add(*a, gf.mul(s, b));
        }
    }

    /// Returns self^T * rhs. Shapes: (s x t)^T * (s x r) = t x r.
    pub fn t_mul(&self, gf: Gf, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "transpose-product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self.at(k, i);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = gf.add(out.at(i, j), gf.mul(a, rhs.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }
}

/// A matrix together with its block partition: a `grid_rows x grid_cols`
/// arrangement of equally sized blocks, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMatrix {
    grid_rows: usize,
    grid_cols: usize,
    blocks: Vec<Matrix>,
}

impl BlockMatrix {
    /// Splits `m` into a `grid_rows x grid_cols` grid of equal blocks.
    /// No implicit padding: dimensions must divide exactly.
    pub fn partition(m: &Matrix, grid_rows: usize, grid_cols: usize) -> Result<Self> {
        if grid_rows == 0
            || grid_cols == 0
            || !m.rows().is_multiple_of(grid_rows)
            || !m.cols().is_multiple_of(grid_cols)
        {
            return Err(Error::IndivisibleDimensions {
                rows: m.rows(),
                cols: m.cols(),
                grid_rows,
                grid_cols,
            });
        }
        let br = m.rows() / grid_rows;
        let bc = m.cols() / grid_cols;
        let mut blocks = Vec::with_capacity(grid_rows * grid_cols);
        for gi in 0..grid_rows {
            for gj in 0..grid_cols {
                let mut blk = Matrix::zeros(br, bc);
                for i in 0..br {
                    for j in 0..bc {
                        blk.set(i, j, m.at(gi * br + i, gj * bc + j));
                    }
                }
                blocks.push(blk);
            }
        }
        Ok(Self { grid_rows, grid_cols, blocks })
    }

    pub fn from_blocks(grid_rows: usize, grid_cols: usize, blocks: Vec<Matrix>) -> Result<Self> {
        if blocks.len() != grid_rows * grid_cols {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks for a {}x{} grid",
                blocks.len(),
                grid_rows,
                grid_cols
            )));
        }
        if let Some(first) = blocks.first() {
            if blocks.iter().any(|b| !b.same_shape(first)) {
                return Err(Error::ShapeMismatch("blocks differ in shape".into()));
            }
        }
        Ok(Self { grid_rows, grid_cols, blocks })
    }

    pub fn grid_rows(&self) -> usize {
        self.grid_rows
    }

    pub fn grid_cols(&self) -> usize {
        self.grid_cols
    }

    pub fn block(&self, gi: usize, gj: usize) -> &Matrix {
        &self.blocks[gi * self.grid_cols + gj]
    }

    pub fn block_shape(&self) -> (usize, usize) {
        let b = &self.blocks[0];
        (b.rows(), b.cols())
    }

    /// Inverse of [`partition`]: reassembles the full matrix bit-exactly.
    pub fn assemble(&self) -> Matrix {
        let (br, bc) = self.block_shape();
        let mut out = Matrix::zeros(self.grid_rows * br, self.grid_cols * bc);
        for gi in 0..self.grid_rows {
            for gj in 0..self.grid_cols {
                let blk = self.block(gi, gj);
                for i in 0..br {
                    for j in 0..bc {
                        out.set(gi * br + i, gj * bc + j, blk.at(i, j));
                    }
                }
            }
        }
        out
    }
}

/// Zero-pads `m` so its dimensions become multiples of `(row_mult, col_mult)`,
/// returning the padded matrix together with the original shape so results can
/// be cropped back.
pub fn pad_to(m: &Matrix, row_mult: usize, col_mult: usize) -> (Matrix, (usize, usize)) {
    let rows = m.rows().div_ceil(row_mult) * row_mult;
    let cols = m.cols().div_ceil(col_mult) * col_mult;
    if rows == m.rows() && cols == m.cols() {
        return (m.clone(), (m.rows(), m.cols()));
    }
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, m.at(i, j));
        }
    }
    (out, (m.rows(), m.cols()))
}

/// Crops `m` to its leading `rows x cols` corner.
pub fn crop(m: &Matrix, rows: usize, cols: usize) -> Matrix {
    assert!(rows <= m.rows() && cols <= m.cols());
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out.set(i, j, m.at(i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn gf() -> Gf {
        Gf::new(7).unwrap()
    }

    #[test]
    fn partition_and_reassemble_roundtrip() {
        let gf = gf();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let m = Matrix::random(gf, 4, 4, &mut rng);
        let blocks = BlockMatrix::partition(&m, 2, 2).unwrap();
        assert_eq!(blocks.block_shape(), (2, 2));
        assert_eq!(blocks.assemble(), m);
    }

    #[test]
    fn partition_shapes() {
        let m = Matrix::zeros(4, 6);
        let b = BlockMatrix::partition(&m, 2, 3).unwrap();
        assert_eq!(b.block_shape(), (2, 2));
        assert!(matches!(
            BlockMatrix::partition(&m, 3, 2),
            Err(Error::IndivisibleDimensions { .. })
        ));
    }

    #[test]
    fn transpose_product_small() {
        let gf = gf();
        // A = [[1,2],[3,4]], B = [[5,6],[0,1]]; A^T B = [[5,9],[10,16]] mod 7
        let a = Matrix::from_rows(gf, &[vec![1, 2], vec![3, 4]]).unwrap();
        let b = Matrix::from_rows(gf, &[vec![5, 6], vec![0, 1]]).unwrap();
        let c = a.t_mul(gf, &b).unwrap();
        assert_eq!(c, Matrix::from_rows(gf, &[vec![5, 9], vec![3, 2]]).unwrap());
    }

    #[test]
    fn pad_and_crop() {
        let gf = gf();
        let m = Matrix::from_rows(gf, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let (padded, orig) = pad_to(&m, 2, 2);
        assert_eq!(orig, (2, 3));
        assert_eq!(padded.rows(), 2);
        assert_eq!(padded.cols(), 4);
        assert_eq!(padded.at(1, 3), 0);
        assert_eq!(crop(&padded, 2, 3), m);
    }
}
