//! Matrix file formats.
//!
//! Text: first line `q rows cols`, then rows*cols whitespace-separated
//! integers in [0, q), row-major. Binary: magic `EPCM1`, little-endian u64
//! header (q, rows, cols), then u64 values. Both round-trip bit-exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use epc_core::error::{Error, Result};
use epc_core::matrix::Matrix;

pub const BINARY_MAGIC: &[u8; 5] = b"EPCM1";

pub fn write_text(path: &Path, modulus: u64, m: &Matrix) -> std::io::Result<()> {
    let mut out = String::new();
    out.push_str(&format!("{} {} {}\n", modulus, m.rows(), m.cols()));
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    fs::write(path, out)
}

pub fn write_binary(path: &Path, modulus: u64, m: &Matrix) -> std::io::Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(BINARY_MAGIC)?;
    for header in [modulus, m.rows() as u64, m.cols() as u64] {
        file.write_all(&header.to_le_bytes())?;
    }
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            file.write_all(&m.at(i, j).to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads either format, detected by the magic bytes. Returns the stored
/// modulus along with the matrix.
pub fn read(path: &Path) -> Result<(u64, Matrix)> {
    let bytes = fs::read(path)
        .map_err(|e| Error::MalformedHeader(format!("{}: {e}", path.display())))?;
    if bytes.starts_with(BINARY_MAGIC) {
        read_binary(&bytes)
    } else {
        read_text(&bytes)
    }
}

fn read_text(bytes: &[u8]) -> Result<(u64, Matrix)> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| Error::MalformedHeader("matrix file is not UTF-8".into()))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedHeader("empty matrix file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::MalformedHeader(format!(
            "expected `q rows cols`, got `{header}`"
        )));
    }
    let parse = |s: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::MalformedHeader(format!("bad integer `{s}`")))
    };
    let q = parse(fields[0])?;
    let rows = parse(fields[1])? as usize;
    let cols = parse(fields[2])? as usize;
    let mut values = Vec::with_capacity(rows * cols);
    for token in lines.flat_map(str::split_whitespace) {
        values.push(parse(token)?);
    }
    build(q, rows, cols, values)
}

fn read_binary(bytes: &[u8]) -> Result<(u64, Matrix)> {
    let u64_at = |offset: usize| -> Result<u64> {
        bytes
            .get(offset..offset + 8)
            .map(|b| u64::from_le_bytes(b.try_into().unwrap()))
            .ok_or_else(|| Error::MalformedHeader("binary matrix file truncated".into()))
    };
    let q = u64_at(5)?;
    let rows = u64_at(13)? as usize;
    let cols = u64_at(21)? as usize;
    let mut values = Vec::with_capacity(rows * cols);
    for i in 0..rows * cols {
        values.push(u64_at(29 + 8 * i)?);
    }
    if bytes.len() != 29 + 8 * rows * cols {
        return Err(Error::MalformedHeader(
            "binary matrix file has trailing bytes".into(),
        ));
    }
    build(q, rows, cols, values)
}

fn build(q: u64, rows: usize, cols: usize, values: Vec<u64>) -> Result<(u64, Matrix)> {
    if values.len() != rows * cols {
        return Err(Error::MalformedHeader(format!(
            "expected {} values, found {}",
            rows * cols,
            values.len()
        )));
    }
    if let Some(&value) = values.iter().find(|&&v| v >= q) {
        return Err(Error::ValueOutOfRange { value, modulus: q });
    }
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, values[i * cols + j]);
        }
    }
    Ok((q, m))
}
