//! JSON document shapes shared by states, measurements, setups and reports.
//!
//! Complex entries are `[re, im]` pairs in row-major order. serde_json writes
//! the shortest representation that round-trips and parses with
//! `float_roundtrip`, so a write/read cycle is exact at double precision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::{c64, ComplexMatrix, ComplexVector};

pub type Entry = [f64; 2];

fn entries_of<'a>(it: impl Iterator<Item = &'a num_complex::Complex64>) -> Vec<Entry> {
    it.map(|z| [z.re, z.im]).collect()
}

/// Row-major entries of a matrix.
pub fn row_major(m: &ComplexMatrix) -> Vec<Entry> {
    entries_of(m.transpose().iter())
}

fn from_row_major(rows: usize, cols: usize, entries: &[Entry]) -> Result<ComplexMatrix> {
    let expected = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Format("matrix shape overflows".into()))?;
    if entries.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} entries for a {rows}x{cols} matrix, found {}",
            entries.len()
        )));
    }
    if entries.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(ComplexMatrix::from_row_iterator(
        rows,
        cols,
        entries.iter().map(|&[re, im]| c64(re, im)),
    ))
}

/// `{dim, entries}` for a square matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareDoc {
    pub dim: usize,
    pub entries: Vec<Entry>,
}

impl SquareDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.nrows(),
            entries: row_major(m),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        from_row_major(self.dim, self.dim, &self.entries)
    }
}

/// `{rows, cols, entries}` for a general matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Entry>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries: row_major(m),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        from_row_major(self.rows, self.cols, &self.entries)
    }
}

/// `{dim, amplitudes}` for a state vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorDoc {
    pub dim: usize,
    pub amplitudes: Vec<Entry>,
}

impl VectorDoc {
    pub fn from_vector(v: &ComplexVector) -> Self {
        Self {
            dim: v.len(),
            amplitudes: entries_of(v.iter()),
        }
    }

    pub fn to_vector(&self) -> Result<ComplexVector> {
        if self.amplitudes.len() != self.dim {
            return Err(Error::Format(format!(
                "expected {} amplitudes, found {}",
                self.dim,
                self.amplitudes.len()
            )));
        }
        if self.amplitudes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexVector::from_iterator(
            self.dim,
            self.amplitudes.iter().map(|&[re, im]| c64(re, im)),
        ))
    }
}

/// Serde adapter for a bare `ComplexMatrix` field, written as a [`MatrixDoc`].
pub mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixDoc::from_matrix(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        let doc = MatrixDoc::deserialize(d)?;
        doc.to_matrix().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_order() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c64(1., 0.), c64(2., 0.), c64(3., 0.), c64(4., 1.)]);
        let doc = MatrixDoc::from_matrix(&m);
        assert_eq!(doc.entries, vec![[1., 0.], [2., 0.], [3., 0.], [4., 1.]]);
        assert_eq!(doc.to_matrix().unwrap(), m);
    }

    #[test]
    fn rejects_wrong_entry_count() {
        let doc = SquareDoc {
            dim: 2,
            entries: vec![[1.0, 0.0]; 3],
        };
        assert!(matches!(doc.to_matrix(), Err(Error::Format(_))));
    }
}
