use std::fmt;

use serde::{Deserialize, Serialize};

use super::SparseBitMatrix;
use crate::error::{Error, Result};

/// Compact description of a quasi-cyclic parity-check matrix.
///
/// Entry `(i, j)` is the exponent `e` of the circulant permutation block
/// `P^e` at block row `i`, block column `j`; `None` marks an all-zero block.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    modulus: usize,
    entries: Vec<Option<usize>>,
}

impl ExponentMatrix {
    pub fn new(modulus: usize, rows: Vec<Vec<Option<usize>>>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidSpec("circulant size must be positive".into()));
        }
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            for e in row {
                if let Some(v) = e {
                    if v >= modulus {
                        return Err(Error::InvalidSpec(format!(
                            "exponent {v} is not below the modulus {modulus}"
                        )));
                    }
                }
                entries.push(e);
            }
        }
        Ok(Self {
            rows: r,
            cols: c,
            modulus,
            entries,
        })
    }

    /// Exponent matrix without null blocks.
    pub fn from_values(modulus: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(
            modulus,
            rows.into_iter()
                .map(|r| r.into_iter().map(Some).collect())
                .collect(),
        )
    }

    /// Number of block rows (`r0`).
    pub fn r0(&self) -> usize {
        self.rows
    }

    /// Number of block columns (`n0`).
    pub fn n0(&self) -> usize {
        self.cols
    }

    /// Circulant size.
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Option<usize>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows with nulls rendered as `None`; convenient for fixtures without nulls.
    pub fn values(&self) -> Option<Vec<Vec<usize>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().copied().collect::<Option<Vec<_>>>())
            .collect()
    }

    pub fn non_null_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    /// Keeps the listed block columns, in the listed order.
    pub fn select_columns(&self, keep: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.cols];
        for &j in keep {
            if j >= self.cols {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    bound: self.cols,
                });
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidSpec(format!("block column {j} listed twice")));
            }
        }
        let entries = (0..self.rows)
            .flat_map(|i| keep.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: keep.len(),
            modulus: self.modulus,
            entries,
        })
    }

    /// Reorders block rows; `order[i]` is the source row of output row `i`.
    pub fn select_rows(&self, order: &[usize]) -> Result<Self> {
        super::inverse_permutation(order, self.rows)?;
        let entries = order.iter().flat_map(|&i| self.row(i).to_vec()).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            modulus: self.modulus,
            entries,
        })
    }

    /// Expands every entry into its `q×q` circulant permutation block.
    ///
    /// Block `(i, j)` with exponent `e` has a one at
    /// `(i·q + s, j·q + (s + e) mod q)` for each `s`; null entries stay zero.
    pub fn expand(&self) -> SparseBitMatrix {
        let q = self.modulus;
        let mut supports = vec![Vec::new(); self.rows * q];
        for i in 0..self.rows {
            for j in 0..self.cols {
                if let Some(e) = self.get(i, j) {
                    for s in 0..q {
                        supports[i * q + s].push(j * q + (s + e) % q);
                    }
                }
            }
        }
        SparseBitMatrix::from_row_supports(self.cols * q, supports)
            .expect("expanded coordinates are in range")
    }
}

impl fmt::Debug for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ExponentMatrix(q={}, {}x{})",
            self.modulus, self.rows, self.cols
        )?;
        write!(f, "{self}")
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|e| e.map_or_else(|| "-".to_string(), |v| v.to_string()))
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
