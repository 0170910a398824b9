//! Binary matrix arithmetic over GF(2).
//!
//! [`SparseBitMatrix`] keeps both row and column adjacency so that message
//! passing can walk either direction in O(degree). Elimination work (rank,
//! systematic encoding) goes through the windowed bit rows in [`echelon`],
//! which stay short on banded matrices such as terminated convolutional codes.
//!
//! Circulant convention used throughout the crate: `P^e` is the `q×q`
//! identity with every row cyclically shifted right by `e`, i.e. it has a one
//! at `(s, (s + e) mod q)` for every `s`.

pub mod alist;
pub mod echelon;
mod exponent;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub use echelon::Echelon;
pub use exponent::ExponentMatrix;

/// Sparse binary matrix with sorted row and column supports.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseBitMatrix {
    rows: usize,
    cols: usize,
    row_support: Vec<Vec<usize>>,
    col_support: Vec<Vec<usize>>,
}

impl SparseBitMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_support: vec![Vec::new(); rows],
            col_support: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_row_supports(n, (0..n).map(|i| vec![i]).collect())
            .expect("identity supports are in range")
    }

    /// Builds a matrix from `(row, col)` coordinates of its ones.
    ///
    /// Repeated coordinates are stored once.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut row_support = vec![Vec::new(); rows];
        for (r, c) in entries {
            if r >= rows {
                return Err(Error::IndexOutOfRange {
                    index: r,
                    bound: rows,
                });
            }
            if c >= cols {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    bound: cols,
                });
            }
            row_support[r].push(c);
        }
        Self::from_row_supports(cols, row_support)
    }

    /// Builds a matrix from per-row column lists (any order, duplicates ignored).
    pub fn from_row_supports(cols: usize, mut row_support: Vec<Vec<usize>>) -> Result<Self> {
        let rows = row_support.len();
        let mut col_support = vec![Vec::new(); cols];
        for (r, support) in row_support.iter_mut().enumerate() {
            support.sort_unstable();
            support.dedup();
            for &c in support.iter() {
                if c >= cols {
                    return Err(Error::IndexOutOfRange {
                        index: c,
                        bound: cols,
                    });
                }
                col_support[c].push(r);
            }
        }
        Ok(Self {
            rows,
            cols,
            row_support,
            col_support,
        })
    }

    /// Builds a matrix from a dense 0/1 grid. Any nonzero byte counts as one.
    pub fn from_dense<R: AsRef<[u8]>>(grid: &[R]) -> Result<Self> {
        let cols = grid.first().map_or(0, |r| r.as_ref().len());
        let mut supports = Vec::with_capacity(grid.len());
        for row in grid {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            supports.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .map(|(c, _)| c)
                    .collect(),
            );
        }
        Self::from_row_supports(cols, supports)
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut grid = vec![vec![0u8; self.cols]; self.rows];
        for (r, support) in self.row_support.iter().enumerate() {
            for &c in support {
                grid[r][c] = 1;
            }
        }
        grid
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sorted column indices of the ones in row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_support[r]
    }

    /// Sorted row indices of the ones in column `c`.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_support[c]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_support[r].binary_search(&c).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.row_support.iter().map(Vec::len).sum()
    }

    pub fn row_weights(&self) -> impl Iterator<Item = usize> + '_ {
        self.row_support.iter().map(Vec::len)
    }

    pub fn col_weights(&self) -> impl Iterator<Item = usize> + '_ {
        self.col_support.iter().map(Vec::len)
    }

    /// Iterates over the `(row, col)` coordinates of all ones in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_support
            .iter()
            .enumerate()
            .flat_map(|(r, s)| s.iter().map(move |&c| (r, c)))
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            row_support: self.col_support.clone(),
            col_support: self.row_support.clone(),
        }
    }

    /// Reorders rows and columns: output `(i, j)` is input `(row_order[i], col_order[j])`.
    pub fn permute(&self, row_order: &[usize], col_order: &[usize]) -> Result<Self> {
        inverse_permutation(row_order, self.rows)?;
        let col_inv = inverse_permutation(col_order, self.cols)?;
        let supports = row_order
            .iter()
            .map(|&src| self.row_support[src].iter().map(|&c| col_inv[c]).collect())
            .collect();
        Self::from_row_supports(self.cols, supports)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let supports = self
            .row_support
            .iter()
            .chain(other.row_support.iter())
            .cloned()
            .collect();
        Self::from_row_supports(self.cols, supports)
    }

    /// True iff two rows share at least two column positions.
    pub fn has_length4_cycle(&self) -> bool {
        let mut stamp = vec![usize::MAX; self.rows];
        for (r, support) in self.row_support.iter().enumerate() {
            for &c in support {
                for &other in &self.col_support[c] {
                    if other <= r {
                        continue;
                    }
                    if stamp[other] == r {
                        return true;
                    }
                    stamp[other] = r;
                }
            }
        }
        false
    }

    /// Length of the shortest cycle of the Tanner graph, if it is at most `cap`.
    ///
    /// Runs one breadth-first search per node, each truncated at depth `cap / 2`.
    pub fn girth(&self, cap: usize) -> Option<usize> {
        // Node ids: checks are 0..rows, variables are rows..rows+cols.
        let total = self.rows + self.cols;
        let neighbours = |v: usize| -> Box<dyn Iterator<Item = usize> + '_> {
            if v < self.rows {
                Box::new(self.row_support[v].iter().map(move |&c| c + self.rows))
            } else {
                Box::new(self.col_support[v - self.rows].iter().copied())
            }
        };
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut touched = Vec::new();
        for root in 0..total {
            let mut queue = VecDeque::new();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                // Any cycle closed from `v` has length at least 2 * dist[v].
                if 2 * dist[v] >= best || 2 * dist[v] > cap {
                    break;
                }
                for w in neighbours(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        touched.push(w);
                        queue.push_back(w);
                    } else if parent[v] != w {
                        best = best.min(dist[v] + dist[w] + 1);
                    }
                }
            }
            for v in touched.drain(..) {
                dist[v] = usize::MAX;
                parent[v] = usize::MAX;
            }
        }
        (best <= cap).then_some(best)
    }

    /// Matrix-vector product over GF(2) with a 0/1 vector.
    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .row_support
            .iter()
            .map(|s| s.iter().fold(0u8, |acc, &c| acc ^ (v[c] & 1)))
            .collect())
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        Echelon::from_matrix(self).rank()
    }
}

impl fmt::Debug for SparseBitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SparseBitMatrix({}x{}, nnz={})",
            self.rows,
            self.cols,
            self.nnz()
        )?;
        if self.rows <= 32 && self.cols <= 64 {
            for row in self.to_dense() {
                f.write_str("\n")?;
                for b in row {
                    f.write_str(if b == 1 { "1" } else { "." })?;
                }
            }
        }
        Ok(())
    }
}

/// Validates `order` as a permutation of `0..len` and returns its inverse.
pub fn inverse_permutation(order: &[usize], len: usize) -> Result<Vec<usize>> {
    if order.len() != len {
        return Err(Error::NotPermutation { len });
    }
    let mut inv = vec![usize::MAX; len];
    for (i, &src) in order.iter().enumerate() {
        if src >= len || inv[src] != usize::MAX {
            return Err(Error::NotPermutation { len });
        }
        inv[src] = i;
    }
    Ok(inv)
}

/// GF(2) rank of any matrix, free function form.
pub fn gf2_rank(m: &SparseBitMatrix) -> usize {
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain dense Gaussian elimination, kept independent of the windowed echelon.
    fn dense_rank(mut grid: Vec<Vec<u8>>) -> usize {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| grid[r][c] == 1) else {
                continue;
            };
            grid.swap(rank, p);
            let pivot = grid[rank].clone();
            for (r, row) in grid.iter_mut().enumerate() {
                if r != rank && row[c] == 1 {
                    row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
                }
            }
            rank += 1;
        }
        rank
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<u8>>> {
        (1usize..=64, 1usize..=64).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.15), c), r).prop_map(
                |g| {
                    g.into_iter()
                        .map(|row| row.into_iter().map(u8::from).collect())
                        .collect()
                },
            )
        })
    }

    #[test]
    fn identity_and_zero_rank() {
        assert_eq!(SparseBitMatrix::identity(17).rank(), 17);
        assert_eq!(SparseBitMatrix::zeros(9, 13).rank(), 0);
    }

    #[test]
    fn all_ones_2x2_has_four_cycle() {
        let m = SparseBitMatrix::from_dense(&[[1u8, 1], [1, 1]]).unwrap();
        assert!(m.has_length4_cycle());
        assert_eq!(m.girth(12), Some(4));
        assert!(!SparseBitMatrix::identity(4).has_length4_cycle());
        assert_eq!(SparseBitMatrix::identity(4).girth(12), None);
    }

    #[test]
    fn girth_of_a_hexagon() {
        // Three checks and three variables arranged in a single 6-cycle.
        let m = SparseBitMatrix::from_dense(&[[1u8, 1, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
        assert!(!m.has_length4_cycle());
        assert_eq!(m.girth(12), Some(6));
        assert_eq!(m.girth(4), None);
    }

    #[test]
    fn permute_rejects_non_permutations() {
        let m = SparseBitMatrix::identity(3);
        assert!(m.permute(&[0, 0, 1], &[0, 1, 2]).is_err());
        assert!(m.permute(&[0, 1], &[0, 1, 2]).is_err());
        assert!(m.permute(&[0, 1, 2], &[0, 1, 3]).is_err());
    }

    #[test]
    fn permute_by_identity_and_reversal() {
        let m = SparseBitMatrix::from_dense(&[[1u8, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 0]]).unwrap();
        assert_eq!(m.permute(&[0, 1, 2], &[0, 1, 2, 3]).unwrap(), m);
        let rr = [2, 1, 0];
        let cr = [3, 2, 1, 0];
        let once = m.permute(&rr, &cr).unwrap();
        assert!(once.get(0, 0) == m.get(2, 3));
        assert_eq!(once.permute(&rr, &cr).unwrap(), m);
    }

    #[test]
    fn mul_vec_picks_columns() {
        let m = SparseBitMatrix::from_dense(&[[1u8, 0, 1], [0, 1, 1]]).unwrap();
        assert_eq!(m.mul_vec(&[0, 0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(m.mul_vec(&[1, 1, 1]).unwrap(), vec![0, 0]);
        assert!(m.mul_vec(&[1, 1]).is_err());
    }

    proptest! {
        #[test]
        fn rank_matches_dense_oracle(grid in small_matrix()) {
            let m = SparseBitMatrix::from_dense(&grid).unwrap();
            prop_assert_eq!(m.rank(), dense_rank(grid));
        }

        #[test]
        fn supports_are_transpose_consistent(grid in small_matrix()) {
            let m = SparseBitMatrix::from_dense(&grid).unwrap();
            for (r, c) in m.entries() {
                prop_assert!(m.col(c).binary_search(&r).is_ok());
            }
            prop_assert_eq!(m.col_weights().sum::<usize>(), m.nnz());
            for c in 0..m.cols() {
                prop_assert!(m.col(c).windows(2).all(|w| w[0] < w[1]));
            }
            prop_assert_eq!(m.transpose().transpose(), m);
        }

        #[test]
        fn permute_then_inverse_is_identity(
            grid in small_matrix(),
            seed in any::<u64>(),
        ) {
            use rand::{seq::SliceRandom, SeedableRng};
            let m = SparseBitMatrix::from_dense(&grid).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut ro: Vec<usize> = (0..m.rows()).collect();
            let mut co: Vec<usize> = (0..m.cols()).collect();
            ro.shuffle(&mut rng);
            co.shuffle(&mut rng);
            let p = m.permute(&ro, &co).unwrap();
            prop_assert_eq!(p.nnz(), m.nnz());
            let ri = inverse_permutation(&ro, m.rows()).unwrap();
            let ci = inverse_permutation(&co, m.cols()).unwrap();
            prop_assert_eq!(p.permute(&ri, &ci).unwrap(), m);
        }
    }
}
