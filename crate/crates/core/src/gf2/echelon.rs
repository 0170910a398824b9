//! Row echelon form over GF(2) with windowed bit rows.
//!
//! Each stored row only keeps the 64-bit words between its first and last one.
//! Rows of a banded matrix stay inside the band while they are reduced, so
//! elimination on a terminated convolutional code costs roughly
//! `rows × band × band / 64` word operations instead of `rows² × cols / 64`.

use super::SparseBitMatrix;

const NONE: u32 = u32::MAX;

/// Bit row stored as the word range `[offset, offset + words.len())`.
///
/// Trimmed: the first and last word are nonzero unless the row is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitWindow {
    offset: usize,
    words: Vec<u64>,
}

impl BitWindow {
    pub fn from_support(support: &[usize]) -> Self {
        let (Some(&lo), Some(&hi)) = (support.iter().min(), support.iter().max()) else {
            return Self::default();
        };
        let offset = lo / 64;
        let mut words = vec![0u64; hi / 64 - offset + 1];
        for &c in support {
            words[c / 64 - offset] ^= 1 << (c % 64);
        }
        let mut w = Self { offset, words };
        w.trim();
        w
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn leading(&self) -> Option<usize> {
        self.words
            .first()
            .map(|w| self.offset * 64 + w.trailing_zeros() as usize)
    }

    pub fn get(&self, bit: usize) -> bool {
        let w = bit / 64;
        w >= self.offset
            && w < self.offset + self.words.len()
            && (self.words[w - self.offset] >> (bit % 64)) & 1 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(move |(i, &w)| {
            let base = (self.offset + i) * 64;
            BitIter(w).map(move |b| base + b)
        })
    }

    /// Stored words with their absolute word index.
    pub fn word_range(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.words
            .iter()
            .enumerate()
            .map(move |(i, &w)| (self.offset + i, w))
    }

    pub fn xor_assign(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.words.len()).max(other.offset + other.words.len());
        if lo < self.offset || hi > self.offset + self.words.len() {
            let mut words = vec![0u64; hi - lo];
            let start = self.offset - lo;
            words[start..start + self.words.len()].copy_from_slice(&self.words);
            self.words = words;
            self.offset = lo;
        }
        let start = other.offset - self.offset;
        for (dst, src) in self.words[start..].iter_mut().zip(&other.words) {
            *dst ^= src;
        }
        self.trim();
    }

    fn trim(&mut self) {
        let lead = self.words.iter().take_while(|&&w| w == 0).count();
        if lead == self.words.len() {
            self.words.clear();
            self.offset = 0;
            return;
        }
        let tail = self.words.iter().rev().take_while(|&&w| w == 0).count();
        self.words.truncate(self.words.len() - tail);
        if lead > 0 {
            self.words.drain(..lead);
            self.offset += lead;
        }
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Incrementally built echelon basis of a row space.
///
/// Stored rows have pairwise distinct leading columns (pivots); they are not
/// reduced against each other, which keeps them banded.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<BitWindow>,
    pivot_of: Vec<u32>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
            pivot_of: vec![NONE; cols],
        }
    }

    pub fn from_matrix(m: &SparseBitMatrix) -> Self {
        let mut e = Self::new(m.cols());
        for r in 0..m.rows() {
            e.insert_support(m.row(r));
        }
        e
    }

    /// Adds a row given by its support; returns `false` if it was dependent.
    pub fn insert_support(&mut self, support: &[usize]) -> bool {
        self.insert(BitWindow::from_support(support))
    }

    pub fn insert(&mut self, mut row: BitWindow) -> bool {
        while let Some(lead) = row.leading() {
            match self.pivot_of[lead] {
                NONE => {
                    self.pivot_of[lead] = self.rows.len() as u32;
                    self.rows.push(row);
                    return true;
                }
                p => row.xor_assign(&self.rows[p as usize]),
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitWindow] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of[col] != NONE
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.is_pivot(c)).collect()
    }

    /// Non-pivot columns in increasing order; these carry information bits.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// Indices into [`Echelon::rows`] ordered by decreasing pivot column.
    pub fn back_substitution_order(&self) -> Vec<usize> {
        (0..self.cols)
            .rev()
            .filter_map(|c| (self.pivot_of[c] != NONE).then_some(self.pivot_of[c] as usize))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_xor_extends_and_trims() {
        let mut a = BitWindow::from_support(&[3, 200]);
        let b = BitWindow::from_support(&[3, 500]);
        a.xor_assign(&b);
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![200, 500]);
        assert_eq!(a.leading(), Some(200));
        a.xor_assign(&BitWindow::from_support(&[200, 500]));
        assert!(a.is_zero());
        assert_eq!(a.leading(), None);
    }

    #[test]
    fn window_get() {
        let a = BitWindow::from_support(&[64, 130]);
        assert!(a.get(64) && a.get(130));
        assert!(!a.get(0) && !a.get(65) && !a.get(1000));
    }

    #[test]
    fn dependent_rows_are_rejected() {
        let mut e = Echelon::new(6);
        assert!(e.insert_support(&[0, 2, 4]));
        assert!(e.insert_support(&[2, 5]));
        assert!(!e.insert_support(&[0, 4, 5]));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivot_columns(), vec![0, 2]);
        assert_eq!(e.free_columns(), vec![1, 3, 4, 5]);
    }
}
