//! Encoding and sum-product decoding.

mod decoder;

pub use decoder::{boxplus, decode_sp, CheckRule, DecodeResult, LlrFrame, SpaDecoder, LLR_CLIP};

use crate::error::{Error, Result};
use crate::gf2::{Echelon, SparseBitMatrix};

/// GF(2) syndrome `H·v`.
pub fn syndrome(h: &SparseBitMatrix, v: &[u8]) -> Result<Vec<u8>> {
    h.mul_vec(v)
}

/// Linear block code given by a parity-check matrix, with a systematic encoder.
///
/// Information bits sit on the non-pivot columns of a row echelon form of
/// `H`; the pivot columns are solved by back substitution.
#[derive(Clone, Debug)]
pub struct BlockCode {
    h: SparseBitMatrix,
    echelon: Echelon,
    info: Vec<usize>,
}

impl BlockCode {
    pub fn new(h: SparseBitMatrix) -> Self {
        let echelon = Echelon::from_matrix(&h);
        let info = echelon.free_columns();
        Self { h, echelon, info }
    }

    pub fn h(&self) -> &SparseBitMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.info.len()
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Actual rate `k / n`.
    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    /// Codeword positions carrying the information bits, increasing.
    pub fn info_positions(&self) -> &[usize] {
        &self.info
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn is_codeword(&self, v: &[u8]) -> bool {
        v.len() == self.n()
            && (0..self.h.rows())
                .all(|r| self.h.row(r).iter().filter(|&&c| v[c] == 1).count() % 2 == 0)
    }

    /// Systematic encoding: `info[i]` lands on `info_positions()[i]`.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: info.len(),
            });
        }
        let n = self.n();
        let mut packed = vec![0u64; n.div_ceil(64)];
        for (&pos, &b) in self.info.iter().zip(info) {
            if b & 1 == 1 {
                packed[pos / 64] |= 1 << (pos % 64);
            }
        }
        // Each echelon row only involves columns at or after its pivot, so
        // solving pivots from the right uses only bits already fixed.
        for r in self.echelon.back_substitution_order() {
            let row = &self.echelon.rows()[r];
            let lead = row.leading().expect("echelon rows are nonzero");
            let parity = row
                .word_range()
                .fold(0u32, |acc, (w, bits)| acc ^ (bits & packed[w]).count_ones())
                & 1;
            if parity == 1 {
                packed[lead / 64] |= 1 << (lead % 64);
            }
        }
        Ok((0..n)
            .map(|i| ((packed[i / 64] >> (i % 64)) & 1) as u8)
            .collect())
    }

    /// Information bits read back from a codeword.
    pub fn extract_info(&self, codeword: &[u8]) -> Vec<u8> {
        self.info.iter().map(|&p| codeword[p]).collect()
    }

    /// Basis of the code: the encodings of the unit information vectors.
    pub fn basis(&self) -> Vec<Vec<u8>> {
        (0..self.k())
            .map(|i| {
                let mut u = vec![0u8; self.k()];
                u[i] = 1;
                self.encode(&u).expect("unit vector has length k")
            })
            .collect()
    }
}
