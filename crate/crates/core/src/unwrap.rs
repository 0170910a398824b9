//! From quasi-cyclic block codes to time-invariant LDPC convolutional codes.
//!
//! A block-circulant `H` (`r0×n0` blocks of `q×q` circulants) is rearranged
//! into a circulant of `r0×n0` blocks `H_0 … H_{q-1}` by taking rows
//! `0, q, 2q, …, 1, q+1, …` and columns `0, q, 2q, …, 1, q+1, …`. Block
//! `(s, t)` of the result is `H_{(t-s) mod q}`. Cutting that matrix with the
//! repeated "n0 right, r0 down" pattern and repeating it gives the
//! semi-infinite parity-check matrix whose column of blocks is
//! `H_0, H_{q-1}, …, H_1`.
//!
//! Every [`SyndromeFormer`] is stored as a list of *taps*: tap `d` is the
//! `r0×n0` block that ties the bits sent in period `t` to the checks of
//! period `t + d`. Memory `m_s` is the number of taps and the constraint
//! length is `v_s = n0·m_s`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::codec::BlockCode;
use crate::error::{Error, Result};
use crate::gf2::{ExponentMatrix, SparseBitMatrix};

/// Small dense binary block, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitBlock {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl BitBlock {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            bits: vec![0; rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut b = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.as_ref().len(), cols, "ragged block rows");
            for (j, &v) in r.as_ref().iter().enumerate() {
                b.bits[i * cols + j] = u8::from(v != 0);
            }
        }
        b
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j] == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.cols + j] = 1;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.bits[i * self.cols..(i + 1) * self.cols]
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn col_weight(&self, j: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, j)).count()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// How a syndrome former was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnwrapMethod {
    /// Circulant-of-blocks rearrangement followed by the diagonal cut.
    Felstrom,
    /// Direct placement of each exponent as a delay (polynomial form).
    Tanner,
}

impl std::str::FromStr for UnwrapMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "felstrom" => Ok(Self::Felstrom),
            "tanner" => Ok(Self::Tanner),
            other => Err(Error::InvalidSpec(format!(
                "unknown unwrap method {other:?}"
            ))),
        }
    }
}

/// Syndrome former of a regular time-invariant LDPC convolutional code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeFormer {
    modulus: usize,
    r0: usize,
    n0: usize,
    taps: Vec<BitBlock>,
    method: UnwrapMethod,
}

/// Code metrics as reported by the command line tools.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormerMetrics {
    pub method: UnwrapMethod,
    pub q: usize,
    pub r0: usize,
    pub n0: usize,
    #[serde(rename = "R")]
    pub rate: f64,
    pub m_s: usize,
    pub v_s: usize,
}

impl SyndromeFormer {
    /// Builds a former directly from its taps.
    pub fn from_taps(modulus: usize, taps: Vec<BitBlock>, method: UnwrapMethod) -> Result<Self> {
        let first = taps
            .first()
            .ok_or_else(|| Error::InvalidSpec("a syndrome former needs at least one tap".into()))?;
        let (r0, n0) = (first.rows(), first.cols());
        if let Some(bad) = taps.iter().find(|t| t.rows() != r0 || t.cols() != n0) {
            return Err(Error::DimensionMismatch {
                expected: r0 * n0,
                found: bad.rows() * bad.cols(),
            });
        }
        Ok(Self {
            modulus,
            r0,
            n0,
            taps,
            method,
        })
    }

    /// Circulant size of the block code the former came from.
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn r0(&self) -> usize {
        self.r0
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn method(&self) -> UnwrapMethod {
        self.method
    }

    pub fn taps(&self) -> &[BitBlock] {
        &self.taps
    }

    /// Syndrome former memory `m_s`: the number of periods a bit stays
    /// involved in checks.
    pub fn memory(&self) -> usize {
        self.taps.len()
    }

    /// Syndrome former constraint length `v_s = n0·m_s`.
    pub fn constraint_length(&self) -> usize {
        self.n0 * self.memory()
    }

    /// Asymptotic rate `(n0 - r0) / n0`.
    pub fn rate(&self) -> f64 {
        (self.n0 - self.r0) as f64 / self.n0 as f64
    }

    /// Block `H_u` of the circulant-of-blocks form (only for Felstrom formers).
    pub fn circulant_block(&self, u: usize) -> Option<&BitBlock> {
        (self.method == UnwrapMethod::Felstrom && u < self.modulus)
            .then(|| &self.taps[(self.modulus - u) % self.modulus])
    }

    /// Total weight of each of the `n0` columns over all taps.
    pub fn column_weights(&self) -> Vec<usize> {
        (0..self.n0)
            .map(|j| self.taps.iter().map(|t| t.col_weight(j)).sum())
            .collect()
    }

    pub fn metrics(&self) -> FormerMetrics {
        FormerMetrics {
            method: self.method,
            q: self.modulus,
            r0: self.r0,
            n0: self.n0,
            rate: self.rate(),
            m_s: self.memory(),
            v_s: self.constraint_length(),
        }
    }

    /// Rows of the `(m_s·r0)×n0` stacked display.
    ///
    /// Felstrom formers list taps `0, 1, …, m_s-1` from the top, i.e. the
    /// column of blocks `H_0, H_{q-1}, …, H_1`. Tanner formers are drawn
    /// upside down: the largest delay on top and the check rows of each
    /// period in reverse order.
    pub fn figure_rows(&self) -> Vec<Vec<u8>> {
        let natural = self.taps.iter().flat_map(|t| t.to_rows());
        match self.method {
            UnwrapMethod::Felstrom => natural.collect(),
            UnwrapMethod::Tanner => {
                let mut rows: Vec<_> = natural.collect();
                rows.reverse();
                rows
            }
        }
    }

    /// Space-separated 0/1 dump of [`SyndromeFormer::figure_rows`].
    pub fn render_figure(&self) -> String {
        render_grid(&self.figure_rows())
    }

    /// The same display transposed: `n0` rows, `m_s·r0` columns (`H_s`).
    pub fn render_transposed(&self) -> String {
        let rows = self.figure_rows();
        let t: Vec<Vec<u8>> = (0..self.n0)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        render_grid(&t)
    }
}

fn render_grid(rows: &[Vec<u8>]) -> String {
    let mut out = String::new();
    for r in rows {
        let cells: Vec<&str> = r.iter().map(|&b| if b == 1 { "1" } else { "0" }).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

/// Row and column orders taking a block-circulant matrix to circulant-of-blocks form.
///
/// New row `s·r0 + l` is old row `l·q + s`; new column `t·n0 + j` is old column `j·q + t`.
pub fn circulant_of_blocks_orders(q: usize, r0: usize, n0: usize) -> (Vec<usize>, Vec<usize>) {
    let rows = (0..q)
        .flat_map(|s| (0..r0).map(move |l| l * q + s))
        .collect();
    let cols = (0..q)
        .flat_map(|t| (0..n0).map(move |j| j * q + t))
        .collect();
    (rows, cols)
}

/// Extracts `H_0 … H_{q-1}` from an `(r0·q)×(n0·q)` block-circulant matrix.
///
/// `H_u[l][j]` is the entry at `(l·q, j·q + u)`. Every other entry is checked
/// against the quasi-cyclic structure.
pub fn to_circulant_of_blocks(
    h: &SparseBitMatrix,
    q: usize,
    r0: usize,
    n0: usize,
) -> Result<Vec<BitBlock>> {
    if q == 0 || h.rows() != r0 * q || h.cols() != n0 * q {
        return Err(Error::NotQuasiCyclic {
            q,
            detail: format!(
                "expected {}x{}, found {}x{}",
                r0 * q,
                n0 * q,
                h.rows(),
                h.cols()
            ),
        });
    }
    let mut blocks = vec![BitBlock::zeros(r0, n0); q];
    for l in 0..r0 {
        for &c in h.row(l * q) {
            blocks[c % q].set(l, c / q);
        }
    }
    // Entry (l·q + s, j·q + t) must equal H_{(t - s) mod q}[l][j].
    for l in 0..r0 {
        for s in 0..q {
            let r = l * q + s;
            let mut expected: Vec<usize> = (0..n0)
                .flat_map(|j| (0..q).map(move |u| (j, u)))
                .filter(|&(j, u)| blocks[u].get(l, j))
                .map(|(j, u)| j * q + (s + u) % q)
                .collect();
            expected.sort_unstable();
            if h.row(r) != expected.as_slice() {
                return Err(Error::NotQuasiCyclic {
                    q,
                    detail: format!("row {r} is not a cyclic shift of row {}", l * q),
                });
            }
        }
    }
    Ok(blocks)
}

/// Unwraps the circulant of blocks `H_0 … H_{q-1}` into a convolutional code.
///
/// Tap `d` is `H_{(q - d) mod q}`, so `m_s = q` and `v_s = q·n0`.
pub fn unwrap(blocks: &[BitBlock]) -> Result<SyndromeFormer> {
    let q = blocks.len();
    let taps = (0..q).map(|d| blocks[(q - d) % q].clone()).collect();
    SyndromeFormer::from_taps(q, taps, UnwrapMethod::Felstrom)
}

/// Expands, rearranges and unwraps an exponent matrix in one go.
pub fn unwrap_exponents(exp: &ExponentMatrix) -> Result<SyndromeFormer> {
    let blocks = to_circulant_of_blocks(&exp.expand(), exp.modulus(), exp.r0(), exp.n0())?;
    unwrap(&blocks)
}

/// Tanner-style unwrapping: after subtracting each row's minimum, exponent
/// `e(i, j)` becomes a one at check row `i`, delay `e(i, j)`, column `j`.
///
/// The memory is the largest spread `max_j e(i, j) - min_j e(i, j)` over the
/// rows, plus one.
pub fn unwrap_tanner(exp: &ExponentMatrix) -> Result<SyndromeFormer> {
    let values = exp
        .values()
        .ok_or_else(|| Error::InvalidSpec("null exponents cannot be unwrapped".into()))?;
    let (r0, n0) = (exp.r0(), exp.n0());
    let mins: Vec<usize> = values
        .iter()
        .map(|r| r.iter().copied().min().unwrap_or(0))
        .collect();
    let memory = values
        .iter()
        .zip(&mins)
        .map(|(r, &lo)| r.iter().copied().max().unwrap_or(0) - lo + 1)
        .max()
        .unwrap_or(1);
    let mut taps = vec![BitBlock::zeros(r0, n0); memory];
    for (i, row) in values.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            taps[e - mins[i]].set(i, j);
        }
    }
    SyndromeFormer::from_taps(exp.modulus(), taps, UnwrapMethod::Tanner)
}

/// How the convolutional code is cut to a finite block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Encoder starts and ends in the zero state; the trailing checks of the
    /// last `m_s - 1` periods are kept.
    Zero,
    /// Checks of period `t` wrap around to period `t mod L`.
    TailBiting,
}

/// Finite realization of a convolutional code over `L` periods.
#[derive(Clone, Debug)]
pub struct TerminatedCode {
    former: SyndromeFormer,
    periods: usize,
    mode: Termination,
    code: BlockCode,
}

impl TerminatedCode {
    pub fn former(&self) -> &SyndromeFormer {
        &self.former
    }

    /// Number of transmitted periods `L`.
    pub fn periods(&self) -> usize {
        self.periods
    }

    pub fn mode(&self) -> Termination {
        self.mode
    }

    pub fn code(&self) -> &BlockCode {
        &self.code
    }

    pub fn h(&self) -> &SparseBitMatrix {
        self.code.h()
    }

    /// Block length `L·n0`.
    pub fn n(&self) -> usize {
        self.code.n()
    }

    /// Dimension `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.code.k()
    }

    /// Asymptotic rate of the underlying convolutional code.
    pub fn design_rate(&self) -> f64 {
        self.former.rate()
    }

    /// Period of bit `i`.
    pub fn period_of(&self, i: usize) -> usize {
        i / self.former.n0
    }
}

/// Builds the parity-check matrix of `sf` over `periods` transmitted periods.
///
/// Bit `t·n0 + j` is column `j` of period `t`; check row `p·r0 + i` is row `i`
/// of check period `p`. Tap `d` connects period `t` to check period `t + d`
/// (taken modulo `L` when tail-biting).
pub fn terminate(sf: &SyndromeFormer, periods: usize, mode: Termination) -> Result<TerminatedCode> {
    let (r0, n0, ms) = (sf.r0, sf.n0, sf.memory());
    let min = match mode {
        Termination::Zero => 1,
        Termination::TailBiting => ms,
    };
    if periods < min {
        return Err(Error::TerminationTooShort { periods, min });
    }
    let check_periods = match mode {
        Termination::Zero => periods + ms - 1,
        Termination::TailBiting => periods,
    };
    let mut supports = vec![Vec::new(); check_periods * r0];
    for t in 0..periods {
        for (d, tap) in sf.taps.iter().enumerate() {
            let p = match mode {
                Termination::Zero => t + d,
                Termination::TailBiting => (t + d) % periods,
            };
            for i in 0..r0 {
                for j in 0..n0 {
                    if tap.get(i, j) {
                        supports[p * r0 + i].push(t * n0 + j);
                    }
                }
            }
        }
    }
    let h = SparseBitMatrix::from_row_supports(periods * n0, supports)?;
    if let Some(c) = h.col_weights().position(|w| w == 0) {
        return Err(Error::InvalidSpec(format!(
            "column {} of the terminated code has no checks",
            c % n0
        )));
    }
    Ok(TerminatedCode {
        former: sf.clone(),
        periods,
        mode,
        code: BlockCode::new(h),
    })
}
