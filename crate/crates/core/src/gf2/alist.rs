//! alist interchange format for sparse parity-check matrices.
//!
//! ```text
//! cols rows
//! max_col_weight max_row_weight
//! <col weights>
//! <row weights>
//! <one line per column: 1-based row indices, zero-padded to max_col_weight>
//! <one line per row: 1-based column indices, zero-padded to max_row_weight>
//! ```
//! The reader also accepts unpadded lists.

use std::fmt::Write as _;

use super::SparseBitMatrix;
use crate::error::{Error, Result};

pub fn to_alist(m: &SparseBitMatrix) -> String {
    let max_col = m.col_weights().max().unwrap_or(0);
    let max_row = m.row_weights().max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.cols(), m.rows());
    let _ = writeln!(out, "{max_col} {max_row}");
    let join = |it: &mut dyn Iterator<Item = usize>| {
        it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(out, "{}", join(&mut m.col_weights()));
    let _ = writeln!(out, "{}", join(&mut m.row_weights()));
    for c in 0..m.cols() {
        let mut line: Vec<usize> = m.col(c).iter().map(|&r| r + 1).collect();
        line.resize(max_col, 0);
        let _ = writeln!(out, "{}", join(&mut line.into_iter()));
    }
    for r in 0..m.rows() {
        let mut line: Vec<usize> = m.row(r).iter().map(|&c| c + 1).collect();
        line.resize(max_row, 0);
        let _ = writeln!(out, "{}", join(&mut line.into_iter()));
    }
    out
}

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
            .collect();
        Self { items, pos: 0 }
    }

    fn line(&self) -> usize {
        self.items
            .get(self.pos)
            .or(self.items.last())
            .map_or(0, |t| t.0)
    }

    fn next(&mut self) -> Result<usize> {
        let (line, tok) = *self.items.get(self.pos).ok_or_else(|| Error::Alist {
            line: self.line(),
            msg: "unexpected end of input".into(),
        })?;
        self.pos += 1;
        tok.parse().map_err(|_| Error::Alist {
            line,
            msg: format!("expected a non-negative integer, found {tok:?}"),
        })
    }

    fn skip_padding(&mut self) {
        while self.items.get(self.pos).is_some_and(|t| t.1 == "0") {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Alist {
            line: self.line(),
            msg: msg.into(),
        }
    }
}

pub fn from_alist(text: &str) -> Result<SparseBitMatrix> {
    let mut t = Tokens::new(text);
    let cols = t.next()?;
    let rows = t.next()?;
    let max_col = t.next()?;
    let max_row = t.next()?;
    let col_w: Vec<usize> = (0..cols).map(|_| t.next()).collect::<Result<_>>()?;
    let row_w: Vec<usize> = (0..rows).map(|_| t.next()).collect::<Result<_>>()?;
    if col_w.iter().any(|&w| w > max_col) || row_w.iter().any(|&w| w > max_row) {
        return Err(t.err("degree exceeds the declared maximum"));
    }
    let mut entries = Vec::new();
    for (c, &w) in col_w.iter().enumerate() {
        for _ in 0..w {
            let r = t.next()?;
            if r == 0 || r > rows {
                return Err(t.err(format!("row index {r} out of range")));
            }
            entries.push((r - 1, c));
        }
        t.skip_padding();
    }
    let m = SparseBitMatrix::from_entries(rows, cols, entries)?;
    for (r, &w) in row_w.iter().enumerate() {
        let mut support = Vec::with_capacity(w);
        for _ in 0..w {
            let c = t.next()?;
            if c == 0 || c > cols {
                return Err(t.err(format!("column index {c} out of range")));
            }
            support.push(c - 1);
        }
        t.skip_padding();
        support.sort_unstable();
        if support != m.row(r) {
            return Err(t.err(format!("row {} disagrees with the column lists", r + 1)));
        }
    }
    if col_w.iter().zip(m.col_weights()).any(|(a, b)| *a != b) {
        return Err(t.err("column weights disagree with the column lists"));
    }
    Ok(m)
}
