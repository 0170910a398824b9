use crate::error::{Error, Result};
use crate::gf2::SparseBitMatrix;

/// Magnitude limit applied to messages entering a check update.
pub const LLR_CLIP: f64 = 25.0;

/// Per-bit log-likelihood ratios; positive values favour bit 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrFrame(pub Vec<f64>);

impl LlrFrame {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Sign-only hard decision; zero decides for bit 0.
    pub fn hard_decision(&self) -> Vec<u8> {
        self.0.iter().map(|&l| u8::from(l < 0.0)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub hard_bits: Vec<u8>,
    pub iterations_used: usize,
    pub converged: bool,
}

/// Check node update rule. Both compute the same function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CheckRule {
    /// Leave-one-out product of `tanh(L/2)` followed by `2·atanh`.
    #[default]
    TanhProduct,
    /// Pairwise box-plus with forward and backward partial results.
    BoxPlus,
}

/// `a ⊞ b = 2·atanh(tanh(a/2)·tanh(b/2))`, in the stable min-plus-correction form.
pub fn boxplus(a: f64, b: f64) -> f64 {
    let s = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    s * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Flooding sum-product decoder with reusable message buffers.
///
/// Checks are processed in index order, then variables in index order.
#[derive(Clone, Debug)]
pub struct SpaDecoder {
    n: usize,
    max_iter: usize,
    rule: CheckRule,
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_start: Vec<usize>,
    var_edges: Vec<usize>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    scratch: Vec<f64>,
}

impl SpaDecoder {
    pub fn new(h: &SparseBitMatrix, max_iter: usize) -> Self {
        let mut check_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        check_start.push(0);
        for r in 0..h.rows() {
            edge_var.extend_from_slice(h.row(r));
            check_start.push(edge_var.len());
        }
        let mut var_start = vec![0usize; h.cols() + 1];
        for &v in &edge_var {
            var_start[v + 1] += 1;
        }
        for v in 0..h.cols() {
            var_start[v + 1] += var_start[v];
        }
        let mut fill = var_start.clone();
        let mut var_edges = vec![0usize; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        let max_deg = check_start
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0);
        Self {
            n: h.cols(),
            max_iter,
            rule: CheckRule::default(),
            check_start,
            var_start,
            v2c: vec![0.0; edge_var.len()],
            c2v: vec![0.0; edge_var.len()],
            edge_var,
            var_edges,
            scratch: vec![0.0; 2 * max_deg + 2],
        }
    }

    pub fn with_rule(mut self, rule: CheckRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    pub fn decode(&mut self, llr: &LlrFrame) -> Result<DecodeResult> {
        if llr.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: llr.len(),
            });
        }
        let llr = llr.as_slice();
        let mut hard: Vec<u8> = llr.iter().map(|&l| u8::from(l < 0.0)).collect();
        if self.syndrome_is_zero(&hard) {
            return Ok(DecodeResult {
                hard_bits: hard,
                iterations_used: 0,
                converged: true,
            });
        }
        for (v, &l) in llr.iter().enumerate().take(self.n) {
            for &e in &self.var_edges[self.var_start[v]..self.var_start[v + 1]] {
                self.v2c[e] = l;
            }
        }
        for iter in 1..=self.max_iter {
            self.update_checks();
            for v in 0..self.n {
                let edges = &self.var_edges[self.var_start[v]..self.var_start[v + 1]];
                let total = llr[v] + edges.iter().map(|&e| self.c2v[e]).sum::<f64>();
                for &e in edges {
                    self.v2c[e] = total - self.c2v[e];
                }
                hard[v] = u8::from(total < 0.0);
            }
            if self.syndrome_is_zero(&hard) {
                return Ok(DecodeResult {
                    hard_bits: hard,
                    iterations_used: iter,
                    converged: true,
                });
            }
        }
        Ok(DecodeResult {
            hard_bits: hard,
            iterations_used: self.max_iter,
            converged: false,
        })
    }

    fn syndrome_is_zero(&self, hard: &[u8]) -> bool {
        self.check_start.windows(2).all(|w| {
            self.edge_var[w[0]..w[1]]
                .iter()
                .fold(0u8, |acc, &v| acc ^ hard[v])
                == 0
        })
    }

    fn update_checks(&mut self) {
        for c in 0..self.check_start.len() - 1 {
            let (lo, hi) = (self.check_start[c], self.check_start[c + 1]);
            let deg = hi - lo;
            if deg == 0 {
                continue;
            }
            if deg == 1 {
                self.c2v[lo] = 0.0;
                continue;
            }
            let inputs = &self.v2c[lo..hi];
            let out = &mut self.c2v[lo..hi];
            let (fwd, bwd) = self.scratch.split_at_mut(deg + 1);
            match self.rule {
                CheckRule::TanhProduct => {
                    // fwd[i] = product of t[0..i], bwd[i] = product of t[i..deg].
                    fwd[0] = 1.0;
                    for (i, &m) in inputs.iter().enumerate() {
                        fwd[i + 1] = fwd[i] * (0.5 * m.clamp(-LLR_CLIP, LLR_CLIP)).tanh();
                    }
                    bwd[deg] = 1.0;
                    for i in (0..deg).rev() {
                        bwd[i] = bwd[i + 1] * (0.5 * inputs[i].clamp(-LLR_CLIP, LLR_CLIP)).tanh();
                    }
                    for i in 0..deg {
                        let p = fwd[i] * bwd[i + 1];
                        out[i] = (2.0 * p.atanh()).clamp(-LLR_CLIP, LLR_CLIP);
                    }
                }
                CheckRule::BoxPlus => {
                    let m = |i: usize| inputs[i].clamp(-LLR_CLIP, LLR_CLIP);
                    fwd[0] = m(0);
                    for i in 1..deg {
                        fwd[i] = boxplus(fwd[i - 1], m(i));
                    }
                    bwd[deg - 1] = m(deg - 1);
                    for i in (0..deg - 1).rev() {
                        bwd[i] = boxplus(bwd[i + 1], m(i));
                    }
                    out[0] = bwd[1];
                    out[deg - 1] = fwd[deg - 2];
                    for i in 1..deg - 1 {
                        out[i] = boxplus(fwd[i - 1], bwd[i + 1]);
                    }
                }
            }
        }
    }
}

/// One-shot decode; see [`SpaDecoder`] for repeated use.
pub fn decode_sp(h: &SparseBitMatrix, llr: &LlrFrame, max_iter: usize) -> Result<DecodeResult> {
    SpaDecoder::new(h, max_iter).decode(llr)
}
