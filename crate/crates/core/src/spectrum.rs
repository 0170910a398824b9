//! Low-weight spectrum estimation and the truncated union bound.
//!
//! Three sources of codewords are provided: decoding failures harvested from
//! noisy frames, decoding of strong error impulses, and exhaustive
//! enumeration for small dimensions. Harvested words are split into their
//! Tanner-graph components (each is a codeword by itself) and, for
//! convolutional codes, also grouped by time shift.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Write;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::channel::{db_to_linear, thread_pool, ChannelPoint, FrameSource, Transmission};
use crate::codec::{BlockCode, LlrFrame, SpaDecoder};
use crate::error::{Error, Result};
use crate::unwrap::{TerminatedCode, Termination};

/// How multiplicities are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumBasis {
    /// Distinct codewords of the finite block.
    PerBlock,
    /// Distinct codewords up to a shift by whole periods.
    PerPeriod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub d: usize,
    /// Number of codewords of weight `d`.
    #[serde(rename = "A")]
    pub a: u64,
    /// Total information weight of those codewords.
    #[serde(rename = "W")]
    pub w: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpectrum {
    pub basis: SpectrumBasis,
    /// `true` when every codeword up to `weight_cap` was enumerated.
    pub exhaustive: bool,
    /// Information bits the `W` column is normalized by (per block or per period).
    pub info_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weight_cap: Option<usize>,
    pub entries: Vec<SpectrumEntry>,
}

impl WeightSpectrum {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest weight seen; an upper bound on the minimum distance.
    pub fn d_upper(&self) -> Option<usize> {
        self.entries.first().map(|e| e.d)
    }

    /// The minimum distance, known only for exhaustive spectra.
    pub fn min_distance(&self) -> Option<usize> {
        if self.exhaustive {
            self.d_upper()
        } else {
            None
        }
    }

    pub fn multiplicity(&self, d: usize) -> u64 {
        self.entries.iter().find(|e| e.d == d).map_or(0, |e| e.a)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Time structure used to identify shifted copies of a codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Periodicity {
    /// Plain block code.
    None,
    /// Zero-terminated convolutional code: shifts that stay inside the block.
    Shift { n0: usize, periods: usize },
    /// Tail-biting code: cyclic shifts by multiples of `n0`.
    Cyclic { n0: usize, periods: usize },
}

impl Periodicity {
    pub fn of(tc: &TerminatedCode) -> Self {
        let (n0, periods) = (tc.former().n0(), tc.periods());
        match tc.mode() {
            Termination::Zero => Self::Shift { n0, periods },
            Termination::TailBiting => Self::Cyclic { n0, periods },
        }
    }

    fn periods(&self) -> usize {
        match *self {
            Self::None => 1,
            Self::Shift { periods, .. } | Self::Cyclic { periods, .. } => periods,
        }
    }
}

/// Representative of the shift class of a sorted support.
///
/// Zero-terminated: moved so that it starts in period 0. Tail-biting: the
/// lexicographically smallest rotation. Block codes: unchanged.
pub fn canonicalize(support: &[usize], per: Periodicity) -> Vec<usize> {
    match per {
        Periodicity::None => support.to_vec(),
        Periodicity::Shift { n0, .. } => {
            let shift = support.first().map_or(0, |&b| b / n0 * n0);
            support.iter().map(|&b| b - shift).collect()
        }
        Periodicity::Cyclic { n0, periods } => {
            let n = n0 * periods;
            (0..periods)
                .map(|t| {
                    let mut s: Vec<usize> = support.iter().map(|&b| (b + n - t * n0) % n).collect();
                    s.sort_unstable();
                    s
                })
                .min()
                .unwrap_or_default()
        }
    }
}

/// Splits a support into the pieces connected through shared checks.
pub fn split_components(code: &BlockCode, support: &[usize]) -> Vec<Vec<usize>> {
    let h = code.h();
    let in_support: HashSet<usize> = support.iter().copied().collect();
    let mut seen = HashSet::with_capacity(support.len());
    let mut out = Vec::new();
    for &start in support {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &c in h.col(v) {
                for &u in h.row(c) {
                    if in_support.contains(&u) && seen.insert(u) {
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Deduplicated collection of low-weight codewords.
#[derive(Clone, Debug)]
pub struct CodewordHarvest<'a> {
    code: &'a BlockCode,
    per: Periodicity,
    raw: BTreeSet<Vec<usize>>,
    classes: BTreeSet<Vec<usize>>,
}

impl<'a> CodewordHarvest<'a> {
    pub fn new(code: &'a BlockCode, per: Periodicity) -> Self {
        Self {
            code,
            per,
            raw: BTreeSet::new(),
            classes: BTreeSet::new(),
        }
    }

    /// Adds every connected piece of a codeword given as a hard-decision word.
    pub fn insert_word(&mut self, word: &[u8]) {
        let support: Vec<usize> = (0..word.len()).filter(|&i| word[i] == 1).collect();
        self.insert_support(&support);
    }

    pub fn insert_support(&mut self, support: &[usize]) {
        for comp in split_components(self.code, support) {
            self.classes.insert(canonicalize(&comp, self.per));
            self.raw.insert(comp);
        }
    }

    /// Distinct codewords as found, sorted supports.
    pub fn codewords(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.raw.iter()
    }

    /// Distinct shift classes, by representative.
    pub fn classes(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.classes.iter()
    }

    pub fn spectrum(&self, basis: SpectrumBasis) -> WeightSpectrum {
        let (set, info_bits) = match basis {
            SpectrumBasis::PerBlock => (&self.raw, self.code.k() as f64),
            SpectrumBasis::PerPeriod => (
                &self.classes,
                self.code.k() as f64 / self.per.periods() as f64,
            ),
        };
        let mut is_info = vec![false; self.code.n()];
        for &p in self.code.info_positions() {
            is_info[p] = true;
        }
        let mut acc: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
        for s in set {
            let e = acc.entry(s.len()).or_default();
            e.0 += 1;
            e.1 += s.iter().filter(|&&b| is_info[b]).count() as u64;
        }
        WeightSpectrum {
            basis,
            exhaustive: false,
            info_bits,
            weight_cap: None,
            entries: acc
                .into_iter()
                .map(|(d, (a, w))| SpectrumEntry { d, a, w })
                .collect(),
        }
    }
}

/// Settings of the Monte Carlo harvest.
#[derive(Clone, Debug, PartialEq)]
pub struct McConfig {
    pub ebno_db: f64,
    pub rate: f64,
    pub frames: u64,
    pub seed: u64,
    pub workers: usize,
    pub max_iter: usize,
}

/// Decodes noisy all-zero frames and keeps every converged nonzero output.
pub fn harvest_mc<'a>(
    code: &'a BlockCode,
    per: Periodicity,
    cfg: &McConfig,
) -> Result<CodewordHarvest<'a>> {
    if cfg.frames == 0 {
        return Err(Error::InvalidSpec("at least one frame is needed".into()));
    }
    let pool = thread_pool(cfg.workers)?;
    let decoder = SpaDecoder::new(code.h(), cfg.max_iter);
    let source = FrameSource {
        code,
        decoder: &decoder,
        point: ChannelPoint::new(cfg.ebno_db, cfg.rate)?,
        transmission: Transmission::AllZero,
        seed: cfg.seed,
        point_index: 0,
    };
    let mut harvest = CodewordHarvest::new(code, per);
    source.for_each(&pool, cfg.frames, |_, r| {
        if r.decoded.converged && r.decoded.hard_bits.contains(&1) {
            harvest.insert_word(&r.decoded.hard_bits);
        }
        true
    });
    Ok(harvest)
}

/// Monte Carlo spectrum estimate, per period for terminated convolutional codes.
pub fn estimate_spectrum_mc(tc: &TerminatedCode, cfg: &McConfig) -> Result<WeightSpectrum> {
    let per = Periodicity::of(tc);
    Ok(harvest_mc(tc.code(), per, cfg)?.spectrum(SpectrumBasis::PerPeriod))
}

/// Which bits may start an impulse pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anchors {
    All,
    /// Bits `start..end`.
    Range(usize, usize),
}

/// Settings of the error-impulse search.
#[derive(Clone, Debug, PartialEq)]
pub struct ImpulseConfig {
    pub max_weight: usize,
    /// LLR given to every bit outside the pattern.
    pub background: f64,
    /// Impulse magnitudes tried, in order, until one yields a codeword.
    pub amplitudes: Vec<f64>,
    pub max_iter: usize,
    pub anchors: Anchors,
    pub workers: usize,
}

impl ImpulseConfig {
    pub fn new(max_weight: usize) -> Self {
        Self {
            max_weight,
            background: 4.0,
            amplitudes: vec![8.0, 16.0, 32.0],
            max_iter: 50,
            anchors: Anchors::All,
            workers: 1,
        }
    }
}

/// Bits sharing at least one check with `v`, excluding `v`.
fn neighbours(code: &BlockCode, v: usize) -> Vec<usize> {
    let h = code.h();
    let mut out: Vec<usize> = h
        .col(v)
        .iter()
        .flat_map(|&c| h.row(c).iter().copied())
        .filter(|&u| u != v)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// All impulse patterns: an anchor plus up to `max_weight - 1` of its neighbours.
fn impulse_patterns(code: &BlockCode, anchors: &Anchors, max_weight: usize) -> Vec<Vec<usize>> {
    let range = match *anchors {
        Anchors::All => 0..code.n(),
        Anchors::Range(a, b) => a..b.min(code.n()),
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in range {
        let nb = neighbours(code, a);
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(vec![a], 0)];
        while let Some((pat, from)) = stack.pop() {
            let mut sorted = pat.clone();
            sorted.sort_unstable();
            if seen.insert(sorted.clone()) {
                out.push(sorted);
            }
            if pat.len() < max_weight {
                for (i, &u) in nb.iter().enumerate().skip(from) {
                    let mut next = pat.clone();
                    next.push(u);
                    stack.push((next, i + 1));
                }
            }
        }
    }
    out.sort();
    out
}

/// Decodes strong impulses on small patterns and collects the codewords found.
pub fn impulse_harvest<'a>(
    code: &'a BlockCode,
    per: Periodicity,
    cfg: &ImpulseConfig,
) -> Result<CodewordHarvest<'a>> {
    use rayon::prelude::*;
    if cfg.max_weight == 0 {
        return Err(Error::InvalidSpec(
            "impulse weight must be at least 1".into(),
        ));
    }
    let patterns = impulse_patterns(code, &cfg.anchors, cfg.max_weight);
    let pool = thread_pool(cfg.workers)?;
    let decoder = SpaDecoder::new(code.h(), cfg.max_iter);
    let found: Vec<Option<Vec<u8>>> = pool.install(|| {
        patterns
            .par_iter()
            .map_init(
                || decoder.clone(),
                |dec, pat| {
                    let mut llr = vec![cfg.background; code.n()];
                    for &amp in &cfg.amplitudes {
                        for &b in pat {
                            llr[b] = -amp;
                        }
                        let r = dec.decode(&LlrFrame(llr.clone())).expect("length n");
                        if r.converged && r.hard_bits.contains(&1) {
                            return Some(r.hard_bits);
                        }
                    }
                    None
                },
            )
            .collect()
    });
    let mut harvest = CodewordHarvest::new(code, per);
    for w in found.into_iter().flatten() {
        harvest.insert_word(&w);
    }
    Ok(harvest)
}

/// Error-impulse spectrum estimate of a terminated code, per period.
pub fn error_impulse_search(tc: &TerminatedCode, cfg: &ImpulseConfig) -> Result<WeightSpectrum> {
    let per = Periodicity::of(tc);
    Ok(impulse_harvest(tc.code(), per, cfg)?.spectrum(SpectrumBasis::PerPeriod))
}

/// Largest dimension enumerated codeword by codeword.
pub const BRUTE_FORCE_MAX_K: usize = 28;

fn binomial_sum(n: usize, cap: usize) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0;
    for i in 1..=cap.min(n) {
        term *= (n + 1 - i) as f64 / i as f64;
        sum += term;
    }
    sum
}

/// Exact spectrum up to `weight_cap`, per block.
///
/// Walks all `2^k` codewords in Gray-code order, or all supports of weight at
/// most `weight_cap` when that is fewer.
pub fn brute_force_spectrum(code: &BlockCode, weight_cap: usize) -> Result<WeightSpectrum> {
    let (n, k) = (code.n(), code.k());
    let by_support = binomial_sum(n, weight_cap) < 2f64.powi(k.min(1000) as i32);
    if k > BRUTE_FORCE_MAX_K && !by_support {
        return Err(Error::DimensionTooLarge {
            k,
            limit: BRUTE_FORCE_MAX_K,
        });
    }
    let mut acc: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    let mut record = |d: usize, w: u64| {
        if d > 0 && d <= weight_cap {
            let e = acc.entry(d).or_default();
            e.0 += 1;
            e.1 += w;
        }
    };
    if by_support {
        let mut is_info = vec![false; n];
        for &p in code.info_positions() {
            is_info[p] = true;
        }
        let h = code.h();
        let mut syn = vec![0u8; h.rows()];
        let mut support = Vec::with_capacity(weight_cap);
        enumerate_supports(n, weight_cap, 0, &mut support, &mut syn, h, &mut |s| {
            record(s.len(), s.iter().filter(|&&b| is_info[b]).count() as u64);
        });
    } else {
        let words = n.div_ceil(64);
        let basis: Vec<Vec<u64>> = code
            .basis()
            .into_iter()
            .map(|c| {
                let mut packed = vec![0u64; words];
                for (i, &b) in c.iter().enumerate() {
                    packed[i / 64] |= u64::from(b) << (i % 64);
                }
                packed
            })
            .collect();
        let mut cur = vec![0u64; words];
        for step in 1u64..(1u64 << k) {
            let flip = step.trailing_zeros() as usize;
            for (c, b) in cur.iter_mut().zip(&basis[flip]) {
                *c ^= b;
            }
            let gray = step ^ (step >> 1);
            let d: u32 = cur.iter().map(|w| w.count_ones()).sum();
            record(d as usize, u64::from(gray.count_ones()));
        }
    }
    Ok(WeightSpectrum {
        basis: SpectrumBasis::PerBlock,
        exhaustive: true,
        info_bits: k as f64,
        weight_cap: Some(weight_cap),
        entries: acc
            .into_iter()
            .map(|(d, (a, w))| SpectrumEntry { d, a, w })
            .collect(),
    })
}

fn enumerate_supports(
    n: usize,
    cap: usize,
    from: usize,
    support: &mut Vec<usize>,
    syn: &mut [u8],
    h: &crate::gf2::SparseBitMatrix,
    visit: &mut dyn FnMut(&[usize]),
) {
    for b in from..n {
        support.push(b);
        for &c in h.col(b) {
            syn[c] ^= 1;
        }
        if syn.iter().all(|&s| s == 0) {
            visit(support);
        }
        if support.len() < cap {
            enumerate_supports(n, cap, b + 1, support, syn, h, visit);
        }
        for &c in h.col(b) {
            syn[c] ^= 1;
        }
        support.pop();
    }
}

/// Gaussian tail probability `Q(x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Which error rate the bound refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// Coefficients `W_d / k`.
    Ber,
    /// Coefficients `A_d`.
    Fer,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TubPoint {
    pub ebno_db: f64,
    pub bound: f64,
}

/// Truncated union bound `Σ_d c_d · Q(sqrt(2·d·R·Eb/N0))` over the listed weights.
pub fn compute_tub(
    spec: &WeightSpectrum,
    rate: f64,
    ebno_grid: &[f64],
    kind: BoundKind,
) -> Result<Vec<TubPoint>> {
    if spec.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok(ebno_grid
        .iter()
        .map(|&ebno_db| {
            let ebno = db_to_linear(ebno_db);
            let bound = spec
                .entries
                .iter()
                .map(|e| {
                    let c = match kind {
                        BoundKind::Ber => e.w as f64 / spec.info_bits,
                        BoundKind::Fer => e.a as f64,
                    };
                    c * q_function((2.0 * e.d as f64 * rate * ebno).sqrt())
                })
                .sum();
            TubPoint { ebno_db, bound }
        })
        .collect())
}

pub fn write_tub_csv<W: Write>(points: &[TubPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}
