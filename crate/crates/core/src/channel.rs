//! BPSK over AWGN and the Monte Carlo error-rate harness.
//!
//! Every frame draws its randomness from its own ChaCha stream selected by
//! `(seed, point index, frame index)`, and frames are merged in index order,
//! so results do not depend on how frames are spread over worker threads.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{BlockCode, CheckRule, DecodeResult, LlrFrame, SpaDecoder};
use crate::error::{Error, Result};

/// Bit 0 maps to `+1`, bit 1 to `-1`.
pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Converts a ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// An operating point: `sigma² = 1 / (2·R·Eb/N0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelPoint {
    pub ebno_db: f64,
    pub rate: f64,
    pub sigma: f64,
}

impl ChannelPoint {
    pub fn new(ebno_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) || !ebno_db.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "invalid channel point: Eb/N0 {ebno_db} dB at rate {rate}"
            )));
        }
        let sigma = (1.0 / (2.0 * rate * db_to_linear(ebno_db))).sqrt();
        Ok(Self {
            ebno_db,
            rate,
            sigma,
        })
    }

    /// Channel LLR of a received sample is `llr_scale() · y`.
    pub fn llr_scale(&self) -> f64 {
        2.0 / (self.sigma * self.sigma)
    }
}

/// `y = x + n`, `n ~ N(0, sigma²)`, returned as LLRs `2y/sigma²`.
pub fn add_noise_and_llr<R: Rng + ?Sized>(
    symbols: &[f64],
    point: &ChannelPoint,
    rng: &mut R,
) -> LlrFrame {
    let scale = point.llr_scale();
    LlrFrame(
        symbols
            .iter()
            .map(|&x| {
                let n: f64 = rng.sample(StandardNormal);
                scale * (x + point.sigma * n)
            })
            .collect(),
    )
}

/// Random stream of one frame.
pub fn frame_rng(seed: u64, point_index: usize, frame_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point_index as u64) << 40) ^ frame_index);
    rng
}

/// What is sent over the channel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transmission {
    /// The all-zero codeword; valid for linear codes by channel and decoder symmetry.
    #[default]
    AllZero,
    /// Uniformly random information bits, systematically encoded.
    Encoded,
}

/// Per-point stopping rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_frame_errors: 100,
            max_frames: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub stop: StopRule,
    pub seed: u64,
    pub workers: usize,
    pub max_iter: usize,
    pub transmission: Transmission,
    pub check_rule: CheckRule,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            stop: StopRule::default(),
            seed: 1,
            workers: 1,
            max_iter: 100,
            transmission: Transmission::AllZero,
            check_rule: CheckRule::default(),
        }
    }
}

/// One row of a BER curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub ebno_db: f64,
    pub rate: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub seed: u64,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

/// Transmitted word and decoder output of one frame.
pub struct FrameResult {
    pub sent: Vec<u8>,
    pub decoded: DecodeResult,
}

/// Simulates frame `frame_index` at `point`.
pub fn run_frame(
    code: &BlockCode,
    decoder: &mut SpaDecoder,
    point: &ChannelPoint,
    transmission: Transmission,
    seed: u64,
    point_index: usize,
    frame_index: u64,
) -> FrameResult {
    let mut rng = frame_rng(seed, point_index, frame_index);
    let sent = match transmission {
        Transmission::AllZero => vec![0u8; code.n()],
        Transmission::Encoded => {
            let info: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
            code.encode(&info).expect("info length equals k")
        }
    };
    let llr = add_noise_and_llr(&modulate(&sent), point, &mut rng);
    let decoded = decoder.decode(&llr).expect("frame length equals n");
    FrameResult { sent, decoded }
}

/// Frames simulated per scheduling round; independent of the worker count.
const BATCH: u64 = 64;

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot start {workers} workers: {e}")))
}

/// Everything that determines the frames of one operating point.
pub(crate) struct FrameSource<'a> {
    pub code: &'a BlockCode,
    pub decoder: &'a SpaDecoder,
    pub point: ChannelPoint,
    pub transmission: Transmission,
    pub seed: u64,
    pub point_index: usize,
}

impl FrameSource<'_> {
    /// Runs frames `0, 1, …` in parallel batches and feeds the results, in
    /// frame order, to `consume` until it returns `false` or `limit` frames
    /// were consumed.
    pub fn for_each<F>(&self, pool: &rayon::ThreadPool, limit: u64, mut consume: F)
    where
        F: FnMut(u64, FrameResult) -> bool,
    {
        let mut next = 0u64;
        while next < limit {
            let end = (next + BATCH).min(limit);
            let results: Vec<FrameResult> = pool.install(|| {
                (next..end)
                    .into_par_iter()
                    .map_init(
                        || self.decoder.clone(),
                        |dec, f| {
                            run_frame(
                                self.code,
                                dec,
                                &self.point,
                                self.transmission,
                                self.seed,
                                self.point_index,
                                f,
                            )
                        },
                    )
                    .collect()
            });
            for (f, r) in (next..end).zip(results) {
                if !consume(f, r) {
                    return;
                }
            }
            next = end;
        }
    }
}

/// Bit and frame error counts at each Eb/N0 in `ebno_grid`.
///
/// A frame error is any difference between the sent and the decided word;
/// bit errors are counted on the information positions only.
pub fn run_ber_sweep(
    code: &BlockCode,
    rate: f64,
    ebno_grid: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<BerRecord>> {
    if cfg.stop.min_frame_errors == 0 {
        return Err(Error::InvalidSpec(
            "min_frame_errors must be at least 1".into(),
        ));
    }
    let pool = thread_pool(cfg.workers)?;
    let decoder = SpaDecoder::new(code.h(), cfg.max_iter).with_rule(cfg.check_rule);
    let info = code.info_positions();
    let mut out = Vec::with_capacity(ebno_grid.len());
    for (pi, &ebno_db) in ebno_grid.iter().enumerate() {
        let point = ChannelPoint::new(ebno_db, rate)?;
        let start = Instant::now();
        let (mut frames, mut bit_errors, mut frame_errors) = (0u64, 0u64, 0u64);
        let source = FrameSource {
            code,
            decoder: &decoder,
            point,
            transmission: cfg.transmission,
            seed: cfg.seed,
            point_index: pi,
        };
        source.for_each(&pool, cfg.stop.max_frames, |_, r| {
            frames += 1;
            let hard = &r.decoded.hard_bits;
            if hard != &r.sent {
                frame_errors += 1;
                bit_errors += info.iter().filter(|&&p| hard[p] != r.sent[p]).count() as u64;
            }
            frame_errors < cfg.stop.min_frame_errors
        });
        let info_bits = frames as f64 * info.len() as f64;
        out.push(BerRecord {
            ebno_db,
            rate,
            frames,
            bit_errors,
            frame_errors,
            ber: if info_bits > 0.0 {
                bit_errors as f64 / info_bits
            } else {
                0.0
            },
            fer: if frames > 0 {
                frame_errors as f64 / frames as f64
            } else {
                0.0
            },
            seed: cfg.seed,
            elapsed_secs: start.elapsed().as_secs_f64(),
        });
    }
    Ok(out)
}

/// Writes records as CSV with a header line.
pub fn write_ber_csv<W: Write>(records: &[BerRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ber_csv<R: std::io::Read>(input: R) -> Result<Vec<BerRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}
