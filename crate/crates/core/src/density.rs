//! Decoding thresholds of regular `(dv, dc)` LDPC ensembles on the BPSK/AWGN channel.
//!
//! Two methods: the Gaussian approximation, which tracks only the mean of
//! the check-to-variable messages, and discretized density evolution, which
//! tracks quantized message densities and serves as a reference.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::channel::db_to_linear;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dv: usize,
    pub dc: usize,
}

impl EnsembleSpec {
    pub fn new(dv: usize, dc: usize) -> Result<Self> {
        if dv < 2 || dc <= dv {
            return Err(Error::InvalidSpec(format!(
                "a regular ensemble needs 2 <= dv < dc, got ({dv}, {dc})"
            )));
        }
        Ok(Self { dv, dc })
    }

    pub fn design_rate(&self) -> f64 {
        1.0 - self.dv as f64 / self.dc as f64
    }

    /// Mean of the channel LLR at `ebno_db`: `2/sigma² = 4·R·Eb/N0`.
    fn channel_mean(&self, ebno_db: f64) -> f64 {
        4.0 * self.design_rate() * db_to_linear(ebno_db)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeMethod {
    Ga,
    Discretized,
}

/// Threshold report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub dv: usize,
    pub dc: usize,
    pub method: DeMethod,
    pub threshold_db: f64,
    pub tol: f64,
}

/// Smallest `x` in `[lo, hi]` with `converges(x)`, to within `tol`, assuming
/// monotonicity. Returns the upper end of the final bracket.
fn bisect<F: FnMut(f64) -> bool>(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut converges: F,
) -> Result<f64> {
    while !converges(hi) {
        lo = hi;
        hi += 4.0;
        if hi > 40.0 {
            return Err(Error::InvalidSpec("no threshold below 40 dB".into()));
        }
    }
    while converges(lo) {
        hi = lo;
        lo -= 4.0;
        if lo < -20.0 {
            return Ok(hi);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if converges(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

// Two-regime approximation of phi(x) = 1 - E[tanh(u/2)], u ~ N(x, 2x).
const PHI_A: f64 = -0.4527;
const PHI_B: f64 = 0.0218;
const PHI_G: f64 = 0.86;
const PHI_SPLIT: f64 = 10.0;

/// `ln phi(x)`, finite for every `x >= 0`.
fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < PHI_SPLIT {
        (PHI_A * x.powf(PHI_G) + PHI_B).min(0.0)
    } else {
        0.5 * (PI / x).ln() - 0.25 * x + (-10.0 / (7.0 * x)).ln_1p()
    }
}

/// Inverse of [`ln_phi`]: the `x >= 0` with `ln phi(x) = y`.
fn ln_phi_inv(y: f64) -> f64 {
    if y >= 0.0 {
        return 0.0;
    }
    let y_split = PHI_A * PHI_SPLIT.powf(PHI_G) + PHI_B;
    if y >= y_split {
        return ((y - PHI_B) / PHI_A).powf(1.0 / PHI_G);
    }
    // The upper branch is strictly decreasing on [10, inf).
    let (mut lo, mut hi) = (PHI_SPLIT, PHI_SPLIT.max(-4.0 * y + 20.0));
    while ln_phi(hi) > y {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

const GA_MAX_ITER: usize = 10_000;
const GA_DIVERGED: f64 = 1e3;

/// Whether the Gaussian-approximation mean recursion diverges at `ebno_db`.
pub fn ga_converges(spec: EnsembleSpec, ebno_db: f64) -> bool {
    let m0 = spec.channel_mean(ebno_db);
    let mut mu = 0.0f64;
    for _ in 0..GA_MAX_ITER {
        let mv = m0 + (spec.dv - 1) as f64 * mu;
        // 1 - (1 - phi(mv))^(dc-1), kept in the log domain.
        let phi_v = ln_phi(mv).exp();
        let y = if phi_v < 1e-8 {
            ((spec.dc - 1) as f64).ln() + ln_phi(mv)
        } else {
            (-((spec.dc - 1) as f64 * (-phi_v).ln_1p()).exp_m1()).ln()
        };
        let next = ln_phi_inv(y);
        if next > GA_DIVERGED {
            return true;
        }
        if next <= mu * (1.0 + 1e-12) {
            return false;
        }
        mu = next;
    }
    false
}

/// Gaussian-approximation threshold in dB, by bisection to `tol_db`.
pub fn ga_threshold(spec: EnsembleSpec, tol_db: f64) -> Result<f64> {
    bisect(-2.0, 8.0, tol_db, |x| ga_converges(spec, x))
}

/// Quantization of discretized density evolution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantization {
    /// LLR bin width.
    pub step: f64,
    /// LLRs are saturated to `[-range, range]`.
    pub range: f64,
    /// Bin width of the `-ln tanh(|L|/2)` domain used at check nodes.
    pub z_step: f64,
}

impl Default for Quantization {
    fn default() -> Self {
        Self {
            step: 0.01,
            range: 30.0,
            z_step: 1e-3,
        }
    }
}

const DE_MAX_ITER: usize = 2000;
const DE_TARGET: f64 = 1e-10;

/// Density on the symmetric LLR grid `-range, …, 0, …, range`.
struct Grid {
    half: usize,
    step: f64,
}

impl Grid {
    fn len(&self) -> usize {
        2 * self.half + 1
    }

    fn value(&self, i: usize) -> f64 {
        (i as f64 - self.half as f64) * self.step
    }

    fn error_probability(&self, p: &[f64]) -> f64 {
        p[..self.half].iter().sum::<f64>() + 0.5 * p[self.half]
    }
}

/// Splits `mass` at fractional position `pos` between its two nearest bins.
fn deposit(target: &mut [f64], pos: f64, mass: f64) {
    let last = target.len() - 1;
    if pos <= 0.0 {
        target[0] += mass;
    } else if pos >= last as f64 {
        target[last] += mass;
    } else {
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        target[i] += mass * (1.0 - frac);
        target[i + 1] += mass * frac;
    }
}

/// Rescales to unit mass. Round-off deficits would otherwise grow by a
/// factor `(dv-1)(dc-1)` per iteration.
fn normalize(p: &mut [f64]) {
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        p.iter_mut().for_each(|x| *x /= total);
    }
}

struct DiscretizedDe {
    spec: EnsembleSpec,
    grid: Grid,
    z_bins: usize,
    /// For each LLR magnitude bin `i >= 1`: fractional z position.
    z_pos: Vec<f64>,
    /// For each z bin: fractional LLR-magnitude position.
    l_pos: Vec<f64>,
    planner: FftPlanner<f64>,
}

impl DiscretizedDe {
    fn new(spec: EnsembleSpec, q: Quantization) -> Self {
        let half = (q.range / q.step).round() as usize;
        let grid = Grid { half, step: q.step };
        let z_of = |l: f64| -(0.5 * l).tanh().ln();
        let z_max = z_of(q.step);
        let z_bins = (z_max / q.z_step).ceil() as usize + 1;
        let z_pos = (0..=half)
            .map(|i| {
                if i == 0 {
                    f64::INFINITY
                } else {
                    z_of(i as f64 * q.step) / q.z_step
                }
            })
            .collect();
        // Sums of dc-1 z values reach (dc-1)·z_max.
        let out_bins = (spec.dc - 1) * (z_bins - 1) + 1;
        let l_pos = (0..out_bins)
            .map(|j| {
                let z = j as f64 * q.z_step;
                if z == 0.0 {
                    half as f64
                } else {
                    2.0 * (-z).exp().atanh() / q.step
                }
            })
            .collect();
        Self {
            spec,
            grid,
            z_bins,
            z_pos,
            l_pos,
            planner: FftPlanner::new(),
        }
    }

    fn channel_density(&self, ebno_db: f64) -> Vec<f64> {
        let m = self.spec.channel_mean(ebno_db);
        let s = (2.0 * m).sqrt();
        let cdf = |x: f64| 0.5 * erfc(-(x - m) / (s * std::f64::consts::SQRT_2));
        let g = &self.grid;
        let mut p = vec![0.0; g.len()];
        for (i, pi) in p.iter_mut().enumerate() {
            let v = g.value(i);
            let lo = if i == 0 {
                f64::NEG_INFINITY
            } else {
                v - 0.5 * g.step
            };
            let hi = if i == g.len() - 1 {
                f64::INFINITY
            } else {
                v + 0.5 * g.step
            };
            *pi = cdf(hi) - cdf(lo);
        }
        p
    }

    /// Density of the check-to-variable message given the variable-to-check density.
    ///
    /// Magnitudes are combined as sums of `z = -ln tanh(|L|/2)`; signs are
    /// then restored from the symmetry `p(-L) = e^(-L)·p(L)` that every
    /// density of this recursion satisfies. Tracking signs separately lets
    /// quantization push wrong-sign mass to the saturated end of the grid,
    /// which the recursion then amplifies.
    fn check_update(&mut self, p: &[f64]) -> Vec<f64> {
        let half = self.grid.half;
        let deg = self.spec.dc - 1;
        let len = (deg * (self.z_bins - 1) + 1).next_power_of_two();
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for k in 1..=half {
            let mass = p[half + k] + p[half - k];
            let pos = self.z_pos[k];
            let i = pos.floor() as usize;
            let frac = pos - i as f64;
            buf[i.min(self.z_bins - 1)].re += mass * (1.0 - frac);
            buf[(i + 1).min(self.z_bins - 1)].re += mass * frac;
        }
        let erasure = p[half];
        let fwd = self.planner.plan_fft_forward(len);
        let inv = self.planner.plan_fft_inverse(len);
        fwd.process(&mut buf);
        for x in buf.iter_mut() {
            *x = x.powu(deg as u32);
        }
        inv.process(&mut buf);
        let scale = 1.0 / len as f64;
        let mut mag = vec![0.0; half + 1];
        for (j, v) in buf.iter().take(self.l_pos.len()).enumerate() {
            deposit(
                &mut mag,
                self.l_pos[j].min(half as f64),
                (v.re * scale).max(0.0),
            );
        }
        let mut out = vec![0.0; self.grid.len()];
        for k in 1..=half {
            let wrong = 1.0 / (1.0 + (k as f64 * self.grid.step).exp());
            out[half + k] = mag[k] * (1.0 - wrong);
            out[half - k] = mag[k] * wrong;
        }
        // An erased input erases the output.
        out[half] = mag[0] + 1.0 - (1.0 - erasure).powi(deg as i32);
        normalize(&mut out);
        out
    }

    /// Circular-free linear convolution of LLR densities, saturating at the grid ends.
    fn convolve(&mut self, parts: &[&[f64]]) -> Vec<f64> {
        let n = self.grid.len();
        let full = parts.len() * (n - 1) + 1;
        let len = full.next_power_of_two();
        let fwd = self.planner.plan_fft_forward(len);
        let inv = self.planner.plan_fft_inverse(len);
        let mut acc = vec![Complex64::new(1.0, 0.0); len];
        for part in parts {
            let mut b: Vec<Complex64> = part.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            b.resize(len, Complex64::new(0.0, 0.0));
            fwd.process(&mut b);
            for (a, x) in acc.iter_mut().zip(&b) {
                *a *= x;
            }
        }
        inv.process(&mut acc);
        let scale = 1.0 / len as f64;
        // Index t of the full result is LLR (t - parts·half)·step.
        let offset = (parts.len() - 1) * self.grid.half;
        let mut out = vec![0.0; n];
        for (t, v) in acc.iter().take(full).enumerate() {
            let idx = t.saturating_sub(offset).min(n - 1);
            out[idx] += (v.re * scale).max(0.0);
        }
        normalize(&mut out);
        out
    }

    fn converges(&mut self, ebno_db: f64) -> bool {
        let ch = self.channel_density(ebno_db);
        let mut v2c = ch.clone();
        let mut best = f64::INFINITY;
        let mut stalled = 0;
        for _ in 0..DE_MAX_ITER {
            let c2v = self.check_update(&v2c);
            let mut parts: Vec<&[f64]> = vec![&ch];
            for _ in 0..self.spec.dv - 1 {
                parts.push(&c2v);
            }
            v2c = self.convolve(&parts);
            let pe = self.grid.error_probability(&v2c);
            if pe < DE_TARGET {
                return true;
            }
            // A fixed point above the target ends the run early.
            if pe > best * (1.0 - 1e-7) {
                stalled += 1;
                if stalled >= 20 {
                    return false;
                }
            } else {
                stalled = 0;
                best = pe;
            }
        }
        false
    }
}

/// Discretized density-evolution threshold in dB, by bisection to `tol_db`.
pub fn discretized_de_threshold(spec: EnsembleSpec, q: Quantization, tol_db: f64) -> Result<f64> {
    if q.step > 0.01 || q.range < 30.0 {
        return Err(Error::InvalidSpec(
            "quantization must use a step of at most 0.01 and a range of at least 30".into(),
        ));
    }
    let mut de = DiscretizedDe::new(spec, q);
    let start = ga_threshold(spec, 0.05)?;
    bisect(start - 0.5, start + 0.5, tol_db, |x| de.converges(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_inverse_round_trips() {
        for &x in &[0.05, 0.5, 3.0, 9.99, 10.5, 40.0, 300.0, 5000.0] {
            let back = ln_phi_inv(ln_phi(x));
            assert!((back - x).abs() < 1e-8 * x.max(1.0), "x={x} back={back}");
        }
        assert_eq!(ln_phi_inv(0.0), 0.0);
    }

    #[test]
    fn ensemble_validation() {
        assert!(EnsembleSpec::new(1, 6).is_err());
        assert!(EnsembleSpec::new(3, 3).is_err());
        assert_eq!(EnsembleSpec::new(3, 6).unwrap().design_rate(), 0.5);
    }

    #[test]
    fn ga_three_six() {
        let t = ga_threshold(EnsembleSpec::new(3, 6).unwrap(), 0.01).unwrap();
        assert!((t - 1.16).abs() < 0.1, "threshold {t}");
    }

    #[test]
    fn ga_bisection_contract() {
        let spec = EnsembleSpec::new(3, 6).unwrap();
        let a = ga_threshold(spec, 0.02).unwrap();
        let b = ga_threshold(spec, 0.01).unwrap();
        assert!((a - b).abs() <= 0.02);
    }

    #[test]
    fn check_update_keeps_mass() {
        let spec = EnsembleSpec::new(3, 6).unwrap();
        let mut de = DiscretizedDe::new(spec, Quantization::default());
        let ch = de.channel_density(1.0);
        assert!((ch.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let c = de.check_update(&ch);
        assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        // A check output is less reliable than its inputs.
        assert!(de.grid.error_probability(&c) > de.grid.error_probability(&ch));
    }

    #[test]
    fn check_output_is_symmetric() {
        let spec = EnsembleSpec::new(3, 30).unwrap();
        let mut de = DiscretizedDe::new(spec, Quantization::default());
        let c = de.check_update(&de.channel_density(4.0));
        let half = de.grid.half;
        for k in [1, 50, 400, 2000] {
            let l = k as f64 * de.grid.step;
            let expected = c[half + k] * (-l).exp();
            assert!(
                (c[half - k] - expected).abs() <= 1e-9 * expected + 1e-300,
                "k={k}"
            );
        }
    }
}
