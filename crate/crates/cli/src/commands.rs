use std::fs;
use std::path::Path;

use acldpc::channel::{run_ber_sweep, write_ber_csv, StopRule, SweepConfig, Transmission};
use acldpc::codec::BlockCode;
use acldpc::construction::{is_prime, CodeSpec};
use acldpc::density::{
    discretized_de_threshold, ga_threshold, DeMethod, EnsembleSpec, Quantization, ThresholdReport,
};
use acldpc::gf2::alist::to_alist;
use acldpc::gf2::ExponentMatrix;
use acldpc::spectrum::{
    brute_force_spectrum, compute_tub, error_impulse_search, estimate_spectrum_mc, write_tub_csv,
    Anchors, BoundKind, ImpulseConfig, McConfig, WeightSpectrum,
};
use acldpc::unwrap::{
    terminate, unwrap_exponents, unwrap_tanner, SyndromeFormer, TerminatedCode, Termination,
};
use acldpc::Error;
use serde::Serialize;

use crate::manifest::{digest, Run};
use crate::{
    AnalyzeArgs, BoundArg, ConstructArgs, DistanceMode, Method, RateArg, RealizationArgs,
    SimulateArgs, TerminationArg, ThresholdMode, TransmissionArg, UnwrapArgs,
};

/// Process exit status and message of a failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const EXIT_IO: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionTooLarge { .. } => EXIT_RESOURCE,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_VALIDATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

struct LoadedSpec {
    spec: CodeSpec,
    digest: String,
}

fn load_spec(path: &Path) -> Result<LoadedSpec, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?;
    let spec = CodeSpec::from_json(&text)?;
    Ok(LoadedSpec {
        digest: digest(&spec.to_json()),
        spec,
    })
}

/// Writes `contents` to `dir/name` and returns `name`.
fn write_output(dir: &Path, name: &str, contents: &str) -> Result<String, Failure> {
    fs::write(dir.join(name), contents)?;
    Ok(name.to_string())
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// Parses `a,b,c` or `start:step:stop` (inclusive).
pub fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::validation(format!("malformed grid {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let values = if parts.len() == 3 {
        let p: Vec<f64> = parts
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let (start, step, stop) = (p[0], p[1], p[2]);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(values)
}

fn former(exp: &ExponentMatrix, method: Method) -> Result<SyndromeFormer, Failure> {
    Ok(match method {
        Method::Felstrom => unwrap_exponents(exp)?,
        Method::Tanner => unwrap_tanner(exp)?,
    })
}

fn realize(
    exp: &ExponentMatrix,
    r: &RealizationArgs,
    periods: usize,
) -> Result<(TerminatedCode, f64), Failure> {
    let sf = former(exp, r.method)?;
    let mode = match r.termination {
        TerminationArg::Zero => Termination::Zero,
        TerminationArg::TailBiting => Termination::TailBiting,
    };
    let tc = terminate(&sf, periods, mode)?;
    let rate = match r.rate {
        RateArg::Design => tc.design_rate(),
        RateArg::Actual => tc.code().rate(),
    };
    if rate.is_nan() || rate <= 0.0 {
        return Err(Failure::validation(
            "terminated code has no information bits",
        ));
    }
    Ok((tc, rate))
}

#[derive(Serialize)]
struct ValidationReport {
    modulus: usize,
    modulus_is_prime: bool,
    r0: usize,
    n0: usize,
    rows: usize,
    cols: usize,
    rank: usize,
    dimension: usize,
    design_rate: f64,
    actual_rate: f64,
    column_weight: Option<usize>,
    row_weight: Option<usize>,
    four_cycle_free: bool,
    girth: Option<usize>,
}

fn uniform(mut it: impl Iterator<Item = usize>) -> Option<usize> {
    let first = it.next()?;
    it.all(|w| w == first).then_some(first)
}

fn render_exponents(exp: &ExponentMatrix) -> String {
    let mut s = String::new();
    for i in 0..exp.r0() {
        let row: Vec<String> = exp
            .row(i)
            .iter()
            .map(|e| e.map_or("-".to_string(), |v| v.to_string()))
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn construct(a: &ConstructArgs) -> CmdResult {
    let run = Run::start();
    let loaded = load_spec(&a.spec)?;
    let exp = loaded.spec.exponents()?;
    let h = exp.expand();
    fs::create_dir_all(&a.out)?;
    let exps = pretty(&ExponentsFile {
        modulus: exp.modulus(),
        r0: exp.r0(),
        n0: exp.n0(),
        entries: exp.to_rows(),
    });
    let code = BlockCode::new(h.clone());
    let report = ValidationReport {
        modulus: exp.modulus(),
        modulus_is_prime: is_prime(exp.modulus() as u64),
        r0: exp.r0(),
        n0: exp.n0(),
        rows: h.rows(),
        cols: h.cols(),
        rank: code.rank(),
        dimension: code.k(),
        design_rate: (exp.n0() - exp.r0()) as f64 / exp.n0() as f64,
        actual_rate: code.rate(),
        column_weight: uniform(h.col_weights()),
        row_weight: uniform(h.row_weights()),
        four_cycle_free: !h.has_length4_cycle(),
        girth: h.girth(12),
    };
    let outputs = vec![
        write_output(&a.out, "exponents.json", &exps)?,
        write_output(&a.out, "H.alist", &to_alist(&h))?,
        write_output(&a.out, "validation.json", &pretty(&report))?,
    ];
    print!("{}", render_exponents(&exp));
    run.finish(&a.out, "construct", loaded.digest, None, a, outputs)?;
    Ok(())
}

#[derive(Serialize)]
struct ExponentsFile {
    modulus: usize,
    r0: usize,
    n0: usize,
    entries: Vec<Vec<Option<usize>>>,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Felstrom => "felstrom",
        Method::Tanner => "tanner",
    }
}

pub fn unwrap(a: &UnwrapArgs) -> CmdResult {
    let run = Run::start();
    let loaded = load_spec(&a.spec)?;
    let exp = loaded.spec.exponents()?;
    let sf = former(&exp, a.method)?;
    fs::create_dir_all(&a.out)?;
    let name = method_name(a.method);
    let metrics = pretty(&sf.metrics());
    let outputs = vec![
        write_output(&a.out, &format!("former_{name}.txt"), &sf.render_figure())?,
        write_output(&a.out, &format!("metrics_{name}.json"), &metrics)?,
    ];
    print!("{metrics}");
    run.finish(&a.out, "unwrap", loaded.digest, None, a, outputs)?;
    Ok(())
}

pub fn simulate(a: &SimulateArgs) -> CmdResult {
    let run = Run::start();
    let loaded = load_spec(&a.spec)?;
    let exp = loaded.spec.exponents()?;
    let grid = parse_grid(&a.ebno_grid)?;
    if a.block_bits == 0 || !a.block_bits.is_multiple_of(exp.n0()) {
        return Err(Failure::validation(format!(
            "block bits {} must be a positive multiple of n0 = {}",
            a.block_bits,
            exp.n0()
        )));
    }
    if a.workers == 0 {
        return Err(Failure::validation("workers must be at least 1"));
    }
    let (tc, rate) = realize(&exp, &a.realization, a.block_bits / exp.n0())?;
    let cfg = SweepConfig {
        stop: StopRule {
            min_frame_errors: a.min_frame_errors,
            max_frames: a.max_frames,
        },
        seed: a.seed,
        workers: a.workers,
        max_iter: a.max_iter,
        transmission: match a.transmission {
            TransmissionArg::AllZero => Transmission::AllZero,
            TransmissionArg::Encoded => Transmission::Encoded,
        },
        ..SweepConfig::default()
    };
    let records = run_ber_sweep(tc.code(), rate, &grid, &cfg)?;
    fs::create_dir_all(&a.out)?;
    let mut csv = Vec::new();
    write_ber_csv(&records, &mut csv)?;
    let csv = String::from_utf8(csv).expect("CSV is UTF-8");
    let outputs = vec![write_output(&a.out, "ber.csv", &csv)?];
    print!("{csv}");
    run.finish(&a.out, "simulate", loaded.digest, Some(a.seed), a, outputs)?;
    Ok(())
}

fn distance_search(
    a: &AnalyzeArgs,
    exp: &ExponentMatrix,
    mode: DistanceMode,
) -> Result<WeightSpectrum, Failure> {
    let periods = a.periods.unwrap_or(2 * exp.modulus());
    let (tc, rate) = realize(exp, &a.realization, periods)?;
    Ok(match mode {
        DistanceMode::Brute => brute_force_spectrum(tc.code(), a.weight_cap.unwrap_or(tc.n()))?,
        DistanceMode::Mc => estimate_spectrum_mc(
            &tc,
            &McConfig {
                ebno_db: a.mc_ebno,
                rate,
                frames: a.mc_frames,
                seed: a.seed,
                workers: a.workers,
                max_iter: a.max_iter,
            },
        )?,
        DistanceMode::Impulse => {
            let amplitudes = parse_grid(&a.amplitudes)?;
            if a.max_weight == 0 || amplitudes.iter().any(|&x| x <= 0.0) {
                return Err(Failure::validation(
                    "impulse search needs a positive weight and positive amplitudes",
                ));
            }
            let cfg = ImpulseConfig {
                background: a.background,
                amplitudes,
                max_iter: a.max_iter,
                anchors: if a.all_anchors {
                    Anchors::All
                } else {
                    Anchors::Range(0, exp.n0())
                },
                workers: a.workers,
                ..ImpulseConfig::new(a.max_weight)
            };
            error_impulse_search(&tc, &cfg)?
        }
    })
}

fn code_rate(a: &AnalyzeArgs, exp: &ExponentMatrix) -> Result<f64, Failure> {
    let periods = a.periods.unwrap_or(2 * exp.modulus());
    match a.realization.rate {
        RateArg::Design => Ok((exp.n0() - exp.r0()) as f64 / exp.n0() as f64),
        RateArg::Actual => Ok(realize(exp, &a.realization, periods)?.1),
    }
}

pub fn analyze(a: &AnalyzeArgs) -> CmdResult {
    let run = Run::start();
    if a.distance.is_none() && !a.tub && a.threshold.is_none() {
        return Err(Failure::validation(
            "nothing to do: pass --distance, --tub or --threshold",
        ));
    }
    if a.workers == 0 {
        return Err(Failure::validation("workers must be at least 1"));
    }
    let loaded = load_spec(&a.spec)?;
    let exp = loaded.spec.exponents()?;
    fs::create_dir_all(&a.out)?;
    let mut outputs = Vec::new();

    let mut spectrum = None;
    if let Some(mode) = a.distance {
        let s = distance_search(a, &exp, mode)?;
        let name = match mode {
            DistanceMode::Mc => "spectrum_mc.json",
            DistanceMode::Impulse => "spectrum_impulse.json",
            DistanceMode::Brute => "spectrum_brute.json",
        };
        let mut json = s.to_json();
        json.push('\n');
        outputs.push(write_output(&a.out, name, &json)?);
        match s.d_upper() {
            Some(d) => println!("d_upper {d} multiplicity {}", s.multiplicity(d)),
            None => println!("no codeword found"),
        }
        spectrum = Some(s);
    }

    if a.tub {
        let s = match (spectrum.as_ref(), &a.spectrum) {
            (Some(s), _) => s.clone(),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    Failure::validation(format!("cannot read {}: {e}", path.display()))
                })?;
                WeightSpectrum::from_json(&text)?
            }
            (None, None) => {
                return Err(Failure::validation("--tub needs --distance or --spectrum"));
            }
        };
        let (kind, name) = match a.bound {
            BoundArg::Ber => (BoundKind::Ber, "tub_ber.csv"),
            BoundArg::Fer => (BoundKind::Fer, "tub_fer.csv"),
        };
        let points = compute_tub(&s, code_rate(a, &exp)?, &parse_grid(&a.ebno_grid)?, kind)?;
        let mut csv = Vec::new();
        write_tub_csv(&points, &mut csv)?;
        outputs.push(write_output(
            &a.out,
            name,
            &String::from_utf8(csv).expect("CSV is UTF-8"),
        )?);
    }

    if let Some(mode) = a.threshold {
        let dv = a.dv.unwrap_or(exp.r0());
        let dc = a.dc.unwrap_or(exp.n0());
        if (a.dv.is_none() || a.dc.is_none()) && exp.non_null_count() != exp.r0() * exp.n0() {
            return Err(Failure::validation(
                "the code is irregular; pass --dv and --dc",
            ));
        }
        if a.tol.is_nan() || a.tol <= 0.0 {
            return Err(Failure::validation("tolerance must be positive"));
        }
        let ensemble = EnsembleSpec::new(dv, dc)?;
        let (method, threshold_db, name) = match mode {
            ThresholdMode::Ga => (
                DeMethod::Ga,
                ga_threshold(ensemble, a.tol)?,
                "threshold_ga.json",
            ),
            ThresholdMode::Discretized => (
                DeMethod::Discretized,
                discretized_de_threshold(ensemble, Quantization::default(), a.tol)?,
                "threshold_discretized.json",
            ),
        };
        let report = ThresholdReport {
            dv,
            dc,
            method,
            threshold_db,
            tol: a.tol,
        };
        println!("threshold {threshold_db:.4} dB");
        outputs.push(write_output(&a.out, name, &pretty(&report))?);
    }

    run.finish(&a.out, "analyze", loaded.digest, Some(a.seed), a, outputs)?;
    Ok(())
}
