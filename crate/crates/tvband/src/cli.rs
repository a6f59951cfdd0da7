//! Command-line front end.
//!
//! Every command reads a pair JSON, writes CSV (array data) or JSON
//! (structured results) to `--out` or stdout, and maps errors to exit codes:
//! 0 success, 2 bad input, 3 numeric failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::charfun::{self, Bandlimit, MobiusParam, Parametrization};
use crate::error::{Error, Result};
use crate::kernel::{self, KernelContext};
use crate::numeric::C64;
use crate::oracle;
use crate::pair::{normalize_pair, BandlimitPair};
use crate::sampling::{self, LowpassOptions, Signal, Space};
use crate::signal::{fmt_f64, GridSignal, GridSpec};
use crate::spectral::{self, OdeOptions};
use crate::SampleSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tvband", version, about = "Time-varying bandwidth sampling toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rescale weights so that sum t'_n/(1+t_n^2) = pi.
    Normalize(NormalizeArgs),
    /// Sampling sequences t_n(theta): CSV theta,n,t,t_prime.
    Sequences(SequencesArgs),
    /// Reproducing kernel on a square grid: CSV t,s,K.
    Kernel(KernelArgs),
    /// Sample a gridded signal at t_n(theta): CSV theta,n,t,value.
    Sample(SampleArgs),
    /// Time-varying low-pass filter of a gridded signal.
    Filter(FilterArgs),
    /// Rebuild a signal on a grid from its theta-samples.
    Reconstruct(ReconstructArgs),
    /// Local bandwidth: CSV t,tau,tau_prime,omega.
    Bandlimit(BandlimitArgs),
    /// Count time-varying samples against constant peak-rate Nyquist (JSON).
    Nyquist(NyquistArgs),
    /// Cross-check the analytic formulas against the matrix model (JSON).
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Pair JSON file.
    #[arg(long)]
    pub pair: PathBuf,
    /// Output file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SequencesArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated values in [0, 1).
    #[arg(long, default_value = "0")]
    pub theta: ThetaList,
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<Window>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub common: Common,
    /// T0:DT:N, used for both arguments.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: GridSpec,
    /// Lattice used for the expansion (does not change the values).
    #[arg(long, default_value = "0")]
    pub theta: Theta,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Signal CSV with header t,value or t,re,im.
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long, default_value = "0")]
    pub theta: Theta,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long, default_value = "0")]
    pub theta: Theta,
    /// Use the Mobius parametrization mu_w instead of the identity.
    #[arg(long, allow_negative_numbers = true)]
    pub mu_w: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub common: Common,
    /// Samples CSV as written by `sample`.
    #[arg(long, conflicts_with = "signal", required_unless_present = "signal")]
    pub samples: Option<PathBuf>,
    /// Signal CSV to sample first.
    #[arg(long)]
    pub signal: Option<PathBuf>,
    #[arg(long, default_value = "0")]
    pub theta: Theta,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: GridSpec,
    /// Reconstruct in the space scaled by mu_w.
    #[arg(long, allow_negative_numbers = true)]
    pub mu_w: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BandlimitArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: GridSpec,
    /// Override the fitted w.
    #[arg(long, allow_negative_numbers = true)]
    pub mu_w: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NyquistArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub window: Window,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "0,0.25,0.5,0.75")]
    pub theta: ThetaList,
    /// Multiplies every threshold.
    #[arg(long, default_value_t = 1.0)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta(pub f64);

impl FromStr for Theta {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let v: f64 = s.trim().parse().map_err(|_| format!("bad theta {s:?}"))?;
        if !(0.0..1.0).contains(&v) {
            return Err(format!("theta {v} not in [0, 1)"));
        }
        Ok(Theta(v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaList(pub Vec<f64>);

impl FromStr for ThetaList {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut v = s.split(',').map(|x| x.parse::<Theta>().map(|t| t.0)).collect::<std::result::Result<Vec<_>, _>>()?;
        v.sort_by(f64::total_cmp);
        v.dedup();
        Ok(ThetaList(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window(pub f64, pub f64);

impl FromStr for Window {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("window {s:?} is not LO:HI"))?;
        let a: f64 = a.trim().parse().map_err(|_| format!("bad window start {a:?}"))?;
        let b: f64 = b.trim().parse().map_err(|_| format!("bad window end {b:?}"))?;
        if a.is_nan() || b.is_nan() || a > b {
            return Err(format!("empty window {s:?}"));
        }
        Ok(Window(a, b))
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() || matches!(e, Error::Io(_)) {
        EXIT_INPUT
    } else {
        EXIT_NUMERIC
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let threads = match std::env::var("TVBAND_THREADS") {
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                eprintln!("error: TVBAND_THREADS must be a positive integer, got {v:?}");
                return EXIT_INPUT;
            }
        },
        Err(_) => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_NUMERIC;
        }
    };
    match pool.install(|| execute(&cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Normalize(a) => cmd_normalize(a),
        Command::Sequences(a) => cmd_sequences(a),
        Command::Kernel(a) => cmd_kernel(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Filter(a) => cmd_filter(a),
        Command::Reconstruct(a) => cmd_reconstruct(a),
        Command::Bandlimit(a) => cmd_bandlimit(a),
        Command::Nyquist(a) => cmd_nyquist(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn emit<F>(out: Option<&Path>, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(p) => crate::io::write_atomic(p, |w| fill(w)),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            fill(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, |w| {
        w.write_all(text.as_bytes())?;
        Ok(())
    })
}

fn load_pair(path: &Path) -> Result<BandlimitPair> {
    BandlimitPair::load(path)
}

fn mobius(w: Option<f64>) -> Result<Option<MobiusParam>> {
    w.map(MobiusParam::real).transpose()
}

fn cmd_normalize(a: &NormalizeArgs) -> Result<i32> {
    let pair = normalize_pair(&load_pair(&a.common.pair)?)?;
    let mut text = pair.to_json()?;
    text.push('\n');
    emit(a.common.out.as_deref(), |w| {
        w.write_all(text.as_bytes())?;
        Ok(())
    })?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct SequenceFlag {
    theta: f64,
    points: usize,
    complete: bool,
    point_at_infinity: bool,
}

fn cmd_sequences(a: &SequencesArgs) -> Result<i32> {
    let pair = load_pair(&a.common.pair)?;
    let window = a.window.map_or((f64::NEG_INFINITY, f64::INFINITY), |w| (w.0, w.1));
    let sets: Vec<SampleSet> =
        a.theta.0.iter().map(|&th| spectral::sampling_sequence(&pair, th, window)).collect::<Result<_>>()?;
    emit(a.common.out.as_deref(), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["theta", "n", "t", "t_prime"])?;
        for s in &sets {
            for ((n, t), tp) in s.labels().zip(s.points()).zip(s.weights()) {
                csv.write_record([fmt_f64(s.theta()), n.to_string(), fmt_f64(*t), fmt_f64(*tp)])?;
            }
        }
        csv.flush()?;
        Ok(())
    })?;
    let flags: Vec<SequenceFlag> = sets
        .iter()
        .map(|s| SequenceFlag {
            theta: s.theta(),
            points: s.len(),
            complete: s.is_complete(),
            point_at_infinity: s.has_point_at_infinity(),
        })
        .collect();
    if let Some(out) = &a.common.out {
        emit_json(Some(&sidecar(out, "flags.json")), &flags)?;
    } else {
        for f in flags.iter().filter(|f| f.point_at_infinity) {
            eprintln!("theta {} is exceptional: one sample point is at infinity", f.theta);
        }
    }
    Ok(EXIT_OK)
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_kernel(a: &KernelArgs) -> Result<i32> {
    let pair = load_pair(&a.common.pair)?;
    let ctx = KernelContext::with_alpha(&pair, a.theta.0)?;
    let pts = a.grid.points();
    let grid = kernel::kernel_grid(&ctx, &pts, &pts);
    emit(a.common.out.as_deref(), |w| grid.write_csv(w))?;
    Ok(EXIT_OK)
}

fn sample_grid(pair: &BandlimitPair, theta: f64, signal: &GridSignal) -> Result<(SampleSet, Vec<f64>, Option<Vec<f64>>)> {
    let set = spectral::full_sampling_sequence(pair, theta)?;
    let re = sampling::sample_signal(Signal::Grid(signal), &set)?;
    let im = match signal.imag_part() {
        Some(g) => Some(sampling::sample_signal(Signal::Grid(&g), &set)?),
        None => None,
    };
    Ok((set, re, im))
}

fn cmd_sample(a: &SampleArgs) -> Result<i32> {
    let pair = load_pair(&a.common.pair)?;
    let signal = GridSignal::load_csv(&a.signal)?;
    let (set, re, im) = sample_grid(&pair, a.theta.0, &signal)?;
    emit(a.common.out.as_deref(), |w| write_samples(w, &set, &re, im.as_deref()))?;
    Ok(EXIT_OK)
}

fn write_samples(w: &mut dyn Write, set: &SampleSet, re: &[f64], im: Option<&[f64]>) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    match im {
        None => csv.write_record(["theta", "n", "t", "value"])?,
        Some(_) => csv.write_record(["theta", "n", "t", "re", "im"])?,
    }
    for (k, (n, t)) in set.labels().zip(set.points()).enumerate() {
        let mut row = vec![fmt_f64(set.theta()), n.to_string(), fmt_f64(*t), fmt_f64(re[k])];
        if let Some(im) = im {
            row.push(fmt_f64(im[k]));
        }
        csv.write_record(row)?;
    }
    csv.flush()?;
    Ok(())
}

struct SampleFile {
    theta: f64,
    labels: Vec<i64>,
    points: Vec<f64>,
    re: Vec<f64>,
    im: Option<Vec<f64>>,
}

fn read_samples(path: &Path) -> Result<SampleFile> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
    let complex = match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["theta", "n", "t", "value"] => false,
        ["theta", "n", "t", "re", "im"] => true,
        _ => return Err(Error::Csv(format!("unexpected samples header {header:?}"))),
    };
    let mut f = SampleFile { theta: f64::NAN, labels: vec![], points: vec![], re: vec![], im: complex.then(Vec::new) };
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i].trim().parse().map_err(|_| Error::Csv(format!("row {}: bad number {:?}", line + 2, &rec[i])))
        };
        let theta = num(0)?;
        if f.theta.is_nan() {
            f.theta = theta;
        } else if theta != f.theta {
            return Err(Error::Csv(format!("row {}: mixed theta values", line + 2)));
        }
        f.labels.push(rec[1].trim().parse().map_err(|_| Error::Csv(format!("row {}: bad label", line + 2)))?);
        f.points.push(num(2)?);
        f.re.push(num(3)?);
        if let Some(im) = &mut f.im {
            im.push(num(4)?);
        }
    }
    if f.labels.is_empty() {
        return Err(Error::Csv("no samples".into()));
    }
    Ok(f)
}

fn cmd_filter(a: &FilterArgs) -> Result<i32> {
    let pair = load_pair(&a.common.pair)?;
    let signal = GridSignal::load_csv(&a.signal)?;
    let mu = match mobius(a.mu_w)? {
        Some(w) => Parametrization::Mobius(w),
        None => Parametrization::Identity,
    };
    let opts = LowpassOptions { tol: a.tol, ..Default::default() };
    let ctx = KernelContext::with_alpha(&pair, a.theta.0)?;
    let re = sampling::lowpass_project(&ctx, a.theta.0, &signal.real_part(), mu, &opts)?;
    let mut tail = re.expansion.tail_estimate;
    let out = match signal.imag_part() {
        Some(g) => {
            let im = sampling::lowpass_project(&ctx, a.theta.0, &g, mu, &opts)?;
            tail = tail.max(im.expansion.tail_estimate);
            GridSignal::complex(signal.grid(), re.signal.values().to_vec(), im.signal.values().to_vec())?
        }
        None => re.signal,
    };
    eprintln!("refinement levels {}, window tail estimate {:e}", re.expansion.levels, tail);
    emit(a.common.out.as_deref(), |w| out.write_csv(w))?;
    Ok(EXIT_OK)
}

fn cmd_reconstruct(a: &ReconstructArgs) -> Result<i32> {
    let pair = load_pair(&a.common.pair)?;
    let theta = a.theta.0;
    let (set, re, im) = match (&a.samples, &a.signal) {
        (Some(path), _) => {
            let f = read_samples(path)?;
            let set = spectral::full_sampling_sequence(&pair, f.theta)?;
            check_samples(&set, &f)?;
            (set, f.re, f.im)
        }
        (None, Some(path)) => sample_grid(&pair, theta, &GridSignal::load_csv(path)?)?,
        (None, None) => return Err(Error::InvalidArgument("need --samples or --signal".into())),
    };
    let space = match mobius(a.mu_w)? {
        Some(w) => Space::Scaled(Parametrization::Mobius(w)),
        None => Space::Unscaled,
    };
    let ctx = KernelContext::new(&pair)?;
    let r = sampling::reconstruct(&ctx, &set, &re, &a.grid, space)?;
    let out = match im {
        Some(im) => {
            let i = sampling::reconstruct(&ctx, &set, &im, &a.grid, space)?;
            GridSignal::complex(a.grid, r.values().to_vec(), i.values().to_vec())?
        }
        None => r,
    };
    emit(a.common.out.as_deref(), |w| out.write_csv(w))?;
    Ok(EXIT_OK)
}

fn check_samples(set: &SampleSet, f: &SampleFile) -> Result<()> {
    let labels: Vec<i64> = set.labels().collect();
    if labels != f.labels {
        return Err(Error::InvalidArgument(format!(
            "samples carry labels {:?}..{:?}, lattice for theta {} has {:?}..{:?}",
            f.labels.first(),
            f.labels.last(),
            f.theta,
            labels.first(),
            labels.last()
        )));
    }
    for (n, (a, b)) in labels.iter().zip(set.points().iter().zip(&f.points)) {
        if (a - b).abs() > 1e-9 * (1.0 + a.abs()) {
            return Err(Error::InvalidArgument(format!("sample {n} at t = {b}, expected {a}")));
        }
    }
    Ok(())
}

fn cmd_bandlimit(a: &BandlimitArgs) -> Result<i32> {
    let pair = load_pair(&a.common.pair)?;
    let bl = match a.mu_w {
        Some(w) => Bandlimit::with_w(&pair, w)?,
        None => Bandlimit::new(&pair)?,
    };
    let rows: Vec<[f64; 4]> = a
        .grid
        .points()
        .into_iter()
        .map(|t| Ok([t, spectral::phase_tau(&pair, t)?, spectral::tau_prime(&pair, t)?, bl.omega(t)?]))
        .collect::<Result<_>>()?;
    eprintln!("w = {}", fmt_f64(bl.w()));
    emit(a.common.out.as_deref(), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["t", "tau", "tau_prime", "omega"])?;
        for r in &rows {
            csv.write_record(r.iter().map(|x| fmt_f64(*x)))?;
        }
        csv.flush()?;
        Ok(())
    })?;
    Ok(EXIT_OK)
}

fn cmd_nyquist(a: &NyquistArgs) -> Result<i32> {
    let pair = load_pair(&a.common.pair)?;
    let report = sampling::nyquist_comparison(&pair, (a.window.0, a.window.1))?;
    emit_json(a.common.out.as_deref(), &report)?;
    Ok(EXIT_OK)
}

/// One named residual and the threshold it is held to.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub thetas: Vec<f64>,
    pub exceptional_theta: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    fn push(&mut self, name: impl Into<String>, residual: f64, threshold: f64) {
        let passed = residual <= threshold;
        self.checks.push(Check { name: name.into(), residual, threshold, passed });
    }
}

fn max_abs<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

/// Analytic module against the matrix model and internal identities.
/// `scale` multiplies every threshold.
pub fn verify_pair(pair: &BandlimitPair, thetas: &[f64], scale: f64) -> Result<VerifyReport> {
    if !(scale > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance scale must be positive, got {scale}")));
    }
    pair.require_normalized()?;
    let star = spectral::exceptional_theta(pair)?;
    let mut r = VerifyReport {
        n: pair.len(),
        thetas: thetas.to_vec(),
        exceptional_theta: star,
        checks: vec![],
        passed: true,
    };
    let ctx = KernelContext::new(pair)?;
    let model = match oracle::build_model(pair) {
        Ok(m) => Some(m),
        Err(Error::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut sets = Vec::new();
    for &th in thetas {
        let set = spectral::full_sampling_sequence(pair, th)?;
        let pts = set.points();
        let gram = max_abs(pts.iter().enumerate().flat_map(|(i, &t)| {
            let ctx = &ctx;
            pts.iter().enumerate().map(move |(j, &s)| kernel::kernel_eval(ctx, t, s) - f64::from(u8::from(i == j)))
        }));
        r.push(format!("gram[{th}]"), gram, 1e-10 * scale);
        let phase = max_abs(pts.iter().map(|&t| {
            charfun::theta_eval(pair, C64::from(t)).map_or(f64::NAN, |v| (v - oracle::alpha_of(th)).norm())
        }));
        r.push(format!("theta_level[{th}]"), phase, 1e-8 * scale);
        if let Some(m) = &model {
            let o = oracle::extension_spectrum(m, th)?;
            if o.len() != set.len() || o.infinite != set.has_point_at_infinity() {
                r.push(format!("oracle_count[{th}]"), (o.len() as f64 - set.len() as f64).abs().max(1.0), 0.0);
            } else {
                let d = max_abs(o.values.iter().zip(pts).map(|(a, b)| (a - b) / b.abs().max(1.0)));
                r.push(format!("oracle_points[{th}]"), d, 1e-8 * scale);
                let w = max_abs(
                    oracle::oracle_weights(m, &o).iter().zip(set.weights()).map(|(a, b)| (a - b) / b.max(1.0)),
                );
                r.push(format!("oracle_weights[{th}]"), w, 1e-7 * scale);
            }
        }
        sets.push(set);
    }
    if let (Some(m), [a, b, ..]) = (&model, &sets[..]) {
        let (oa, ob) = (oracle::extension_spectrum(m, a.theta())?, oracle::extension_spectrum(m, b.theta())?);
        let g = oracle::overlap_moduli(&oa, &ob);
        let d = max_abs(oa.values.iter().enumerate().flat_map(|(i, &t)| {
            let (ctx, g) = (&ctx, &g);
            ob.values.iter().enumerate().map(move |(j, &s)| g[(i, j)] - kernel::kernel_eval(ctx, t, s).abs())
        }));
        r.push("kernel_modulus", d, 1e-8 * scale);
    }
    let probes: Vec<f64> = (0..200).map(|k| -20.0 + 40.0 * (k as f64 + 0.5) / 200.0).collect();
    let unimod = max_abs(probes.iter().map(|&t| charfun::theta_eval(pair, C64::from(t)).map_or(f64::NAN, |v| v.norm() - 1.0)));
    r.push("inner_unimodular", unimod, 1e-10 * scale);
    r.push("inner_zero_at_i", charfun::theta_eval(pair, crate::numeric::I)?.norm(), 1e-12 * scale);
    let herg = probes
        .iter()
        .map(|&x| charfun::herglotz_eval(pair, C64::new(x, 0.1 + x.abs() * 0.05)).map(|h| h.re))
        .collect::<Result<Vec<_>>>()?;
    r.push("herglotz_positive", max_abs(herg.iter().map(|h| h.min(0.0))), 1e-12 * scale);
    let mut mult = 0.0f64;
    for (k, &t) in probes.iter().enumerate().step_by(10) {
        let s = probes[(k * 7 + 3) % probes.len()];
        let m_t = charfun::multiplier_m(pair, t)?;
        let m_s = charfun::multiplier_m(pair, s)?;
        let k_model = charfun::model_kernel(pair, C64::from(t), C64::from(s))?;
        let lhs = kernel::kernel_eval(&ctx, t, s);
        mult = mult.max((C64::from(lhs) - m_t * k_model * m_s.conj()).norm());
        mult = mult.max((m_t.norm_sqr() * spectral::tau_prime(pair, t)? - 1.0).abs());
    }
    r.push("multiplier", mult, 1e-8 * scale);
    let span = (pair.lo() as f64, pair.hi() as f64);
    if span.1 > span.0 {
        let table = spectral::solve_spectral_ode(pair, span, &OdeOptions::default())?;
        r.push("ode_integer_residual", table.max_integer_residual(), 1e-8 * scale);
    }
    r.passed = r.checks.iter().all(|c| c.passed);
    Ok(r)
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let pair = load_pair(&a.common.pair)?;
    let report = verify_pair(&pair, &a.theta.0, a.tol)?;
    emit_json(a.common.out.as_deref(), &report)?;
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {}: {:e} > {:e}", c.name, c.residual, c.threshold);
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_NUMERIC })
}
