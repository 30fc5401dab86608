// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Every subcommand validates its flags before computing anything. Exit codes
//! are 0 on success, 2 on usage or validation errors and 1 when the
//! computation itself fails.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::activation::ActivationKind;
use crate::control::{default_faquad, linear_schedule, perturbed_schedule, DEFAULT_OMEGA0, DEFAULT_OMEGAF};
use crate::dynamics::{self, BenchmarkConfig, DEFAULT_POINTS, DEFAULT_X_MAX};
use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::synthesis::{self, SynthesisOptions, TargetResponse};
use crate::training::{self, TrainConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const UNITS: &str = "# units: frequencies in Omega_f = 1, times in 1/Omega_f";

#[derive(Debug, Parser)]
#[command(name = "qperceptron", version, about = "Unitary quantum perceptron simulator")]
pub struct Cli {
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Excitation probability of one perceptron after a passage, across a field grid.
    Response(ResponseArgs),
    /// Average infidelity of linear and FAQUAD passages versus duration.
    Benchmark(BenchmarkArgs),
    /// Trains a network to recognise prime numbers.
    Train(TrainArgs),
    /// Fits a composition of conditional rotations to a target response.
    Synthesize(SynthesizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Linear,
    Faquad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Rect,
    Peak,
}

#[derive(Debug, Args)]
pub struct ResponseArgs {
    #[arg(long, value_enum, default_value = "faquad")]
    pub schedule: ScheduleArg,
    #[arg(long, default_value_t = 10.0)]
    pub tf: f64,
    #[arg(long, default_value_t = DEFAULT_OMEGA0)]
    pub omega0: f64,
    #[arg(long, default_value_t = DEFAULT_X_MAX)]
    pub xmax: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    /// Relative control ramp error; FAQUAD only.
    #[arg(long = "epsilon-ctrl", default_value_t = 0.0)]
    pub epsilon_ctrl: f64,
    /// Output file (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long = "tf-min", default_value_t = 0.1)]
    pub tf_min: f64,
    #[arg(long = "tf-max", default_value_t = 50.0)]
    pub tf_max: f64,
    #[arg(long = "tf-points", default_value_t = 12)]
    pub tf_points: usize,
    /// CSV output; the fit goes next to it as `<stem>.fit.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, default_value_t = 3)]
    pub bits: usize,
    /// Width of the single hidden layer.
    #[arg(long, default_value_t = 4)]
    pub hidden: usize,
    #[arg(long, default_value_t = 5000)]
    pub iters: usize,
    /// Total number of training runs.
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report JSON; the trained network goes next to it as `<stem>.model.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[arg(long, value_enum, default_value = "rect")]
    pub target: TargetArg,
    #[arg(long, default_value_t = 0.5)]
    pub m1: f64,
    #[arg(long, default_value_t = 2.5)]
    pub m2: f64,
    #[arg(long, default_value_t = 2)]
    pub cycles: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A flag problem found before any computation.
#[derive(Debug)]
struct Usage(String);

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Usage> {
    Err(Usage(msg.into()))
}

fn finite(name: &str, v: f64) -> std::result::Result<(), Usage> {
    if v.is_finite() {
        Ok(())
    } else {
        usage(format!("--{name} must be finite, got {v}"))
    }
}

fn positive(name: &str, v: f64) -> std::result::Result<(), Usage> {
    finite(name, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        usage(format!("--{name} must be positive, got {v}"))
    }
}

impl ResponseArgs {
    fn validate(&self) -> std::result::Result<(), Usage> {
        positive("tf", self.tf)?;
        positive("omega0", self.omega0)?;
        positive("xmax", self.xmax)?;
        finite("epsilon-ctrl", self.epsilon_ctrl)?;
        if self.omega0 <= DEFAULT_OMEGAF {
            return usage(format!("--omega0 must exceed Omega_f = {DEFAULT_OMEGAF}"));
        }
        if self.points < 2 {
            return usage(format!("--points must be at least 2, got {}", self.points));
        }
        if self.epsilon_ctrl < 0.0 {
            return usage("--epsilon-ctrl must be non-negative");
        }
        if self.epsilon_ctrl > 0.0 && self.schedule == ScheduleArg::Linear {
            return usage("--epsilon-ctrl applies to the faquad schedule only");
        }
        Ok(())
    }
}

impl BenchmarkArgs {
    fn validate(&self) -> std::result::Result<(), Usage> {
        positive("tf-min", self.tf_min)?;
        positive("tf-max", self.tf_max)?;
        if self.tf_points < 4 {
            return usage(format!("--tf-points must be at least 4 for the fit, got {}", self.tf_points));
        }
        if self.tf_max <= self.tf_min {
            return usage("--tf-max must exceed --tf-min");
        }
        Ok(())
    }
}

impl TrainArgs {
    fn validate(&self) -> std::result::Result<(), Usage> {
        if !(2..=12).contains(&self.bits) {
            return usage(format!("--bits must be in 2..=12, got {}", self.bits));
        }
        if self.hidden == 0 {
            return usage("--hidden must be at least 1");
        }
        if self.bits + self.hidden + 1 > crate::register::MAX_QUBITS {
            return usage("network exceeds the register qubit cap");
        }
        if self.restarts == 0 {
            return usage("--restarts must be at least 1");
        }
        Ok(())
    }
}

impl SynthesizeArgs {
    fn validate(&self) -> std::result::Result<(), Usage> {
        finite("m1", self.m1)?;
        finite("m2", self.m2)?;
        if self.m1 >= self.m2 {
            return usage(format!("--m1 must be below --m2, got {} >= {}", self.m1, self.m2));
        }
        if !(1..=8).contains(&self.cycles) {
            return usage(format!("--cycles must be in 1..=8, got {}", self.cycles));
        }
        Ok(())
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn run_response(a: &ResponseArgs) -> Result<()> {
    let schedule = match a.schedule {
        ScheduleArg::Linear => linear_schedule(a.omega0, DEFAULT_OMEGAF, a.tf)?,
        ScheduleArg::Faquad => {
            let base = default_faquad(a.omega0, DEFAULT_OMEGAF, a.tf)?;
            if a.epsilon_ctrl > 0.0 {
                perturbed_schedule(&base, a.epsilon_ctrl)?
            } else {
                base
            }
        }
    };
    let grid = dynamics::symmetric_grid(a.xmax, a.points);
    let curve = dynamics::response_curve(&schedule, &grid)?;
    let mut buf = Vec::new();
    writeln!(buf, "{UNITS}")?;
    writeln!(
        buf,
        "# schedule={:?} tf={} omega0={} epsilon_ctrl={}",
        a.schedule, a.tf, a.omega0, a.epsilon_ctrl
    )?;
    dynamics::write_response_csv(&mut buf, &curve, DEFAULT_OMEGAF)?;
    emit(a.out.as_deref(), &buf)
}

fn run_benchmark(a: &BenchmarkArgs) -> Result<()> {
    let config = BenchmarkConfig {
        tf_grid: BenchmarkConfig::log_grid(a.tf_min, a.tf_max, a.tf_points),
        ..BenchmarkConfig::default()
    };
    let report = dynamics::benchmark_ramps(&config)?;
    let mut buf = Vec::new();
    writeln!(buf, "{UNITS}")?;
    writeln!(buf, "# omega0={} x_max={} field_points={}", config.omega0, config.x_max, config.n_points)?;
    report.write_csv(&mut buf)?;
    let fit = report.fit_json()?;
    match &a.out {
        Some(p) => {
            fs::write(p, &buf)?;
            fs::write(sibling(p, ".fit.json"), format!("{fit}\n"))?;
            println!("{fit}");
        }
        None => {
            std::io::stdout().write_all(&buf)?;
            println!("# fit {fit}");
        }
    }
    Ok(())
}

fn run_train(a: &TrainArgs) -> Result<()> {
    let data = training::prime_dataset(a.bits)?;
    let template = NetworkSpec::layered(a.bits, &[a.hidden, 1], ActivationKind::Algebraic)?;
    let config = TrainConfig { max_iters: a.iters, restarts: a.restarts, seed: a.seed, ..TrainConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let net0 = training::random_init(&template, config.init_scale, &mut rng);
    let report = training::train(&net0, &data, &config)?;
    let json = report.to_json()?;
    match &a.out {
        Some(p) => {
            fs::write(p, format!("{json}\n"))?;
            fs::write(sibling(p, ".model.json"), format!("{}\n", report.params.to_json()?))?;
        }
        None => println!("{json}"),
    }
    eprintln!("accuracy {} after {} iterations", report.accuracy, report.cost_trace.len() - 1);
    Ok(())
}

fn run_synthesize(a: &SynthesizeArgs) -> Result<()> {
    let target = match a.target {
        TargetArg::Rect => TargetResponse::rectangle(a.m1, a.m2)?,
        TargetArg::Peak => TargetResponse::peak(0.5 * (a.m1 + a.m2), 0.5 * (a.m2 - a.m1))?,
    };
    let grid = target.default_grid();
    let result = synthesis::synthesize(&target, a.cycles, &grid, &SynthesisOptions::default())?;
    let mut buf = Vec::new();
    writeln!(buf, "{UNITS}")?;
    writeln!(
        buf,
        "# target={:?} m1={} m2={} cycles={} rms_residual={} converged={}",
        a.target, a.m1, a.m2, a.cycles, result.residual, result.converged
    )?;
    synthesis::write_csv(&mut buf, &target, &result.spec, &grid)?;
    emit(a.out.as_deref(), &buf)
}

fn validate(cli: &Cli) -> std::result::Result<(), Usage> {
    if cli.threads == Some(0) {
        return usage("--threads must be at least 1");
    }
    match &cli.command {
        Command::Response(a) => a.validate(),
        Command::Benchmark(a) => a.validate(),
        Command::Train(a) => a.validate(),
        Command::Synthesize(a) => a.validate(),
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Response(a) => run_response(a),
        Command::Benchmark(a) => run_benchmark(a),
        Command::Train(a) => run_train(a),
        Command::Synthesize(a) => run_synthesize(a),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(Usage(msg)) = validate(&cli) {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_RUNTIME;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidConfig(_) | Error::InvalidSchedule(_) => EXIT_USAGE,
                _ => EXIT_RUNTIME,
            }
        }
    }
}
