mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use cubvis::arith::rational;
use cubvis::certificate::{all_passed, Certificate};
use cubvis::cubic::Chart;
use cubvis::generators::GeneratorSpec;
use cubvis::geometry::Point;
use serde::Serialize;
use sha2::{Digest, Sha256};

use config::{RunConfig, Source};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("input parse error: {0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cubvis", version, about = "Exact visibility certificates for point sets near real cubics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Build a point set from a generator
    Generate,
    /// Line statistics, visibility graph and maximum visible clique
    Analyze,
    /// Split a cubic into rational components
    ClassifyCubic,
    /// Exceptional set and visibility patches of a cubic
    Patches,
    /// Certified clique cover of a point set lying mostly on a cubic
    Container,
    /// Ordinary-line identities
    Turan,
    /// Dense-orchard core and its guarantees
    Orchard,
    /// Fit a cubic through most of a point set
    FitCubic,
    /// Ambient blocker check on one patch
    AmbientCheck,
    /// Run every instance of a suite directory
    VerifyAll,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Analyze => "analyze",
            Command::ClassifyCubic => "classify-cubic",
            Command::Patches => "patches",
            Command::Container => "container",
            Command::Turan => "turan",
            Command::Orchard => "orchard",
            Command::FitCubic => "fit-cubic",
            Command::AmbientCheck => "ambient-check",
            Command::VerifyAll => "verify-all",
        }
    }
}

#[derive(clap::Args, Debug)]
struct Flags {
    /// JSON run configuration; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Point set JSON
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Cubic JSON
    #[arg(long, global = true)]
    cubic: Option<PathBuf>,
    /// Report path; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    l: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    clique_budget: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true, value_parser = parse_chart)]
    chart: Option<Chart>,
    #[arg(long, global = true)]
    patch: Option<usize>,
    #[arg(long, global = true)]
    alpha: Option<String>,
    #[arg(long, global = true)]
    beta: Option<String>,
    /// Directory of instance JSON files
    #[arg(long, global = true)]
    suite: Option<PathBuf>,
    /// Generator: one-blocker, cubic-power, elliptic-coset, random-general, grid
    #[arg(long, global = true)]
    kind: Option<String>,
    #[arg(long, global = true)]
    m: Option<u64>,
    #[arg(long, global = true)]
    n: Option<u64>,
    #[arg(long, global = true)]
    range: Option<u64>,
    #[arg(long, global = true)]
    w: Option<u64>,
    #[arg(long, global = true)]
    h: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    px: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    py: Option<String>,
}

fn parse_chart(s: &str) -> Result<Chart, String> {
    match s {
        "standard" => Ok(Chart::Standard),
        "sheared" => Ok(Chart::Sheared),
        _ => Err(format!("unknown chart {s:?}; expected standard or sheared")),
    }
}

impl Flags {
    fn generator(&self) -> Result<Option<GeneratorSpec>, CliError> {
        let Some(kind) = &self.kind else { return Ok(None) };
        let need = |v: Option<u64>, name: &str| v.ok_or_else(|| CliError::Usage(format!("--{name} is required for {kind}")));
        let q = |v: &Option<String>, name: &str| {
            let s = v.as_ref().ok_or_else(|| CliError::Usage(format!("--{name} is required for {kind}")))?;
            rational::parse(s).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
        };
        let spec = match kind.as_str() {
            "one-blocker" => GeneratorSpec::OneBlocker { m: need(self.m, "m")? },
            "cubic-power" => GeneratorSpec::CubicPower { m: need(self.m, "m")? },
            "elliptic-coset" => GeneratorSpec::EllipticCoset {
                a: q(&self.a, "a")?,
                b: q(&self.b, "b")?,
                p: Point::new(q(&self.px, "px")?, q(&self.py, "py")?),
                n: need(self.n, "n")?,
            },
            "random-general" => GeneratorSpec::RandomGeneral {
                n: need(self.n, "n")?,
                range: need(self.range, "range")?,
                seed: self.seed.unwrap_or(0),
            },
            "grid" => GeneratorSpec::Grid { w: need(self.w, "w")?, h: need(self.h, "h")? },
            other => return Err(CliError::Usage(format!("unknown generator kind {other:?}"))),
        };
        Ok(Some(spec))
    }

    fn to_config(&self) -> Result<RunConfig, CliError> {
        Ok(RunConfig {
            command: None,
            input: self.input.clone().map(Source::Path),
            generator: self.generator()?,
            cubic: self.cubic.clone().map(Source::Path),
            output: self.out.clone(),
            k: self.k,
            l: self.l,
            seed: self.seed,
            clique_budget: self.clique_budget,
            trials: self.trials,
            chart: self.chart,
            patch: self.patch,
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            suite: self.suite.clone(),
        })
    }
}

/// What a command produced.
pub struct Outcome {
    pub results: serde_json::Value,
    pub certificates: Vec<Certificate>,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    config_hash: String,
    seed: u64,
    config: &'a RunConfig,
    results: serde_json::Value,
    certificates: Vec<Certificate>,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    timing_ms: u128,
}

pub fn config_hash(cfg: &RunConfig) -> String {
    let mut c = cfg.clone();
    c.output = None;
    let bytes = serde_json::to_vec(&c).expect("config serializes");
    format!("{:x}", Sha256::digest(bytes))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let command = cli.command.name();
    let cfg = (|| -> Result<RunConfig, CliError> {
        let mut cfg = match &cli.flags.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.overlay(cli.flags.to_config()?);
        if let Some(c) = &cfg.command {
            if c != command {
                return Err(CliError::Usage(format!("config is for {c:?}, not {command:?}")));
            }
        }
        cfg.command = Some(command.to_string());
        Ok(cfg)
    })();
    let cfg = match cfg {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("cubvis {command}: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let outcome = commands::run(command, &cfg);
    let (results, certificates, error, code) = match outcome {
        Ok(o) => {
            let code = if all_passed(&o.certificates) { 0 } else { 1 };
            (o.results, o.certificates, None, code)
        }
        Err(e) => (serde_json::Value::Null, Vec::new(), Some(e.to_string()), e.exit_code()),
    };
    let report = Report {
        command,
        config_hash: config_hash(&cfg),
        seed: cfg.seed.unwrap_or(0),
        config: &cfg,
        passed: code == 0,
        results,
        certificates,
        error,
        timing_ms: start.elapsed().as_millis(),
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match &cfg.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, json + "\n") {
                eprintln!("cubvis {command}: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{json}"),
    }
    let failed = report.certificates.iter().filter(|c| !c.passed).count();
    eprintln!(
        "cubvis {command}: {} certificates, {failed} failed{}",
        report.certificates.len(),
        report.error.as_ref().map(|e| format!("; error: {e}")).unwrap_or_default()
    );
    for c in report.certificates.iter().filter(|c| !c.passed) {
        eprintln!("  FAIL {}: {}", c.name, c.detail);
    }
    ExitCode::from(code)
}
