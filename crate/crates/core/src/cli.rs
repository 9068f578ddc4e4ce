//! Batch front end: a key-value config file plus flag overrides, suite
//! orchestration, and JSON/CSV report emission.
//!
//! ```text
//! # run.cfg
//! grid_n = 256
//! potential = quadratic
//! alphas = 0.3, 0.5
//! suites = thm13, thm14
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::lattice::Potential;
use crate::verifier::{describe_suite, run_suites, Context, SuiteConfig, VerdictReport, SUITES};
use crate::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_SUITE_FAILURE: i32 = 1;
pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Suites whose checks compare a numerical route against an exact one. A
/// failing check there is a numerical failure rather than a theorem failure.
const ORACLE_SUITES: [&str; 2] = ["oracles", "spectrum"];

#[derive(Debug, Parser)]
#[command(
    name = "schcalc",
    version,
    about = "Theorem suites for periodic Schrödinger operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the requested suites and write one JSON report per suite plus CSV curves.
    Run(Overrides),
    /// Print the resolved configuration and the suite plan without computing.
    Describe(Overrides),
    /// Write the eigenvalues of the configured operator to `spectrum.csv`.
    Spectrum(Overrides),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Key-value configuration file; flags take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long = "suite", value_name = "NAME")]
    pub suites: Vec<String>,
    #[arg(long)]
    pub grid_n: Option<usize>,
    #[arg(long)]
    pub period: Option<f64>,
    /// `constant:MU`, `quadratic`, `well:DEPTH,WIDTH` or `file:PATH`.
    #[arg(long, value_name = "SPEC")]
    pub potential: Option<String>,
    #[arg(long = "alpha", value_name = "REAL")]
    pub alphas: Vec<f64>,
    #[arg(long = "beta", value_name = "REAL")]
    pub betas: Vec<f64>,
    #[arg(long = "sigma", value_name = "REAL")]
    pub sigmas: Vec<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tolerance_scale: Option<f64>,
}

/// Everything one invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub suite: SuiteConfig,
    pub suites: Vec<String>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            suite: SuiteConfig::default(),
            suites: Vec::new(),
            out: PathBuf::from("schcalc-out"),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

fn parse_pair(key: &str, v: &str) -> Result<(f64, f64)> {
    match parse_list::<f64>(key, v)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::Config(format!(
            "{key}: expected two comma-separated numbers, got {v:?}"
        ))),
    }
}

impl RunConfig {
    /// Parses `key = value` lines. `#` starts a comment; lists are
    /// comma-separated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rc = Self::default();
        let c = &mut rc.suite;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got {raw:?}", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "grid_n" => c.grid_n = parse_num(key, value)?,
                "period" => c.period = parse_num(key, value)?,
                "potential" => c.potential = value.to_string(),
                "dimension" => c.dimension = parse_num(key, value)?,
                "mu" => c.mu = parse_num(key, value)?,
                "alphas" => c.alphas = parse_list(key, value)?,
                "betas" => c.betas = parse_list(key, value)?,
                "sigmas" => c.sigmas = parse_list(key, value)?,
                "time_points" => c.time_points = parse_num(key, value)?,
                "time_window" => c.time_window = parse_pair(key, value)?,
                "ball_stride" => c.ball_stride = parse_num(key, value)?,
                "probes" => c.probes = parse_num(key, value)?,
                "seed" => c.seed = parse_num(key, value)?,
                "tolerance_scale" => c.tolerance_scale = parse_num(key, value)?,
                "comparability_band" => c.comparability_band = parse_pair(key, value)?,
                "stability" => c.stability = parse_num(key, value)?,
                "suites" => {
                    rc.suites = value
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                }
                "out" => rc.out = PathBuf::from(value),
                _ => return Err(Error::Config(format!("line {}: unknown key {key:?}", no + 1))),
            }
        }
        Ok(rc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The config file named in `o` (or the defaults), then the flags.
    pub fn resolve(o: &Overrides) -> Result<Self> {
        let mut rc = match &o.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        let c = &mut rc.suite;
        if !o.suites.is_empty() {
            rc.suites = o.suites.clone();
        }
        if let Some(v) = o.grid_n {
            c.grid_n = v;
        }
        if let Some(v) = o.period {
            c.period = v;
        }
        if let Some(v) = &o.potential {
            c.potential = v.clone();
        }
        if !o.alphas.is_empty() {
            c.alphas = o.alphas.clone();
        }
        if !o.betas.is_empty() {
            c.betas = o.betas.clone();
        }
        if !o.sigmas.is_empty() {
            c.sigmas = o.sigmas.clone();
        }
        if let Some(v) = o.seed {
            c.seed = v;
        }
        if let Some(v) = o.tolerance_scale {
            c.tolerance_scale = v;
        }
        if let Some(v) = &o.out {
            rc.out = v.clone();
        }
        Ok(rc)
    }

    /// Checks everything that can be checked before computing, including
    /// that the potential spec resolves on the configured grid.
    pub fn validate(&self, need_suites: bool) -> Result<()> {
        self.suite.validate()?;
        if need_suites && self.suites.is_empty() {
            return Err(Error::Config(format!(
                "no suites requested; known: {}",
                SUITES.join(", ")
            )));
        }
        if let Some(s) = self.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(Error::Config(format!(
                "unknown suite {s:?}; known: {}",
                SUITES.join(", ")
            )));
        }
        let grid = crate::lattice::PeriodicGrid::new(self.suite.grid_n, self.suite.period)?;
        Potential::from_spec(&grid, &self.suite.potential)?;
        Ok(())
    }
}

/// Exit status for an error raised before or during a run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_numerical() => EXIT_NUMERICAL,
        Error::Io(_) | Error::Json(_) => EXIT_SUITE_FAILURE,
        _ => EXIT_INVALID_CONFIG,
    }
}

/// Exit status for a set of completed reports.
pub fn verdict_code(reports: &[VerdictReport]) -> i32 {
    if reports
        .iter()
        .any(|r| !r.pass && ORACLE_SUITES.contains(&r.suite.as_str()))
    {
        EXIT_NUMERICAL
    } else if reports.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_SUITE_FAILURE
    }
}

/// Writes `<suite>.json` and one `<curve>.csv` per curve, in report order.
pub fn write_reports(out: &Path, reports: &[VerdictReport]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out)?;
    let mut written = Vec::new();
    for r in reports {
        let p = out.join(format!("{}.json", r.suite));
        fs::write(&p, r.to_json()?)?;
        written.push(p);
        for c in &r.curves {
            let p = out.join(format!("{}.csv", c.name));
            fs::write(&p, c.to_csv())?;
            written.push(p);
        }
    }
    Ok(written)
}

/// Validates, runs the suites and writes the reports.
pub fn run(rc: &RunConfig) -> Result<(Vec<VerdictReport>, Vec<PathBuf>)> {
    rc.validate(true)?;
    let ctx = Context::new(rc.suite.clone())?;
    let reports = run_suites(&ctx, &rc.suites)?;
    let files = write_reports(&rc.out, &reports)?;
    Ok((reports, files))
}

/// The resolved parameters and the suite plan, as printed by `describe`.
pub fn describe(rc: &RunConfig) -> Result<String> {
    rc.validate(false)?;
    let mut s = format!(
        "config hash: {}\noutput: {}\n{}\n",
        rc.suite.hash()?,
        rc.out.display(),
        serde_json::to_string_pretty(&rc.suite)?
    );
    if rc.suites.is_empty() {
        s.push_str("suites: none requested\n");
    }
    for name in &rc.suites {
        s.push_str(&format!("suite {name}: {}\n", describe_suite(name).unwrap_or("")));
    }
    Ok(s)
}

/// Writes `spectrum.csv` with columns `k, eigenvalue`.
pub fn spectrum(rc: &RunConfig) -> Result<PathBuf> {
    rc.validate(false)?;
    let ctx = Context::new(rc.suite.clone())?;
    let grid = ctx.grid(rc.suite.grid_n)?;
    let spec = ctx.spectrum(&grid, &rc.suite.potential)?;
    let mut csv = String::from("k,eigenvalue\n");
    for (k, l) in spec.eigenvalues().iter().enumerate() {
        csv.push_str(&format!("{k},{l:e}\n"));
    }
    fs::create_dir_all(&rc.out)?;
    let p = rc.out.join("spectrum.csv");
    fs::write(&p, csv)?;
    Ok(p)
}

/// Caps the global rayon pool from `SCHCALC_THREADS`.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("SCHCALC_THREADS") else {
        return Ok(());
    };
    let n: usize = parse_num("SCHCALC_THREADS", &v)?;
    if n == 0 {
        return Err(Error::Config("SCHCALC_THREADS must be positive".into()));
    }
    // A pool already built (e.g. by a host process) keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(cmd: &Command) -> Result<i32> {
    init_threads()?;
    match cmd {
        Command::Run(o) => {
            let rc = RunConfig::resolve(o)?;
            let (reports, files) = run(&rc)?;
            for r in &reports {
                let failed = r.failures().count();
                println!(
                    "{} {} ({} checks, {failed} failed)",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.suite,
                    r.checks.len()
                );
                for c in r.failures() {
                    println!("    {}: {:e}", c.quantity, c.empirical);
                }
            }
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(verdict_code(&reports))
        }
        Command::Describe(o) => {
            print!("{}", describe(&RunConfig::resolve(o)?)?);
            Ok(EXIT_PASS)
        }
        Command::Spectrum(o) => {
            println!("wrote {}", spectrum(&RunConfig::resolve(o)?)?.display());
            Ok(EXIT_PASS)
        }
    }
}

/// Entry point for the binary; returns the process exit status.
pub fn main_with(cli: Cli) -> i32 {
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
