//! Command-line front end: argument surface, config validation with
//! flag-level error messages, artifact writing, and the acceptance-suite
//! driver. Every stochastic run is a pure function of (config, seed);
//! identical invocations produce byte-identical artifacts.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;

use clap::{Args, Parser, Subcommand};
use fareylab_core::congruence::{astar_bruteforce, astar_count, OrbitCount, ResidueSystem};
use fareylab_core::diophantine::{dio_distribution, DioKind, DioParams};
use fareylab_core::farey::{count, enumerate, growth_report};
use fareylab_core::frobenius::{frobenius_census, frobenius_record};
use fareylab_core::geom::TestSet;
use fareylab_core::report::{self, SCHEMA_VERSION};
use fareylab_core::spacing::{p0_stat, p_stat};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

/// Environment variable naming the default directory for relative
/// artifact paths.
pub const OUT_DIR_ENV: &str = "FAREYLAB_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Core(fareylab_core::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O: {e}"),
        }
    }
}

impl From<fareylab_core::Error> for CliError {
    fn from(e: fareylab_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// 2 = validation, 3 = numeric overflow, 1 = other runtime failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Core(e) => match e {
                fareylab_core::Error::Overflow(_) => 3,
                fareylab_core::Error::Io(_)
                | fareylab_core::Error::Csv(_)
                | fareylab_core::Error::Json(_) => 1,
                _ => 2,
            },
            CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "fareylab",
    version,
    about = "Congruence-restricted Farey sequences: enumeration, spacing and Diophantine statistics, Frobenius censuses"
)]
pub struct Cli {
    /// Worker threads for parallel kernels (0 = all cores); results do
    /// not depend on this
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate or count a restricted Farey sequence
    Farey {
        #[command(subcommand)]
        cmd: FareyCmd,
    },
    /// Window spacing statistics of a restricted sequence
    Stats {
        #[command(subcommand)]
        cmd: StatsCmd,
    },
    /// Diophantine counting distributions
    Dio {
        #[command(subcommand)]
        cmd: DioCmd,
    },
    /// Frobenius numbers and ensemble censuses
    Frob {
        #[command(subcommand)]
        cmd: FrobCmd,
    },
    /// Exact orbit counts of a residue system
    Congr(CongrArgs),
    /// Run the acceptance suite
    Accept(AcceptArgs),
}

/// Residue-system selection shared by most subcommands.
#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Torus dimension n
    #[arg(long)]
    pub n: usize,

    /// Residue modulus m; 1 means unrestricted
    #[arg(long, default_value_t = 1)]
    pub modulus: u64,

    /// Residue class row "a1,...,a_{n+1}" (repeat for unions of classes)
    #[arg(long = "class")]
    pub classes: Vec<String>,
}

impl SystemArgs {
    pub fn build(&self) -> CliResult<ResidueSystem> {
        if self.n == 0 {
            return Err(CliError::Validation("--n: dimension must be >= 1".into()));
        }
        if self.modulus == 0 {
            return Err(CliError::Validation("--modulus: must be >= 1".into()));
        }
        if self.modulus > 1 && self.classes.is_empty() {
            return Err(CliError::Validation(
                "--class: at least one residue class is required when --modulus > 1".into(),
            ));
        }
        let rows = self
            .classes
            .iter()
            .map(|s| parse_i64_list(s, "--class"))
            .collect::<CliResult<Vec<_>>>()?;
        for row in &rows {
            if row.len() != self.n + 1 {
                return Err(CliError::Validation(format!(
                    "--class: row {row:?} must have n+1 = {} entries",
                    self.n + 1
                )));
            }
        }
        ResidueSystem::new(self.n, self.modulus, &rows).map_err(CliError::from)
    }
}

#[derive(Subcommand, Debug)]
pub enum FareyCmd {
    /// Stream-count the sequence and report the growth ratio
    Count {
        #[command(flatten)]
        sys: SystemArgs,
        /// Level Q (max denominator)
        #[arg(long)]
        q: i64,
        /// Output path (JSON); stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Materialize the sequence as CSV with columns q,p1,...,pn
    List {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        q: i64,
        /// Output path (CSV); stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum StatsCmd {
    /// Ambient statistic: window centers sampled uniformly in the domain
    P {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        q: i64,
        /// Window set, e.g. "box:0,0.5" or "ball:0;0.3"
        #[arg(long)]
        window: String,
        /// Sampling domain; defaults to the full torus [0,m)^n
        #[arg(long)]
        domain: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest count kept in the pmf; larger counts go to overflow
        #[arg(long, default_value_t = 16)]
        kmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pointwise statistic: exact pass over Farey points in the domain
    P0 {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        window: String,
        #[arg(long)]
        domain: Option<String>,
        #[arg(long, default_value_t = 16)]
        kmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum DioCmd {
    /// Distribution of the denominator-window counting function
    Est {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        q: i64,
        /// Amplitude of the approximation inequality
        #[arg(long)]
        alpha: f64,
        /// Denominator window ratio (> 1)
        #[arg(long)]
        c: f64,
        #[arg(long)]
        domain: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        kmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distribution of the level-scaled counting function
    Kesten {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        domain: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        kmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FrobCmd {
    /// Frobenius number of one vector
    Number {
        /// Comma-separated entries, all >= 2, coprime as a whole
        #[arg(long)]
        a: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tail census of normalized Frobenius numbers over a dilated box
    Census {
        #[command(flatten)]
        sys: SystemArgs,
        /// Dilation factor T
        #[arg(long)]
        t: i64,
        /// Box in R^{n+1}, e.g. "0,1;0,1;0,1"
        #[arg(long)]
        domain: String,
        /// Tail grid "start:stop:step", e.g. "0:3:0.05"
        #[arg(long)]
        rgrid: String,
        /// Output path (CSV); stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct CongrArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Also run the enumeration oracle and check it agrees
    #[arg(long)]
    pub bruteforce: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AcceptArgs {
    /// Which suite to run
    #[arg(value_enum, default_value_t = acceptance::Suite::Fast)]
    pub suite: acceptance::Suite,
    /// Write results as JSON here as well
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses "a,b,c" into integers, reporting the offending flag on error.
pub fn parse_i64_list(s: &str, flag: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|e| CliError::Validation(format!("{flag}: bad integer '{part}': {e}")))
        })
        .collect()
}

fn parse_f64_list(s: &str, flag: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Validation(format!("{flag}: bad number '{part}': {e}")))
        })
        .collect()
}

/// Parses a test-set spec: "box:l1,u1;l2,u2", "ball:c1,...,cn;r", or a
/// bare box "l1,u1;l2,u2".
pub fn parse_test_set(spec: &str, flag: &str) -> CliResult<TestSet> {
    let (kind, body) = match spec.split_once(':') {
        Some((k, b)) => (k.trim(), b),
        None => ("box", spec),
    };
    match kind {
        "box" => {
            let mut lo = Vec::new();
            let mut hi = Vec::new();
            for axis in body.split(';') {
                let vals = parse_f64_list(axis, flag)?;
                if vals.len() != 2 {
                    return Err(CliError::Validation(format!(
                        "{flag}: box axis '{axis}' must be 'lo,hi'"
                    )));
                }
                lo.push(vals[0]);
                hi.push(vals[1]);
            }
            TestSet::boxed(lo, hi).map_err(CliError::from)
        }
        "ball" => {
            let (center, radius) = body.split_once(';').ok_or_else(|| {
                CliError::Validation(format!("{flag}: ball must be 'c1,...,cn;r'"))
            })?;
            let center = parse_f64_list(center, flag)?;
            let radius = radius
                .trim()
                .parse::<f64>()
                .map_err(|e| CliError::Validation(format!("{flag}: bad radius '{radius}': {e}")))?;
            TestSet::ball(center, radius).map_err(CliError::from)
        }
        other => Err(CliError::Validation(format!(
            "{flag}: unknown shape '{other}' (use box or ball)"
        ))),
    }
}

/// Parses "start:stop:step" into an inclusive grid.
pub fn parse_rgrid(spec: &str, flag: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Validation(format!(
            "{flag}: grid must be 'start:stop:step'"
        )));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| CliError::Validation(format!("{flag}: bad number '{s}': {e}")))
    };
    let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if !(step > 0.0) || stop < start {
        return Err(CliError::Validation(format!(
            "{flag}: need step > 0 and stop >= start"
        )));
    }
    let count = ((stop - start) / step + 1.5).floor() as usize;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Default sampling domain: the full torus [0, m)^n.
fn default_domain(sys: &ResidueSystem) -> TestSet {
    let m = sys.modulus() as f64;
    TestSet::Box {
        lo: vec![0.0; sys.n()],
        hi: vec![m; sys.n()],
    }
}

fn domain_or_default(spec: &Option<String>, sys: &ResidueSystem) -> CliResult<TestSet> {
    match spec {
        Some(s) => parse_test_set(s, "--domain"),
        None => Ok(default_domain(sys)),
    }
}

/// Resolves an artifact path against FAREYLAB_OUT_DIR for relative paths.
pub fn resolve_out(path: Option<PathBuf>) -> Option<PathBuf> {
    path.map(|p| {
        if p.is_relative() {
            if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
                return PathBuf::from(dir).join(p);
            }
        }
        p
    })
}

/// The artifact produced by one invocation.
pub struct RunOutput {
    /// Bytes destined for --out or stdout; None when the command already
    /// streamed its output (acceptance lines without --out).
    pub artifact: Option<Vec<u8>>,
    pub path: Option<PathBuf>,
    pub exit_code: i32,
}

#[derive(Debug, Serialize, Deserialize)]
struct FareyCountReport {
    schema_version: u32,
    n: usize,
    modulus: u64,
    q: i64,
    count: u64,
    sigma: f64,
    ratio: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct FrobeniusNumberReport {
    schema_version: u32,
    a: Vec<i64>,
    f: i64,
    normalized: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CongrReport {
    schema_version: u32,
    n: usize,
    modulus: u64,
    classes: Vec<Vec<u64>>,
    method: String,
    orbit: OrbitCount,
    density_float: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bruteforce_agrees: Option<bool>,
}

pub fn run(cli: Cli) -> CliResult<RunOutput> {
    match cli.command {
        Command::Farey { cmd } => run_farey(cmd),
        Command::Stats { cmd } => run_stats(cmd),
        Command::Dio { cmd } => run_dio(cmd),
        Command::Frob { cmd } => run_frob(cmd),
        Command::Congr(args) => run_congr(args),
        Command::Accept(args) => run_accept(args),
    }
}

fn artifact<T: Serialize>(value: &T, out: Option<PathBuf>) -> CliResult<RunOutput> {
    Ok(RunOutput {
        artifact: Some(report::to_json_bytes(value).map_err(CliError::from)?),
        path: resolve_out(out),
        exit_code: 0,
    })
}

fn run_farey(cmd: FareyCmd) -> CliResult<RunOutput> {
    match cmd {
        FareyCmd::Count { sys, q, out } => {
            let system = sys.build()?;
            let total = count(&system, q)?;
            let growth = growth_report(&system, q, total)?;
            artifact(
                &FareyCountReport {
                    schema_version: SCHEMA_VERSION,
                    n: system.n(),
                    modulus: system.modulus(),
                    q,
                    count: total,
                    sigma: growth.sigma,
                    ratio: growth.ratio,
                },
                out,
            )
        }
        FareyCmd::List { sys, q, out } => {
            let system = sys.build()?;
            let set = enumerate(&system, q)?;
            let mut bytes = Vec::new();
            report::write_farey_csv(&mut bytes, &set)?;
            Ok(RunOutput {
                artifact: Some(bytes),
                path: resolve_out(out),
                exit_code: 0,
            })
        }
    }
}

fn run_stats(cmd: StatsCmd) -> CliResult<RunOutput> {
    match cmd {
        StatsCmd::P {
            sys,
            q,
            window,
            domain,
            samples,
            seed,
            kmax,
            out,
        } => {
            if samples == 0 {
                return Err(CliError::Validation("--samples: must be >= 1".into()));
            }
            let system = sys.build()?;
            let window = parse_test_set(&window, "--window")?;
            let domain = domain_or_default(&domain, &system)?;
            let set = enumerate(&system, q)?;
            let rep = p_stat(&set, &domain, &window, kmax, samples, seed)?;
            artifact(&rep, out)
        }
        StatsCmd::P0 {
            sys,
            q,
            window,
            domain,
            kmax,
            out,
        } => {
            let system = sys.build()?;
            let window = parse_test_set(&window, "--window")?;
            let domain = domain_or_default(&domain, &system)?;
            let set = enumerate(&system, q)?;
            let rep = p0_stat(&set, &domain, &window, kmax)?;
            artifact(&rep, out)
        }
    }
}

fn run_dio(cmd: DioCmd) -> CliResult<RunOutput> {
    let (kind, sys, q, alpha, c, domain, samples, seed, kmax, out) = match cmd {
        DioCmd::Est {
            sys,
            q,
            alpha,
            c,
            domain,
            samples,
            seed,
            kmax,
            out,
        } => {
            if !(c > 1.0) {
                return Err(CliError::Validation(format!("--c: must be > 1 (got {c})")));
            }
            (
                DioKind::Est,
                sys,
                q,
                alpha,
                c,
                domain,
                samples,
                seed,
                kmax,
                out,
            )
        }
        DioCmd::Kesten {
            sys,
            q,
            alpha,
            domain,
            samples,
            seed,
            kmax,
            out,
        } => {
            // the ratio is unused by the Kesten statistic
            (
                DioKind::Kesten,
                sys,
                q,
                alpha,
                2.0,
                domain,
                samples,
                seed,
                kmax,
                out,
            )
        }
    };
    if !(alpha > 0.0) {
        return Err(CliError::Validation(format!(
            "--alpha: must be > 0 (got {alpha})"
        )));
    }
    if samples == 0 {
        return Err(CliError::Validation("--samples: must be >= 1".into()));
    }
    let system = sys.build()?;
    let domain = domain_or_default(&domain, &system)?;
    let params = DioParams {
        sys: system,
        q,
        alpha,
        c,
    };
    let rep = dio_distribution(kind, &domain, &params, kmax, samples, seed)?;
    artifact(&rep, out)
}

fn run_frob(cmd: FrobCmd) -> CliResult<RunOutput> {
    match cmd {
        FrobCmd::Number { a, out } => {
            let a = parse_i64_list(&a, "--a")?;
            let rec = frobenius_record(&a)?;
            artifact(
                &FrobeniusNumberReport {
                    schema_version: SCHEMA_VERSION,
                    a: rec.a,
                    f: rec.f,
                    normalized: rec.normalized,
                },
                out,
            )
        }
        FrobCmd::Census {
            sys,
            t,
            domain,
            rgrid,
            out,
        } => {
            let system = sys.build()?;
            let domain = parse_test_set(&domain, "--domain")?;
            let grid = parse_rgrid(&rgrid, "--rgrid")?;
            let census = frobenius_census(&system, &domain, t, &grid)?;
            let mut bytes = Vec::new();
            report::write_census_csv(&mut bytes, &census)?;
            Ok(RunOutput {
                artifact: Some(bytes),
                path: resolve_out(out),
                exit_code: 0,
            })
        }
    }
}

fn run_congr(args: CongrArgs) -> CliResult<RunOutput> {
    let system = args.sys.build()?;
    let orbit = astar_count(&system)?;
    let (method, bruteforce_agrees) = if args.bruteforce {
        let slow = astar_bruteforce(&system)?;
        ("closed_form+bruteforce".to_string(), Some(slow == orbit))
    } else {
        ("closed_form".to_string(), None)
    };
    let density_float = orbit.density_f64();
    artifact(
        &CongrReport {
            schema_version: SCHEMA_VERSION,
            n: system.n(),
            modulus: system.modulus(),
            classes: system.classes().to_vec(),
            method,
            orbit,
            density_float,
            bruteforce_agrees,
        },
        args.out,
    )
}

fn run_accept(args: AcceptArgs) -> CliResult<RunOutput> {
    let results = acceptance::run_suite(args.suite, |r| {
        println!("{}", acceptance::format_line(r));
    });
    let failed = results.iter().filter(|r| !r.pass).count();
    println!(
        "{} criteria, {} passed, {failed} failed",
        results.len(),
        results.len() - failed
    );
    let exit_code = if failed > 0 { 4 } else { 0 };
    let artifact = match &args.out {
        Some(_) => Some(report::to_json_bytes(&results).map_err(CliError::from)?),
        None => None,
    };
    Ok(RunOutput {
        artifact,
        path: resolve_out(args.out),
        exit_code,
    })
}
