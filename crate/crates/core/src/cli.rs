//! Command line front end.
//!
//! Every subcommand parses flags, calls one library operation and prints a
//! single JSON object on stdout. Failures print one JSON line on stderr and
//! exit with 1 (domain or usage), 2 (I/O or parse) or 3 (numeric).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::experiments::{self, build_id, ExperimentConfig, ExperimentKind};
use crate::io::{read_directed, read_network, write_directed, write_split_map, write_undirected, NetworkFile};
use crate::network::MatrixView;
use crate::randgen::{sample_network, RngHandle, WeibullSpec};
use crate::spectral::{spectral_norm_dense, spectral_norm_power};
use crate::structure::{event_census, CensusParams};
use crate::theory::{self, RateQuery, Tail};
use crate::transforms::{clique_reduce, triangle_count};

/// Environment variable naming the default experiment output directory.
pub const OUT_DIR_ENV: &str = "SPARSE_LDP_OUT_DIR";

/// Largest order the `auto` engine sends to the dense path.
pub const AUTO_DENSE_LIMIT: usize = 256;

#[derive(Debug, Parser)]
#[command(name = "sparse-ldp", about = "Sparse Weibull random networks: sampling, reduction, norms, rates and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample Z = X ⊙ Y with p = d/n and write it as a directed network file.
    Sample(SampleArgs),
    /// Clique-reduce a nonnegative directed network.
    Reduce(ReduceArgs),
    /// Largest singular value of a network file.
    Norm(NormArgs),
    /// Structural statistics and event flags of a directed network file.
    Structure(StructureArgs),
    /// Evaluate a closed-form quantity.
    Theory(TheoryArgs),
    /// Run a seeded Monte Carlo experiment and write CSV/JSON outputs.
    Experiment(ExperimentArgs),
    /// Re-run an experiment from its manifest and compare the CSV bytes.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Condition weights on |w| > threshold.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    emit_split_map: Option<PathBuf>,
    /// Replace weights by their absolute values first.
    #[arg(long)]
    abs: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EngineArg {
    Dense,
    Power,
    Auto,
}

#[derive(Debug, Args)]
struct NormArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    engine: EngineArg,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct StructureArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    d: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,
    /// Slacks of the degree, component, excess and self-loop events;
    /// each defaults to (1+delta)^2 - 1.
    #[arg(long)]
    delta1: Option<f64>,
    #[arg(long)]
    delta2: Option<f64>,
    #[arg(long)]
    delta3: Option<f64>,
    #[arg(long)]
    delta4: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TheoryOp {
    Lambda,
    Rate,
    Phi,
    Psi,
    F,
    Entropy,
    Binom,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TailArg {
    Upper,
    Lower,
}

impl From<TailArg> for Tail {
    fn from(t: TailArg) -> Tail {
        match t {
            TailArg::Upper => Tail::Upper,
            TailArg::Lower => Tail::Lower,
        }
    }
}

#[derive(Debug, Args)]
struct TheoryArgs {
    #[arg(long, value_enum)]
    op: TheoryOp,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long, value_enum, default_value = "upper")]
    tail: TailArg,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    kind: ExperimentKind,
    /// JSON config; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated sizes, e.g. 1000,3000,10000.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated trial counts, one per size.
    #[arg(long, value_delimiter = ',')]
    trials_per_n: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::domain(format!("--{flag} is required for this operation")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serialises")
}

fn sample(a: SampleArgs) -> Result<String> {
    let spec = match a.threshold {
        Some(t) => WeibullSpec::conditioned(a.alpha, t)?,
        None => WeibullSpec::new(a.alpha)?,
    };
    if a.n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let p = a.d / a.n as f64;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("d / n = {p} is not a probability")));
    }
    let mut rng = RngHandle::new(a.seed, a.stream).rng();
    let z = sample_network(a.n, a.d, &spec, &mut rng)?;
    write_directed(&z, &a.out)?;
    Ok(to_json(&json!({
        "n": z.order(),
        "entries": z.nnz(),
        "self_loops": z.self_loop_count(),
        "out": a.out,
    })))
}

fn reduce(a: ReduceArgs) -> Result<String> {
    let mut w = read_directed(&a.input)?;
    if a.abs {
        w = w.abs();
    }
    let r = clique_reduce(&w)?;
    write_undirected(&r.h, &a.out)?;
    if let Some(path) = &a.emit_split_map {
        write_split_map(&r.split_map, path)?;
    }
    Ok(to_json(&json!({
        "vertices": r.h.order(),
        "edges": r.h.edge_count(),
        "components": r.components.len(),
        "max_excess": r.components.iter().map(|c| c.excess).max(),
        "triangles": triangle_count(&r.h),
        "out": a.out,
    })))
}

fn norm(a: NormArgs) -> Result<String> {
    let file = read_network(&a.input)?;
    let view: &dyn MatrixView = match &file {
        NetworkFile::Directed(d) => d,
        NetworkFile::Undirected(u) => u,
    };
    let dense = match a.engine {
        EngineArg::Dense => true,
        EngineArg::Power => false,
        EngineArg::Auto => file.order() <= AUTO_DENSE_LIMIT,
    };
    let result = if dense {
        spectral_norm_dense(view)?
    } else {
        let mut rng = RngHandle::new(a.seed, 0).rng();
        spectral_norm_power(view, a.tol, a.max_iter, &mut rng)?
    };
    Ok(to_json(&result))
}

fn structure(a: StructureArgs) -> Result<String> {
    let z = read_directed(&a.input)?;
    let base = CensusParams::from_delta(a.alpha, a.d, a.delta, a.epsilon, a.kappa);
    let params = CensusParams {
        delta1: a.delta1.unwrap_or(base.delta1),
        delta2: a.delta2.unwrap_or(base.delta2),
        delta3: a.delta3.unwrap_or(base.delta3),
        delta4: a.delta4.unwrap_or(base.delta4),
        ..base
    };
    Ok(to_json(&event_census(&z, &params)?))
}

fn theory_op(a: TheoryArgs) -> Result<String> {
    Ok(match a.op {
        TheoryOp::Lambda => {
            let (n, alpha) = (require(a.n, "n")?, require(a.alpha, "alpha")?);
            let regime = theory::Regime::of(alpha)?;
            to_json(&json!({
                "n": n,
                "alpha": alpha,
                "regime": regime,
                "value": theory::typical_value(n, alpha)?,
            }))
        }
        TheoryOp::Rate => {
            let q = RateQuery::new(require(a.alpha, "alpha")?, require(a.delta, "delta")?)?;
            to_json(&theory::rate(&q, a.tail.into())?)
        }
        TheoryOp::Phi => to_json(&theory::phi(require(a.theta, "theta")?, require(a.k, "k")?)?),
        TheoryOp::Psi => {
            let (alpha, delta) = (require(a.alpha, "alpha")?, require(a.delta, "delta")?);
            match (a.k, a.k_max) {
                (Some(k), _) => to_json(&json!({"k": k, "value": theory::psi(alpha, delta, k)?})),
                (None, Some(k_max)) => {
                    let (k, value) = theory::psi_min(alpha, delta, k_max)?;
                    to_json(&json!({"k": k, "value": value, "k_max": k_max}))
                }
                (None, None) => return Err(Error::domain("psi needs --k or --k-max")),
            }
        }
        TheoryOp::F => {
            let (alpha, rho) = (require(a.alpha, "alpha")?, require(a.rho, "rho")?);
            match a.x {
                Some(x) => to_json(&json!({"x": x, "value": theory::f_rate(alpha, rho, x)?})),
                None => to_json(&theory::f_max(alpha, rho)?),
            }
        }
        TheoryOp::Entropy => {
            let (p, q) = (require(a.p, "p")?, require(a.q, "q")?);
            to_json(&json!({"p": p, "q": q, "value": theory::relative_entropy(p, q)?}))
        }
        TheoryOp::Binom => {
            let (m, q, theta) = (require(a.m, "m")?, require(a.q, "q")?, require(a.theta, "theta")?);
            let (lower, upper) = theory::binomial_tail_bounds(m, q, theta)?;
            let side = if theta > q { Tail::Upper } else { Tail::Lower };
            let exact = theory::binomial_exact_tail(m, q, theta, side).ok();
            to_json(&json!({
                "m": m, "q": q, "theta": theta, "side": side,
                "lower": lower, "upper": upper, "exact": exact,
            }))
        }
    })
}

fn experiment_config(a: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str::<ExperimentConfig>(&text).map_err(|e| Error::Parse {
                path: path.clone(),
                line: e.line(),
                msg: e.to_string(),
            })?
        }
        None => ExperimentConfig::new(
            require(a.alpha, "alpha")?,
            require(a.d, "d")?,
            require(a.n_list.clone(), "n-list")?,
            match &a.trials_per_n {
                Some(_) => a.trials.unwrap_or(1),
                None => require(a.trials, "trials")?,
            },
            a.seed.unwrap_or(0),
        ),
    };
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(v) = a.$field.clone() { cfg.$field = v; } )* };
    }
    set!(alpha, d, delta, n_list, trials, tol, max_iter, kappa);
    if let Some(s) = a.seed {
        cfg.master_seed = s;
    }
    if a.trials_per_n.is_some() {
        cfg.trials_per_n = a.trials_per_n.clone();
    }
    if a.epsilon.is_some() {
        cfg.epsilon = a.epsilon;
    }
    if a.out_dir.is_some() {
        cfg.out_dir = a.out_dir.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"))
}

fn experiment(a: ExperimentArgs) -> Result<String> {
    let cfg = experiment_config(&a)?;
    let dir = output_dir(&cfg);
    let (_, files) = experiments::run_and_emit(a.kind, &cfg, &dir)?;
    Ok(to_json(&json!({
        "kind": a.kind.name(),
        "csv": files.csv,
        "report": files.report,
        "manifest": files.manifest,
    })))
}

fn replay(a: ReplayArgs) -> Result<String> {
    let r = experiments::replay_manifest(Path::new(&a.manifest))?;
    if !r.matches() {
        return Err(Error::Numeric(format!(
            "replay of {} does not reproduce {}",
            a.manifest.display(),
            r.manifest.csv
        )));
    }
    Ok(to_json(&json!({"manifest": a.manifest, "matches": true})))
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Size { .. } => "size",
        Error::Numeric(_) => "numeric",
        Error::Io { .. } => "io",
        Error::Parse { .. } => "parse",
    }
}

fn command() -> clap::Command {
    let version: &'static str = Box::leak(build_id().into_boxed_str());
    Cli::command().version(version)
}

/// Runs the command line with explicit output streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let rendered = e.render().to_string();
                    let message = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
                    let usage = command().render_usage().to_string();
                    let _ = writeln!(
                        err,
                        "{}",
                        json!({"error": "usage", "code": 1, "message": message, "usage": usage.trim()})
                    );
                    1
                }
            };
        }
    };
    let cli = match <Cli as clap::FromArgMatches>::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "{}", json!({"error": "usage", "code": 1, "message": e.to_string().trim()}));
            return 1;
        }
    };
    let result = match cli.command {
        Command::Sample(a) => sample(a),
        Command::Reduce(a) => reduce(a),
        Command::Norm(a) => norm(a),
        Command::Structure(a) => structure(a),
        Command::Theory(a) => theory_op(a),
        Command::Experiment(a) => experiment(a),
        Command::Replay(a) => replay(a),
    };
    match result {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Err(e) => {
            let code = e.exit_code();
            let _ = writeln!(
                err,
                "{}",
                json!({"error": error_kind(&e), "code": code, "message": e.to_string()})
            );
            code
        }
    }
}

/// Runs the command line against the process streams.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}
