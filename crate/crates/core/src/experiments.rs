//! Seeded Monte Carlo experiments and their reports.
//!
//! Every `(n, trial)` cell draws from its own stream
//! `RngHandle::derive(master_seed, n, trial)`, so results do not depend on
//! how trials are scheduled across threads.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::write_text;
use crate::randgen::{sample_network, RngHandle, WeibullSpec};
use crate::spectral::spectral_norm_power;
use crate::structure::{event_census, CensusParams, EventFlags, MIN_ORDER};
use crate::theory::{rate, typical_value, RateQuery, Regime, Tail};

pub const LLN_HEADER: &str = "n,trial,norm,lambda,ratio,converged";
pub const TAIL_HEADER: &str = "n,trials,hits,p_hat,se";
pub const CENSUS_HEADER: &str =
    "n,trials,degree,component_size,excess,level_sets,large_degree,max_degree,edge_count,self_loops,stars";

/// Largest tolerated share of unconverged norm computations.
pub const MAX_UNCONVERGED_SHARE: f64 = 0.01;

/// Build identifier recorded in manifests and the CLI version string.
pub fn build_id() -> String {
    format!(
        "{} ({}, {})",
        env!("CARGO_PKG_VERSION"),
        if cfg!(debug_assertions) { "debug" } else { "release" },
        option_env!("SPARSE_LDP_BUILD_ID").unwrap_or("local")
    )
}

fn default_tol() -> f64 {
    1e-6
}

fn default_max_iter() -> usize {
    5000
}

fn default_kappa() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub d: f64,
    pub n_list: Vec<usize>,
    /// Trials for every size unless `trials_per_n` is given.
    pub trials: usize,
    #[serde(default)]
    pub trials_per_n: Option<Vec<usize>>,
    pub master_seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Tail deviation; in a census also every event slack `δ₁..δ₄`.
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    /// Deviations swept by the lower-tail run; defaults to `0.1, …, 0.9`.
    #[serde(default)]
    pub lower_deltas: Option<Vec<f64>>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(alpha: f64, d: f64, n_list: Vec<usize>, trials: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            alpha,
            d,
            n_list,
            trials,
            trials_per_n: None,
            master_seed,
            tol: default_tol(),
            max_iter: default_max_iter(),
            delta: 0.0,
            epsilon: None,
            kappa: default_kappa(),
            lower_deltas: None,
            out_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        WeibullSpec::new(self.alpha)?;
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(Error::domain(format!("d must be > 0, got {}", self.d)));
        }
        if self.n_list.is_empty() {
            return Err(Error::domain("n_list is empty"));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("n_list must be strictly increasing"));
        }
        if self.n_list[0] < MIN_ORDER {
            return Err(Error::domain(format!("every n must be >= {MIN_ORDER}")));
        }
        match &self.trials_per_n {
            Some(t) if t.len() != self.n_list.len() => {
                return Err(Error::domain("trials_per_n must match n_list in length"))
            }
            Some(t) if t.contains(&0) => return Err(Error::domain("trials must be >= 1")),
            None if self.trials == 0 => return Err(Error::domain("trials must be >= 1")),
            _ => {}
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::domain("tol must be > 0 and max_iter >= 1"));
        }
        if !(self.delta > -1.0 && self.delta.is_finite()) {
            return Err(Error::domain(format!("delta must be > -1, got {}", self.delta)));
        }
        Ok(())
    }

    pub fn trials_for(&self, index: usize) -> usize {
        self.trials_per_n
            .as_ref()
            .map_or(self.trials, |t| t[index])
    }

    fn lower_sweep(&self) -> Vec<f64> {
        self.lower_deltas
            .clone()
            .unwrap_or_else(|| (1..=9).map(|i| i as f64 / 10.0).collect())
    }
}

/// One sampled network and its norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    pub norm: f64,
    pub lambda: f64,
    pub ratio: f64,
    pub converged: bool,
    pub iterations: usize,
    pub max_entry: f64,
}

/// Samples `Z` for cell `(n, trial)` and computes its norm with the power
/// engine.
pub fn run_trial(cfg: &ExperimentConfig, n: usize, trial: usize) -> Result<TrialRecord> {
    let spec = WeibullSpec::new(cfg.alpha)?;
    let lambda = typical_value(n as f64, cfg.alpha)?;
    let mut rng = RngHandle::derive(cfg.master_seed, n as u64, trial as u64).rng();
    let z = sample_network(n, cfg.d, &spec, &mut rng)?;
    let norm = spectral_norm_power(&z, cfg.tol, cfg.max_iter, &mut rng)?;
    Ok(TrialRecord {
        n,
        trial,
        norm: norm.value,
        lambda,
        ratio: norm.value / lambda,
        converged: norm.converged,
        iterations: norm.iterations,
        max_entry: z.max_abs_weight(),
    })
}

fn run_trials(cfg: &ExperimentConfig, n: usize, trials: usize) -> Result<Vec<TrialRecord>> {
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, n, t))
        .collect()
}

fn check_unconverged(records: &[TrialRecord]) -> Result<usize> {
    let bad = records.iter().filter(|r| !r.converged).count();
    if bad as f64 > MAX_UNCONVERGED_SHARE * records.len() as f64 {
        return Err(Error::Numeric(format!(
            "{bad} of {} norm computations did not converge",
            records.len()
        )));
    }
    Ok(bad)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlnRow {
    pub n: usize,
    pub trials: usize,
    pub unconverged: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlnReport {
    pub alpha: f64,
    pub regime: Regime,
    pub rows: Vec<LlnRow>,
    pub trials: Vec<TrialRecord>,
}

/// Mean, sample standard deviation, min and max of the values.
fn summary(values: &[f64]) -> (f64, f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    if v.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / n;
    let sd = if v.len() > 1 {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd, v[0], v[v.len() - 1])
}

fn lln_row(n: usize, records: &[TrialRecord]) -> LlnRow {
    let ratios: Vec<f64> = records.iter().filter(|r| r.converged).map(|r| r.ratio).collect();
    let (mean, sd, min, max) = summary(&ratios);
    LlnRow {
        n,
        trials: records.len(),
        unconverged: records.len() - ratios.len(),
        mean,
        sd,
        min,
        max,
    }
}

/// `‖Z‖ / λ_α(n)` across sizes.
pub fn run_lln(cfg: &ExperimentConfig) -> Result<LlnReport> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut trials = Vec::new();
    for (i, &n) in cfg.n_list.iter().enumerate() {
        let records = run_trials(cfg, n, cfg.trials_for(i))?;
        rows.push(lln_row(n, &records));
        trials.extend(records);
    }
    check_unconverged(&trials)?;
    Ok(LlnReport {
        alpha: cfg.alpha,
        regime: Regime::of(cfg.alpha)?,
        rows,
        trials,
    })
}

impl LlnReport {
    pub fn csv(&self) -> String {
        let mut s = format!("{LLN_HEADER}\n");
        for r in &self.trials {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                r.n, r.trial, r.norm, r.lambda, r.ratio, r.converged
            );
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub n: usize,
    /// Converged trials; hits and `p_hat` refer to these.
    pub trials: usize,
    pub unconverged: usize,
    pub hits: usize,
    pub p_hat: f64,
    pub se: f64,
    pub lambda: f64,
    pub threshold: f64,
    /// Trials whose largest entry alone reaches the threshold.
    pub max_entry_hits: usize,
    /// Trials within `10 tol λ` of the threshold.
    pub near_threshold: usize,
    /// Trials whose largest entry exceeds the computed norm beyond tolerance.
    pub entry_norm_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    /// 95% half-width from the delta-method variance `(1 - p) / hits`.
    pub half_width: f64,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub delta: f64,
    pub hits: usize,
    pub p_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub tail: Tail,
    pub alpha: f64,
    pub delta: f64,
    pub regime: Regime,
    /// Light-regime tails are not part of the calibrated checks.
    pub exploratory: bool,
    pub rows: Vec<TailRow>,
    pub regression: Option<Regression>,
    /// Sizes left out of the regression for having fewer than 5 hits.
    pub excluded: Vec<usize>,
    /// `-rate(α, δ)` for the upper tail.
    pub predicted_slope: Option<f64>,
    /// Lower tail: hit frequencies across the deviation sweep.
    pub sweep: Vec<SweepRow>,
}

impl TailReport {
    pub fn csv(&self) -> String {
        let mut s = format!("{TAIL_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{},{}", r.n, r.trials, r.hits, r.p_hat, r.se);
        }
        s
    }

    /// Lower-tail frequencies never increase with `δ` at a fixed size.
    pub fn sweep_is_monotone(&self) -> bool {
        self.sweep
            .windows(2)
            .filter(|w| w[0].n == w[1].n && w[0].delta <= w[1].delta)
            .all(|w| w[1].hits <= w[0].hits)
    }
}

/// Ordinary least squares of `log p̂` on `log n` over sizes with at least 5
/// hits.
pub fn tail_regression(rows: &[TailRow]) -> (Option<Regression>, Vec<usize>) {
    let (used, excluded): (Vec<&TailRow>, Vec<&TailRow>) = rows.iter().partition(|r| r.hits >= 5);
    let excluded = excluded.iter().map(|r| r.n).collect();
    if used.len() < 2 {
        return (None, excluded);
    }
    let xs: Vec<f64> = used.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = used.iter().map(|r| r.p_hat.ln()).collect();
    let k = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / k;
    let ybar = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let weights: Vec<f64> = xs.iter().map(|x| (x - xbar) / sxx).collect();
    let slope: f64 = weights.iter().zip(&ys).map(|(w, y)| w * y).sum();
    let var: f64 = weights
        .iter()
        .zip(&used)
        .map(|(w, r)| w * w * (1.0 - r.p_hat) / r.hits as f64)
        .sum();
    (
        Some(Regression {
            slope,
            intercept: ybar - slope * xbar,
            half_width: 1.96 * var.sqrt(),
            sizes: used.iter().map(|r| r.n).collect(),
        }),
        excluded,
    )
}

fn tail_row(cfg: &ExperimentConfig, n: usize, records: &[TrialRecord], tail: Tail) -> Result<TailRow> {
    let lambda = typical_value(n as f64, cfg.alpha)?;
    let threshold = match tail {
        Tail::Upper => (1.0 + cfg.delta) * lambda,
        Tail::Lower => (1.0 - cfg.delta) * lambda,
    };
    let ok: Vec<&TrialRecord> = records.iter().filter(|r| r.converged).collect();
    let hits = ok
        .iter()
        .filter(|r| match tail {
            Tail::Upper => r.norm >= threshold,
            Tail::Lower => r.norm <= threshold,
        })
        .count();
    let trials = ok.len();
    let p_hat = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
    let se = if trials == 0 {
        0.0
    } else {
        (p_hat * (1.0 - p_hat) / trials as f64).sqrt()
    };
    Ok(TailRow {
        n,
        trials,
        unconverged: records.len() - trials,
        hits,
        p_hat,
        se,
        lambda,
        threshold,
        max_entry_hits: ok.iter().filter(|r| r.max_entry >= threshold).count(),
        near_threshold: ok
            .iter()
            .filter(|r| (r.norm - threshold).abs() < 10.0 * cfg.tol * lambda)
            .count(),
        entry_norm_violations: ok
            .iter()
            .filter(|r| r.max_entry > r.norm * (1.0 + 10.0 * cfg.tol))
            .count(),
    })
}

fn run_tail(cfg: &ExperimentConfig, tail: Tail) -> Result<TailReport> {
    cfg.validate()?;
    let regime = Regime::of(cfg.alpha)?;
    let query = RateQuery::new(cfg.alpha, cfg.delta)?;
    let predicted_slope = match tail {
        Tail::Upper => Some(-rate(&query, Tail::Upper)?.value),
        Tail::Lower => {
            rate(&query, Tail::Lower)?;
            None
        }
    };
    let sweep_deltas = cfg.lower_sweep();
    let mut rows = Vec::new();
    let mut sweep = Vec::new();
    let mut all = Vec::new();
    for (i, &n) in cfg.n_list.iter().enumerate() {
        let records = run_trials(cfg, n, cfg.trials_for(i))?;
        rows.push(tail_row(cfg, n, &records, tail)?);
        if tail == Tail::Lower {
            let lambda = typical_value(n as f64, cfg.alpha)?;
            let ok: Vec<&TrialRecord> = records.iter().filter(|r| r.converged).collect();
            for &delta in &sweep_deltas {
                let hits = ok.iter().filter(|r| r.norm <= (1.0 - delta) * lambda).count();
                sweep.push(SweepRow {
                    n,
                    delta,
                    hits,
                    p_hat: if ok.is_empty() { 0.0 } else { hits as f64 / ok.len() as f64 },
                });
            }
        }
        all.extend(records);
    }
    check_unconverged(&all)?;
    let (regression, excluded) = match tail {
        Tail::Upper => tail_regression(&rows),
        Tail::Lower => (None, Vec::new()),
    };
    Ok(TailReport {
        tail,
        alpha: cfg.alpha,
        delta: cfg.delta,
        regime,
        exploratory: regime == Regime::Light,
        rows,
        regression,
        excluded,
        predicted_slope,
        sweep,
    })
}

/// Frequencies of `‖Z‖ >= (1+δ)λ` and their log–log slope in `n`.
pub fn run_upper_tail(cfg: &ExperimentConfig) -> Result<TailReport> {
    run_tail(cfg, Tail::Upper)
}

/// Frequencies of `‖Z‖ <= (1-δ)λ`; sanity only, no exponent fit.
pub fn run_lower_tail(cfg: &ExperimentConfig) -> Result<TailReport> {
    run_tail(cfg, Tail::Lower)
}

/// Failure counts of every event at one size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EventFailures {
    pub degree: usize,
    pub component_size: usize,
    pub excess: usize,
    pub level_sets: usize,
    pub large_degree: usize,
    pub max_degree: usize,
    pub edge_count: usize,
    pub self_loops: usize,
    pub stars: usize,
}

impl EventFailures {
    fn record(&mut self, f: &EventFlags) {
        self.degree += usize::from(!f.degree);
        self.component_size += usize::from(!f.component_size);
        self.excess += usize::from(!f.excess);
        self.level_sets += usize::from(!f.level_sets);
        self.large_degree += usize::from(!f.large_degree);
        self.max_degree += usize::from(!f.max_degree);
        self.edge_count += usize::from(!f.edge_count);
        self.self_loops += usize::from(!f.self_loops);
        self.stars += usize::from(!f.stars);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: usize,
    pub trials: usize,
    pub failures: EventFailures,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub params: CensusParams,
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    pub fn csv(&self) -> String {
        let mut s = format!("{CENSUS_HEADER}\n");
        for r in &self.rows {
            let f = &r.failures;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.n,
                r.trials,
                f.degree,
                f.component_size,
                f.excess,
                f.level_sets,
                f.large_degree,
                f.max_degree,
                f.edge_count,
                f.self_loops,
                f.stars
            );
        }
        s
    }
}

/// Census parameters of a config: every slack `δ₁..δ₄` equals `delta`.
pub fn census_params(cfg: &ExperimentConfig) -> CensusParams {
    CensusParams {
        alpha: cfg.alpha,
        d: cfg.d,
        delta: cfg.delta,
        epsilon: cfg.epsilon,
        kappa: cfg.kappa,
        delta1: cfg.delta,
        delta2: cfg.delta,
        delta3: cfg.delta,
        delta4: cfg.delta,
    }
}

/// Empirical failure counts of every event across trials and sizes.
pub fn run_structure_census(cfg: &ExperimentConfig) -> Result<CensusReport> {
    cfg.validate()?;
    let params = census_params(cfg);
    let spec = WeibullSpec::new(cfg.alpha)?;
    let mut rows = Vec::new();
    for (i, &n) in cfg.n_list.iter().enumerate() {
        let trials = cfg.trials_for(i);
        let flags: Vec<EventFlags> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = RngHandle::derive(cfg.master_seed, n as u64, t as u64).rng();
                let z = sample_network(n, cfg.d, &spec, &mut rng)?;
                Ok(event_census(&z, &params)?.flags)
            })
            .collect::<Result<_>>()?;
        let mut failures = EventFailures::default();
        flags.iter().for_each(|f| failures.record(f));
        rows.push(CensusRow {
            n,
            trials,
            failures,
        });
    }
    Ok(CensusReport { params, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Lln,
    UpperTail,
    LowerTail,
    Census,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Lln => "lln",
            ExperimentKind::UpperTail => "upper-tail",
            ExperimentKind::LowerTail => "lower-tail",
            ExperimentKind::Census => "census",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Report {
    Lln(LlnReport),
    Tail(TailReport),
    Census(CensusReport),
}

impl Report {
    pub fn csv(&self) -> String {
        match self {
            Report::Lln(r) => r.csv(),
            Report::Tail(r) => r.csv(),
            Report::Census(r) => r.csv(),
        }
    }
}

pub fn run_experiment(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Report> {
    Ok(match kind {
        ExperimentKind::Lln => Report::Lln(run_lln(cfg)?),
        ExperimentKind::UpperTail => Report::Tail(run_upper_tail(cfg)?),
        ExperimentKind::LowerTail => Report::Tail(run_lower_tail(cfg)?),
        ExperimentKind::Census => Report::Census(run_structure_census(cfg)?),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: ExperimentKind,
    pub config: ExperimentConfig,
    pub master_seed: u64,
    pub build: String,
    pub wall_time_secs: f64,
    /// File names relative to the manifest's directory.
    pub csv: String,
    pub report: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFiles {
    pub csv: PathBuf,
    pub report: PathBuf,
    pub manifest: PathBuf,
}

/// Writes `<kind>.csv`, `<kind>.report.json` and `<kind>.manifest.json`
/// into `dir`.
pub fn emit_report(
    kind: ExperimentKind,
    cfg: &ExperimentConfig,
    report: &Report,
    dir: &Path,
    wall_time_secs: f64,
) -> Result<EmittedFiles> {
    let name = kind.name();
    let files = EmittedFiles {
        csv: dir.join(format!("{name}.csv")),
        report: dir.join(format!("{name}.report.json")),
        manifest: dir.join(format!("{name}.manifest.json")),
    };
    let manifest = Manifest {
        kind,
        config: cfg.clone(),
        master_seed: cfg.master_seed,
        build: build_id(),
        wall_time_secs,
        csv: format!("{name}.csv"),
        report: format!("{name}.report.json"),
    };
    write_text(&files.csv, &report.csv())?;
    write_text(&files.report, &pretty_json(report))?;
    write_text(&files.manifest, &pretty_json(&manifest))?;
    Ok(files)
}

pub(crate) fn pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serialises");
    s.push('\n');
    s
}

/// Runs an experiment, timing it, and emits its files.
pub fn run_and_emit(kind: ExperimentKind, cfg: &ExperimentConfig, dir: &Path) -> Result<(Report, EmittedFiles)> {
    let start = Instant::now();
    let report = run_experiment(kind, cfg)?;
    let files = emit_report(kind, cfg, &report, dir, start.elapsed().as_secs_f64())?;
    Ok((report, files))
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        msg: e.to_string(),
    })
}

/// Outcome of re-running a manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub manifest: Manifest,
    pub csv: String,
    pub recorded_csv: String,
}

impl Replay {
    pub fn matches(&self) -> bool {
        self.csv == self.recorded_csv
    }
}

/// Re-runs the experiment recorded in a manifest and loads the CSV it
/// points to for comparison.
pub fn replay_manifest(path: &Path) -> Result<Replay> {
    let manifest = read_manifest(path)?;
    let report = run_experiment(manifest.kind, &manifest.config)?;
    let csv_path = path.parent().unwrap_or(Path::new(".")).join(&manifest.csv);
    let recorded_csv = fs::read_to_string(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    Ok(Replay {
        manifest,
        csv: report.csv(),
        recorded_csv,
    })
}
