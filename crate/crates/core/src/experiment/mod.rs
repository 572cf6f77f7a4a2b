//! Seeded Monte Carlo experiments over `G(n, p)`.
//!
//! Trial `i` draws everything from `Seed::new(master_seed).derive(i)`, so the
//! records are a pure function of the configuration and do not depend on how
//! trials are scheduled across workers. Records are returned in trial order.

mod certificate;
mod output;
mod trial;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::Seed;
use crate::sat::STRUCTURED_CAP;
use crate::sparse::COUNT_CAP;
use crate::theory::{TheoryError, TheoryParams};

pub use certificate::{certify_lower, CertStatus, LowerCertificate};
pub use output::{emit_outputs, plot_script, write_csv, OutputPaths, CSV_COLUMNS};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl From<TheoryError> for ExperimentError {
    fn from(e: TheoryError) -> Self {
        ExperimentError::Config(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exact `sat` on small hosts, with the certified lower and built upper bounds.
    ConcentrationExact,
    /// Certified lower bound against the built upper bound.
    ConcentrationWindow,
    /// Independence number and `α_m` against the `⌊α_p ± ε⌋` window.
    Alpha,
    /// Sample mean of `ξ_m(k)` against `φ_m(k)`.
    PhiValidate,
    /// Predictions over a parameter grid; no sampling.
    TheoryTable,
}

fn default_p() -> f64 {
    0.5
}
fn default_r() -> u64 {
    3
}
fn default_trials() -> usize {
    1
}
fn default_m_values() -> Vec<usize> {
    vec![1, 2]
}
fn default_csv() -> String {
    "results.csv".into()
}
fn default_summary() -> String {
    "summary.json".into()
}
fn default_plot() -> String {
    "plot.gp".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: u64,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_r")]
    pub r: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Lemma-1 search span: sizes up to `x0 + k_max` are searched exhaustively.
    #[serde(default)]
    pub k_max: Option<usize>,
    /// Node budget of sparse-set searches.
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub eps_prime: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    /// Edge counts `m` whose `α_m` is reported in alpha mode.
    #[serde(default = "default_m_values")]
    pub m_values: Vec<usize>,
    /// Set size and edge count for phi-validate.
    #[serde(default)]
    pub k: Option<u64>,
    #[serde(default)]
    pub m: Option<u64>,
    /// Grid for theory-table; defaults to `[n]` and `[r]`.
    #[serde(default)]
    pub n_values: Vec<u64>,
    #[serde(default)]
    pub r_values: Vec<u64>,
    /// Fill the `elapsed_ms` column. Off by default so that reruns are byte-identical.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_csv")]
    pub csv: String,
    #[serde(default = "default_summary")]
    pub summary: String,
    #[serde(default = "default_plot")]
    pub plot: String,
}

impl ExperimentConfig {
    /// A configuration with every optional field at its default.
    pub fn new(mode: Mode, n: u64) -> ExperimentConfig {
        ExperimentConfig {
            mode,
            n,
            p: default_p(),
            r: default_r(),
            trials: default_trials(),
            master_seed: 0,
            k_max: None,
            budget: None,
            eps: None,
            eps_prime: None,
            delta: None,
            m_values: default_m_values(),
            k: None,
            m: None,
            n_values: Vec::new(),
            r_values: Vec::new(),
            timing: false,
            workers: None,
            csv: default_csv(),
            summary: default_summary(),
            plot: default_plot(),
        }
    }

    pub fn from_json(text: &str) -> Result<ExperimentConfig, ExperimentError> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn params(&self, n: u64, r: u64) -> Result<TheoryParams, TheoryError> {
        TheoryParams::with_tolerances(
            n,
            self.p,
            r,
            self.eps.unwrap_or(TheoryParams::DEFAULT_EPS),
            self.eps_prime.unwrap_or(TheoryParams::DEFAULT_EPS_PRIME),
            self.delta.unwrap_or(TheoryParams::DEFAULT_DELTA),
        )
    }

    pub fn budget(&self) -> u64 {
        self.budget.unwrap_or(crate::sparse::DEFAULT_BUDGET)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return bad(format!("p = {} must lie strictly between 0 and 1", self.p));
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        for name in [&self.csv, &self.summary, &self.plot] {
            if name.is_empty() || name.contains(['/', '\\']) {
                return bad(format!("output name {name:?} must be a plain file name"));
            }
        }
        match self.mode {
            Mode::ConcentrationExact => {
                if self.n as usize > STRUCTURED_CAP {
                    return bad(format!("concentration-exact needs n <= {STRUCTURED_CAP}"));
                }
                self.params(self.n, self.r)?;
            }
            Mode::ConcentrationWindow => {
                self.params(self.n, self.r)?;
            }
            Mode::Alpha => {
                self.params(self.n, self.r.max(3))?;
            }
            Mode::PhiValidate => {
                let (Some(k), Some(_)) = (self.k, self.m) else {
                    return bad("phi-validate needs k and m".into());
                };
                if self.n as usize > COUNT_CAP {
                    return bad(format!(
                        "phi-validate counts subsets exhaustively and needs n <= {COUNT_CAP}"
                    ));
                }
                if k > self.n {
                    return bad(format!("k = {k} exceeds n = {}", self.n));
                }
            }
            Mode::TheoryTable => {
                for &n in self.grid_n() {
                    for &r in self.grid_r() {
                        self.params(n, r)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn grid_n(&self) -> &[u64] {
        if self.n_values.is_empty() {
            std::slice::from_ref(&self.n)
        } else {
            &self.n_values
        }
    }

    fn grid_r(&self) -> &[u64] {
        if self.r_values.is_empty() {
            std::slice::from_ref(&self.r)
        } else {
            &self.r_values
        }
    }
}

/// One CSV row. Empty cells mean "not computed in this mode".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub trial: usize,
    /// Stream id of the trial seed; the master is the configured one.
    pub seed: u64,
    pub n: u64,
    pub p: f64,
    pub r: u64,
    pub x0: Option<i64>,
    pub r_prime: Option<u64>,
    pub mu: Option<u64>,
    /// Predicted values, `;`-separated.
    pub predicted: String,
    pub v1_size: Option<usize>,
    pub v1_edges: Option<usize>,
    pub sat_lower: Option<usize>,
    pub sat_upper: Option<usize>,
    pub sat_exact: Option<usize>,
    pub alpha0: Option<usize>,
    /// `m:alpha_m` pairs, `;`-separated; `none` when no set has exactly `m` edges.
    pub alpha_m: String,
    pub xi: Option<u64>,
    pub in_window: Option<bool>,
    /// `full`, `partial`, `refuted`, or empty.
    pub certificate: String,
    /// `ok`, or `;`-separated notes on failed steps.
    pub status: String,
    pub elapsed_ms: Option<u64>,
}

impl ExperimentRecord {
    fn blank(trial: usize, seed: u64, n: u64, p: f64, r: u64) -> ExperimentRecord {
        ExperimentRecord {
            trial,
            seed,
            n,
            p,
            r,
            x0: None,
            r_prime: None,
            mu: None,
            predicted: String::new(),
            v1_size: None,
            v1_edges: None,
            sat_lower: None,
            sat_upper: None,
            sat_exact: None,
            alpha0: None,
            alpha_m: String::new(),
            xi: None,
            in_window: None,
            certificate: String::new(),
            status: String::new(),
            elapsed_ms: None,
        }
    }
}

/// Hit rate of a boolean over the trials where it was recorded.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Rate {
    pub hits: usize,
    pub total: usize,
    pub rate: f64,
}

impl Rate {
    fn of(flags: impl Iterator<Item = bool>) -> Rate {
        let (mut hits, mut total) = (0, 0);
        for f in flags {
            total += 1;
            hits += usize::from(f);
        }
        Rate {
            hits,
            total,
            rate: if total == 0 { 0.0 } else { hits as f64 / total as f64 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiCheck {
    pub phi: f64,
    pub mean: f64,
    pub std_error: f64,
    /// `(mean - phi) / std_error`.
    pub z: f64,
    pub within_4se: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub mode: Mode,
    pub trials: usize,
    /// Trials whose status is `ok`.
    pub clean: usize,
    pub in_window: Option<Rate>,
    /// Window hits among trials with a full lower-bound certificate.
    pub in_window_full: Option<Rate>,
    pub certificates: BTreeMap<String, usize>,
    /// Empirical distribution of the headline quantity of the mode.
    pub distribution: BTreeMap<usize, usize>,
    pub support_width: Option<usize>,
    pub mean: Option<f64>,
    /// Alpha mode: the `⌊α_p - ε⌋ ..= ⌊α_p + ε⌋` window and per-`m` hit rates.
    pub window: Option<(i64, i64)>,
    pub alpha_m_in_window: BTreeMap<usize, Rate>,
    /// Predicted-value hit rate of `sat_exact` (concentration-exact).
    pub exact_in_prediction: Option<Rate>,
    pub phi: Option<PhiCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub records: Vec<ExperimentRecord>,
    pub summary: Summary,
}

/// Seed of trial `index`.
pub fn trial_seed(config: &ExperimentConfig, index: usize) -> Seed {
    Seed::new(config.master_seed).derive(index as u64)
}

/// The host graph sampled for trial `index`.
pub fn trial_host(config: &ExperimentConfig, index: usize) -> Result<crate::graph::Graph, crate::graph::GraphError> {
    trial::host(config, trial_seed(config, index))
}

/// Runs every trial of `config` on a pool of `workers` threads (default: the
/// configured count, else rayon's default). Solver failures are recorded in
/// the status column and never abort the batch.
pub fn run_experiment(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentRun, ExperimentError> {
    config.validate()?;
    let records = if config.mode == Mode::TheoryTable {
        trial::theory_table(config)?
    } else {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = workers.or(config.workers) {
            builder = builder.num_threads(w);
        }
        let pool = builder.build().map_err(|e| ExperimentError::Config(e.to_string()))?;
        pool.install(|| {
            (0..config.trials)
                .into_par_iter()
                .map(|i| trial::run_trial(config, i, trial_seed(config, i)))
                .collect()
        })
    };
    let summary = summarize(config, &records)?;
    Ok(ExperimentRun { records, summary })
}

fn summarize(config: &ExperimentConfig, records: &[ExperimentRecord]) -> Result<Summary, ExperimentError> {
    let mut summary = Summary {
        mode: config.mode,
        trials: records.len(),
        clean: records.iter().filter(|r| r.status == "ok").count(),
        in_window: None,
        in_window_full: None,
        certificates: BTreeMap::new(),
        distribution: BTreeMap::new(),
        support_width: None,
        mean: None,
        window: None,
        alpha_m_in_window: BTreeMap::new(),
        exact_in_prediction: None,
        phi: None,
    };
    for r in records.iter().filter(|r| !r.certificate.is_empty()) {
        *summary.certificates.entry(r.certificate.clone()).or_default() += 1;
    }
    let headline: Vec<usize> = records
        .iter()
        .filter_map(|r| match config.mode {
            Mode::ConcentrationExact => r.sat_exact,
            Mode::ConcentrationWindow => r.sat_upper,
            Mode::Alpha => r.alpha0,
            Mode::PhiValidate => r.xi.map(|x| x as usize),
            Mode::TheoryTable => None,
        })
        .collect();
    for &v in &headline {
        *summary.distribution.entry(v).or_default() += 1;
    }
    if let (Some(lo), Some(hi)) = (headline.iter().min(), headline.iter().max()) {
        summary.support_width = Some(hi - lo);
        summary.mean = Some(headline.iter().sum::<usize>() as f64 / headline.len() as f64);
    }

    match config.mode {
        Mode::ConcentrationWindow | Mode::ConcentrationExact => {
            summary.in_window = Some(Rate::of(records.iter().map(|r| r.in_window == Some(true))));
            summary.in_window_full = Some(Rate::of(
                records
                    .iter()
                    .filter(|r| r.certificate == CertStatus::Full.as_str())
                    .map(|r| r.in_window == Some(true)),
            ));
            if config.mode == Mode::ConcentrationExact {
                summary.exact_in_prediction = Some(Rate::of(records.iter().filter_map(|r| {
                    let exact = r.sat_exact? as i64;
                    Some(r.predicted.split(';').any(|v| v.parse::<i64>() == Ok(exact)))
                })));
            }
        }
        Mode::Alpha => {
            let window = trial::alpha_window(config)?;
            summary.window = Some(window);
            summary.in_window = Some(Rate::of(records.iter().map(|r| r.in_window == Some(true))));
            for &m in &config.m_values {
                let rate = Rate::of(records.iter().map(|r| {
                    trial::alpha_m_value(&r.alpha_m, m).is_some_and(|a| (window.0..=window.1).contains(&(a as i64)))
                }));
                summary.alpha_m_in_window.insert(m, rate);
            }
        }
        Mode::PhiValidate => {
            let (k, m) = (config.k.expect("validated"), config.m.expect("validated"));
            let phi = crate::theory::log_phi(config.n, config.p, k, m)?.map_or(0.0, f64::exp);
            let xs: Vec<f64> = records.iter().filter_map(|r| r.xi).map(|x| x as f64).collect();
            let t = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / t;
            let var = if xs.len() > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0)
            } else {
                0.0
            };
            let std_error = (var / t).sqrt();
            let z = if std_error > 0.0 { (mean - phi) / std_error } else { 0.0 };
            summary.phi = Some(PhiCheck {
                phi,
                mean,
                std_error,
                z,
                within_4se: (mean - phi).abs() <= 4.0 * std_error,
            });
        }
        Mode::TheoryTable => {}
    }
    Ok(summary)
}
