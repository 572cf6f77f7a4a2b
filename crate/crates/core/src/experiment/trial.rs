use std::time::Instant;

use super::{certify_lower, ExperimentConfig, ExperimentError, ExperimentRecord, Mode};
use crate::construct::{build_saturated, V1Choice};
use crate::graph::Graph;
use crate::rng::Seed;
use crate::sat::sat_exact_structured;
use crate::sparse::{count_sets, max_sparse_set, SparseMode};
use crate::theory::{alpha_p_value, predict, Prediction};

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

/// Reads `alpha_m` for one `m` back out of the `m:value;...` column.
pub(super) fn alpha_m_value(column: &str, m: usize) -> Option<usize> {
    column.split(';').find_map(|pair| {
        let (k, v) = pair.split_once(':')?;
        (k.parse::<usize>().ok()? == m).then(|| v.parse().ok()).flatten()
    })
}

/// `(⌊α_p - ε⌋, ⌊α_p + ε⌋)`.
pub(super) fn alpha_window(config: &ExperimentConfig) -> Result<(i64, i64), ExperimentError> {
    let alpha = alpha_p_value(config.n, config.p)?;
    let eps = config.params(config.n, config.r.max(3))?.eps;
    Ok(((alpha - eps).floor() as i64, (alpha + eps).floor() as i64))
}

pub(super) fn theory_table(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let mut rows = Vec::new();
    for &n in config.grid_n() {
        for &r in config.grid_r() {
            let pred = predict(&config.params(n, r)?)?;
            let mut rec = ExperimentRecord::blank(rows.len(), 0, n, config.p, r);
            fill_prediction(&mut rec, &pred);
            rec.status = if pred.warnings.is_empty() {
                "ok".into()
            } else {
                pred.warnings.join(";")
            };
            rows.push(rec);
        }
    }
    Ok(rows)
}

fn fill_prediction(rec: &mut ExperimentRecord, pred: &Prediction) {
    rec.x0 = Some(pred.x0);
    rec.r_prime = Some(pred.r_prime);
    rec.mu = Some(pred.mu);
    rec.predicted = join(&pred.values);
}

pub(super) fn host(config: &ExperimentConfig, seed: Seed) -> Result<Graph, crate::graph::GraphError> {
    Graph::gnp(config.n as usize, config.p, &seed.derive_label("host"))
}

pub(super) fn run_trial(config: &ExperimentConfig, index: usize, seed: Seed) -> ExperimentRecord {
    let start = Instant::now();
    let mut rec = ExperimentRecord::blank(index, seed.stream, config.n, config.p, config.r);
    let mut notes: Vec<String> = Vec::new();
    match host(config, seed) {
        Ok(g) => match config.mode {
            Mode::ConcentrationExact | Mode::ConcentrationWindow => {
                concentration(config, &g, seed, &mut rec, &mut notes)
            }
            Mode::Alpha => alpha(config, &g, &mut rec, &mut notes),
            Mode::PhiValidate => {
                let (k, m) = (config.k.expect("validated"), config.m.expect("validated"));
                match count_sets(&g, k as usize, m as usize) {
                    Ok(x) => rec.xi = Some(x),
                    Err(e) => notes.push(format!("count: {e}")),
                }
            }
            Mode::TheoryTable => unreachable!("theory tables do not sample"),
        },
        Err(e) => notes.push(format!("sample: {e}")),
    }
    rec.status = if notes.is_empty() { "ok".into() } else { notes.join(";") };
    if config.timing {
        rec.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

fn concentration(
    config: &ExperimentConfig,
    g: &Graph,
    seed: Seed,
    rec: &mut ExperimentRecord,
    notes: &mut Vec<String>,
) {
    let r = config.r as usize;
    let params = match config.params(config.n, config.r) {
        Ok(p) => p,
        Err(e) => return notes.push(format!("theory: {e}")),
    };
    let pred = match predict(&params) {
        Ok(p) => p,
        Err(e) => return notes.push(format!("theory: {e}")),
    };
    fill_prediction(rec, &pred);

    match build_saturated(g, r, &V1Choice::Auto(params), &seed.derive_label("build")) {
        Ok(rep) => {
            rec.v1_size = Some(rep.v1.len());
            rec.v1_edges = Some(rep.v1_edges);
            rec.sat_upper = Some(rep.result.edge_count);
        }
        Err(e) => notes.push(format!("build: {e}")),
    }

    if pred.x0 >= 1 {
        let span = Some(config.k_max.unwrap_or(crate::sat::DEFAULT_K_SPAN));
        match certify_lower(g, r, pred.x0 as usize, pred.mu as usize, span, config.budget()) {
            Some(cert) => {
                rec.sat_lower = Some(cert.value);
                rec.certificate = cert.status.as_str().into();
                if !cert.predicted {
                    notes.push(format!(
                        "lower: prediction refuted, certified x0 = {} mu = {}",
                        cert.x0, cert.mu
                    ));
                }
            }
            None => {
                rec.certificate = "refuted".into();
                notes.push("lower: no bound certified".into());
            }
        }
    } else {
        notes.push("lower: x0 < 1".into());
    }

    if config.mode == Mode::ConcentrationExact {
        match sat_exact_structured(g, r) {
            Ok(res) => rec.sat_exact = Some(res.value),
            Err(e) => notes.push(format!("exact: {e}")),
        }
    }
    if let (Some(lo), Some(hi)) = (rec.sat_lower, rec.sat_upper) {
        rec.in_window = Some(hi >= lo && hi - lo <= 1);
    }
    if let (Some(lo), Some(ex), Some(hi)) = (rec.sat_lower, rec.sat_exact, rec.sat_upper) {
        if !(lo <= ex && ex <= hi) {
            notes.push(format!("bounds out of order: {lo} <= {ex} <= {hi} fails"));
        }
    }
}

fn alpha(config: &ExperimentConfig, g: &Graph, rec: &mut ExperimentRecord, notes: &mut Vec<String>) {
    let window = match alpha_window(config) {
        Ok(w) => w,
        Err(e) => return notes.push(format!("theory: {e}")),
    };
    rec.x0 = Some(window.1);
    let budget = config.budget();
    match max_sparse_set(g, 0, SparseMode::AtMost, budget) {
        Some(res) => {
            if !res.exact {
                notes.push("alpha0: budget exhausted".into());
            }
            rec.alpha0 = Some(res.size);
            rec.in_window = Some((window.0..=window.1).contains(&(res.size as i64)));
        }
        None => notes.push("alpha0: no result".into()),
    }
    let mut pairs = Vec::new();
    for &m in &config.m_values {
        match max_sparse_set(g, m, SparseMode::Exactly, budget) {
            Some(res) => {
                if !res.exact {
                    notes.push(format!("alpha{m}: budget exhausted"));
                }
                pairs.push(format!("{m}:{}", res.size));
            }
            None => pairs.push(format!("{m}:none")),
        }
    }
    rec.alpha_m = pairs.join(";");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_m_column_round_trip() {
        assert_eq!(alpha_m_value("1:12;2:13", 2), Some(13));
        assert_eq!(alpha_m_value("1:12;2:none", 2), None);
        assert_eq!(alpha_m_value("", 1), None);
    }
}
